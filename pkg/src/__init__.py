"""
squarepeg source packages.

Each subdirectory is an importable package; scripts and tests put this
directory on ``sys.path``.
"""
