"""
Tests package for squarepeg.
"""
