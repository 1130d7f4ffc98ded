#!/usr/bin/env python3
"""
squarepeg command line entry point.

Run ``python squarepeg_cli.py --help`` for the subcommands.
"""

import sys
from pathlib import Path

# Add src and the repository root to path
sys.path.insert(0, str(Path(__file__).parent / "src"))
sys.path.insert(0, str(Path(__file__).parent))

from cli_io.cli import main

if __name__ == "__main__":
    sys.exit(main())
