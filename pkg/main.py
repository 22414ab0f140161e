#!/usr/bin/env python3
"""
Covert concatenated-code laboratory.

Main entry point; see `python main.py --help` for the subcommands.
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
