#!/usr/bin/env python
"""
Main entry point for the GWE toolkit.
Run `python main.py --help` for the available commands.
"""
import sys

from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
