#!/usr/bin/env python3
"""Run triperc from a source checkout: python main.py <command> ..."""

import sys

from triperc.cli import main

if __name__ == "__main__":
    sys.exit(main())
