#!/usr/bin/env python3
"""
pwtest Main Orchestrator
Entry point for running pwtest from a source checkout
"""

from pathlib import Path
import sys

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from pwtest.cli import main  # noqa: E402


if __name__ == '__main__':
    main()
