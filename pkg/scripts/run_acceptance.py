#!/usr/bin/env python3
"""Run the acceptance suite and print its per-criterion verdicts.

Exit status is pytest's: 0 only if every criterion passes.
"""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    sys.exit(pytest.main([str(ROOT / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider",
                          *sys.argv[1:]]))
