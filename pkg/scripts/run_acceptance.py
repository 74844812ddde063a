"""Run the acceptance criteria and print one line per criterion.

    python scripts/run_acceptance.py [extra pytest args]
"""
import sys
from pathlib import Path

import pytest

root = Path(__file__).resolve().parents[1]
sys.exit(pytest.main([str(root / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider", *sys.argv[1:]]))
