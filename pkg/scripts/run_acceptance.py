#!/usr/bin/env python3
"""Run the acceptance module and show its PASS/FAIL lines."""

import subprocess
import sys
from pathlib import Path

root = Path(__file__).resolve().parent.parent
proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-s", str(root / "tests" / "test_acceptance.py")],
                      cwd=root, capture_output=True, text=True)
lines = [ln for ln in proc.stdout.splitlines() if ln.startswith("criterion")]
print("\n".join(dict.fromkeys(lines)))
if proc.returncode:
    print(proc.stdout[-3000:], file=sys.stderr)
sys.exit(proc.returncode)
