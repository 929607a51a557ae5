#!/usr/bin/env python3
"""Run the bundled example systems end-to-end and print the reports.

Usage: python scripts/run_examples.py [example1|example2|hermite ...]
"""

import pathlib
import sys
import time

from ddsolve.cli import main as cli_main

SYSTEMS = pathlib.Path(__file__).resolve().parent.parent / "systems"

EXPECTED = {"example1": 0, "example2": 0, "hermite": 1}


def run(name: str) -> bool:
    path = SYSTEMS / f"{name}.json"
    print(f"=== {name} ({path}) ===")
    start = time.time()
    code = cli_main(["solve", str(path), "--assume-irreducible"])
    elapsed = time.time() - start
    ok = code == EXPECTED[name]
    print(f"--- exit {code} (expected {EXPECTED[name]}), "
          f"{elapsed:.1f}s: {'OK' if ok else 'MISMATCH'}\n")
    return ok


if __name__ == "__main__":
    names = sys.argv[1:] or list(EXPECTED)
    results = [run(n) for n in names]
    raise SystemExit(0 if all(results) else 1)
