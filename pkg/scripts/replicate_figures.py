#!/usr/bin/env python3
"""Rerun every bundled preset and grade its reference checkpoints."""

import sys

from mediate.replication import all_passed, replicate_all


def main() -> int:
    checks = replicate_all()
    width = max(len(c.name) for c in checks)
    for c in checks:
        verdict = "INFO" if c.informational else ("PASS" if c.passed else "FAIL")
        print(f"{c.figure}  {c.name:<{width}}  expected {c.expected}  computed {c.computed}  {verdict}")
    ok = all_passed(checks)
    print(f"overall: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
