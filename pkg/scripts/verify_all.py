"""Run the acceptance criteria and write a JSON report next to the summary table.

usage: python3 scripts/verify_all.py [--only 1,2,3] [--out report.json]
"""
import argparse
import json
import sys

from feynkit import acceptance
from feynkit.cli import jsonable


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--only", help="comma-separated criterion numbers")
    ap.add_argument("--out", help="write per-check rows as JSON here")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    nums = [int(x) for x in args.only.split(",")] if args.only else None
    results = acceptance.run(nums, acceptance.Settings(jobs=args.jobs))
    for r in results:
        print("%s  (%.1f s)" % (acceptance.summary_line(r), r.seconds))
    if args.out:
        rows = [{"criterion": r.number, "check": c.name, "expected": jsonable(c.expected),
                 "actual": jsonable(c.actual), "residual": jsonable(c.residual), "pass": c.passed,
                 "counted": c.counted} for r in results for c in r.checks]
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=1)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
