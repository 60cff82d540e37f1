"""Run the acceptance criteria and print one pass/fail line each."""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import test_acceptance as acc  # noqa: E402


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--only", type=int, action="append", help="criterion number (repeatable)")
    args = parser.parse_args()
    failed = 0
    for num in sorted(acc.CRITERIA):
        if args.only and num not in args.only:
            continue
        title, fn = acc.CRITERIA[num]
        ok, detail = fn()
        failed += not acc.record(num, title, ok, detail)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
