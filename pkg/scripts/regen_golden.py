"""Regenerate the CLI golden reports under tests/golden/.

Run from anywhere; paths are resolved against the repository root.  Review
the diff before committing: goldens pin the exact report bytes.
"""

import argparse
import contextlib
import io
import json
import os
from pathlib import Path

from fpsdae.cli import main

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"


def run_case(case, emit="json"):
    """Run one case from the repository root; return ``(exit_code, report_text)``."""
    buf = io.StringIO()
    cwd = os.getcwd()
    os.chdir(ROOT)
    try:
        with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
            code = main(case["argv"] + ["--emit", emit])
    finally:
        os.chdir(cwd)
    return code, buf.getvalue()


def main_cli():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--only", help="regenerate a single case id")
    args = parser.parse_args()
    cases = json.loads((GOLDEN / "cases.json").read_text(encoding="utf-8"))
    for case in cases:
        if args.only and case["id"] != args.only:
            continue
        code, text = run_case(case)
        (GOLDEN / f"{case['id']}.json").write_text(text, encoding="utf-8")
        _, txt = run_case(case, "text")
        (GOLDEN / f"{case['id']}.txt").write_text(txt, encoding="utf-8")
        flag = "" if code == case["exit"] else f"  (expected exit {case['exit']})"
        print(f"{case['id']}: exit {code}{flag}")


if __name__ == "__main__":
    main_cli()
