"""Command line front end: ``fpsdae {analyze,solve,verify,oracle,tougeron} FILE``.

Exit codes: 0 success, 1 failed certificate or oracle mismatch, 2 usage,
3 schema/parse/validation, 4 hypothesis failure, 5 infeasible root.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import report
from .errors import (
    HypothesisError,
    InfeasibleRootError,
    ParseError,
    SingularEvaluationError,
    UnsupportedInExactMode,
    UsageError,
    ValidationError,
)
from .field import Field, parse_scalar
from .indicial import indicial_data
from .oracle import brute_force_solve, coefficient_diff
from .problemfile import SchemaError, load
from .separant import check_conditions
from .solver import SolveOptions, base_point, check_coefficients, scan_m, solve, verify_family
from .tougeron import NewtonOptions, c_limit, continue_c, tougeron_diagnostic

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_SCHEMA = 3
EXIT_HYPOTHESIS = 4
EXIT_INFEASIBLE = 5


def _parse_free(items):
    out = {}
    for item in items or []:
        slot, sep, vals = item.partition("=")
        if not sep or not slot.strip().isdigit() or not vals:
            raise UsageError(f"--free expects slot=v1,v2,..., got {item!r}")
        out[int(slot)] = [parse_scalar(v, "c64" if "j" in v else "rational") for v in vals.split(",")]
    return out


def _parse_range(text):
    lo, sep, hi = text.partition("..")
    if not sep or not lo.strip().isdigit() or not hi.strip().isdigit():
        raise UsageError(f"--scan-m expects LO..HI, got {text!r}")
    lo, hi = int(lo), int(hi)
    if lo < 1 or hi < lo:
        raise UsageError("--scan-m needs 1 <= LO <= HI")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fpsdae", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="problem file (JSON)")
        p.add_argument("--emit", choices=("json", "text"), default="text")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--m", type=int, default=None, help="degeneracy level (overrides the file)")

    p = sub.add_parser("analyze", help="check the solver hypotheses and print g(l) and its roots")
    common(p)
    p.add_argument("--scan-m", default=None, metavar="LO..HI", help="report the first failing hypothesis for each m")

    p = sub.add_parser("solve", help="continue the initial jet to order N")
    common(p)
    p.add_argument("--order", type=int, default=None, help="truncation order N (coefficients c_0..c_N)")
    p.add_argument("--free", action="append", metavar="SLOT=V1,V2", help="value of a free slot (repeatable)")
    p.add_argument("--path", choices=("auto", "scalar", "system"), default=None)

    p = sub.add_parser("verify", help="residual certificate for a solve report (or a fresh solve)")
    common(p)
    p.add_argument("--solution", help="JSON report written by 'solve --emit json'")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--check-order", type=int, default=None, help="N_check (default N - n)")
    p.add_argument("--samples", type=int, default=None, help="random re-instantiations of the free slots")
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("oracle", help="brute-force undetermined coefficients")
    common(p)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--diff", help="solve report to compare against")

    p = sub.add_parser("tougeron", help="algebraic continuation c_(m+1)(x) and the Tougeron diagnostic")
    common(p)
    p.add_argument("--samples", default=None, help="comma separated x values")
    p.add_argument("--extra-order", type=int, default=8, help="K: expansion order 2m+1+K")
    return parser


def _m(args, pf, default=1):
    if args.m is not None:
        return args.m
    return pf.m if pf.m is not None else default


def _load_solution(path, problem):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc.msg}") from exc
    fam = data.get("family")
    if not isinstance(fam, dict) or "coefficients" not in fam:
        raise SchemaError(f"{path}: not a solve report (no family.coefficients)")
    kind = problem.field.kind
    f = problem.field

    def scalar(v):
        if isinstance(v, list):
            return complex(v[0], v[1])
        if isinstance(v, str):
            return f.coerce(parse_scalar(v, kind))
        return f.coerce(v)

    coeffs = [[scalar(v) for v in c] for c in fam["coefficients"]]
    return fam, coeffs


def cmd_analyze(args, pf, problem):
    out = {"command": "analyze"}
    if args.scan_m or pf.scan:
        lo, hi = _parse_range(args.scan_m) if args.scan_m else pf.scan
        rows = []
        any_ok = False
        for m, failure, rep in scan_m(problem, pf.initial, hi):
            if m < lo:
                continue
            ok = rep is not None and failure is None
            any_ok = any_ok or ok
            rows.append({"m": m, "result": "ok" if ok else failure, "ok": ok})
        out["scan"] = rows
        return out, EXIT_OK if any_ok else EXIT_HYPOTHESIS
    m = _m(args, pf)
    pt = base_point(problem, pf.initial, m)
    rep = check_conditions(problem, pt, m)
    out["conditions"] = [report.conditions_dict(rep)]
    if not rep.ok:
        fail = next(v for v in rep.verdicts() if not v.ok)
        out["error"] = {"type": "HypothesisError", "message": f"{fail.name} fails for m = {m}", "witness": fail.witness}
        return out, EXIT_HYPOTHESIS
    if m >= 1 or problem.r <= problem.d:
        out["indicial"] = report.indicial_dict(indicial_data(problem, pt, m, rep))
    return out, EXIT_OK


def _solve(args, pf, problem, order=None, free=None):
    opts = SolveOptions(
        m=_m(args, pf),
        order=order if order is not None else pf.order,
        free=free if free is not None else dict(pf.free),
        path=getattr(args, "path", None) or pf.path,
        seed=pf.seed,
    )
    return solve(problem, pf.initial, opts)


def cmd_solve(args, pf, problem):
    free = dict(pf.free)
    free.update(_parse_free(args.free))
    fam = _solve(args, pf, problem, args.order, free)
    return {"command": "solve", "family": report.family_dict(fam)}, EXIT_OK


def cmd_verify(args, pf, problem):
    out = {"command": "verify"}
    if args.solution:
        _, coeffs = _load_solution(args.solution, problem)
        cert = check_coefficients(problem, coeffs, args.check_order)
        out["source"] = "solution file"
    else:
        fam = _solve(args, pf, problem, args.order)
        samples = args.samples if args.samples is not None else pf.verify_samples
        cert = verify_family(problem, fam, args.check_order, samples=samples,
                             seed=args.seed if args.seed is not None else pf.seed)
        out["source"] = "fresh solve"
    out["certificate"] = report.certificate_dict(cert)
    return out, EXIT_OK if cert.ok else EXIT_FAILED


def cmd_oracle(args, pf, problem):
    out = {"command": "oracle"}
    m = _m(args, pf)
    N = args.order if args.order is not None else pf.order
    free = {}
    if args.diff:
        fam, coeffs = _load_solution(args.diff, problem)
        N = len(coeffs) - 1
        for s in fam.get("free_slots", []):
            for p in range(problem.d):
                free[(s["index"], p)] = coeffs[s["index"]][p]
    base = pf.initial[: m + problem.n + 1]
    res = brute_force_solve(problem, base, N, free=free)
    out["oracle"] = report.oracle_dict(res)
    if not res.feasible:
        out["error"] = {"type": "Infeasible", "message": f"inconsistent order {res.witness_order}",
                        "witness": res.witness_order}
        return out, EXIT_INFEASIBLE
    if args.diff:
        diff = coefficient_diff(coeffs, res.coefficients, problem.field)
        out["max_abs_diff"] = diff
        scale = max([1.0] + [abs(v) for c in coeffs for v in c])
        agree = problem.field.is_zero(diff, scale) if not problem.field.exact else diff == 0
        out["agree"] = agree
        return out, EXIT_OK if agree else EXIT_FAILED
    return out, EXIT_OK


def cmd_tougeron(args, pf, problem):
    out = {"command": "tougeron"}
    m = _m(args, pf)
    samples = pf.samples
    if args.samples:
        samples = [float(parse_scalar(v, "f64")) for v in args.samples.split(",")]
    limit = c_limit(problem, pf.initial, m)
    fl = problem.field if not problem.field.exact else Field("f64", problem.field.atol, problem.field.rtol)
    fprob = problem.with_field(fl)
    finit = [[fl.coerce(v) for v in c] for c in pf.initial]
    res = continue_c(fprob, finit, m, samples, NewtonOptions(extra_order=args.extra_order))
    res.limit = limit
    res.diagnostic = tougeron_diagnostic(problem, pf.initial, m, args.extra_order)
    out["continuation"] = report.continuation_dict(res)
    ok = all(s.converged for s in res.samples)
    return out, EXIT_OK if ok else EXIT_FAILED


COMMANDS = {
    "analyze": cmd_analyze,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "tougeron": cmd_tougeron,
}


def _error(exc) -> dict:
    witness = getattr(exc, "witness", None)
    out = {"type": type(exc).__name__, "message": str(exc), "witness": witness}
    if isinstance(exc, InfeasibleRootError):
        out["root"] = exc.root
    if isinstance(exc, ParseError):
        out["line"], out["column"] = exc.line, exc.column
    rep = getattr(exc, "report", None)
    if rep is not None and hasattr(rep, "verdicts"):
        fail = next((v for v in rep.verdicts() if not v.ok), None)
        if fail is not None:
            out["witness"] = fail.witness
            out["failed"] = fail.name
    return out


def run(argv=None):
    """Parse ``argv`` and return ``(report_dict, exit_code, args)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    data = {"command": args.command}
    try:
        pf = load(args.file)
        problem = pf.problem()
        data["problem"] = report.problem_dict(pf, problem)
        body, code = COMMANDS[args.command](args, pf, problem)
        data.update(body)
    except UsageError as exc:
        data["error"], code = _error(exc), EXIT_USAGE
    except (SchemaError, ParseError, ValidationError, UnsupportedInExactMode) as exc:
        data["error"], code = _error(exc), EXIT_SCHEMA
    except (HypothesisError, SingularEvaluationError) as exc:
        data["error"], code = _error(exc), EXIT_HYPOTHESIS
    except InfeasibleRootError as exc:
        data["error"], code = _error(exc), EXIT_INFEASIBLE
    data["exit_code"] = code
    return data, code, args


def main(argv=None) -> int:
    data, code, args = run(argv)
    text = report.dumps(data) if args.emit == "json" else report.render_text(data)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if code not in (EXIT_OK,) and "error" in data:
        sys.stderr.write(f"fpsdae: {data['error']['message']}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
