"""Acceptance suite: one pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""

import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))
sys.path.insert(0, str(ROOT / "scripts"))

from fpsdae import poly  # noqa: E402
from fpsdae.errors import HypothesisError, InfeasibleRootError  # noqa: E402
from fpsdae.expansion import JetPoint, gamma_row  # noqa: E402
from fpsdae.expr import Problem  # noqa: E402
from fpsdae.indicial import indicial_data  # noqa: E402
from fpsdae.oracle import brute_force_solve, fd_check_partials  # noqa: E402
from fpsdae.problemfile import load  # noqa: E402
from fpsdae.randgen import (  # noqa: E402
    degenerate_instance,
    random_jet,
    random_perturbation,
    random_polynomial_problem,
)
from fpsdae.separant import assemble_S  # noqa: E402
from fpsdae.solver import SolveOptions, check_coefficients, perturbation_check, solve  # noqa: E402
from fpsdae.tougeron import c_limit, continuation_series, continue_c, tougeron_diagnostic  # noqa: E402

from helpers import affine_gap  # noqa: E402
from regen_golden import run_case  # noqa: E402

pytestmark = pytest.mark.acceptance

RESULTS = {}


def record(num, title, ok, detail):
    RESULTS[num] = (title, ok, detail)
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title}: {detail}"
    print(line)
    return ok


def _flat(coeffs):
    return [c[0] for c in coeffs]


def criterion_1():
    start = time.perf_counter()
    rng = random.Random(101)
    problems, checks, worst_float, exact_bad = 0, 0, 0.0, 0
    for t in range(120):
        n, d = rng.randint(0, 2), rng.randint(1, 3)
        field = "f64" if t % 4 == 3 else "rational"
        prob = random_polynomial_problem(rng, n, d, degree=3, terms=4, field=field)
        problems += 1
        for k in range(4):
            for l in range(4):
                pt = JetPoint.from_values(random_jet(rng, 2 * k + 2 + l + n, d, field == "f64"), n, d, prob.field)
                gap = affine_gap(prob, pt, k, l)
                checks += 1
                if field == "rational":
                    exact_bad += gap != 0.0
                else:
                    worst_float = max(worst_float, gap)
    elapsed = time.perf_counter() - start
    ok = problems >= 100 and exact_bad == 0 and worst_float <= 1e-8 and elapsed <= 60
    return ok, (f"{problems} problems, {checks} (k, l) checks, rational mismatches {exact_bad}, "
                f"worst float gap {worst_float:.2e}, {elapsed:.1f} s")


def criterion_2():
    rng = random.Random(202)
    fails = []
    for _ in range(40):
        n, d, k = rng.randint(0, 2), rng.randint(1, 3), rng.randint(1, 3)
        prob = random_polynomial_problem(rng, n, d, degree=3, terms=5)
        pt = JetPoint.from_values(random_jet(rng, k + n + 1, d), n, d)
        S = assemble_S(prob, pt, k)
        r = prob.r
        for a in range(k + 1):
            for b in range(k + 1):
                blk = [row[b * d:(b + 1) * d] for row in S.matrix[a * r:(a + 1) * r]]
                outside = b < a or b - a > n
                if outside and any(v != 0 for row in blk for v in row):
                    fails.append(("band", n, d, k))
                if n == 0 and a != b and any(v != 0 for row in blk for v in row):
                    fails.append(("n=0 diagonal", d, k))
        if S.leading(k - 1) != assemble_S(prob, pt, k - 1).matrix:
            fails.append(("bordering", n, d, k))
    if gamma_row(0, 0).entries[0] != 1 or gamma_row(1, 0).entries[1] != Fraction(3, 2):
        fails.append(("gamma",))
    if any(gamma_row(k, l).entries[0] != 1 for k in range(4) for l in range(4)):
        fails.append(("gamma_0",))
    for _ in range(30):
        m, n, d = rng.randint(1, 3), rng.randint(0, 2), rng.randint(1, 3)
        inst = degenerate_instance(rng, m, n, d, perturbation_terms=1)
        g = indicial_data(inst.problem, JetPoint.from_values(inst.initial, n, d), m).g
        if poly.degree(g) > m * d or (d == 1 and poly.degree(g) > m):
            fails.append(("deg g", m, n, d))
    return not fails, f"40 separant problems, 30 indicial instances, failures {fails[:3] or 'none'}"


def criterion_3():
    prob = Problem.from_strings(["x*y' - 3*y"], 1)
    fam = solve(prob, [0, 0, 0], SolveOptions(m=1, order=10, free={3: [1]}))
    checks = {
        "g = l": fam.indicial.g == (0, 1),
        "roots [0]": fam.indicial.roots == [0],
        "slot c_3": [s.index for s in fam.free_slots] == [3],
        "q = 1": fam.q == 1,
        "others 0": all(c == [0] for q, c in enumerate(fam.coefficients) if q != 3),
        "certificate": fam.certificate.ok,
    }
    orc = brute_force_solve(prob, [0, 0, 0], 10, {(3, 0): fam.coefficients[3][0]})
    checks["oracle free [(3, 0)]"] = orc.free == [(3, 0)]
    checks["oracle exact"] = orc.coefficients == fam.coefficients
    bad = [k for k, v in checks.items() if not v]
    return not bad, f"N = 10, c = {[str(v) for v in _flat(fam.coefficients)]}, failed {bad or 'none'}"


def criterion_4():
    prob = Problem.from_strings(["y'^2 - 4*y"], 1)
    fam = solve(prob, [0, 0, 2], SolveOptions(m=1, order=12))
    g = tuple(fam.indicial.g)
    checks = {
        "g = 2 + 2l": g == (2, 2),
        "no roots": fam.indicial.roots == [],
        "y = x^2": _flat(fam.coefficients) == [0, 0, 2] + [0] * 10,
        "certificate N = 12": check_coefficients(prob, fam.coefficients, 12).ok,
        "oracle exact": brute_force_solve(prob, [0, 0, 2], 12).coefficients == fam.coefficients,
    }
    bad = [k for k, v in checks.items() if not v]
    return not bad, f"computed g = {g[0]} + {g[1]}l, failed {bad or 'none'}"


def _shipped(name):
    return load(ROOT / "problems" / f"{name}.json")


def _paths_agree(prob, initial, m, order, free=None):
    out = []
    for path in ("scalar", "system"):
        try:
            out.append(solve(prob, initial, SolveOptions(m=m, order=order, path=path, free=free or {})).coefficients)
        except (HypothesisError, InfeasibleRootError) as exc:
            out.append(type(exc).__name__ + str(getattr(exc, "witness", "")))
    return out[0] == out[1]


def criterion_5():
    count, bad = 0, []
    for name in ("euler", "euler_infeasible", "parabola", "exp", "geometric", "two_roots",
                 "nonlinear_coupling", "tougeron_line"):
        pf = _shipped(name)
        count += 1
        if not _paths_agree(pf.problem(), pf.initial, pf.m, pf.order):
            bad.append(name)
    rng = random.Random(505)
    for t in range(20):
        m = rng.randint(1, 2)
        n = m + rng.randint(0, 1)
        inst = degenerate_instance(rng, m, n, 1, force_root=rng.randint(0, 3) if t % 2 else None)
        count += 1
        free = {m + n + 1 + l: [rng.randint(-3, 3)] for l in range(4)}
        if not _paths_agree(inst.problem, inst.initial, m, m + n + 6, free):
            bad.append(f"random#{t}")
    return not bad, f"{count} scalar instances, mismatches {bad or 'none'}"


def criterion_6():
    rng = random.Random(606)
    cases = [(name, None) for name in ("euler", "euler_infeasible", "parabola", "two_roots",
                                       "nonlinear_coupling", "tougeron_line", "tougeron_system",
                                       "nondegenerate")]
    cases.append(("scan", 2))
    bad, diverged, total = [], 0, 0
    for name, m_override in cases:
        pf = _shipped(name)
        prob = pf.problem()
        m = m_override or pf.m
        c = pf.initial
        for _ in range(10):
            pert = random_perturbation(rng, prob.n, prob.d, c, 2 * m + 1, terms=2, r=prob.r)
            rep = perturbation_check(prob, c, m, pert, order=m + prob.n + 5)
            total += 1
            if not rep.invariants_equal:
                bad.append((name, pert))
            if rep.first_divergence is not None or rep.base_error != rep.perturbed_error:
                diverged += 1
    return not bad, (f"{len(cases)} shipped instances (m >= 1) x 10 perturbations: invariants equal in "
                     f"{total - len(bad)}/{total}; continuation differs (reported) in {diverged}")


def criterion_7():
    start = time.perf_counter()
    checks = {}
    line = Problem.from_strings(["y^2 - x^2"], 0)
    checks["c2(0) = 0"] = c_limit(line, [0, 1], 1) == [0]
    res = continue_c(line.with_field("f64"), [[0.0], [1.0]], 1, [0.1, 0.01, 0.001])
    checks["|c2(x)| <= 1e-8"] = all(abs(s.c[0]) <= 1e-8 for s in res.samples)
    checks["residual <= 1e-12"] = all(s.converged and s.residual <= 1e-12 for s in res.samples)
    diag = tougeron_diagnostic(line, [0, 1], 1)
    checks["det order = m d"] = diag.det_order == 1
    checks["residual order >= 2m+1"] = diag.residual_order is None or diag.residual_order >= 3
    checks["applies (d = 1)"] = diag.classical_tougeron_applies
    system = Problem.from_strings(["y[0]^2 - x^2 - x^3", "y[1]^2 - x^2"], 0, 2)
    init = [[0, 0], [1, 1]]
    sdiag = tougeron_diagnostic(system, init, 1)
    checks["2md = 4 > 3"] = (sdiag.order_required, sdiag.order_available) == (4, 3)
    checks["does not apply"] = not sdiag.classical_tougeron_applies
    sres = continue_c(system.with_field("f64"), [[0.0, 0.0], [1.0, 1.0]], 1, [0.1, 0.01, 0.001])
    checks["d = 2 continuation"] = all(s.converged and s.residual <= 1e-12 for s in sres.samples)
    checks["d = 2 series = solver"] = (continuation_series(system, init, 1, 7)
                                       == solve(system, init, SolveOptions(m=1, order=7)).coefficients)
    elapsed = time.perf_counter() - start
    checks["<= 10 s"] = elapsed <= 10
    bad = [k for k, v in checks.items() if not v]
    return not bad, f"{len(checks)} checks in {elapsed:.2f} s, failed {bad or 'none'}"


def _oracle_compare(inst, m, n, d, N, rng):
    free = {}
    fam = solve(inst.problem, inst.initial, SolveOptions(m=m, order=N))
    for s in fam.free_slots:
        if s.source != "feasibility":
            free[s.index] = [rng.randint(-3, 3) for _ in s.basis]
    if free:
        fam = solve(inst.problem, inst.initial, SolveOptions(m=m, order=N, free=free))
    given = {(s.index, p): fam.coefficients[s.index][p] for s in fam.free_slots for p in range(d)}
    orc = brute_force_solve(inst.problem, inst.initial, N, given)
    return fam, orc


def criterion_8():
    rng = random.Random(808)
    exact_ok, exact_n, worst_float, float_n, tries = 0, 0, 0.0, 0, 0
    while exact_n < 25 and tries < 200:
        tries += 1
        m, n, d = rng.randint(1, 2), rng.randint(0, 2), rng.randint(1, 2)
        force = rng.randint(0, 2) if d == 1 and n >= m and tries % 2 else None
        inst = degenerate_instance(rng, m, n, d, perturbation_terms=1, force_root=force)
        N = min(8, m + n + 5)
        try:
            fam, orc = _oracle_compare(inst, m, n, d, N, rng)
        except InfeasibleRootError:
            continue
        exact_n += 1
        exact_ok += orc.feasible and orc.coefficients == fam.coefficients
    while float_n < 10:
        m, n, d = rng.randint(1, 2), rng.randint(0, 2), rng.randint(1, 2)
        inst = degenerate_instance(rng, m, n, d, perturbation_terms=1, field="f64")
        try:
            fam, orc = _oracle_compare(inst, m, n, d, min(8, m + n + 5), rng)
        except InfeasibleRootError:
            continue
        float_n += 1
        scale = max([1.0] + [abs(v) for c in fam.coefficients for v in c])
        gap = max(abs(a - b) for ca, cb in zip(fam.coefficients, orc.coefficients) for a, b in zip(ca, cb))
        worst_float = max(worst_float, gap / scale)
    ok = exact_n >= 25 and exact_ok == exact_n and worst_float <= 1e-9
    return ok, f"rational {exact_ok}/{exact_n} exact, float {float_n} instances worst relative {worst_float:.2e}"


def criterion_9():
    rng = random.Random(909)
    worst = 0.0
    for _ in range(50):
        n, d = rng.randint(0, 2), rng.randint(1, 3)
        prob = random_polynomial_problem(rng, n, d, degree=3, field="f64")
        i = rng.randint(0, 3)
        pt = JetPoint.from_values(random_jet(rng, 2 * i + n + 2, d, True), n, d, prob.field)
        for j in range(n + 1):
            worst = max(worst, fd_check_partials(prob, pt, i, j, 1e-6))
    return worst <= 1e-6, f"50 random instances, worst deviation {worst:.2e}"


def criterion_10():
    cases = json.loads((ROOT / "tests" / "golden" / "cases.json").read_text(encoding="utf-8"))
    bad = []
    for case in cases:
        first = run_case(case)
        second = run_case(case)
        golden = (ROOT / "tests" / "golden" / f"{case['id']}.json").read_text(encoding="utf-8")
        if first != second or first[0] != case["exit"] or first[1] != golden:
            bad.append(case["id"])
    codes = sorted({c["exit"] for c in cases})
    return not bad, f"{len(cases)} golden cases (exit codes {codes}) run twice, mismatches {bad or 'none'}"


CRITERIA = {
    1: ("affine structure", criterion_1),
    2: ("structural", criterion_2),
    3: ("Euler instance", criterion_3),
    4: ("parabola instance", criterion_4),
    5: ("scalar/system consistency", criterion_5),
    6: ("perturbation stability", criterion_6),
    7: ("Tougeron suite", criterion_7),
    8: ("oracle equivalence", criterion_8),
    9: ("sensitivity correctness", criterion_9),
    10: ("CLI determinism and golden files", criterion_10),
}


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num):
    title, fn = CRITERIA[num]
    ok, detail = fn()
    assert record(num, title, ok, detail), detail


if __name__ == "__main__":
    failed = 0
    for num in sorted(CRITERIA):
        title, fn = CRITERIA[num]
        ok, detail = fn()
        failed += not record(num, title, ok, detail)
    sys.exit(1 if failed else 0)
