import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from fpsdae.errors import HypothesisError, InfeasibleRootError, OverdeterminedError, ValidationError
from fpsdae.expansion import JetPoint, compute_T
from fpsdae.expr import Problem
from fpsdae.oracle import brute_force_solve
from fpsdae.randgen import degenerate_instance
from fpsdae.solver import (
    SolveOptions,
    check_coefficients,
    perturbation_check,
    scan_m,
    solve,
    solve_regular,
    verify_family,
)

EULER = ["x*y' - 3*y"]
PARABOLA = ["y'^2 - 4*y"]
TWO_ROOTS = ["x^2*y'' - 11*x*y' + 35*y + x^2*y"]


def _flat(coeffs):
    return [c[0] for c in coeffs]


def test_euler_family():
    prob = Problem.from_strings(EULER, 1)
    fam = solve(prob, [0, 0, 0], SolveOptions(m=1, order=10, free={3: [7]}))
    assert fam.indicial.g == (0, 1)
    assert [s.index for s in fam.free_slots] == [3]
    assert fam.q == 1
    assert _flat(fam.coefficients) == [0, 0, 0, 7] + [0] * 7
    assert fam.certificate.ok and fam.certificate.orders_checked == 9


def test_parabola_unique():
    prob = Problem.from_strings(PARABOLA, 1)
    fam = solve(prob, [0, 0, 2], SolveOptions(m=1, order=12))
    assert fam.indicial.roots == [] and fam.q == 0
    assert _flat(fam.coefficients) == [0, 0, 2] + [0] * 10
    assert check_coefficients(prob, fam.coefficients, 12).ok


def test_regular_examples():
    assert _flat(solve_regular(Problem.from_strings(["y' - y"], 1), [1], 8).coefficients) == [1] * 9
    geo = solve_regular(Problem.from_strings(["y' - y^2"], 1), [1], 8).coefficients
    assert _flat(geo) == [factorial(i) for i in range(9)]
    assert _flat(solve_regular(Problem.from_strings(["y - x"], 0), [0], 5).coefficients) == [0, 1, 0, 0, 0, 0]
    ch = solve_regular(Problem.from_strings(["y'[0] - y[1]", "y'[1] - y[0]"], 1, 2), [[1, 0]], 8).coefficients
    assert ch == [[1, 0] if i % 2 == 0 else [0, 1] for i in range(9)]


def test_corrupted_coefficient_fails_certificate():
    prob = Problem.from_strings(EULER, 1)
    fam = solve(prob, [0, 0, 0], SolveOptions(m=1, order=10, free={3: [7]}))
    bad = [list(c) for c in fam.coefficients]
    bad[5][0] += 1
    cert = check_coefficients(prob, bad)
    # T^i = (i - 3) c_i, so the fault shows at order 5
    assert not cert.ok and cert.first_failure == (5, 0)


def test_two_roots_pin_the_second_slot():
    prob = Problem.from_strings(TWO_ROOTS, 2)
    fam = solve(prob, [0] * 5, SolveOptions(m=2, order=10))
    assert fam.indicial.roots == [0, 2]
    assert fam.pinned == 1 and fam.q == 1
    assert fam.dimension_bound_ok()
    assert fam.certificate.ok
    with pytest.raises(InfeasibleRootError):
        solve(prob, [0] * 5, SolveOptions(m=2, order=10, free={5: [3]}))


def test_nonlinear_coupling_search():
    prob = Problem.from_strings(["x^2*y'' - 11*x*y' + 35*y + x*y''^2 - x^7/36"], 2)
    fam = solve(prob, [0] * 5, SolveOptions(m=2, order=10))
    slot = next(s for s in fam.free_slots if s.index == 5)
    assert slot.source == "feasibility"
    assert abs(fam.coefficients[5][0]) == 1
    assert fam.certificate.ok


def test_errors():
    with pytest.raises(HypothesisError):
        solve(Problem.from_strings(["y' - y"], 1), [1, 1, 1], SolveOptions(m=1))
    with pytest.raises(InfeasibleRootError) as info:
        solve(Problem.from_strings(["x*y' - 3*y - x^3"], 1), [0, 0, 0], SolveOptions(m=1, order=8))
    assert info.value.root == 0
    with pytest.raises(OverdeterminedError):
        solve(Problem.from_strings(["y", "y'"], 1), [0, 0, 0], SolveOptions(m=1))


def test_scalar_and_system_paths_agree():
    prob = Problem.from_strings(TWO_ROOTS, 2)
    a = solve(prob, [0] * 5, SolveOptions(m=2, order=10, path="scalar", free={3: [2]}))
    b = solve(prob, [0] * 5, SolveOptions(m=2, order=10, path="system", free={3: [2]}))
    assert a.coefficients == b.coefficients


def test_deterministic():
    prob = Problem.from_strings(["x^2*y'' - 11*x*y' + 35*y + x*y''^2 - x^7/36"], 2)
    runs = [solve(prob, [0] * 5, SolveOptions(m=2, order=10, seed=s)).coefficients for s in (0, 0, 3)]
    assert runs[0] == runs[1] == runs[2]


@given(st.integers(0, 2**31), st.integers(1, 2), st.integers(0, 2))
def test_mid_band_is_arbitrary(seed, m, n):
    rng = random.Random(seed)
    inst = degenerate_instance(rng, m, n, 1)
    mid = [[Fraction(rng.randint(-5, 5))] for _ in range(m)]
    pt = JetPoint.from_values(inst.initial + mid, n, 1)
    T = compute_T(inst.problem, pt, 2 * m)
    assert all(t == (0,) for t in T.values)


@given(st.integers(0, 2**31), st.integers(1, 2), st.integers(0, 2), st.integers(1, 2))
def test_random_instances_match_oracle(seed, m, n, d):
    inst = degenerate_instance(random.Random(seed), m, n, d, perturbation_terms=1)
    try:
        fam = solve(inst.problem, inst.initial, SolveOptions(m=m, order=m + n + 4))
    except InfeasibleRootError:
        return
    free = {(s.index, p): fam.coefficients[s.index][p] for s in fam.free_slots for p in range(d)}
    orc = brute_force_solve(inst.problem, inst.initial, fam.order, free)
    assert orc.feasible
    assert orc.coefficients == fam.coefficients


def test_verify_family_samples():
    prob = Problem.from_strings(TWO_ROOTS, 2)
    fam = solve(prob, [0] * 5, SolveOptions(m=2, order=10))
    cert = verify_family(prob, fam, samples=3, seed=1)
    assert cert.ok and len(cert.samples) == 3


def test_perturbation_examples():
    prob = Problem.from_strings(PARABOLA, 1)
    rep = perturbation_check(prob, [0, 0, 2], 1, "y^3", order=8)
    assert rep.invariants_equal
    assert rep.first_divergence is not None
    same = perturbation_check(prob, [0, 0, 2], 1, "0", order=8)
    assert same.invariants_equal and same.first_divergence is None
    with pytest.raises(ValidationError):
        perturbation_check(prob, [0, 0, 2], 1, "y^2")


def test_scan():
    prob = Problem.from_strings(["x^2*y'' - 11*x*y' + 35*y"], 2)
    rows = {m: failure for m, failure, _ in scan_m(prob, [0] * 6, 3)}
    assert rows == {1: "S_m != 0", 2: None, 3: "S_{m-1} = 0"}
