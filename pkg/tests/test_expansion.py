import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from fpsdae.expansion import (
    JetPoint,
    compute_T,
    extract_Rbar,
    gamma_row,
    partial_T,
    partial_T_along_curve,
)
from fpsdae.expr import Problem
from fpsdae.randgen import random_jet, random_polynomial_problem

from helpers import affine_gap


def test_T_of_exponential_jet():
    prob = Problem.from_strings(["y' - y"], 1)
    pt = JetPoint.from_values([1] * 8, 1)
    assert all(t == (0,) for t in compute_T(prob, pt, 6).values)


def test_T_matches_hand_expansion():
    # G = y^2 - x^2 along y = a x: G = (a^2 - 1) eps^2
    prob = Problem.from_strings(["y^2 - x^2"], 0)
    pt = JetPoint.from_values([0, 3], 0)
    T = compute_T(prob, pt, 3)
    assert [t[0] for t in T.values] == [0, 0, 2 * 8, 0]


def test_gamma_spot_values():
    assert gamma_row(0, 0).entries == (1,)
    assert gamma_row(1, 0).entries == (1, Fraction(3, 2))
    for k in range(4):
        for l in range(4):
            assert gamma_row(k, l).entries[0] == 1
            assert gamma_row(k, l).entries == tuple(
                Fraction(comb(2 * k + 1 + l, i), comb(2 * i, i)) for i in range(k + 1))


cases = st.tuples(st.integers(0, 2**31), st.integers(0, 2), st.integers(1, 2), st.integers(0, 3))


@given(cases)
def test_partial_routes_agree(case):
    seed, n, d, i = case
    rng = random.Random(seed)
    prob = random_polynomial_problem(rng, n, d, degree=3)
    pt = JetPoint.from_values(random_jet(rng, 2 * i + n + 2, d), n, d)
    for j in range(n + 1):
        assert partial_T(prob, pt, i, j) == partial_T_along_curve(prob, pt, i, j)


@given(st.integers(0, 2**31), st.integers(0, 2), st.integers(1, 3), st.integers(0, 3), st.integers(0, 3))
def test_affine_decomposition_exact(seed, n, d, k, l):
    rng = random.Random(seed)
    prob = random_polynomial_problem(rng, n, d, degree=3, terms=4)
    pt = JetPoint.from_values(random_jet(rng, 2 * k + 2 + l + n, d), n, d)
    assert affine_gap(prob, pt, k, l) == 0.0


def test_affine_decomposition_float_with_transcendentals():
    rng = random.Random(3)
    prob = Problem.from_strings(["exp(y') * y - sin(x) + y'^2", "cos(y[0]) * y'[1]"][:1], 1, 1, "f64")
    for k in range(3):
        for l in range(3):
            pt = JetPoint.from_values(random_jet(rng, 2 * k + 3 + l, 1, True), 1, 1, prob.field)
            assert affine_gap(prob, pt, k, l) <= 1e-8


def test_Rbar_zeroes_the_high_block():
    prob = Problem.from_strings(["y' - y"], 1)
    pt = JetPoint.from_values([1, 1, 1, 5, 7], 1)
    # T^3 = c_4 - c_3; Rbar_3 (k=1, l=0) zeroes c_3 and c_4
    assert compute_T(prob, pt, 3)[3] == (2,)
    assert extract_Rbar(prob, pt, 1, 0) == (0,)


def test_partial_rejects_bad_slot():
    prob = Problem.from_strings(["y' - y"], 1)
    with pytest.raises(Exception):
        partial_T(prob, JetPoint.from_values([1, 1], 1), 0, 3)
