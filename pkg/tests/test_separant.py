import random

from hypothesis import given, strategies as st

from fpsdae.expansion import JetPoint
from fpsdae.expr import Problem
from fpsdae.randgen import degenerate_instance, random_jet, random_polynomial_problem
from fpsdae.separant import assemble_S, check_conditions

setup = st.tuples(st.integers(0, 2**31), st.integers(0, 2), st.integers(1, 3), st.integers(0, 3))


def _random(seed, n, d, k):
    rng = random.Random(seed)
    prob = random_polynomial_problem(rng, n, d, degree=3, terms=5)
    pt = JetPoint.from_values(random_jet(rng, k + n + 1, d), n, d)
    return prob, pt


@given(setup)
def test_band_structure(case):
    seed, n, d, k = case
    prob, pt = _random(seed, n, d, k)
    S = assemble_S(prob, pt, k)
    r = prob.r
    for a in range(k + 1):
        for b in range(k + 1):
            blk = [row[b * d:(b + 1) * d] for row in S.matrix[a * r:(a + 1) * r]]
            if b < a or b - a > n:
                assert all(v == 0 for row in blk for v in row)


@given(setup)
def test_bordering(case):
    seed, n, d, k = case
    if k == 0:
        return
    prob, pt = _random(seed, n, d, k)
    big = assemble_S(prob, pt, k)
    small = assemble_S(prob, pt, k - 1)
    assert big.leading(k - 1) == small.matrix


@given(st.tuples(st.integers(0, 2**31), st.integers(1, 3), st.integers(0, 3)))
def test_n_zero_is_block_diagonal(case):
    seed, d, k = case
    prob, pt = _random(seed, 0, d, k)
    S = assemble_S(prob, pt, k)
    for (i, p), blk in S.blocks.items():
        if p != i:
            assert all(v == 0 for row in blk for v in row)


def test_conditions_on_euler():
    prob = Problem.from_strings(["x*y' - 3*y"], 1)
    rep = check_conditions(prob, JetPoint.from_values([0, 0, 0], 1), 1)
    assert rep.ok
    assert rep.S_m.matrix == [[0, -3], [0, 2]]


def test_conditions_report_first_failure():
    prob = Problem.from_strings(["y' - y"], 1)
    rep = check_conditions(prob, JetPoint.from_values([1, 1, 1], 1), 1)
    assert rep.first_failure() == "S_{m-1} = 0"
    assert rep.s_prev_zero.witness == (0, 0)
    prob = Problem.from_strings(["x*y' - 3*y - x"], 1)
    rep = check_conditions(prob, JetPoint.from_values([0, 0, 0], 1), 1)
    assert rep.first_failure() == "Rbar_1 = .. = Rbar_2m = 0"


@given(st.integers(0, 2**31), st.integers(1, 3), st.integers(0, 2), st.integers(1, 2))
def test_generator_satisfies_hypotheses(seed, m, n, d):
    inst = degenerate_instance(random.Random(seed), m, n, d)
    pt = JetPoint.from_values(inst.initial, n, d)
    assert check_conditions(inst.problem, pt, m).ok
