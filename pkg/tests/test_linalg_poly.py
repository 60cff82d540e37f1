from fractions import Fraction

from hypothesis import given, strategies as st

from fpsdae import linalg, poly
from fpsdae.field import Field

QF = Field("rational")
rat = st.fractions(min_value=-6, max_value=6, max_denominator=4)


def matrices(rows, cols):
    return st.lists(st.lists(rat, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@given(matrices(3, 4))
def test_rank_nullity(a):
    ns = linalg.nullspace(a, QF)
    assert linalg.rank(a, QF) + len(ns) == 4
    for v in ns:
        assert linalg.matvec(a, v) == [0, 0, 0]
    for w in linalg.left_nullspace(a, QF):
        assert linalg.matvec(linalg.transpose(a), w) == [0] * 4


@given(matrices(3, 3), st.lists(rat, min_size=3, max_size=3))
def test_solve_exact(a, b):
    sol = linalg.solve(a, b, QF)
    if sol.feasible:
        assert linalg.matvec(a, sol.particular) == b
    else:
        assert linalg.rank(a, QF) < linalg.rank([r + [v] for r, v in zip(a, b)], QF)


@given(matrices(3, 3), matrices(3, 3))
def test_det_multiplicative(a, b):
    assert linalg.det(linalg.matmul(a, b), QF) == linalg.det(a, QF) * linalg.det(b, QF)


def test_solve_reports_inconsistency():
    sol = linalg.solve([[1, 1], [2, 2]], [Fraction(1), Fraction(3)], QF)
    assert not sol.feasible and sol.residual > 0


polys = st.lists(rat, min_size=0, max_size=3).map(tuple)


@given(st.lists(st.lists(polys, min_size=3, max_size=3), min_size=3, max_size=3), st.integers(-4, 4))
def test_bareiss_matches_pointwise_det(mat, l):
    g = poly.det(mat, QF)
    assert poly.evaluate(g, Fraction(l)) == linalg.det(poly.evaluate_matrix(mat, Fraction(l)), QF)


def test_gamma_poly_values():
    # gamma_i^{2m+l} = C(2m+1+l, i) / C(2i, i)
    assert poly.gamma_poly(1, 0) == (1,)
    assert poly.evaluate(poly.gamma_poly(1, 1), 0) == Fraction(3, 2)
    assert poly.evaluate(poly.gamma_poly(2, 2), 1) == Fraction(15, 6)
