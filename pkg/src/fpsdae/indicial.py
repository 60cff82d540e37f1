"""Indicial matrix ``H(l)``, indicial polynomial ``g(l)`` and its integer roots."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from fractions import Fraction
from math import comb, floor

from . import linalg, poly
from .errors import DegenerateIndicialError, HypothesisError, OverdeterminedError
from .expansion import JetPoint, partial_T_along_curve
from .expr import Problem
from .field import Field
from .separant import ConditionReport, SeparantMatrix, assemble_S, check_conditions

SCAN_LIMIT = 2000


@dataclass
class IndicialData:
    m: int
    n: int
    d: int
    r: int
    H: list  # r x d matrix of polynomials in l
    g: tuple | None = None  # det H(l) when r == d
    minors: list = dc_field(default_factory=list)  # all r x r minors when r < d
    roots: list = dc_field(default_factory=list)
    root_bound: float = 0.0
    borderline: list = dc_field(default_factory=list)

    def H_at(self, l):
        return poly.evaluate_matrix(self.H, l)


def indicial_matrix(problem: Problem, pt: JetPoint, m: int, S_m: SeparantMatrix | None = None):
    """``H(l) = sum_i gamma_i^{2m+l} T^{2i}_{y_{n-m+i}, i}`` as polynomials in ``l``.

    No hypothesis check; see :func:`assemble_H`.
    """
    f = pt.field
    if S_m is None:
        S_m = assemble_S(problem, pt.head(m + problem.n), m)
    blocks = S_m.last_column()
    H = [[() for _ in range(pt.d)] for _ in range(problem.r)]
    for i, blk in enumerate(blocks):
        gp = tuple(f.coerce(c) for c in poly.gamma_poly(m, i))
        for a in range(problem.r):
            for b in range(pt.d):
                v = blk[a][b]
                if v != 0:
                    H[a][b] = poly.add(H[a][b], poly.scale(gp, v))
    return [[poly.trim(e, f) for e in row] for row in H]


def assemble_H(problem: Problem, pt: JetPoint, m: int, report: ConditionReport | None = None):
    """``H(l)`` after checking that ``S_{m-1} = 0`` (only the last column of ``S_m`` survives)."""
    if report is None:
        report = check_conditions(problem, pt, m)
    if not report.s_prev_zero.ok:
        raise HypothesisError(f"cannot build H(l): S_{m - 1} is not zero", report)
    return indicial_matrix(problem, pt, m, report.S_m)


def scalar_g(problem: Problem, pt: JetPoint, m: int):
    """Scalar indicial polynomial ``sum_i C(2m+1+l, i) C(2i, i)^-1 T^{2i}_{y_{n-m+i}, i}``.

    Uses the along-curve partials, so it is an independent route to the 1x1
    case of :func:`indicial_matrix`.
    """
    f = pt.field
    n = problem.n
    base = pt.head(m + n)
    g = ()
    for i in range(m + 1):
        slot = n - m + i
        if slot < 0:
            continue
        t = partial_T_along_curve(problem, base, i, slot)[0][0]
        binom = poly.binomial_in_l(2 * m + 1, i)
        coefs = tuple(f.coerce(c) / comb(2 * i, i) for c in binom)
        g = poly.add(g, poly.scale(coefs, t))
    return poly.trim(g, f)


def cauchy_bound(g, field: Field) -> float:
    g = poly.trim(g, field)
    lead = abs(g[-1])
    if len(g) == 1:
        return 0.0
    return 1.0 + max(float(abs(v)) for v in g[:-1]) / float(lead)


def integer_roots(g, field: Field):
    """Nonnegative integer roots of ``g``.

    Integers up to the Cauchy bound are scanned directly while the bound is
    at most ``SCAN_LIMIT``; beyond that, candidates come from an exact Sturm
    bisection of the real roots (complex mode keeps the capped scan).
    Returns ``(roots, bound, borderline)``; ``borderline`` lists float-mode
    near misses (rejected, but within 1000x of the acceptance threshold).
    """
    g = poly.trim(g, field)
    if not g:
        raise DegenerateIndicialError("indicial polynomial vanishes identically")
    if len(g) == 1:
        return [], 0.0, []
    bound = cauchy_bound(g, field)
    scale = max(abs(v) for v in g)
    roots, borderline = [], []
    top = floor(bound)
    if top <= SCAN_LIMIT:
        candidates = range(0, top + 1)
    else:
        # a tiny leading coefficient inflates the bound; isolate real roots instead
        candidates = poly.integer_root_candidates([Fraction(v.real if isinstance(v, complex) else v) for v in g], 0, top)
        if isinstance(g[-1], complex):
            candidates = range(0, SCAN_LIMIT + 1)
    for l in candidates:
        val = poly.evaluate(g, field.coerce(l))
        if field.is_zero(val, scale):
            roots.append(l)
        elif not field.exact and abs(val) <= 1e3 * (field.atol + field.rtol * scale):
            borderline.append(l)
    return roots, bound, borderline


def rank_drop_points(minors, field: Field):
    """Integers ``l >= 0`` at which every ``r x r`` minor vanishes."""
    nonzero = [poly.trim(mn, field) for mn in minors if poly.trim(mn, field)]
    if not nonzero:
        raise DegenerateIndicialError("all maximal minors of H(l) vanish identically")
    best = min(nonzero, key=lambda p: cauchy_bound(p, field))
    candidates, bound, borderline = integer_roots(best, field)
    roots = []
    for l in candidates:
        if all(field.is_zero(poly.evaluate(mn, field.coerce(l)), max(abs(v) for v in mn)) for mn in nonzero):
            roots.append(l)
    return roots, bound, borderline


def indicial_data(problem: Problem, pt: JetPoint, m: int, report: ConditionReport | None = None,
                  H=None) -> IndicialData:
    """H, g (or the maximal minors when r < d) and the nonnegative integer roots."""
    f = pt.field
    r, d = problem.r, pt.d
    if r > d:
        raise OverdeterminedError(f"r = {r} > d = {d}: overdetermined systems are not covered")
    if H is None:
        H = assemble_H(problem, pt, m, report)
    data = IndicialData(m, problem.n, d, r, H)
    if r == d:
        data.g = poly.det(H, f)
        data.roots, data.root_bound, data.borderline = integer_roots(data.g, f)
    else:
        data.minors = [poly.det([[row[c] for c in cols] for row in H], f)
                       for cols in combinations(range(d), r)]
        data.roots, data.root_bound, data.borderline = rank_drop_points(data.minors, f)
    return data


@dataclass
class RootSubspace:
    matrix: list
    rank: int
    nullspace: list
    cokernel: list  # basis of the left nullspace; v in range iff cokernel . v = 0
    field: Field

    def membership(self, v):
        """``(feasible, particular_solution, residual)`` for ``H x = v``."""
        sol = linalg.solve(self.matrix, list(v), self.field)
        return sol.feasible, sol.particular, sol.residual


def root_subspaces(H, l, field: Field) -> RootSubspace:
    mat = poly.evaluate_matrix(H, field.coerce(l)) if H and isinstance(H[0][0], tuple) else H
    mat = [[field.coerce(v) for v in row] for row in mat]
    return RootSubspace(
        mat,
        linalg.rank(mat, field),
        linalg.nullspace(mat, field),
        linalg.left_nullspace(mat, field),
        field,
    )
