"""Random problem generators for property tests and experiment scripts.

Degenerate instances are built around the truncated polynomial
``ybar(x) = sum_{i <= m+n} c_i x^i / i!``.  With deviations
``u_j = y^(j) - ybar^(j)(x)``, any ``G = sum_j A_j(x) u_j + (terms of degree
>= 2 in u)`` vanishes identically along the truncated jet, so ``G[z_0] = 0``
and the remainder conditions hold.  Requiring ``x^{m-k}`` to divide
``A_{n-k}`` for ``k < m`` forces ``S_{m-1} = 0``, while a generic ``x^m``
coefficient in ``A_n`` keeps ``S_m`` nonzero; making that coefficient
matrix diagonal keeps ``g`` of full degree ``m d``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from . import linalg, poly
from .expansion import JetPoint, compute_T
from .expr import Problem
from .field import Field
from .indicial import scalar_g
from .separant import assemble_S


def _q(v: Fraction) -> str:
    v = Fraction(v)
    if v.denominator == 1:
        return f"({v.numerator})"
    return f"({v.numerator}/{v.denominator})"


def _rand_rat(rng: random.Random, lo=-4, hi=4, dens=(1, 1, 1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice(dens))


def _monomial(vars_, powers) -> str:
    parts = []
    for v, k in zip(vars_, powers):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts) if parts else "1"


def yname(j: int, p: int, d: int) -> str:
    return f"y({j})[{p}]" if d > 1 else f"y({j})"


@dataclass
class Instance:
    problem: Problem
    initial: list  # c_0 .. c_K, each a list of d Fractions
    m: int
    equations: list
    note: str = ""


def random_polynomial_problem(rng: random.Random, n: int, d: int, r: int | None = None,
                              degree: int = 3, terms: int = 6, field="rational") -> Problem:
    """Dense-ish random polynomial in ``x`` and ``y^(j)[p]`` of total degree <= ``degree``."""
    r = d if r is None else r
    names = ["x"] + [yname(j, p, d) for j in range(n + 1) for p in range(d)]
    eqs = []
    for _ in range(r):
        chosen = []
        for _ in range(terms):
            deg = rng.randint(0, degree)
            powers = [0] * len(names)
            for _ in range(deg):
                powers[rng.randrange(len(names))] += 1
            chosen.append(f"{_q(_rand_rat(rng))}*{_monomial(names, powers)}")
        eqs.append(" + ".join(chosen))
    return Problem.from_strings(eqs, n, d, field)


def random_jet(rng: random.Random, length: int, d: int, float_mode: bool = False):
    if float_mode:
        return [[rng.uniform(-1.5, 1.5) for _ in range(d)] for _ in range(length)]
    return [[_rand_rat(rng, -3, 3) for _ in range(d)] for _ in range(length)]


def _ybar_deriv(c, j: int, p: int, upto: int) -> str:
    """``d^j/dx^j sum_{i<=upto} c_i[p] x^i / i!`` as source text."""
    parts = []
    for i in range(j, upto + 1):
        coef = Fraction(c[i][p]) / factorial(i - j)
        if coef == 0:
            continue
        power = i - j
        parts.append(_q(coef) + ("" if power == 0 else ("*x" if power == 1 else f"*x^{power}")))
    return " + ".join(parts) if parts else "0"


def degenerate_instance(rng: random.Random, m: int, n: int, d: int = 1, nonlinear_terms: int = 2,
                        perturbation_terms: int = 2, field="rational", force_root: int | None = None) -> Instance:
    """A square (``r = d``) instance for which the hypotheses hold at level ``m``.

    ``force_root`` (scalar, ``n >= m``) shifts the coefficient of ``u_{n-m}``
    so that ``g`` vanishes at that integer.  Without perturbation terms the
    truncated jet solves the equation exactly up to the root, so the range
    condition there holds.
    """
    c = random_jet(rng, m + n + 1, d)
    u = [[f"({yname(j, p, d)} - ({_ybar_deriv(c, j, p, m + n)}))" for p in range(d)] for j in range(n + 1)]
    eqs = []
    for row in range(d):
        parts = []
        for j in range(n + 1):
            k = n - j
            low = max(m - k, 0)
            for p in range(d):
                # coefficient polynomial of u_j[p]: lowest power x^{m-k}
                coefs = []
                for e in range(low, low + 2):
                    a = _rand_rat(rng, -3, 3)
                    if j == n and e == m:
                        # diagonal leading block: deg g = m d exactly
                        a = Fraction(rng.choice([-3, -2, -1, 1, 2, 3])) if p == row else Fraction(0)
                    if a:
                        coefs.append(_q(a) + ("" if e == 0 else ("*x" if e == 1 else f"*x^{e}")))
                if coefs:
                    parts.append(f"({' + '.join(coefs)})*{u[j][p]}")
        flat = [u[j][p] for j in range(n + 1) for p in range(d)]
        for _ in range(nonlinear_terms):
            a, b = rng.choice(flat), rng.choice(flat)
            e = rng.randint(0, 1)
            parts.append(f"{_q(_rand_rat(rng, -2, 2))}*{'x*' if e else ''}{a}*{b}")
        if perturbation_terms:
            parts.append(random_perturbation(rng, n, d, c, 2 * m + 1, perturbation_terms, 1)[0])
        eqs.append(" + ".join(parts) if parts else "0")
    prob = Problem.from_strings(eqs, n, d, field)
    if force_root is not None:
        if d != 1 or n < m:
            raise ValueError("force_root needs d = 1 and n >= m")
        g = scalar_g(prob.with_field(Field("rational")), JetPoint.from_values(c, n, 1), m)
        shift = -poly.evaluate(g, Fraction(force_root))
        eqs = [f"{eqs[0]} + {_q(shift)}*{u[n - m][0]}"]
        prob = Problem.from_strings(eqs, n, d, field)
    return Instance(prob, c, m, eqs, "degenerate by construction")


def random_perturbation(rng: random.Random, n: int, d: int, c, order: int, terms: int = 3, r: int = 1,
                        max_extra: int = 1):
    """``r`` polynomials in ``x`` and ``y^(j)[p] - c_j[p]`` with every monomial of degree >= ``order``."""
    names = ["x"] + [f"({yname(j, p, d)} - {_q(c[j][p])})" for j in range(n + 1) for p in range(d)]
    out = []
    for _ in range(r):
        parts = []
        for _ in range(terms):
            deg = order + rng.randint(0, max_extra)
            picks = list(rng.choice(list(combinations_with_replacement(range(len(names)), deg)))
                         if len(names) ** deg < 5000 else [rng.randrange(len(names)) for _ in range(deg)])
            powers = [picks.count(i) for i in range(len(names))]
            parts.append(f"{_q(_rand_rat(rng, -3, 3) or Fraction(1))}*{_monomial(names, powers)}")
        out.append(" + ".join(parts))
    return out


def regular_instance(rng: random.Random, n: int, d: int, degree: int = 3, field="rational") -> Instance:
    """Random square problem shifted so that ``G[z_0] = 0`` at a random ``c_0 .. c_n``."""
    for _ in range(50):
        prob = random_polynomial_problem(rng, n, d, d, degree, field=field)
        c = random_jet(rng, n + 1, d)
        pt = JetPoint.from_values(c, n, d, prob.field)
        t0 = compute_T(prob, pt, 0)[0]
        eqs = [f"{src} - {_q(v)}" for src, v in zip(prob.sources(), t0)]
        shifted = Problem.from_strings(eqs, n, d, field)
        S0 = assemble_S(shifted, JetPoint.from_values(c, n, d, shifted.field), 0).matrix
        if linalg.det(S0, shifted.field) != 0:
            return Instance(shifted, c, 0, eqs, "regular")
    raise RuntimeError("could not draw a regular instance")
