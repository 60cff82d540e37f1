"""Dense univariate polynomials in the shift variable ``l``.

A polynomial is a tuple of coefficients, lowest degree first.  The empty
tuple is the zero polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .field import Field


def trim(p, field: Field | None = None):
    p = list(p)
    scale = max((abs(v) for v in p), default=0.0)
    while p and (p[-1] == 0 if field is None else field.is_zero(p[-1], scale)):
        p.pop()
    return tuple(p)


def degree(p, field: Field | None = None) -> int:
    """Degree, with ``-1`` for the zero polynomial."""
    return len(trim(p, field)) - 1


def add(p, q):
    n = max(len(p), len(q))
    zero = (p or q or (0,))[0] * 0
    return tuple((p[i] if i < len(p) else zero) + (q[i] if i < len(q) else zero) for i in range(n))


def neg(p):
    return tuple(-v for v in p)


def sub(p, q):
    return add(p, neg(q))


def mul(p, q):
    if not p or not q:
        return ()
    out = [p[0] * 0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return tuple(out)


def scale(p, c):
    return tuple(v * c for v in p)


def evaluate(p, l):
    acc = 0
    for v in reversed(p):
        acc = acc * l + v
    return acc


def divide_exact(p, q, field: Field):
    """Quotient of ``p / q`` by long division; the remainder is dropped.

    Used inside fraction-free elimination where the division is exact in
    theory.  In float modes any rounding residue lands in the remainder.
    """
    q = trim(q, field)
    p = list(trim(p, field))
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(q):
        return ()
    out = [field.zero()] * (len(p) - len(q) + 1)
    lead = q[-1]
    for k in range(len(out) - 1, -1, -1):
        coef = p[k + len(q) - 1] / lead
        out[k] = coef
        for j, qv in enumerate(q):
            p[k + j] = p[k + j] - coef * qv
    return tuple(out)


def binomial_in_l(top_offset: int, i: int):
    """``C(top_offset + l, i)`` as a polynomial in ``l`` with Fraction coefficients."""
    p = (Fraction(1),)
    for t in range(i):
        p = mul(p, (Fraction(top_offset - t), Fraction(1)))
    return scale(p, Fraction(1, _fact(i)))


def _fact(k):
    out = 1
    for t in range(2, k + 1):
        out *= t
    return out


def gamma_poly(m: int, i: int):
    """``gamma_i^{2m+l} = C(2m+1+l, i) / C(2i, i)`` as a polynomial in ``l``."""
    return scale(binomial_in_l(2 * m + 1, i), Fraction(1, comb(2 * i, i)))


def det(mat, field: Field):
    """Determinant of a square matrix of polynomials by Bareiss elimination.

    Fraction-free: every intermediate is a polynomial, and the division by
    the previous pivot is exact.
    """
    m = [[trim(e, field) for e in row] for row in mat]
    size = len(m)
    if size == 0:
        return (field.one(),)
    sign = 1
    prev = (field.one(),)
    for k in range(size - 1):
        piv = next((i for i in range(k, size) if trim(m[i][k], field)), None)
        if piv is None:
            return ()
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = sub(mul(m[i][j], m[k][k]), mul(m[i][k], m[k][j]))
                m[i][j] = trim(divide_exact(num, prev, field), field)
            m[i][k] = ()
        prev = m[k][k]
    result = trim(m[size - 1][size - 1], field)
    return result if sign > 0 else neg(result)


def evaluate_matrix(mat, l):
    return [[evaluate(e, l) for e in row] for row in mat]


def derivative(p):
    return tuple(k * v for k, v in enumerate(p))[1:]


def divmod_poly(p, q):
    """Exact long division over Fractions: ``(quotient, remainder)``."""
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(trim(p))
    if len(rem) < len(q):
        return (), tuple(rem)
    out = [Fraction(0)] * (len(rem) - len(q) + 1)
    for k in range(len(out) - 1, -1, -1):
        coef = Fraction(rem[k + len(q) - 1]) / q[-1]
        out[k] = coef
        for j, qv in enumerate(q):
            rem[k + j] = rem[k + j] - coef * qv
    return tuple(out), trim(rem[: len(q) - 1])


def sturm_sequence(p):
    """Sturm chain of the square-free part of ``p`` (exact coefficients)."""
    p = trim(tuple(Fraction(v) for v in p))
    a, b = p, derivative(p)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    sq = divmod_poly(p, a)[0] if len(a) > 1 else p
    chain = [sq, derivative(sq)]
    while chain[-1]:
        nxt = neg(divmod_poly(chain[-2], chain[-1])[1])
        if not nxt:
            break
        chain.append(nxt)
    return [c for c in chain if c]


def _sign_changes(chain, x) -> int:
    signs = [v for v in (evaluate(c, x) for c in chain) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def integer_root_candidates(p, lo: int, hi: int, width: int = 8):
    """Integers in ``[lo, hi]`` within one of a real root of ``p`` (exact Sturm bisection)."""
    chain = sturm_sequence(p)
    out = set()
    stack = [(lo - 1, hi)]
    while stack:
        a, b = stack.pop()
        if _sign_changes(chain, a) - _sign_changes(chain, b) == 0:
            continue
        if b - a <= width:
            out.update(range(max(a, lo), min(b + 1, hi) + 1))
            continue
        mid = (a + b) // 2
        stack.extend([(a, mid), (mid, b)])
    return sorted(out)
