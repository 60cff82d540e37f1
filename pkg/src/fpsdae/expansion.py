"""Expansion of G along the restricted power series ansatz.

The unknown is ``y(x) = sum c_i x^i / i!``.  Along ``x = eps`` the arguments
of G become ``z(eps) = sum z_i eps^i / i!`` with ``x_1 = 1``, ``x_i = 0``
otherwise, and ``y_{j,i} = c_{i+j}``.  ``T^i`` is ``i!`` times the
``eps^i`` coefficient of ``G[z(eps)]``; the ``1/i!`` convention lives here and
nowhere else (jets hold plain coefficients).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, factorial

from .errors import UsageError
from .expr import Problem, evaluate
from .field import Field
from .jet import Jet, SensitivityJet


@dataclass(frozen=True)
class JetPoint:
    """Coefficients ``c_0 .. c_N`` (each in K^d) of the ansatz.

    Coefficients past ``N`` are read as explicit zeros; :meth:`is_synthetic`
    tells which ones.
    """

    n: int
    d: int
    coeffs: tuple
    field: Field = dc_field(default_factory=Field)

    @classmethod
    def from_values(cls, values, n: int, d: int = 1, field: Field | str = "rational") -> "JetPoint":
        if isinstance(field, str):
            field = Field(field)
        rows = []
        for v in values:
            if not isinstance(v, (list, tuple)):
                v = [v]
            if len(v) != d:
                raise UsageError(f"coefficient {v!r} does not have d = {d} components")
            rows.append(tuple(field.coerce(x) for x in v))
        return cls(n, d, tuple(rows), field)

    @property
    def top(self) -> int:
        """Index of the last supplied coefficient."""
        return len(self.coeffs) - 1

    def is_synthetic(self, q: int) -> bool:
        return q > self.top

    def c(self, q: int) -> tuple:
        if q < 0:
            raise UsageError("negative coefficient index")
        if q <= self.top:
            return self.coeffs[q]
        return (self.field.zero(),) * self.d

    def z(self, i: int):
        """Restricted coefficient ``z_i = (x_i, y_{0,i}, ..., y_{n,i})``."""
        x_i = self.field.one() if i == 1 else self.field.zero()
        return x_i, [self.c(i + j) for j in range(self.n + 1)]

    def head(self, upto: int) -> "JetPoint":
        """Keep ``c_0 .. c_upto`` (later ones become synthetic zeros)."""
        return JetPoint(self.n, self.d, tuple(self.c(q) for q in range(upto + 1)), self.field)

    def with_coeff(self, q: int, vec) -> "JetPoint":
        rows = [self.c(t) for t in range(max(self.top, q) + 1)]
        rows[q] = tuple(self.field.coerce(v) for v in vec)
        return JetPoint(self.n, self.d, tuple(rows), self.field)

    def zeroed(self, lo: int, hi: int) -> "JetPoint":
        """Copy with ``c_lo .. c_hi`` set to zero."""
        zero = (self.field.zero(),) * self.d
        rows = [zero if lo <= q <= hi else self.c(q) for q in range(max(self.top, hi) + 1)]
        return JetPoint(self.n, self.d, tuple(rows), self.field)


def input_jets(pt: JetPoint, order: int):
    """Jets of ``x`` and ``y^(j)[p]`` along the ansatz, truncated at ``order``."""
    f = pt.field
    x = Jet.variable(f.zero(), order, f.one())
    inv_fact = [f.coerce(Fraction(1, factorial(i))) for i in range(order + 1)]
    ys = []
    for j in range(pt.n + 1):
        comps = []
        for p in range(pt.d):
            comps.append(Jet(pt.c(i + j)[p] * inv_fact[i] for i in range(order + 1)))
        ys.append(comps)
    return x, ys


def series(problem: Problem, pt: JetPoint, order: int):
    """Jets of the components of ``G[z(eps)]``."""
    x, ys = input_jets(pt, order)
    out = []
    for e in problem.exprs:
        v = evaluate(e, x, ys)
        if not isinstance(v, Jet):
            v = Jet.constant(pt.field.coerce(v), order)
        out.append(v)
    return out


@dataclass(frozen=True)
class TCoefficients:
    values: tuple  # T^0 .. T^M, each a tuple of r scalars
    M: int
    point: JetPoint

    def __getitem__(self, i):
        return self.values[i]


def compute_T(problem: Problem, pt: JetPoint, M: int) -> TCoefficients:
    """``T^0 .. T^M`` for the coefficients in ``pt``."""
    f = pt.field
    jets = series(problem, pt, M)
    vals = []
    for i in range(M + 1):
        fact = f.coerce(factorial(i))
        vals.append(tuple(f.coerce(jet[i]) * fact for jet in jets))
    return TCoefficients(tuple(vals), M, pt)


def partial_blocks(problem: Problem, pt: JetPoint, i: int):
    """All ``T^{2i}_{y_{j,i}}`` for ``j = 0..n`` as ``{j: r x d matrix}``.

    Each input ``y^(j)[p]`` carries a channel seeded with the direction of the
    unrestricted coordinate ``y_{j,i}[p]`` (i.e. ``eps^i / i!``); the partial is
    ``(2i)!`` times the ``eps^{2i}`` coefficient of that channel.
    """
    f = pt.field
    order = 2 * i
    x, ys = input_jets(pt, order)
    seed = [f.zero()] * (order + 1)
    seed[i] = f.coerce(Fraction(1, factorial(i)))
    seed = Jet(seed)
    sys = [
        [SensitivityJet(ys[j][p], {(j, p): seed}) for p in range(pt.d)]
        for j in range(pt.n + 1)
    ]
    sx = SensitivityJet(x)
    fact = f.coerce(factorial(order))
    blocks = {j: [[f.zero()] * pt.d for _ in range(problem.r)] for j in range(pt.n + 1)}
    for row, e in enumerate(problem.exprs):
        v = evaluate(e, sx, sys)
        if not isinstance(v, SensitivityJet):
            continue
        for (j, p), ch in v.channels.items():
            blocks[j][row][p] = f.coerce(ch[order]) * fact
    return blocks


def partial_T(problem: Problem, pt: JetPoint, i: int, j: int):
    """The ``r x d`` matrix ``T^{2i}_{y_{j,i}}``; zero for ``j < 0``."""
    if j < 0:
        return [[pt.field.zero()] * pt.d for _ in range(problem.r)]
    if j > problem.n:
        raise UsageError(f"derivative slot {j} exceeds n = {problem.n}")
    return partial_blocks(problem, pt, i)[j]


def partial_T_along_curve(problem: Problem, pt: JetPoint, i: int, j: int):
    """Same matrix as :func:`partial_T`, via ``C(2i,i) * d^i/deps^i [dG/dy^(j)](z(eps))``.

    Independent route used by the scalar (single equation) code path.
    """
    f = pt.field
    if j < 0:
        return [[f.zero()] * pt.d for _ in range(problem.r)]
    x, ys = input_jets(pt, i)
    one = Jet.constant(f.one(), i)
    sys = [[SensitivityJet(ys[jj][p], {p: one} if jj == j else None) for p in range(pt.d)]
           for jj in range(pt.n + 1)]
    scale_ = f.coerce(comb(2 * i, i) * factorial(i))
    out = [[f.zero()] * pt.d for _ in range(problem.r)]
    for row, e in enumerate(problem.exprs):
        v = evaluate(e, SensitivityJet(x), sys)
        if isinstance(v, SensitivityJet):
            for p, ch in v.channels.items():
                out[row][p] = f.coerce(ch[i]) * scale_
    return out


@dataclass(frozen=True)
class GammaRow:
    k: int
    l: int
    entries: tuple


def gamma_row(k: int, l: int) -> GammaRow:
    """``gamma_i^{2k+l} = C(2k+1+l, i) / C(2i, i)`` for ``i = 0..k``, exactly."""
    if k < 0 or l < 0:
        raise UsageError("gamma_row needs k >= 0 and l >= 0")
    return GammaRow(k, l, tuple(Fraction(comb(2 * k + 1 + l, i), comb(2 * i, i)) for i in range(k + 1)))


def extract_Rbar(problem: Problem, pt: JetPoint, k: int, l: int):
    """``Rbar_{2k+1+l}``: ``T^{2k+1+l}`` with ``c_{k+1+l+n} .. c_{2k+1+l+n}`` zeroed."""
    n = problem.n
    lo, hi = k + 1 + l + n, 2 * k + 1 + l + n
    zeroed = pt.head(hi).zeroed(lo, hi)
    return compute_T(problem, zeroed, 2 * k + 1 + l)[2 * k + 1 + l]
