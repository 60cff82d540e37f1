"""Separant matrices ``S_k`` and the solver hypotheses (degeneracy + remainder)."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .expansion import JetPoint, compute_T, gamma_row, partial_blocks
from .expr import Problem
from .linalg import max_abs


@dataclass(frozen=True)
class SeparantMatrix:
    """Block upper-triangular ``S_k``; block ``(i, p)`` is ``T^{2i}_{y_{n-(p-i), i}}``."""

    k: int
    r: int
    d: int
    blocks: dict  # (i, p) -> r x d matrix, only for p >= i
    matrix: list  # full ((1+k) r) x ((1+k) d) matrix

    def block(self, i: int, p: int):
        return self.blocks.get((i, p))

    def last_column(self):
        """Blocks ``T^{2i}_{y_{n-k+i, i}}``, ``i = 0..k``, of the last block column."""
        return [self.blocks[(i, self.k)] for i in range(self.k + 1)]

    def leading(self, k: int):
        """Leading ``(k+1) r x (k+1) d`` submatrix."""
        return [row[: (k + 1) * self.d] for row in self.matrix[: (k + 1) * self.r]]


def assemble_S(problem: Problem, pt: JetPoint, k: int, _cache=None) -> SeparantMatrix:
    f = pt.field
    n, r, d = problem.n, problem.r, pt.d
    zero_block = [[f.zero()] * d for _ in range(r)]
    per_order = _cache if _cache is not None else {}
    blocks = {}
    for i in range(k + 1):
        if i not in per_order:
            per_order[i] = partial_blocks(problem, pt, i)
        for p in range(i, k + 1):
            slot = n - (p - i)
            blocks[(i, p)] = per_order[i][slot] if slot >= 0 else [row[:] for row in zero_block]
    size_r, size_d = (k + 1) * r, (k + 1) * d
    mat = [[f.zero()] * size_d for _ in range(size_r)]
    for (i, p), blk in blocks.items():
        for a in range(r):
            for b in range(d):
                mat[i * r + a][p * d + b] = blk[a][b]
    return SeparantMatrix(k, r, d, blocks, mat)


def gamma_times_S(S: SeparantMatrix, l: int):
    """``Gamma_k(l) . S_k`` as an ``r x (k+1) d`` matrix (acts on the high block)."""
    g = gamma_row(S.k, l).entries
    cols = (S.k + 1) * S.d
    out = []
    for a in range(S.r):
        row = []
        for c in range(cols):
            acc = 0
            for i, gi in enumerate(g):
                acc = acc + gi * S.matrix[i * S.r + a][c]
            row.append(acc)
        out.append(row)
    return out


def _first_nonzero(mat, field):
    scale = max_abs(mat)
    for a, row in enumerate(mat):
        for b, v in enumerate(row):
            if not field.is_zero(v, scale):
                return (a, b), v
    return None, None


@dataclass
class Verdict:
    name: str
    ok: bool
    witness: object = None
    magnitude: float = 0.0


@dataclass
class ConditionReport:
    m: int
    base_root: Verdict
    s_prev_zero: Verdict
    s_m_nonzero: Verdict
    remainders_zero: Verdict
    T_low: list = dc_field(default_factory=list)
    S_prev: SeparantMatrix | None = None
    S_m: SeparantMatrix | None = None

    @property
    def precondition_ok(self) -> bool:
        return self.base_root.ok

    @property
    def condition_i(self) -> bool:
        return self.s_prev_zero.ok and self.s_m_nonzero.ok

    @property
    def condition_ii(self) -> bool:
        return self.remainders_zero.ok

    @property
    def ok(self) -> bool:
        return self.precondition_ok and self.condition_i and self.condition_ii

    def first_failure(self) -> str | None:
        for v in (self.base_root, self.s_prev_zero, self.s_m_nonzero, self.remainders_zero):
            if not v.ok:
                return v.name
        return None

    def verdicts(self):
        return [self.base_root, self.s_prev_zero, self.s_m_nonzero, self.remainders_zero]


def check_conditions(problem: Problem, pt: JetPoint, m: int) -> ConditionReport:
    """Verify ``G[z_0] = 0``, ``S_{m-1} = 0``, ``S_m != 0`` and ``T^1 = .. = T^{2m} = 0``.

    Under ``S_{m-1} = 0`` every ``S_k`` with ``k < m`` vanishes, so ``T^j``
    equals ``Rbar_j`` for ``j <= 2m``; (ii) is checked on ``T^j`` with all
    coefficients past ``m + n`` zeroed.  ``m = 0`` reduces to the regular
    case: no remainder conditions, and ``S_0 != 0``.
    """
    f = pt.field
    n = problem.n
    base = pt.head(m + n)
    T = compute_T(problem, base, 2 * m)
    t0 = list(T[0])
    scale0 = max((abs(v) for v in t0), default=0.0)
    bad0 = [(idx, v) for idx, v in enumerate(t0) if not f.is_zero(v, scale0)]
    base_root = Verdict("G[z0] = 0", not bad0, bad0[0] if bad0 else None, max((abs(v) for _, v in bad0), default=0.0))

    cache = {}
    S_m = assemble_S(problem, base, m, cache)
    if m >= 1:
        S_prev = assemble_S(problem, base, m - 1, cache)
        pos, val = _first_nonzero(S_prev.matrix, f)
        s_prev = Verdict("S_{m-1} = 0", pos is None, pos, abs(val) if val is not None else 0.0)
    else:
        S_prev = None
        s_prev = Verdict("S_{m-1} = 0", True)
    pos, val = _first_nonzero(S_m.matrix, f)
    s_m = Verdict("S_m != 0", pos is not None, pos, abs(val) if val is not None else 0.0)

    bad = None
    scale = max((abs(v) for t in T.values for v in t), default=0.0)
    for j in range(1, 2 * m + 1):
        for idx, v in enumerate(T[j]):
            if not f.is_zero(v, scale):
                bad = (j, idx, v)
                break
        if bad:
            break
    rem = Verdict(
        "Rbar_1 = .. = Rbar_2m = 0",
        bad is None,
        bad[:2] if bad else None,
        abs(bad[2]) if bad else 0.0,
    )
    return ConditionReport(m, base_root, s_prev, s_m, rem, list(T.values), S_prev, S_m)
