"""Gaussian elimination over a :class:`~fpsdae.field.Field`.

Exact in rational mode; partial pivoting with the field's zero test in the
float modes.  Matrices are lists of rows.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import Field


def zeros(rows: int, cols: int, field: Field):
    z = field.zero()
    return [[z] * cols for _ in range(rows)]


def shape(a):
    return len(a), (len(a[0]) if a else 0)


def max_abs(a) -> float:
    return max((abs(v) for row in a for v in row), default=0.0)


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), start=v[0] * 0 if v else 0) for row in a]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), start=row[0] * 0) for col in bt] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def rref(a, field: Field):
    """Reduced row echelon form. Returns ``(R, pivot_columns)``."""
    m = [list(row) for row in a]
    rows, cols = shape(m)
    scale = max_abs(m)
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        if field.exact:
            piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        else:
            piv = max(range(r, rows), key=lambda i: abs(m[i][c]))
            if field.is_zero(m[piv][c], scale):
                piv = None
        if piv is None:
            for i in range(r, rows):
                m[i][c] = field.zero()
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [v / p for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, field: Field) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a, field)[1])


def nullspace(a, field: Field):
    """Basis of ``{v : a v = 0}``, one vector per free column (free entry = 1)."""
    rows, cols = shape(a)
    if cols == 0:
        return []
    r, pivots = rref(a, field) if rows else ([], [])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [field.zero()] * cols
        v[fcol] = field.one()
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][fcol]
        basis.append(v)
    return basis


def left_nullspace(a, field: Field):
    return nullspace(transpose(a), field) if a else []


@dataclass
class LinearSolution:
    feasible: bool
    particular: list | None
    residual: float
    free_columns: list


def solve(a, b, field: Field, free_values=None) -> LinearSolution:
    """Solve ``a x = b``; free columns take ``free_values`` (default 0).

    Infeasibility is reported through ``feasible=False`` together with the
    residual of the inconsistent rows.
    """
    rows, cols = shape(a)
    aug = [list(row) + [bv] for row, bv in zip(a, b)]
    scale = max(max_abs(a), max((abs(v) for v in b), default=0.0))
    r, pivots = rref(aug, field) if rows else ([], [])
    if cols in pivots:
        # pivot in the right-hand side column means an inconsistent row
        pivots = [p for p in pivots if p != cols]
    bad = 0.0
    for i in range(len(pivots), rows):
        if not field.is_zero(r[i][cols], scale):
            bad = max(bad, abs(r[i][cols]))
    free = [c for c in range(cols) if c not in pivots]
    fv = dict(zip(free, free_values or []))
    x = [field.zero()] * cols
    for c in free:
        x[c] = field.coerce(fv.get(c, 0))
    for i, pc in enumerate(pivots):
        s = r[i][cols]
        for c in free:
            s = s - r[i][c] * x[c]
        x[pc] = s
    if bad:
        # recompute a true residual for the report
        res = [bv - av for av, bv in zip(matvec(a, x), b)]
        return LinearSolution(False, None, max(abs(v) for v in res), free)
    if not field.exact:
        res = [bv - av for av, bv in zip(matvec(a, x), b)]
        resid = max((abs(v) for v in res), default=0.0)
        if resid > field.atol + field.rtol * max(scale, 1.0) * 1e3:
            return LinearSolution(False, None, resid, free)
        return LinearSolution(True, x, resid, free)
    return LinearSolution(True, x, 0.0, free)


def det(a, field: Field):
    """Determinant by Gaussian elimination (exact in rational mode)."""
    m = [list(row) for row in a]
    size = len(m)
    if size == 0:
        return field.one()
    result = field.one()
    for c in range(size):
        if field.exact:
            piv = next((i for i in range(c, size) if m[i][c] != 0), None)
        else:
            piv = max(range(c, size), key=lambda i: abs(m[i][c]))
            if m[piv][c] == 0:
                piv = None
        if piv is None:
            return field.zero()
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        p = m[c][c]
        result = result * p
        for i in range(c + 1, size):
            f = m[i][c] / p
            if f != 0:
                m[i] = [vi - f * vc for vi, vc in zip(m[i], m[c])]
    return result
