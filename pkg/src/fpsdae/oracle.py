"""Brute-force undetermined coefficients, independent of the separant machinery.

The oracle works with plain Taylor coefficients ``a_q = c_q / q!``, builds
``y^(j)`` by differentiating the truncated series term by term, and imposes
the ``eps^i`` coefficient of ``G`` order by order.  Nothing here uses the
restricted expansion, the separant blocks, gamma rows or the indicial
polynomial; only jet arithmetic and the expression evaluator are shared.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import factorial

from . import linalg
from .errors import UsageError
from .expansion import JetPoint, partial_T
from .expr import Problem, evaluate
from .field import Field
from .jet import Jet, SensitivityJet


@dataclass
class OracleResult:
    coefficients: list  # c_0 .. c_N (c_q = q! a_q)
    free: list = dc_field(default_factory=list)  # (q, p) coordinates declared free
    feasible: bool = True
    witness_order: int | None = None
    orders_used: int = 0
    undetermined: list = dc_field(default_factory=list)  # coordinates <= N never fixed
    nonaffine: list = dc_field(default_factory=list)  # orders where one linear step did not suffice


def _falling(q: int, j: int) -> int:
    out = 1
    for t in range(j):
        out *= q - t
    return out


def _series_inputs(a, n, d, order, f, unknown=()):
    """Jets of ``y^(j)[p]`` from plain coefficients, with a channel per unknown coordinate."""
    ys = []
    for j in range(n + 1):
        comps = []
        for p in range(d):
            coeffs = [f.zero()] * (order + 1)
            for q in range(j, min(len(a) - 1, order + j) + 1):
                coeffs[q - j] = a[q][p] * _falling(q, j)
            base = Jet(coeffs)
            chans = {}
            for (q, pp) in unknown:
                if pp == p and q - j >= 0 and q - j <= order:
                    seed = [f.zero()] * (order + 1)
                    seed[q - j] = f.coerce(_falling(q, j))
                    chans[(q, pp)] = Jet(seed)
            comps.append(SensitivityJet(base, chans) if unknown else base)
        ys.append(comps)
    return ys


def _order_residual(problem: Problem, a, i, unknown):
    f = problem.field
    ys = _series_inputs(a, problem.n, problem.d, i, f, unknown)
    x = Jet.variable(f.zero(), i, f.one())
    if unknown:
        x = SensitivityJet(x)
    rho, sens = [], []
    for e in problem.exprs:
        v = evaluate(e, x, ys)
        if isinstance(v, SensitivityJet):
            rho.append(f.coerce(v.base[i]))
            sens.append([f.coerce(v.channel(u)[i]) if u in v.channels else f.zero() for u in unknown])
        elif isinstance(v, Jet):
            rho.append(f.coerce(v[i]))
            sens.append([f.zero()] * len(unknown))
        else:
            rho.append(f.coerce(v) if i == 0 else f.zero())
            sens.append([f.zero()] * len(unknown))
    return rho, sens


def brute_force_solve(problem: Problem, base, N: int, free: dict | None = None,
                      max_order: int | None = None, newton_steps: int = 20) -> OracleResult:
    """Fix coefficients order by order from ``T^i = 0``.

    At order ``i`` the residual is linearised in the still-unfixed
    coordinates; the solve pivots on the highest-index coordinates first.
    Unfixed coordinates below the highest pivot are declared free and keep
    their provisional value: ``free[(q, p)]`` (in ``c`` units) or zero.  An
    order with no sensitivity and a nonzero residual is infeasible.
    """
    f = problem.field
    n, d = problem.n, problem.d
    free = dict(free or {})
    base = [list(v) if isinstance(v, (list, tuple)) else [v] for v in base]
    K = len(base) - 1
    if N < K:
        raise UsageError("N must be at least the number of base coefficients minus one")
    if max_order is None:
        max_order = 2 * N + n + 2
    size = max_order + n + 1
    a = [[f.zero()] * d for _ in range(size + 1)]
    fixed = set()
    for q, vec in enumerate(base):
        if len(vec) != d:
            raise UsageError(f"base coefficient {q} needs {d} components")
        for p, v in enumerate(vec):
            a[q][p] = f.coerce(v) / factorial(q)
            fixed.add((q, p))

    def provisional(q, p):
        v = free.get((q, p))
        return f.zero() if v is None else f.coerce(v) / factorial(q)

    for q in range(K + 1, size + 1):
        for p in range(d):
            a[q][p] = provisional(q, p)

    result = OracleResult([])
    declared = []
    for i in range(0, max_order + 1):
        top = i + n
        unknown = [(q, p) for q in range(top, -1, -1) for p in range(d) if (q, p) not in fixed]
        rho, sens = _order_residual(problem, a, i, unknown)
        scale = max([1.0] + [abs(v) for row in sens for v in row] + [abs(v) for v in rho])
        active = [c for c in range(len(unknown)) if any(not f.is_zero(row[c], scale) for row in sens)]
        if not active:
            if any(not f.is_zero(v, scale) for v in rho):
                result.feasible = False
                result.witness_order = i
                result.orders_used = i
                break
        else:
            A = [[row[c] for c in active] for row in sens]
            _, pivots = linalg.rref(A, f)
            cols = [active[c] for c in pivots]
            sub = [[row[c] for c in cols] for row in sens]
            sol = linalg.solve(sub, [-v for v in rho], f)
            if not sol.feasible:
                result.feasible = False
                result.witness_order = i
                result.orders_used = i
                break
            coords = [unknown[c] for c in cols]
            for (q, p), dv in zip(coords, sol.particular):
                a[q][p] = a[q][p] + dv
            rho2, sens2 = _order_residual(problem, a, i, coords)
            steps = 0
            while any(not f.is_zero(v, scale) for v in rho2) and steps < newton_steps:
                steps += 1
                sol2 = linalg.solve(sens2, [-v for v in rho2], f)
                if not sol2.feasible:
                    break
                for (q, p), dv in zip(coords, sol2.particular):
                    a[q][p] = a[q][p] + dv
                rho2, sens2 = _order_residual(problem, a, i, coords)
            if steps:
                result.nonaffine.append(i)
            if any(not f.is_zero(v, scale) for v in rho2):
                result.feasible = False
                result.witness_order = i
                result.orders_used = i
                break
            fixed.update(coords)
            highest = max(q for q, _ in coords)
            for (q, p) in unknown:
                if q < highest and (q, p) not in fixed:
                    fixed.add((q, p))
                    declared.append((q, p))
        result.orders_used = i
        if all((q, p) in fixed for q in range(N + 1) for p in range(d)):
            break
    result.free = sorted(declared)
    result.undetermined = [(q, p) for q in range(N + 1) for p in range(d) if (q, p) not in fixed]
    result.coefficients = [[a[q][p] * factorial(q) for p in range(d)] for q in range(N + 1)]
    return result


def _restricted_T(problem: Problem, coeffs, order: int, bump=None):
    """``order! [eps^order] G`` with ``y^(j)[p] = sum c_{k+j}[p] eps^k / k!`` (+ optional bump)."""
    f = problem.field
    ys = []
    for j in range(problem.n + 1):
        comps = []
        for p in range(problem.d):
            vals = [coeffs[k + j][p] / factorial(k) if k + j < len(coeffs) else f.zero() for k in range(order + 1)]
            if bump is not None and bump[0] == j and bump[1] == p:
                vals[bump[2]] = vals[bump[2]] + bump[3]
            comps.append(Jet(vals))
        ys.append(comps)
    x = Jet.variable(f.zero(), order, f.one())
    out = []
    for e in problem.exprs:
        v = evaluate(e, x, ys)
        out.append((v[order] if isinstance(v, Jet) else (v if order == 0 else f.zero())) * factorial(order))
    return out


def fd_check_partials(problem: Problem, pt, i: int, j: int, step: float = 1e-6) -> float:
    """Worst relative deviation between central differences and ``partial_T``.

    The unrestricted coordinate ``y_{j,i}[p]`` is moved by ``+-h`` along its
    own direction ``eps^i / i!`` only; the difference quotient of ``T^{2i}``
    is compared against the analytic block.
    """
    f = problem.field
    if f.exact:
        raise UsageError("finite differences need a float field mode")
    if not isinstance(pt, JetPoint):
        pt = JetPoint.from_values(pt, problem.n, problem.d, f)
    order = 2 * i
    coeffs = [pt.c(q) for q in range(order + problem.n + 1)]
    exact = partial_T(problem, pt, i, j)
    worst = 0.0
    h = f.coerce(step)
    for p in range(problem.d):
        plus = _restricted_T(problem, coeffs, order, (j, p, i, h / factorial(i)))
        minus = _restricted_T(problem, coeffs, order, (j, p, i, -h / factorial(i)))
        for row in range(problem.r):
            fd = (plus[row] - minus[row]) / (2 * h)
            dev = abs(fd - exact[row][p]) / max(1.0, abs(exact[row][p]))
            worst = max(worst, float(dev))
    return worst


def fd_check_all(problem: Problem, pt, max_i: int, step: float = 1e-6) -> float:
    """Worst deviation over ``i = 0 .. max_i`` and ``j = 0 .. n``."""
    return max(fd_check_partials(problem, pt, i, j, step) for i in range(max_i + 1) for j in range(problem.n + 1))


def coefficient_diff(a, b, field: Field) -> float:
    """Largest ``|a_q - b_q|`` (entrywise) over the common prefix."""
    worst = 0.0
    for u, v in zip(a, b):
        for x, y in zip(u, v):
            worst = max(worst, float(abs(field.coerce(x) - field.coerce(y))))
    return worst

