"""Algebraic case ``n = 0``: the smooth continuation ``c_{m+1}(x)``.

Writing ``y = ybar(x) + c(x) x^{m+1}/(m+1)!`` with ``ybar`` the truncation
through ``c_m``, the equation divided by ``x^{2m+1}/(2m+1)!`` becomes a
regular equation ``phi(x, c) = 0``.  Its Jacobian at ``x = 0`` is
``gamma_m^{2m} T^{2m}_{y_{0,m}}``, which gives the closed form for
``c_{m+1}(0)`` and the seed for Newton.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import factorial

from . import linalg
from .errors import HypothesisError, UsageError
from .expansion import JetPoint, extract_Rbar, gamma_row, partial_T
from .expr import Problem, evaluate
from .field import Field
from .jet import Jet, SensitivityJet
from .separant import check_conditions


@dataclass
class NewtonOptions:
    tol: float = 1e-12
    max_iter: int = 50
    extra_order: int = 8  # K: the expansion runs to order 2m+1+K
    tail_tol: float = 1e-10


@dataclass
class Sample:
    x: float
    c: list
    phi_residual: float
    residual: float  # max |G[x, ybar(x) + c x^{m+1}/(m+1)!]|
    iterations: int
    converged: bool
    tail_flag: bool = False  # the truncated expansion may not resolve this x


@dataclass
class Diagnostic:
    m: int
    d: int
    det_order: int | None  # vanishing order of det G_y[x, ybar(x)]
    residual_order: int | None  # vanishing order of G[x, ybar(x)]; None when zero through the expansion
    expansion_order: int
    leading_det: object = None  # leading coefficient estimate of det A(x)

    @property
    def order_available(self) -> int:
        return 2 * self.m + 1

    @property
    def order_required(self) -> int:
        return 2 * self.m * self.d

    @property
    def classical_tougeron_applies(self) -> bool:
        return self.order_available >= self.order_required


@dataclass
class ContinuationResult:
    m: int
    limit: list
    samples: list = dc_field(default_factory=list)
    diagnostic: Diagnostic | None = None


def _require_algebraic(problem: Problem):
    if problem.n != 0:
        raise UsageError("the continuation applies to algebraic equations (n = 0)")
    if problem.r != problem.d:
        raise UsageError("the continuation needs r = d")


def _base(problem: Problem, pt, m: int) -> JetPoint:
    if not isinstance(pt, JetPoint):
        pt = JetPoint.from_values(pt, 0, problem.d, problem.field)
    if pt.top < m:
        raise UsageError(f"m = {m} needs c_0 .. c_{m}")
    return pt.head(m)


def c_limit(problem: Problem, pt, m: int):
    """Closed form ``c_{m+1}(0) = -(1/gamma_m^{2m}) [T^{2m}_{y_{0,m}}]^{-1} Rbar_{2m+1}``."""
    _require_algebraic(problem)
    f = problem.field
    base = _base(problem, pt, m)
    report = check_conditions(problem, base, m)
    if not report.ok:
        raise HypothesisError(f"hypothesis failed for m = {m}: {report.first_failure()}", report)
    block = partial_T(problem, base, m, 0)
    if f.is_zero(linalg.det(block, f), linalg.max_abs(block) ** problem.d):
        raise HypothesisError(f"T^{2 * m}_(y_0,{m}) is singular")
    gamma = f.coerce(gamma_row(m, 0).entries[m])
    rbar = list(extract_Rbar(problem, base, m, 0))
    sol = linalg.solve(block, [-v / gamma for v in rbar], f)
    return sol.particular


def _ybar_jets(base: JetPoint, order: int, f: Field):
    return [Jet([base.c(i)[p] / factorial(i) if i <= base.top else f.zero() for i in range(order + 1)])
            for p in range(base.d)]


def _phi(problem: Problem, base: JetPoint, m: int, c, x, K: int, with_jac: bool):
    """``phi(x, c)`` from the jet of ``G`` in ``eps`` at the point ``(x = eps, c)``.

    The ``x^{2m+1}`` factor is removed by shifting the jet, then the shifted
    polynomial is summed at the given ``x``.  Returns ``(phi, jacobian, tail)``.
    """
    f = problem.field
    order = 2 * m + 1 + K
    shift = m + 1
    scale = f.coerce(Fraction(1, factorial(m + 1)))
    ybar = _ybar_jets(base, order, f)
    ys = []
    for p in range(base.d):
        coeffs = list(ybar[p].coeffs)
        coeffs[shift] = coeffs[shift] + c[p] * scale
        jet = Jet(coeffs)
        if with_jac:
            seed = [f.zero()] * (order + 1)
            seed[shift] = scale
            jet = SensitivityJet(jet, {p: Jet(seed)})
        ys.append(jet)
    xj = Jet.variable(f.zero(), order, f.one())
    if with_jac:
        xj = SensitivityJet(xj)
    lead = 2 * m + 1
    fac = f.coerce(factorial(lead))
    phi, jac, tail = [], [], 0.0
    for e in problem.exprs:
        v = evaluate(e, xj, [ys])
        base_jet = v.base if isinstance(v, SensitivityJet) else (v if isinstance(v, Jet) else Jet.constant(v, order))
        phi.append(fac * sum((base_jet[k] * x ** (k - lead) for k in range(lead, order + 1)), f.zero()))
        tail = max(tail, abs(base_jet[order] * x ** (order - lead)) * float(fac))
        if with_jac:
            row = []
            for p in range(base.d):
                ch = v.channel(p) if isinstance(v, SensitivityJet) else Jet.constant(f.zero(), order)
                row.append(fac * sum((ch[k] * x ** (k - lead) for k in range(lead, order + 1)), f.zero()))
            jac.append(row)
    return phi, jac, tail


def _unscaled_residual(problem: Problem, base: JetPoint, m: int, c, x) -> float:
    ys = []
    for p in range(base.d):
        v = sum(base.c(i)[p] * x ** i / factorial(i) for i in range(m + 1))
        ys.append(v + c[p] * x ** (m + 1) / factorial(m + 1))
    return max(abs(evaluate(e, x, [ys])) for e in problem.exprs)


def continue_c(problem: Problem, pt, m: int, x_samples, opts: NewtonOptions | None = None) -> ContinuationResult:
    """Newton on ``c -> phi(x, c)`` at each sample, seeded with the closed-form limit."""
    _require_algebraic(problem)
    opts = opts or NewtonOptions()
    f = problem.field
    if f.exact:
        raise UsageError("Newton continuation needs a float field mode (f64 or c64)")
    base = _base(problem, pt, m)
    limit = c_limit(problem, base, m)
    result = ContinuationResult(m, list(limit))
    for x in x_samples:
        x = f.coerce(x)
        c = list(limit)
        phi, jac, tail = _phi(problem, base, m, c, x, opts.extra_order, True)
        nrm = max(abs(v) for v in phi)
        it, converged = 0, nrm <= opts.tol
        while not converged and it < opts.max_iter:
            it += 1
            sol = linalg.solve(jac, [-v for v in phi], f.with_tolerances(atol=1e-300, rtol=1e-15))
            if not sol.feasible:
                break
            lam = 1.0
            for _ in range(30):
                trial = [a + lam * s for a, s in zip(c, sol.particular)]
                tphi, tjac, ttail = _phi(problem, base, m, trial, x, opts.extra_order, True)
                if max(abs(v) for v in tphi) < nrm or lam < 1e-6:
                    break
                lam /= 2
            c, phi, jac, tail = trial, tphi, tjac, ttail
            nrm = max(abs(v) for v in phi)
            converged = nrm <= opts.tol
        result.samples.append(Sample(
            x, c, nrm, _unscaled_residual(problem, base, m, c, x), it, converged,
            tail_flag=tail > opts.tail_tol * max(1.0, nrm),
        ))
    result.diagnostic = tougeron_diagnostic(problem, base, m, opts.extra_order)
    return result


def continuation_series(problem: Problem, pt, m: int, order: int):
    """Taylor coefficients ``c_0 .. c_order`` of ``ybar(x) + c(x) x^{m+1}/(m+1)!``.

    ``c(eps)`` is found as a jet by the chord iteration
    ``c <- c - J0^{-1} phi(eps, c(eps))``, which gains one order per step.
    Works in every field mode.
    """
    _require_algebraic(problem)
    f = problem.field
    base = _base(problem, pt, m)
    K = max(order - m - 1, 0)
    c0 = c_limit(problem, base, m)
    J0 = partial_T(problem, base, m, 0)
    gamma = f.coerce(gamma_row(m, 0).entries[m])
    J0 = [[gamma * v for v in row] for row in J0]
    jorder = K + 1
    lead = 2 * m + 1
    full = lead + jorder
    cj = [Jet([c0[p]] + [f.zero()] * jorder) for p in range(base.d)]
    scale = f.coerce(Fraction(1, factorial(m + 1)))
    shift = m + 1
    for _ in range(jorder + 1):
        ybar = _ybar_jets(base, full, f)
        ys = []
        for p in range(base.d):
            coeffs = list(ybar[p].coeffs)
            for k in range(jorder + 1):
                if shift + k <= full:
                    coeffs[shift + k] = coeffs[shift + k] + cj[p][k] * scale
            ys.append(Jet(coeffs))
        xj = Jet.variable(f.zero(), full, f.one())
        phi = []
        for e in problem.exprs:
            v = evaluate(e, xj, [ys])
            v = v if isinstance(v, Jet) else Jet.constant(v, full)
            fac = f.coerce(factorial(lead))
            phi.append([fac * v[lead + k] for k in range(jorder + 1)])
        for k in range(jorder + 1):
            rhs = [-phi[row][k] for row in range(problem.r)]
            step = linalg.solve(J0, rhs, f).particular
            for p in range(base.d):
                coeffs = list(cj[p].coeffs)
                coeffs[k] = coeffs[k] + step[p]
                cj[p] = Jet(coeffs)
    out = []
    for q in range(order + 1):
        if q <= m:
            out.append(list(base.c(q)))
        else:
            k = q - shift
            out.append([cj[p][k] * scale * factorial(q) if k <= jorder else f.zero() for p in range(base.d)])
    return out


def _det_jet(mat, field: Field):
    size = len(mat)
    order = mat[0][0].order
    acc = Jet.constant(field.zero(), order)
    for perm in itertools.permutations(range(size)):
        sign = 1
        for i in range(size):
            for j in range(i + 1, size):
                if perm[i] > perm[j]:
                    sign = -sign
        term = Jet.constant(field.one(), order)
        for i, j in enumerate(perm):
            term = term * mat[i][j]
        acc = acc + term if sign > 0 else acc - term
    return acc


def _vanishing_order(jet: Jet, field: Field, scale: float = 1.0):
    for k, v in enumerate(jet.coeffs):
        if not field.is_zero(v, scale):
            return k, v
    return None, None


def tougeron_diagnostic(problem: Problem, pt, m: int, extra_order: int = 8) -> Diagnostic:
    """Vanishing orders of ``det G_y[x, ybar(x)]`` and ``G[x, ybar(x)]`` from jets."""
    _require_algebraic(problem)
    f = problem.field
    base = _base(problem, pt, m)
    order = 2 * m * problem.d + extra_order
    ybar = _ybar_jets(base, order, f)
    one = Jet.constant(f.one(), order)
    ys = [SensitivityJet(ybar[p], {p: one}) for p in range(base.d)]
    xj = SensitivityJet(Jet.variable(f.zero(), order, f.one()))
    G_y = [[Jet.constant(f.zero(), order) for _ in range(base.d)] for _ in range(problem.r)]
    res_order = None
    for row, e in enumerate(problem.exprs):
        v = evaluate(e, xj, [ys])
        if not isinstance(v, SensitivityJet):
            v = SensitivityJet(Jet.constant(f.coerce(v), order))
        for p in range(base.d):
            if p in v.channels:
                G_y[row][p] = v.channel(p)
        k, _ = _vanishing_order(v.base, f, max(1.0, max(abs(c) for c in v.base.coeffs)))
        if k is not None and (res_order is None or k < res_order):
            res_order = k
    det = _det_jet(G_y, f)
    det_order, lead = _vanishing_order(det, f, max(1.0, max(abs(c) for c in det.coeffs)))
    return Diagnostic(m, problem.d, det_order, res_order, order, lead)
