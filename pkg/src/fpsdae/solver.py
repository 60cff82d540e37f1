"""Coefficient recursion for degenerate and regular starting jets.

Given ``c_0 .. c_{m+n}`` satisfying the separant hypotheses for ``m``, every
later coefficient ``c_{m+1+l+n}`` solves ``H(l) c = -Rbar_{2m+1+l}``.  At an
integer root of the indicial polynomial the range condition is checked and
the nullspace of ``H(l)`` becomes a free slot of the solution family.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import factorial

from . import linalg, poly
from .errors import (
    HypothesisError,
    InfeasibleRootError,
    OverdeterminedError,
    UsageError,
    ValidationError,
)
from .expansion import JetPoint, compute_T, extract_Rbar, partial_blocks
from .expr import Problem, evaluate, parse
from .field import Field
from .indicial import IndicialData, indicial_data, integer_roots, root_subspaces, scalar_g
from .jet import Jet
from .separant import ConditionReport, assemble_S, check_conditions


@dataclass
class SolveOptions:
    m: int = 1
    order: int = 10
    free: dict = dc_field(default_factory=dict)  # slot index -> coordinates along the nullspace basis
    path: str = "auto"  # "auto", "scalar" or "system"
    search_range: float = 10.0
    search_points: int = 41
    seed: int = 0


@dataclass
class FreeSlot:
    index: int
    root: int
    particular: list
    basis: list
    values: list
    source: str  # "user", "default" or "feasibility"


@dataclass
class RootRecord:
    root: int
    index: int
    feasible: bool
    residual: float
    rbar: list
    rank: int
    nullity: int


@dataclass
class Certificate:
    ok: bool
    orders_checked: int
    first_failure: tuple | None = None  # (order, component)
    max_residual: float = 0.0
    samples: list = dc_field(default_factory=list)


@dataclass
class SolutionFamily:
    problem: Problem
    m: int
    order: int
    coefficients: list
    report: ConditionReport
    indicial: IndicialData
    path: str
    free_slots: list = dc_field(default_factory=list)
    records: list = dc_field(default_factory=list)
    pinned: int = 0
    searches: list = dc_field(default_factory=list)
    step_freedom: list = dc_field(default_factory=list)  # (l, dims) for r < d
    extension: bool = False
    certificate: Certificate | None = None

    @property
    def n(self) -> int:
        return self.problem.n

    @property
    def d(self) -> int:
        return self.problem.d

    @property
    def field(self) -> Field:
        return self.problem.field

    @property
    def mid_band(self) -> range:
        """Indices ``m+n+1 .. 2m+n``: unconstrained by ``T^1 .. T^{2m}``."""
        return range(self.m + self.n + 1, 2 * self.m + self.n + 1)

    @property
    def q(self) -> int:
        return sum(len(s.basis) for s in self.free_slots) - self.pinned

    @property
    def p(self) -> int:
        return len(self.indicial.roots)

    def dimension_bound_ok(self) -> bool:
        if not self.free_slots:
            return True
        if self.d == 1 and self.problem.r == 1:
            return 1 <= self.q <= self.p or (self.q == 0 and self.pinned > 0)
        return self.q <= self.m * self.d ** 2

    def point(self) -> JetPoint:
        return JetPoint(self.n, self.d, tuple(tuple(c) for c in self.coefficients), self.field)


def _check_path(problem: Problem, path: str) -> str:
    if path == "auto":
        return "scalar" if problem.r == 1 and problem.d == 1 else "system"
    if path == "scalar" and (problem.r != 1 or problem.d != 1):
        raise UsageError("the scalar path needs r = d = 1")
    if path not in ("scalar", "system"):
        raise UsageError(f"unknown path {path!r}")
    return path


def complete_base(problem: Problem, values, field: Field):
    """Append ``c_n`` solving ``G[z_0] = 0`` when only ``c_0 .. c_{n-1}`` are given.

    One Newton step on the separant, repeated in float modes; rational mode
    requires G to be affine in ``y^(n)`` (checked by the residual).
    """
    n, d = problem.n, problem.d
    pt = JetPoint.from_values(list(values) + [[0] * d], n, d, field)
    for _ in range(1 if field.exact else 30):
        t0 = compute_T(problem, pt, 0)[0]
        if all(field.is_zero(v, 1.0) for v in t0):
            return pt
        J = partial_blocks(problem, pt, 0)[n]
        sol = linalg.solve(J, [-v for v in t0], field)
        if not sol.feasible or problem.r != d or linalg.rank(J, field) < d:
            raise HypothesisError("cannot complete c_n: the separant dG/dy^(n) is singular at z0")
        cn = [a + b for a, b in zip(pt.c(n), sol.particular)]
        pt = pt.with_coeff(n, cn)
    t0 = compute_T(problem, pt, 0)[0]
    if not all(field.is_zero(v, 1.0) for v in t0):
        raise HypothesisError("could not complete c_n so that G[z0] = 0")
    return pt


def base_point(problem: Problem, initial, m: int) -> JetPoint:
    f = problem.field
    need = m + problem.n + 1
    if isinstance(initial, JetPoint):
        values = list(initial.coeffs)
    else:
        values = list(initial)
    if m == 0 and len(values) == problem.n:
        return complete_base(problem, values, f)
    if len(values) < need:
        raise UsageError(f"m = {m} needs c_0 .. c_{need - 1} ({need} coefficients), got {len(values)}")
    return JetPoint.from_values(values[:need], problem.n, problem.d, f)


class _Recursion:
    """The ``l = 0, 1, 2, ..`` recursion for one fixed base point."""

    def __init__(self, problem, base, m, order, path, ind, g_scalar):
        self.problem = problem
        self.base = base
        self.m = m
        self.order = order
        self.path = path
        self.ind = ind
        self.g = g_scalar
        self.roots = set(ind.roots)
        self.f = problem.field
        self._root_cache = {}

    def float_copy(self, fl: Field) -> "_Recursion":
        prob = self.problem.with_field(fl)
        base = JetPoint(self.base.n, self.base.d, tuple(tuple(float(v) for v in c) for c in self.base.coeffs), fl)
        H = [[tuple(float(v) for v in e) for e in row] for row in self.ind.H]
        ind = IndicialData(self.ind.m, self.ind.n, self.ind.d, self.ind.r, H, roots=list(self.ind.roots))
        g = tuple(float(v) for v in self.g) if self.g is not None else None
        return _Recursion(prob, base, self.m, self.order, self.path, ind, g)

    def rbar(self, pt, l):
        return list(extract_Rbar(self.problem, pt, self.m, l))

    def root_space(self, l):
        if l not in self._root_cache:
            self._root_cache[l] = root_subspaces(self.ind.H, l, self.f)
        return self._root_cache[l]

    def run(self, values: dict, stop_at: int | None = None):
        """Returns ``(point, slots, records, step_freedom)``.

        ``values`` maps slot index to coordinates along the nullspace basis.
        With ``stop_at`` (a root ``l``), returns early with the Rbar vector at
        that root instead of continuing.
        """
        f, n, m = self.f, self.problem.n, self.m
        pt = self.base
        slots, records, freedom = [], [], []
        last_l = self.order - m - 1 - n
        for l in range(0, last_l + 1):
            idx = m + 1 + l + n
            rb = self.rbar(pt, l)
            if l in self.roots:
                if stop_at == l:
                    return pt, slots, records, rb
                space = self.root_space(l)
                if self.path == "scalar":
                    feasible = f.is_zero(rb[0], _plain_scale(pt.coeffs, f))
                    part = [f.zero()] if feasible else None
                    resid = abs(rb[0])
                else:
                    feasible, part, resid = space.membership([-v for v in rb])
                rec = RootRecord(l, idx, feasible, float(abs(resid)), rb, space.rank, len(space.nullspace))
                records.append(rec)
                if not feasible:
                    raise InfeasibleRootError(
                        f"no continuation through root l = {l}: Rbar_{2 * m + 1 + l} is not in the range of H({l})",
                        root=l, witness=rb, record=rec,
                    )
                coords = values.get(idx)
                basis = space.nullspace
                if coords is None:
                    coords, source = [f.zero()] * len(basis), "default"
                else:
                    coords = [f.coerce(v) for v in coords]
                    if len(coords) != len(basis):
                        raise UsageError(f"slot c_{idx} has {len(basis)} free coordinates, got {len(coords)}")
                    source = "user"
                vec = list(part)
                for t, b in zip(coords, basis):
                    vec = [a + t * bb for a, bb in zip(vec, b)]
                slots.append(FreeSlot(idx, l, list(part), basis, coords, source))
            elif self.path == "scalar":
                gl = poly.evaluate(self.g, f.coerce(l))
                vec = [-rb[0] / gl]
            else:
                Hl = [[f.coerce(v) for v in row] for row in self.ind.H_at(f.coerce(l))]
                sol = linalg.solve(Hl, [-v for v in rb], f)
                if not sol.feasible:
                    raise InfeasibleRootError(f"H({l}) solve failed unexpectedly", root=l, witness=rb)
                if sol.free_columns:
                    freedom.append((l, len(sol.free_columns)))
                vec = sol.particular
            pt = pt.with_coeff(idx, vec)
        if stop_at is not None:
            raise UsageError(f"root {stop_at} is outside the recursion range")
        return pt, slots, records, freedom


def _affine_probe(w, k, f):
    """Probe ``w`` at 0, e_i, 2 e_i and sum e_i; returns ``(w0, columns)`` if affine."""
    zero = [f.zero()] * k
    w0 = w(zero)
    cols = []
    for i in range(k):
        e1 = list(zero)
        e1[i] = f.one()
        e2 = list(zero)
        e2[i] = f.coerce(2)
        w1, w2 = w(e1), w(e2)
        scale = max([abs(v) for v in w0 + w1 + w2] + [1.0])
        if any(not f.is_zero(a - 2 * b + c, scale) for a, b, c in zip(w0, w1, w2)):
            return w0, None
        cols.append([b - a for a, b in zip(w0, w1)])
    if k > 1:
        wsum = w([f.one()] * k)
        pred = [w0[r] + sum(c[r] for c in cols) for r in range(len(w0))]
        scale = max([abs(v) for v in wsum + pred] + [1.0])
        if any(not f.is_zero(a - b, scale) for a, b in zip(wsum, pred)):
            return w0, None
    return w0, cols


def _newton_search(w, k, opts: SolveOptions, tol=1e-11):
    """Sampling + damped Gauss-Newton on ``w(theta) = 0`` in float arithmetic."""
    found = []
    grid = [opts.search_range * (2 * i / (opts.search_points - 1) - 1) for i in range(opts.search_points)]
    if k == 1:
        starts = [[g] for g in grid]
    else:
        rng = random.Random(opts.seed)
        starts = [[rng.uniform(-opts.search_range, opts.search_range) for _ in range(k)]
                  for _ in range(opts.search_points * k)]
    fl = Field("f64")
    for start in starts:
        th = list(start)
        ok = False
        for _ in range(60):
            val = [complex(v).real if not isinstance(v, complex) else v.real for v in w(th)]
            nrm = max(abs(v) for v in val)
            if nrm <= tol:
                ok = True
                break
            h = 1e-7
            J = []
            for i in range(k):
                tp = list(th)
                tp[i] += h
                vp = [float(v.real if isinstance(v, complex) else v) for v in w(tp)]
                J.append([(a - b) / h for a, b in zip(vp, val)])
            J = linalg.transpose(J)
            JtJ = linalg.matmul(linalg.transpose(J), J)
            Jtr = linalg.matvec(linalg.transpose(J), [-v for v in val])
            sol = linalg.solve(JtJ, Jtr, fl.with_tolerances(atol=1e-300, rtol=1e-14))
            if not sol.feasible:
                break
            step = sol.particular
            lam = 1.0
            for _ in range(30):
                trial = [a + lam * s for a, s in zip(th, step)]
                tv = [float(v.real if isinstance(v, complex) else v) for v in w(trial)]
                if max(abs(v) for v in tv) < nrm:
                    break
                lam /= 2
            th = trial
        if ok and all(max(abs(a - b) for a, b in zip(th, prev)) > 1e-6 for prev in found):
            found.append(th)
    return sorted(found)


def solve(problem: Problem, initial, opts: SolveOptions | None = None) -> SolutionFamily:
    """Continue ``c_0 .. c_{m+n}`` to ``c_0 .. c_N`` (``N = opts.order``).

    Raises :class:`HypothesisError` when the separant conditions fail,
    :class:`DegenerateIndicialError` if ``g`` vanishes identically,
    :class:`OverdeterminedError` for ``r > d`` and
    :class:`InfeasibleRootError` when no continuation through a root exists.
    """
    opts = opts or SolveOptions()
    f = problem.field
    m, n = opts.m, problem.n
    if m < 0:
        raise UsageError("m must be >= 0")
    if opts.order < m + n + 1:
        raise UsageError(f"order N = {opts.order} must be at least m + n + 1 = {m + n + 1}")
    if problem.r > problem.d:
        raise OverdeterminedError(f"r = {problem.r} > d = {problem.d}: overdetermined systems are not covered")
    path = _check_path(problem, opts.path)
    base = base_point(problem, initial, m)
    report = check_conditions(problem, base, m)
    if not report.ok:
        raise HypothesisError(f"hypothesis failed for m = {m}: {report.first_failure()}", report)

    if m == 0:
        J = assemble_S(problem, base, 0).matrix
        if problem.r == problem.d and f.is_zero(linalg.det(J, f), linalg.max_abs(J) ** problem.d):
            raise HypothesisError("leading separant dG/dy^(n) is singular at z0; try the m >= 1 analysis", report)
    ind = indicial_data(problem, base, m, report)
    g_scalar = None
    if path == "scalar":
        g_scalar = scalar_g(problem, base, m)
        ind.roots, ind.root_bound, ind.borderline = integer_roots(g_scalar, f)

    rec = _Recursion(problem, base, m, opts.order, path, ind, g_scalar)
    values = {int(k): [f.coerce(v) for v in vals] for k, vals in opts.free.items()}
    user = {(idx, i) for idx, vals in values.items() for i in range(len(vals))}
    coupling = _Coupling(rec, values, user, opts)
    last_l = opts.order - m - 1 - n
    for root in sorted(l for l in ind.roots if l <= last_l):
        coupling.couple(root)
    pt, slots, records, freedom = rec.run(values)
    fixed = coupling.fixed_slots()
    for s in slots:
        if s.index in opts.free:
            s.source = "user"
        elif s.index in fixed:
            s.source = "feasibility"
        else:
            s.source = "default"
    fam = SolutionFamily(
        problem, m, opts.order, [list(pt.c(q)) for q in range(opts.order + 1)], report, ind, path,
        slots, records, coupling.pinned, coupling.searches, freedom, extension=(m == 0),
    )
    fam.certificate = verify_family(problem, fam)
    return fam


class _Coupling:
    """Constraints that later roots impose on earlier free slots.

    At every root with earlier free coordinates ``theta`` the range defect
    ``w(theta)`` (``Rbar`` projected on the cokernel of ``H(l)``) is probed.
    Affine defects are stacked into one linear system, whose rank is the
    number of pinned directions; nonaffine ones go to a sampled Newton
    search and pin every searched coordinate.
    """

    def __init__(self, rec: _Recursion, values: dict, user: set, opts: SolveOptions):
        self.rec = rec
        self.f = rec.f
        self.values = values
        self.user = user
        self.opts = opts
        self.rows = []  # (coefficients by coordinate, rhs)
        self.nonlinear = set()
        self.nonlinear_pinned = 0
        self.searches = []
        self._dims = {}

    @property
    def pinned(self) -> int:
        if not self.rows:
            return self.nonlinear_pinned
        coords = sorted({c for row, _ in self.rows for c in row})
        A = [[row.get(c, self.f.zero()) for c in coords] for row, _ in self.rows]
        return linalg.rank(A, self.f) + self.nonlinear_pinned

    def fixed_slots(self) -> set:
        out = {idx for idx, _ in self.nonlinear}
        for row, _ in self.rows:
            out |= {idx for (idx, _), v in row.items() if not self.f.is_zero(v, 1.0)}
        return out

    def _w(self, rec, coords, root, field):
        space = rec.root_space(root)
        cok = [[field.coerce(v) for v in c] for c in space.cokernel]

        def w(theta):
            vals = {idx: list(v) for idx, v in self.values.items()}
            for (idx, i), t in zip(coords, theta):
                vals.setdefault(idx, [field.zero()] * self._dims[idx])[i] = field.coerce(t)
            _, _, _, rb = rec.run(vals, stop_at=root)
            if rec.path == "scalar":
                return list(rb)
            return [sum((a * b for a, b in zip(c, rb)), field.zero()) for c in cok]
        return w

    def couple(self, root):
        f, rec = self.f, self.rec
        _, slots, _, _ = rec.run(self.values, stop_at=root)
        for s in slots:
            self._dims[s.index] = len(s.basis)
        coords = [(s.index, i) for s in slots for i in range(len(s.basis)) if (s.index, i) not in self.nonlinear]
        if not coords:
            return
        w = self._w(rec, coords, root, f)
        w0, cols = _affine_probe(w, len(coords), f)
        if cols is not None:
            scale = max([1.0] + [abs(v) for c in cols for v in c])
            for r_ in range(len(w0)):
                row = {c: col[r_] for c, col in zip(coords, cols) if not f.is_zero(col[r_], scale)}
                if row:
                    self.rows.append((row, -w0[r_]))
            if any(cols_nonzero for cols_nonzero in (any(not f.is_zero(v, scale) for v in c) for c in cols)):
                self._solve_rows(root)
                self.searches.append({"root": root, "kind": "affine", "coordinates": coords})
            return
        free = [c for c in coords if c not in self.user]
        found = self._nonlinear(w, coords, free, root)
        self.searches.append({"root": root, "kind": "nonlinear", "coordinates": free,
                              "solutions": [[str(v) for v in th] for th in found]})
        if not found:
            raise InfeasibleRootError(
                f"no continuation through root l = {root} for any tried value of earlier free slots",
                root=root, witness=w0,
            )
        for (idx, i), v in zip(free, found[0]):
            self.values.setdefault(idx, [f.zero()] * self._dims[idx])[i] = v
        self.nonlinear |= set(free)
        self.nonlinear_pinned += len(free)

    def _solve_rows(self, root):
        f = self.f
        coords = sorted({c for row, _ in self.rows for c in row})
        free = [c for c in coords if c not in self.user]
        A = [[row.get(c, f.zero()) for c in free] for row, _ in self.rows]
        b = []
        for row, rhs in self.rows:
            acc = rhs
            for c, v in row.items():
                if c in self.user:
                    acc = acc - v * self.values[c[0]][c[1]]
            b.append(acc)
        sol = linalg.solve(A, b, f) if free else linalg.LinearSolution(
            all(f.is_zero(v, 1.0) for v in b), [], max((abs(v) for v in b), default=0.0), [])
        if not sol.feasible:
            raise InfeasibleRootError(
                f"root l = {root}: the earlier free slots cannot satisfy its range condition"
                + (" with the supplied free values" if self.user else ""),
                root=root, witness=b,
            )
        for (idx, i), v in zip(free, sol.particular):
            self.values.setdefault(idx, [f.zero()] * self._dims[idx])[i] = v

    def _nonlinear(self, w, coords, free, root):
        """Sampled Newton search (in float arithmetic), rationalized in exact mode."""
        f, rec = self.f, self.rec
        user_vals = {c: self.values[c[0]][c[1]] for c in coords if c in self.user}

        def full(theta, field):
            it = iter(theta)
            return [user_vals[c] if c in user_vals else next(it) for c in coords]

        if f.exact:
            fl = Field("f64", f.atol, f.rtol)
            frec = rec.float_copy(fl)
            fw_all = self._w(frec, coords, root, fl)
        else:
            fw_all = w
        found = _newton_search(lambda th: fw_all(full(th, f)), len(free), self.opts)
        out = []
        for th in found:
            if f.exact:
                cand = [Fraction(t).limit_denominator(10 ** 6) for t in th]
                if all(v == 0 for v in w(full(cand, f))):
                    out.append(cand)
            else:
                out.append([f.coerce(t) for t in th])
        return out


def solve_regular(problem: Problem, initial, order: int = 10, path: str = "auto") -> SolutionFamily:
    """Nondegenerate continuation (``m = 0``): ``H(l)`` is the constant separant."""
    return solve(problem, initial, SolveOptions(m=0, order=order, path=path))


def _plain_scale(coeffs, field) -> float:
    best = 1.0
    for q, c in enumerate(coeffs):
        for v in c:
            best = max(best, float(abs(v)) / factorial(q))
    return best


def check_coefficients(problem: Problem, coeffs, n_check: int | None = None) -> Certificate:
    """Residual certificate: ``T^i = 0`` for ``i <= n_check`` (default ``N - n``)."""
    f = problem.field
    N = len(coeffs) - 1
    if n_check is None:
        n_check = N - problem.n
    pt = JetPoint.from_values([list(c) for c in coeffs], problem.n, problem.d, f)
    T = compute_T(problem, pt, n_check)
    scale = _plain_scale(coeffs, f)
    worst, first = 0.0, None
    for i in range(n_check + 1):
        for comp, v in enumerate(T[i]):
            plain = abs(v) / factorial(i)
            worst = max(worst, float(plain))
            if first is None and not f.is_zero(v / factorial(i), scale):
                first = (i, comp)
    return Certificate(first is None, n_check, first, worst)


def verify_family(problem: Problem, fam: SolutionFamily, n_check: int | None = None,
                  samples: int = 0, seed: int = 0, value_range: int = 5) -> Certificate:
    """Certificate for the stored coefficients plus ``samples`` random re-instantiations.

    Only slots whose value was not fixed by a feasibility search are
    randomised (over small integers ``-value_range .. value_range``).
    """
    cert = check_coefficients(problem, fam.coefficients, n_check)
    if samples and fam.free_slots:
        rng = random.Random(seed)
        for _ in range(samples):
            free = {s.index: [rng.randint(-value_range, value_range) for _ in s.basis]
                    for s in fam.free_slots if s.source != "feasibility"}
            for s in fam.free_slots:
                if s.source == "feasibility":
                    free[s.index] = list(s.values)
            opts = SolveOptions(m=fam.m, order=fam.order, free=free, path=fam.path)
            other = solve(problem, [fam.coefficients[q] for q in range(fam.m + fam.n + 1)], opts)
            sub = check_coefficients(problem, other.coefficients, n_check)
            cert.samples.append({"free": {k: [str(v) for v in vals] for k, vals in free.items()},
                                 "ok": sub.ok, "first_failure": sub.first_failure})
            cert.ok = cert.ok and sub.ok
    return cert


@dataclass
class PerturbationReport:
    order_ok: bool
    order_witness: object
    separants_equal: bool
    remainders_equal: bool
    g_equal: bool
    first_divergence: int | None = None
    base_error: str | None = None
    perturbed_error: str | None = None
    base_coefficients: list = dc_field(default_factory=list)
    perturbed_coefficients: list = dc_field(default_factory=list)

    @property
    def invariants_equal(self) -> bool:
        return self.separants_equal and self.remainders_equal and self.g_equal


def perturbation_order_ok(problem: Problem, perturbation, base: JetPoint, min_order: int,
                          directions: int = 4, seed: int = 0):
    """Check that each perturbation component is ``O(|(x, y, .., y^(n)) - z_0|^min_order)``.

    Every homogeneous Taylor component of degree ``< min_order`` at ``z_0`` is
    tested along several random integer directions.
    """
    f = problem.field
    rng = random.Random(seed)
    z0 = [base.c(j) for j in range(problem.n + 1)]
    for _ in range(directions):
        order = min_order - 1
        x = Jet([f.zero(), f.coerce(rng.randint(-7, 7))] + [f.zero()] * (order - 1)) if order >= 1 else Jet([f.zero()])
        ys = []
        for j in range(problem.n + 1):
            comps = []
            for p in range(problem.d):
                if order >= 1:
                    comps.append(Jet([z0[j][p], f.coerce(rng.randint(-7, 7))] + [f.zero()] * (order - 1)))
                else:
                    comps.append(Jet([z0[j][p]]))
            ys.append(comps)
        for comp, e in enumerate(perturbation):
            v = evaluate(e, x, ys)
            coeffs = v.coeffs if isinstance(v, Jet) else [v]
            for i, c in enumerate(coeffs):
                if not f.is_zero(f.coerce(c), 1.0):
                    return False, (comp, i)
    return True, None


def perturbation_check(problem: Problem, initial, m: int, perturbation, order: int = 10) -> PerturbationReport:
    """Compare separants, low remainders and ``g`` for ``G`` and ``G + H``."""
    if isinstance(perturbation, str):
        perturbation = [perturbation]
    pexprs = [parse(p, problem.n, problem.d) if isinstance(p, str) else p for p in perturbation]
    base = base_point(problem, initial, m)
    ok, witness = perturbation_order_ok(problem, pexprs, base, 2 * m + 1)
    if not ok:
        raise ValidationError(f"perturbation is not of vanishing order >= {2 * m + 1} at z0 (component, order) = {witness}")
    other = problem.plus(pexprs)
    cache_a, cache_b = {}, {}
    sep_eq = all(
        assemble_S(problem, base, k, cache_a).matrix == assemble_S(other, base, k, cache_b).matrix
        if problem.field.exact else
        _close(assemble_S(problem, base, k, cache_a).matrix, assemble_S(other, base, k, cache_b).matrix, problem.field)
        for k in range(m + 1)
    )
    rem_eq = True
    for j in range(1, 2 * m + 1):
        k, l = divmod(j - 1, 2)
        a = extract_Rbar(problem, base, k, l)
        b = extract_Rbar(other, base, k, l)
        if not _close([list(a)], [list(b)], problem.field):
            rem_eq = False
    g_eq = True
    try:
        ga = indicial_data(problem, base, m)
        gb = indicial_data(other, base, m)
        if problem.r == problem.d:
            g_eq = _close([list(poly.trim(ga.g, problem.field))], [list(poly.trim(gb.g, problem.field))], problem.field)
        else:
            g_eq = all(_close([list(a)], [list(b)], problem.field) for a, b in zip(ga.minors, gb.minors))
    except HypothesisError:
        pass
    rep = PerturbationReport(True, None, sep_eq, rem_eq, g_eq)
    opts = SolveOptions(m=m, order=order)
    try:
        rep.base_coefficients = solve(problem, base, opts).coefficients
    except (HypothesisError, InfeasibleRootError) as exc:
        rep.base_error = str(exc)
    try:
        rep.perturbed_coefficients = solve(other, base, opts).coefficients
    except (HypothesisError, InfeasibleRootError) as exc:
        rep.perturbed_error = str(exc)
    if rep.base_coefficients and rep.perturbed_coefficients:
        for q, (a, b) in enumerate(zip(rep.base_coefficients, rep.perturbed_coefficients)):
            if not _close([a], [b], problem.field):
                rep.first_divergence = q
                break
    return rep


def _close(a, b, field: Field) -> bool:
    if len(a) != len(b):
        return False
    scale = max(linalg.max_abs(a) if a else 0.0, linalg.max_abs(b) if b else 0.0, 1.0)
    for ra, rb in zip(a, b):
        if len(ra) != len(rb):
            return False
        for x, y in zip(ra, rb):
            if not field.is_zero(x - y, scale):
                return False
    return True


def scan_m(problem: Problem, initial, m_max: int):
    """For ``m = 1 .. m_max``: the first failing hypothesis (or ``None`` when all hold)."""
    out = []
    for m in range(1, m_max + 1):
        need = m + problem.n + 1
        if len(initial) < need:
            out.append((m, "insufficient initial data", None))
            continue
        pt = JetPoint.from_values(list(initial)[:need], problem.n, problem.d, problem.field)
        rep = check_conditions(problem, pt, m)
        out.append((m, rep.first_failure(), rep))
    return out
