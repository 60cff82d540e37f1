"""Truncated power series ("jets") and first-order sensitivity jets.

A :class:`Jet` of order ``N`` holds plain coefficients ``a_0 .. a_N`` of
``sum a_i eps^i`` (no factorial scaling).  Arithmetic is polynomial
arithmetic modulo ``eps^(N+1)``.  A :class:`SensitivityJet` carries, next to
its base jet, one jet per named input channel holding the first-order
variation of the base with respect to that input.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Number

from .errors import SingularEvaluationError, UnsupportedInExactMode, UsageError

ANALYTIC = ("exp", "log", "sin", "cos")


def _exact(v) -> bool:
    return isinstance(v, (Fraction, int)) and not isinstance(v, bool)


def _scalar_fn(name, v):
    if _exact(v):
        raise UnsupportedInExactMode(f"{name} is not available in rational mode")
    mod = cmath if isinstance(v, complex) else math
    if name == "log":
        if v == 0:
            raise SingularEvaluationError("log of zero")
        if not isinstance(v, complex) and v < 0:
            raise SingularEvaluationError("log of a negative real number")
    return getattr(mod, name)(v)


class Jet:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise UsageError("a jet needs at least one coefficient")
        self.coeffs = coeffs

    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        zero = value * 0
        return cls((value,) + (zero,) * order)

    @classmethod
    def variable(cls, value, order: int, one=1) -> "Jet":
        """``value + eps`` truncated at ``order``."""
        zero = value * 0
        if order == 0:
            return cls((value,))
        return cls((value, zero + one) + (zero,) * (order - 1))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        return f"Jet({list(self.coeffs)!r})"

    def __eq__(self, other):
        if isinstance(other, Jet):
            return self.coeffs == other.coeffs
        return NotImplemented

    __hash__ = None

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise UsageError("cannot truncate to a higher order")
        return Jet(self.coeffs[: order + 1])

    def _lift(self, other):
        if isinstance(other, Jet):
            if other.order != self.order:
                raise UsageError(f"jet order mismatch: {self.order} vs {other.order}")
            return other
        if isinstance(other, Number):
            return Jet.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Jet(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Jet(-a for a in self.coeffs)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Jet(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, Number):
            return Jet(a * other for a in self.coeffs)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return jet_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            if other == 0:
                raise SingularEvaluationError("division by zero")
            return Jet(a / other for a in self.coeffs)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return jet_div(self, other)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return jet_div(other, self)

    def __pow__(self, k):
        return jet_pow(self, k)


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product truncated at the common order."""
    if a.order != b.order:
        raise UsageError(f"jet order mismatch: {a.order} vs {b.order}")
    ac, bc = a.coeffs, b.coeffs
    out = []
    for i in range(len(ac)):
        s = ac[0] * bc[i]
        for j in range(1, i + 1):
            s = s + ac[j] * bc[i - j]
        out.append(s)
    return Jet(out)


def jet_div(a: Jet, b: Jet) -> Jet:
    if a.order != b.order:
        raise UsageError(f"jet order mismatch: {a.order} vs {b.order}")
    b0 = b.coeffs[0]
    if b0 == 0:
        raise SingularEvaluationError("division by a jet with zero constant term")
    q = []
    for k in range(len(a.coeffs)):
        s = a.coeffs[k]
        for j in range(k):
            s = s - q[j] * b.coeffs[k - j]
        q.append(s / b0)
    return Jet(q)


def jet_pow(a: Jet, k: int) -> Jet:
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise UsageError(f"only nonnegative integer powers are supported, got {k!r}")
    result = Jet.constant(a.coeffs[0] * 0 + 1, a.order)
    base = a
    while k:
        if k & 1:
            result = jet_mul(result, base)
        k >>= 1
        if k:
            base = jet_mul(base, base)
    return result


def _jet_exp(a: Jet) -> Jet:
    e = [_scalar_fn("exp", a.coeffs[0])]
    for k in range(1, len(a.coeffs)):
        s = 0
        for j in range(1, k + 1):
            s = s + j * a.coeffs[j] * e[k - j]
        e.append(s / k)
    return Jet(e)


def _jet_log(a: Jet) -> Jet:
    a0 = a.coeffs[0]
    if a0 == 0:
        raise SingularEvaluationError("log of a jet with zero constant term")
    out = [_scalar_fn("log", a0)]
    for k in range(1, len(a.coeffs)):
        s = k * a.coeffs[k]
        for j in range(1, k):
            s = s - j * out[j] * a.coeffs[k - j]
        out.append(s / (k * a0))
    return Jet(out)


def _jet_sincos(a: Jet):
    s = [_scalar_fn("sin", a.coeffs[0])]
    c = [_scalar_fn("cos", a.coeffs[0])]
    for k in range(1, len(a.coeffs)):
        ss = 0
        cc = 0
        for j in range(1, k + 1):
            ss = ss + j * a.coeffs[j] * c[k - j]
            cc = cc - j * a.coeffs[j] * s[k - j]
        s.append(ss / k)
        c.append(cc / k)
    return Jet(s), Jet(c)


def jet_apply_analytic(name: str, a: Jet, arg=None) -> Jet:
    """Compose a named primitive with ``a``.

    ``name`` is one of ``exp, log, sin, cos`` or ``pow_int`` (``arg`` is the
    exponent) or ``div`` (computes ``arg / a`` with ``arg`` a scalar or jet,
    defaulting to 1).
    """
    if name == "exp":
        return _jet_exp(a)
    if name == "log":
        return _jet_log(a)
    if name == "sin":
        return _jet_sincos(a)[0]
    if name == "cos":
        return _jet_sincos(a)[1]
    if name == "pow_int":
        return jet_pow(a, arg)
    if name == "div":
        num = 1 if arg is None else arg
        if not isinstance(num, Jet):
            num = Jet.constant(a.coeffs[0] * 0 + num, a.order)
        return jet_div(num, a)
    raise UsageError(f"unknown primitive {name!r}")


class SensitivityJet:
    """A base jet together with named first-order sensitivity channels.

    Missing channels are implicitly zero.  Channel jets always have the same
    order as the base.
    """

    __slots__ = ("base", "channels")

    def __init__(self, base: Jet, channels=None):
        self.base = base
        self.channels = dict(channels or {})
        for name, ch in self.channels.items():
            if ch.order != base.order:
                raise UsageError(f"channel {name!r} has order {ch.order}, base has {base.order}")

    @property
    def order(self) -> int:
        return self.base.order

    def channel(self, name) -> Jet:
        ch = self.channels.get(name)
        if ch is None:
            return self.base * 0
        return ch

    def __repr__(self):
        return f"SensitivityJet({self.base!r}, {self.channels!r})"

    def _lift(self, other):
        if isinstance(other, SensitivityJet):
            if other.order != self.order:
                raise UsageError(f"jet order mismatch: {self.order} vs {other.order}")
            return other
        if isinstance(other, Jet):
            return SensitivityJet(other)
        if isinstance(other, Number):
            return SensitivityJet(Jet.constant(other, self.order))
        return NotImplemented

    def _linear(self, other, sign):
        chans = dict(self.channels)
        for k, v in other.channels.items():
            chans[k] = chans[k] + v * sign if k in chans else v * sign
        return SensitivityJet(self.base + other.base * sign, chans)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._linear(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._linear(other, -1)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other._linear(self, -1)

    def __neg__(self):
        return SensitivityJet(-self.base, {k: -v for k, v in self.channels.items()})

    def __mul__(self, other):
        if isinstance(other, Number):
            return SensitivityJet(self.base * other, {k: v * other for k, v in self.channels.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return sensitivity_propagate("mul", [self, other])

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return sensitivity_propagate("div", [self, other])

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return sensitivity_propagate("div", [other, self])

    def __pow__(self, k):
        return sensitivity_propagate("pow_int", [self], k)


def _scale_channels(chans, factor: Jet):
    return {k: jet_mul(v, factor) for k, v in chans.items()}


def sensitivity_propagate(op: str, inputs, arg=None) -> SensitivityJet:
    """Apply primitive ``op`` to sensitivity jets, linearising every channel.

    Binary ops (``add, sub, mul, div``) take two inputs; unary ops
    (``neg, exp, log, sin, cos, pow_int``) take one, with ``arg`` the integer
    exponent for ``pow_int``.
    """
    orders = {x.order for x in inputs}
    if len(orders) != 1:
        raise UsageError("sensitivity inputs must share their order")
    if op == "add":
        return inputs[0]._linear(inputs[1], 1)
    if op == "sub":
        return inputs[0]._linear(inputs[1], -1)
    if op == "neg":
        return -inputs[0]
    if op == "mul":
        a, b = inputs
        chans = {}
        for k in set(a.channels) | set(b.channels):
            terms = []
            if k in a.channels:
                terms.append(jet_mul(b.base, a.channels[k]))
            if k in b.channels:
                terms.append(jet_mul(a.base, b.channels[k]))
            chans[k] = terms[0] if len(terms) == 1 else terms[0] + terms[1]
        return SensitivityJet(jet_mul(a.base, b.base), chans)
    if op == "div":
        a, b = inputs
        q = jet_div(a.base, b.base)
        chans = {}
        for k in set(a.channels) | set(b.channels):
            num = a.channel(k) - jet_mul(q, b.channel(k))
            chans[k] = jet_div(num, b.base)
        return SensitivityJet(q, chans)
    (a,) = inputs
    if op == "pow_int":
        if arg == 0:
            return SensitivityJet(jet_pow(a.base, 0))
        lower = jet_pow(a.base, arg - 1)
        return SensitivityJet(jet_mul(lower, a.base), _scale_channels(a.channels, lower * arg))
    if op == "exp":
        e = _jet_exp(a.base)
        return SensitivityJet(e, _scale_channels(a.channels, e))
    if op == "log":
        out = _jet_log(a.base)
        return SensitivityJet(out, {k: jet_div(v, a.base) for k, v in a.channels.items()})
    if op == "sin":
        s, c = _jet_sincos(a.base)
        return SensitivityJet(s, _scale_channels(a.channels, c))
    if op == "cos":
        s, c = _jet_sincos(a.base)
        return SensitivityJet(c, _scale_channels(a.channels, -s))
    raise UsageError(f"unknown primitive {op!r}")


def apply_function(name: str, value):
    """Dispatch an analytic primitive on a scalar, Jet, or SensitivityJet."""
    if name not in ANALYTIC:
        raise UsageError(f"unknown function {name!r}")
    if isinstance(value, SensitivityJet):
        return sensitivity_propagate(name, [value])
    if isinstance(value, Jet):
        return jet_apply_analytic(name, value)
    return _scalar_fn(name, value)
