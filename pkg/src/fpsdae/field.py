"""Scalar field modes: exact rationals, real binary64, complex binary64."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import UsageError

KINDS = ("rational", "f64", "c64")

TOL_ENV = "FPSDAE_TOL"


@dataclass(frozen=True)
class Field:
    """A concrete field mode plus the zero-test tolerances used in float modes.

    In rational mode ``is_zero`` is exact and the tolerances are ignored.
    """

    kind: str = "rational"
    atol: float = 1e-12
    rtol: float = 1e-9

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown field mode {self.kind!r}; expected one of {KINDS}")

    @property
    def exact(self) -> bool:
        return self.kind == "rational"

    @property
    def complex(self) -> bool:
        return self.kind == "c64"

    def coerce(self, value):
        """Convert an int, Fraction, float, complex or string into this field."""
        if isinstance(value, str):
            value = parse_scalar(value, self.kind)
        if self.kind == "rational":
            if isinstance(value, (float, complex)):
                if isinstance(value, complex):
                    if value.imag != 0:
                        raise UsageError("complex value in rational mode")
                    value = value.real
                return Fraction(value)
            return Fraction(value)
        if self.kind == "f64":
            if isinstance(value, complex):
                if value.imag != 0:
                    raise UsageError("complex value in f64 mode")
                return float(value.real)
            return float(value)
        return complex(value)

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def is_zero(self, value, scale=0.0) -> bool:
        """Zero test: exact in rational mode, ``|v| <= atol + rtol*scale`` otherwise."""
        if self.exact:
            return value == 0
        return abs(value) <= self.atol + self.rtol * abs(scale)

    def with_tolerances(self, atol=None, rtol=None) -> "Field":
        return replace(
            self,
            atol=self.atol if atol is None else float(atol),
            rtol=self.rtol if rtol is None else float(rtol),
        )


def parse_scalar(text: str, kind: str = "rational"):
    """Parse ``"p/q"``, decimals, and (in c64 mode) Python complex literals."""
    text = text.strip()
    if kind == "c64" and ("j" in text or "J" in text):
        return complex(text.replace(" ", ""))
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse scalar {text!r}") from exc
    return value


def tolerances_from_env(environ=None) -> dict:
    """Read default tolerance overrides from ``FPSDAE_TOL="atol=1e-12,rtol=1e-9"``."""
    environ = os.environ if environ is None else environ
    raw = environ.get(TOL_ENV, "").strip()
    out = {}
    if not raw:
        return out
    for part in raw.split(","):
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in ("atol", "rtol") or not val:
            raise UsageError(f"bad {TOL_ENV} entry {part!r}")
        out[key] = float(val)
    return out


def format_scalar(value) -> str | float | list:
    """JSON form of a field scalar: ``"p/q"`` strings, shortest floats, [re, im] pairs."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, complex):
        return [float(value.real), float(value.imag)]
    return float(value)
