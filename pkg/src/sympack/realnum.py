"""Certified real enclosures for the few quantities that involve pi or surds.

A :class:`HighPrecisionReal` is a closed interval with exact binary endpoints,
produced by mpmath's interval arithmetic (outward rounding).  When the value
is known to be rational the exact Fraction is carried along as well.
"""
from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import to_rational

DEFAULT_PRECISION = 50
GUARD_DIGITS = 15


def interval_context(precision: int = DEFAULT_PRECISION) -> MPIntervalContext:
    """A private interval context, so concurrent callers never share precision state."""
    ctx = MPIntervalContext()
    ctx.dps = precision + GUARD_DIGITS
    return ctx


def iv_rational(ctx: MPIntervalContext, q: Fraction):
    q = Fraction(q)
    return ctx.mpf(q.numerator) / ctx.mpf(q.denominator)


@dataclass(frozen=True)
class HighPrecisionReal:
    lower: Fraction
    upper: Fraction
    precision: int = DEFAULT_PRECISION
    exact: Optional[Fraction] = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty interval")
        if self.exact is not None and not self.lower <= self.exact <= self.upper:
            raise ValueError("exact value outside its enclosure")

    @classmethod
    def from_rational(cls, q: Fraction, precision: int = DEFAULT_PRECISION) -> "HighPrecisionReal":
        q = Fraction(q)
        return cls(q, q, precision, q)

    @classmethod
    def from_interval(cls, x, precision: int = DEFAULT_PRECISION) -> "HighPrecisionReal":
        lo, hi = (_exact(e) for e in x._mpi_)
        out = cls(lo, hi, precision)
        if out.width > Fraction(1, 10**precision):
            raise ArithmeticError(f"enclosure wider than 1e-{precision}; raise the working precision")
        return out

    @classmethod
    def compute(
        cls, fn: Callable[[MPIntervalContext], object], precision: int = DEFAULT_PRECISION
    ) -> "HighPrecisionReal":
        return cls.from_interval(fn(interval_context(precision)), precision)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def contains(self, q) -> bool:
        return self.lower <= Fraction(q) <= self.upper

    def certainly_lt(self, other) -> bool:
        return self.upper < _lower(other)

    def certainly_le(self, other) -> bool:
        return self.upper <= _lower(other)

    def certainly_gt(self, other) -> bool:
        return self.lower > _upper(other)

    def __float__(self) -> float:
        return float(self.midpoint())

    def decimal_bounds(self, digits: Optional[int] = None) -> tuple[str, str]:
        """Endpoints as decimal strings, rounded outward to ``digits`` places after the point."""
        digits = self.precision if digits is None else digits
        return _to_decimal(self.lower, digits, decimal.ROUND_FLOOR), _to_decimal(
            self.upper, digits, decimal.ROUND_CEILING
        )

    def to_json(self) -> dict:
        lo, hi = self.decimal_bounds()
        out = {"lower": lo, "upper": hi}
        if self.exact is not None:
            from .geometry import format_rational

            out["exact"] = format_rational(self.exact)
        return out

    def __str__(self) -> str:
        if self.exact is not None:
            from .geometry import format_rational

            return format_rational(self.exact)
        lo, hi = self.decimal_bounds(min(self.precision, 20))
        return f"[{lo}, {hi}]"


def _exact(raw) -> Fraction:
    # the backend may hand back gmpy integers
    p, q = to_rational(raw)
    return Fraction(int(p), int(q))


def _lower(x) -> Fraction:
    return x.lower if isinstance(x, HighPrecisionReal) else Fraction(x)


def _upper(x) -> Fraction:
    return x.upper if isinstance(x, HighPrecisionReal) else Fraction(x)


def _to_decimal(q: Fraction, digits: int, rounding: str) -> str:
    ctx = decimal.Context(prec=digits + 40, rounding=rounding)
    quantum = decimal.Decimal(1).scaleb(-digits)
    num = decimal.Decimal(q.numerator)
    den = decimal.Decimal(q.denominator)
    val = ctx.divide(num, den)
    return str(val.quantize(quantum, rounding=rounding, context=ctx))
