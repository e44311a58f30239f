"""Euclidean ball-packing densities, for comparison with the symplectic numbers.

Anything involving pi or a surd comes back as a certified
:class:`~sympack.realnum.HighPrecisionReal`; rational values carry their
exact Fraction too.  Here B^n is the round unit ball of dimension n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import RangeError
from .geometry import format_rational
from .packing import _rational_sqrt, pk_ball_highdim
from .realnum import DEFAULT_PRECISION, HighPrecisionReal, iv_rational


def _kappa(ctx, n: int):
    m = n // 2
    if n % 2 == 0:
        return ctx.pi**m / math.factorial(m)
    return 2 * math.factorial(m) * (4 * ctx.pi) ** m / math.factorial(2 * m + 1)


def unit_ball_volume(n: int, precision: int = DEFAULT_PRECISION) -> HighPrecisionReal:
    """kappa_n = pi^(n/2) / Gamma(n/2 + 1)."""
    if n < 1:
        raise RangeError("dimension must be positive")
    if n == 1:
        return HighPrecisionReal.from_rational(Fraction(2), precision)
    return HighPrecisionReal.compute(lambda ctx: _kappa(ctx, n), precision)


def delta_k_ball(n: int, k: int, precision: int = DEFAULT_PRECISION) -> HighPrecisionReal:
    """Largest density of k equal balls packed into B^n, for k <= 2n."""
    if n < 1 or k < 1:
        raise RangeError("need n, k >= 1")
    if k > 2 * n:
        raise RangeError("the density is only known here for k <= 2n")
    radicand = 2 - Fraction(2, k) if k <= n + 1 else Fraction(2)
    root = _rational_sqrt(radicand)
    if root is not None:
        return HighPrecisionReal.from_rational(Fraction(k) / (1 + root) ** n, precision)
    return HighPrecisionReal.compute(
        lambda ctx: k / (1 + ctx.sqrt(iv_rational(ctx, radicand))) ** n, precision)


def obvious_bound(n: int, k: int) -> Fraction:
    """k / 2^n: each ball has at most half the radius of B^n."""
    if k < 2:
        raise RangeError("the bound is stated for k >= 2")
    return Fraction(k, 2**n)


@dataclass(frozen=True)
class SausageBound:
    n: int
    k: int
    value: HighPrecisionReal
    rhs: Optional[HighPrecisionReal]
    below_rhs: Optional[bool]
    valid_as_bound: bool

    def to_json(self) -> dict:
        return {
            "n": self.n, "k": self.k, "conv_k": self.value.to_json(),
            "rhs": None if self.rhs is None else self.rhs.to_json(),
            "below_rhs": self.below_rhs, "valid_as_bound": self.valid_as_bound,
        }


SAUSAGE_DIMENSION = 42


def sausage_bound(n: int, k: int, precision: int = DEFAULT_PRECISION) -> SausageBound:
    """Density of k collinear unit balls in their convex hull."""
    if n < 2 or k < 1:
        raise RangeError("need n >= 2 and k >= 1")
    valid = n >= SAUSAGE_DIMENSION
    if k == 1:
        one = HighPrecisionReal.from_rational(Fraction(1), precision)
        return SausageBound(n, k, one, None, None, valid)
    value = HighPrecisionReal.compute(
        lambda ctx: k * _kappa(ctx, n) / (_kappa(ctx, n) + 2 * (k - 1) * _kappa_any(ctx, n - 1)), precision)
    rhs = HighPrecisionReal.compute(
        lambda ctx: iv_rational(ctx, Fraction(k, k - 1)) * ctx.sqrt(ctx.pi / 2) / ctx.sqrt(ctx.mpf(n + 1)),
        precision)
    below = True if value.certainly_lt(rhs) else (False if value.certainly_gt(rhs) else None)
    return SausageBound(n, k, value, rhs, below, valid)


def _kappa_any(ctx, n: int):
    return ctx.mpf(2) if n == 1 else _kappa(ctx, n)


def gritzmann_bound(n: int, precision: int = DEFAULT_PRECISION) -> HighPrecisionReal:
    """(2 + sqrt 3) sqrt(pi/2) / sqrt(n); vacuous whenever it exceeds 1."""
    if n < 1:
        raise RangeError("dimension must be positive")
    return HighPrecisionReal.compute(
        lambda ctx: (2 + ctx.sqrt(ctx.mpf(3))) * ctx.sqrt(ctx.pi / 2) / ctx.sqrt(ctx.mpf(n)), precision)


def blichfeldt_bound(n: int, precision: int = DEFAULT_PRECISION) -> HighPrecisionReal:
    """(n + 2) 2^(-(n+2)/2), an upper bound for lattice-free packings of R^n."""
    if n < 1:
        raise RangeError("dimension must be positive")
    if n % 2 == 0:
        return HighPrecisionReal.from_rational(Fraction(n + 2, 2 ** ((n + 2) // 2)), precision)
    return HighPrecisionReal.compute(lambda ctx: (n + 2) / ctx.sqrt(ctx.mpf(2) ** (n + 2)), precision)


@dataclass(frozen=True)
class DensityConstants:
    delta2: HighPrecisionReal
    delta3: HighPrecisionReal
    delta4_lower: HighPrecisionReal
    delta4_upper: HighPrecisionReal


def density_constants(precision: int = DEFAULT_PRECISION) -> DensityConstants:
    c = HighPrecisionReal.compute
    return DensityConstants(
        delta2=c(lambda ctx: ctx.pi / ctx.sqrt(ctx.mpf(12)), precision),
        delta3=c(lambda ctx: ctx.pi / ctx.sqrt(ctx.mpf(18)), precision),
        delta4_lower=c(lambda ctx: ctx.pi**2 / 16, precision),
        delta4_upper=HighPrecisionReal.from_rational(Fraction("0.647742"), precision),
    )


ASYMPTOTIC_NOTES = {
    "lower": "c n 2^(-n) for any constant c < log 2, for n large",
    "upper": "2^(-0.599 n) for n large",
}


@dataclass(frozen=True)
class Comparison:
    n: int
    k: int
    delta: HighPrecisionReal
    p: Fraction
    obvious: Optional[Fraction]
    delta_below_p: Optional[bool]
    delta_below_scaled_p: Optional[bool]

    def to_json(self) -> dict:
        return {
            "n": self.n, "k": self.k, "delta": self.delta.to_json(), "p": format_rational(self.p),
            "obvious": None if self.obvious is None else format_rational(self.obvious),
            "delta_below_p": self.delta_below_p, "delta_below_scaled_p": self.delta_below_scaled_p,
        }


def compare_symplectic_euclidean(n: int, k: int, precision: int = DEFAULT_PRECISION) -> Comparison:
    """Euclidean density of k balls in B^{2n} against the symplectic p_k(B^{2n}).

    ``delta_below_p`` is a strict certified verdict (None when k = 1, where
    both are 1); ``delta_below_scaled_p`` checks delta <= p / 2^n on 2 <= k <= 2^n.
    """
    dim = 2 * n
    res = pk_ball_highdim(n, k)
    if not res.exact:
        raise RangeError(f"p_{k} of the {dim}-ball is not known exactly")
    delta = delta_k_ball(dim, k, precision)
    if k == 1:
        return Comparison(n, k, delta, res.p, None, None, None)
    scaled = None
    if k <= 2**n:
        scaled = delta.certainly_le(res.p / 2**n)
    return Comparison(n, k, delta, res.p, obvious_bound(dim, k), delta.certainly_lt(res.p), scaled)
