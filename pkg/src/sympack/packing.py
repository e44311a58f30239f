"""Packing numbers of rational and ruled 4-manifolds, plus a few higher-dimensional cases.

Two independent engines are provided for the sphere bundles over S^2: an
infimum over the finite list of exceptional classes, and closed-form
piecewise capacity formulas in the ratio r = b/a.  They are meant to agree
exactly and the test-suite holds them to that.

Areas are measured in units of pi throughout, so B^4(1) has volume 1/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import BeyondDemazureRange, RangeError
from .geometry import RationalLike, as_rational, format_rational
from .homology import (
    MAX_BUNDLE_POINTS,
    MAX_CP2_POINTS,
    enumerate_exceptional_cp2,
    solve_diophantine_trivial,
    solve_diophantine_twisted,
)
from .realnum import DEFAULT_PRECISION, HighPrecisionReal, iv_rational

ONE = Fraction(1)


# --------------------------------------------------------------------------
# result types


@dataclass(frozen=True)
class LinearForm:
    """The capacity ca*a + cb*b."""

    ca: Fraction
    cb: Fraction

    def __call__(self, a: Fraction, b: Fraction) -> Fraction:
        return self.ca * a + self.cb * b

    def alpha_beta(self) -> tuple[Fraction, Fraction]:
        """Coefficients on (alpha, beta) = (a - b/2, b)."""
        return self.ca, self.ca / 2 + self.cb

    @classmethod
    def from_alpha_beta(cls, calpha: Fraction, cbeta: Fraction) -> "LinearForm":
        return cls(Fraction(calpha), Fraction(cbeta) - Fraction(calpha) / 2)

    def format(self, x: str = "a", y: str = "b") -> str:
        return _format_linear(self.ca, self.cb, x, y)

    def __str__(self) -> str:
        return self.format()


def _format_linear(ca: Fraction, cb: Fraction, x: str, y: str) -> str:
    den = math.lcm(ca.denominator, cb.denominator)
    p, q = int(ca * den), int(cb * den)
    terms = []
    for coef, sym in ((p, x), (q, y)):
        if coef == 0:
            continue
        mag = "" if abs(coef) == 1 else str(abs(coef))
        terms.append(("-" if coef < 0 else "+", mag + sym))
    if not terms:
        return "0"
    body = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, t in terms[1:]:
        body += sign + t
    if den == 1:
        return body
    return f"({body})/{den}" if len(terms) > 1 else f"{body}/{den}"


@dataclass(frozen=True)
class PackingResult:
    """A packing number together with the ball size that realizes it.

    ``c_power`` is c^n for balls B^{2n}(c); for 4-manifolds that is c^2.  When
    ``exact`` is False the result is a lower bound and ``upper`` may hold the
    best known upper bound.
    """

    k: int
    p: Fraction
    c_power: Fraction
    volume: Fraction
    n: int = 2
    capacity_form: Optional[str] = None
    witness: Optional[str] = None
    regime: str = ""
    exact: bool = True
    upper: Optional[Fraction] = None

    def __post_init__(self):
        if not 0 < self.p <= 1:
            raise ValueError(f"packing number {self.p} outside (0, 1]")
        if self.k * self.c_power != self.p * math.factorial(self.n) * self.volume:
            raise ValueError("p, c and the volume are inconsistent")

    @property
    def c_squared(self) -> Fraction:
        if self.n != 2:
            raise AttributeError("c_squared is only defined in dimension 4")
        return self.c_power

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "p": format_rational(self.p),
            "c_squared" if self.n == 2 else "c_power": format_rational(self.c_power),
            "volume": format_rational(self.volume),
            "capacity_form": self.capacity_form,
            "witness": self.witness,
            "regime": self.regime,
            "exact": self.exact,
        }
        if self.upper is not None:
            out["upper"] = format_rational(self.upper)
        return out


def _result(k, c_power, volume, n=2, **kw) -> PackingResult:
    """Assemble a result from the capacity, capping at a full packing."""
    p = Fraction(k) * c_power / (math.factorial(n) * volume)
    if p >= 1:
        p = ONE
        c_power = math.factorial(n) * volume / k
    return PackingResult(k, p, c_power, volume, n, **kw)


# --------------------------------------------------------------------------
# manifold descriptors


@dataclass(frozen=True)
class CP2:
    a: Fraction = ONE

    def __post_init__(self):
        _positive(self.a)

    @property
    def volume(self) -> Fraction:
        return self.a**2 / 2


@dataclass(frozen=True)
class TrivialBundle:
    """S^2(a) x S^2(b) with a >= b."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        _positive(self.a, self.b)
        if self.a < self.b:
            raise RangeError("trivial bundle expects a >= b")

    @property
    def volume(self) -> Fraction:
        return self.a * self.b

    @property
    def ratio(self) -> Fraction:
        return self.b / self.a


@dataclass(frozen=True)
class Twisted:
    """The twisted bundle over S^2; admissible when a > b/2 > 0."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        _positive(self.b)
        if not self.a > self.b / 2:
            raise RangeError("twisted bundle expects a > b/2 > 0")

    @classmethod
    def from_alpha_beta(cls, alpha: RationalLike, beta: RationalLike) -> "Twisted":
        alpha, beta = as_rational(alpha), as_rational(beta)
        return cls(alpha + beta / 2, beta)

    @property
    def alpha(self) -> Fraction:
        return self.a - self.b / 2

    @property
    def beta(self) -> Fraction:
        return self.b

    @property
    def volume(self) -> Fraction:
        return self.a * self.b

    @property
    def ratio(self) -> Fraction:
        return self.b / self.a


@dataclass(frozen=True)
class SigmaGBundle:
    genus: int
    a: Fraction
    b: Fraction
    twisted: bool = False

    def __post_init__(self):
        if self.genus < 1:
            raise RangeError("genus must be at least 1")
        _positive(self.a, self.b)

    @property
    def volume(self) -> Fraction:
        return self.a * self.b


@dataclass(frozen=True)
class Ellipsoid:
    axes: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.axes:
            raise RangeError("ellipsoid needs at least one axis")
        _positive(*self.axes)
        if list(self.axes) != sorted(self.axes):
            raise RangeError("ellipsoid axes must be ascending")

    @property
    def n(self) -> int:
        return len(self.axes)

    @property
    def volume(self) -> Fraction:
        return math.prod(self.axes, start=ONE) / math.factorial(self.n)


@dataclass(frozen=True)
class Ball:
    n: int
    a: Fraction = ONE

    def __post_init__(self):
        if self.n < 1:
            raise RangeError("dimension must be positive")
        _positive(self.a)

    @property
    def volume(self) -> Fraction:
        return self.a**self.n / math.factorial(self.n)


@dataclass(frozen=True)
class Polydisc:
    sides: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.sides:
            raise RangeError("polydisc needs at least one factor")
        _positive(*self.sides)

    @property
    def n(self) -> int:
        return len(self.sides)

    @property
    def volume(self) -> Fraction:
        return math.prod(self.sides, start=ONE)


ManifoldSpec = Union[CP2, TrivialBundle, Twisted, SigmaGBundle, Ellipsoid, Ball, Polydisc]


def _positive(*xs: Fraction) -> None:
    for x in xs:
        if not isinstance(x, Fraction):
            raise TypeError("areas must be Fractions")
        if x <= 0:
            raise RangeError("areas must be positive")


# --------------------------------------------------------------------------
# infimum engines


def _check_k(k: int) -> None:
    if k < 1:
        raise RangeError("k must be at least 1")


def _bundle_guard(k: int, rows: Optional[PackingResult]) -> Optional[PackingResult]:
    if k > MAX_BUNDLE_POINTS:
        if rows is not None:
            return rows
        raise BeyondDemazureRange(f"k={k}: the exceptional set is infinite beyond {MAX_BUNDLE_POINTS} points")
    return None


def _format_solution(sol: Sequence[int]) -> str:
    n1, n2, *ms = sol
    return f"({n1},{n2};{','.join(map(str, ms))})"


def pk_trivial_infimum(a: RationalLike, b: RationalLike, k: int) -> PackingResult:
    """p_k of S^2(a) x S^2(b) as an infimum over solutions of the trivial system."""
    m = TrivialBundle(as_rational(a), as_rational(b))
    _check_k(k)
    early = _bundle_guard(k, pk_rows_regime(m, k))
    if early is not None:
        return early
    best, arg = None, None
    for sol in solve_diophantine_trivial(k):
        n1, n2 = sol[0], sol[1]
        c = (m.a * n1 + m.b * n2) / (2 * n1 + 2 * n2 - 1)
        if best is None or c < best:
            best, arg = c, sol
    return _inf_result(k, best, arg, m.volume)


def pk_twisted_infimum(a: RationalLike, b: RationalLike, k: int) -> PackingResult:
    """p_k of the twisted bundle as an infimum over solutions of the twisted system."""
    m = Twisted(as_rational(a), as_rational(b))
    _check_k(k)
    early = _bundle_guard(k, pk_rows_regime(m, k))
    if early is not None:
        return early
    alpha, beta = m.alpha, m.beta
    best, arg = None, None
    for sol in solve_diophantine_twisted(k):
        n1, n2 = sol[0], sol[1]
        den = n1 + 2 * n2 - 1
        if den == 0:
            continue  # the class A itself carries no point
        c = (alpha * n1 + beta * n2) / den
        if best is None or c < best:
            best, arg = c, sol
    return _inf_result(k, best, arg, m.volume)


def _inf_result(k, c, sol, volume) -> PackingResult:
    r = _result(k, c * c, volume, witness=_format_solution(sol), regime="infimum")
    if r.p == 1:
        return PackingResult(k, ONE, r.c_power, volume, regime="full")
    return r


def _cp2_constraints(k: int) -> list[tuple[Fraction, str]]:
    out = []
    for e in enumerate_exceptional_cp2(k):
        ms = e.multiplicities
        if all(x >= 0 for x in ms) and sum(ms) > 0:
            out.append((Fraction(e.head[0], sum(ms)), str(e)))
    return out


def pk_cp2(a: RationalLike, k: int) -> PackingResult:
    """p_k of CP^2(a), the same as p_k of B^4(a)."""
    m = CP2(as_rational(a))
    _check_k(k)
    if k > MAX_CP2_POINTS:
        return PackingResult(k, ONE, m.a**2 / k, m.volume, regime="full")
    cons = _cp2_constraints(k)
    if not cons:
        return _result(k, m.a**2, m.volume, capacity_form="a", regime="full")
    ratio, name = min(cons)
    r = _result(k, (ratio * m.a) ** 2, m.volume, witness=name, regime="infimum",
                capacity_form=_format_linear(ratio, Fraction(0), "a", "b"))
    if r.p == 1:
        return PackingResult(k, ONE, r.c_power, m.volume, regime="full")
    return r


# --------------------------------------------------------------------------
# closed-form piecewise formulas


def _lf(ca, cb) -> LinearForm:
    return LinearForm(Fraction(ca), Fraction(cb))


F = Fraction
B_ONLY = _lf(0, 1)

# k -> (interior breakpoints in b/a, capacity on each piece); pieces are
# ]r_{i-1}, r_i], the last ones ending at 1 (trivial) or 2 (twisted).
TRIVIAL_PIECES: dict[int, tuple[tuple[Fraction, ...], tuple[LinearForm, ...]]] = {
    1: ((), (B_ONLY,)),
    2: ((), (B_ONLY,)),
    3: ((F(1, 2),), (B_ONLY, _lf(F(1, 3), F(1, 3)))),
    4: ((F(1, 2),), (B_ONLY, _lf(F(1, 3), F(1, 3)))),
    5: ((F(1, 3),), (B_ONLY, _lf(F(1, 5), F(2, 5)))),
    6: ((F(1, 3), F(3, 4)), (B_ONLY, _lf(F(1, 5), F(2, 5)), _lf(F(2, 7), F(2, 7)))),
    7: (
        (F(1, 4), F(8, 11), F(7, 8)),
        (B_ONLY, _lf(F(1, 7), F(3, 7)), _lf(F(3, 13), F(4, 13)), _lf(F(4, 15), F(4, 15))),
    ),
}

TWISTED_PIECES: dict[int, tuple[tuple[Fraction, ...], tuple[LinearForm, ...]]] = {
    1: ((), (B_ONLY,)),
    2: ((F(2, 3),), (B_ONLY, _lf(F(1, 2), F(1, 4)))),
    3: ((F(2, 3),), (B_ONLY, _lf(F(1, 2), F(1, 4)))),
    4: ((F(2, 5),), (B_ONLY, _lf(F(1, 4), F(3, 8)))),
    5: ((F(2, 5), F(6, 7)), (B_ONLY, _lf(F(1, 4), F(3, 8)), _lf(F(2, 5), F(1, 5)))),
    6: (
        (F(2, 7), F(10, 11), F(4, 3)),
        (B_ONLY, _lf(F(1, 6), F(5, 12)), _lf(F(2, 7), F(2, 7)), _lf(F(2, 5), F(1, 5))),
    ),
    7: (
        (F(2, 7), F(1, 2), F(22, 23), F(8, 7), F(14, 9)),
        (
            B_ONLY,
            _lf(F(1, 6), F(5, 12)),
            _lf(F(3, 14), F(9, 28)),
            _lf(F(4, 15), F(4, 15)),
            _lf(F(4, 13), F(3, 13)),
            _lf(F(3, 8), F(3, 16)),
        ),
    ),
}


def _active_piece(table, k: int, ratio: Fraction) -> tuple[int, LinearForm]:
    breaks, forms = table[k]
    for i, r in enumerate(breaks):
        if ratio <= r:
            return i, forms[i]
    return len(breaks), forms[-1]


def piece_boundaries(family: str, k: int) -> tuple[Fraction, ...]:
    """Breakpoints in b/a including the domain ends 0 and 1 (or 2)."""
    table, end = (TRIVIAL_PIECES, ONE) if family == "trivial" else (TWISTED_PIECES, F(2))
    return (Fraction(0),) + table[k][0] + (end,)


def piecewise_forms(family: str, k: int) -> tuple[LinearForm, ...]:
    table = TRIVIAL_PIECES if family == "trivial" else TWISTED_PIECES
    if k not in table:
        raise BeyondDemazureRange(f"no closed form for k={k}")
    return table[k][1]


def pk_piecewise_trivial(a: RationalLike, b: RationalLike, k: int) -> PackingResult:
    m = TrivialBundle(as_rational(a), as_rational(b))
    _check_k(k)
    early = _bundle_guard(k, pk_rows_regime(m, k))
    if early is not None:
        return early
    i, form = _active_piece(TRIVIAL_PIECES, k, m.ratio)
    return _piece_result(k, form, m, i)


def pk_piecewise_twisted(a: RationalLike, b: RationalLike, k: int) -> PackingResult:
    m = Twisted(as_rational(a), as_rational(b))
    _check_k(k)
    early = _bundle_guard(k, pk_rows_regime(m, k))
    if early is not None:
        return early
    if m.ratio >= 2:
        raise RangeError("the closed forms cover b/a < 2 only")
    i, form = _active_piece(TWISTED_PIECES, k, m.ratio)
    return _piece_result(k, form, m, i)


def _piece_result(k, form: LinearForm, m, i) -> PackingResult:
    c = form(m.a, m.b)
    r = _result(k, c * c, m.volume, capacity_form=form.format(), witness=f"piece {i + 1}", regime="piecewise")
    if r.c_power != c * c:
        return PackingResult(k, ONE, r.c_power, m.volume, witness=r.witness, regime="full")
    return r


def pk_rows_regime(shape, k: int) -> Optional[PackingResult]:
    """The regime where k balls of capacity b line up in rows; None outside it."""
    _check_k(k)
    if isinstance(shape, TrivialBundle):
        ok = (k + 1) // 2 * shape.b <= shape.a
    elif isinstance(shape, Twisted):
        odd_k = k if k % 2 else k + 1
        ok = odd_k * shape.b <= 2 * shape.a
    else:
        raise TypeError("rows regime is defined for the S^2 bundles only")
    if not ok:
        return None
    p = Fraction(k, 2) * shape.ratio
    return PackingResult(k, p, shape.b**2, shape.volume, capacity_form="b", regime="rows")


def pk_sigma_g(genus: int, a: RationalLike, b: RationalLike, k: int, twisted: bool = False) -> PackingResult:
    """Bundles over a surface of positive genus: p = min(1, (k/2)(b/a))."""
    m = SigmaGBundle(genus, as_rational(a), as_rational(b), twisted)
    _check_k(k)
    return _result(k, m.b**2, m.volume, capacity_form="b", regime="genus")


# --------------------------------------------------------------------------
# stability numbers


@dataclass(frozen=True)
class StabilityBounds:
    lower: Fraction
    upper: Fraction
    exact: Optional[Fraction] = None
    candidates: Optional[tuple[int, ...]] = None
    exceptional_ratio_note: Optional[str] = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    def to_json(self) -> dict:
        return {
            "lower": format_rational(self.lower),
            "upper": format_rational(self.upper),
            "exact": None if self.exact is None else format_rational(self.exact),
            "candidates": None if self.candidates is None else list(self.candidates),
            "note": self.exceptional_ratio_note,
        }


_TWISTED_SEVEN = (F(2, 7), F(8, 7), F(14, 9))


def stability_bounds(shape) -> StabilityBounds:
    if isinstance(shape, TrivialBundle):
        a, b = shape.a, shape.b
        lower, upper = max(2 * a / b, F(8)), 8 * a / b
        if shape.ratio == F(7, 8):
            return StabilityBounds(F(7), F(9), candidates=(7, 8, 9),
                                   exceptional_ratio_note="b/a = 7/8: P is one of 7, 8, 9")
        return _bounds(lower, upper)
    if isinstance(shape, Twisted):
        a, b = shape.a, shape.b
        floor = F(7) if shape.ratio in _TWISTED_SEVEN else F(8)
        lower = max(2 * a / b, floor)
        upper = 8 * a / b if b <= a else 8 * a * b / (2 * a - b) ** 2
        return _bounds(lower, upper)
    if isinstance(shape, SigmaGBundle):
        p = F(math.ceil(2 * shape.a / shape.b))
        return StabilityBounds(p, p, exact=p)
    raise TypeError("stability bounds are available for 4-dimensional bundles")


def _bounds(lower: Fraction, upper: Fraction) -> StabilityBounds:
    # P is an integer, so an integral lower bound equal to the upper one pins it
    upper = max(upper, lower)
    exact = lower if lower == upper and lower.denominator == 1 else None
    return StabilityBounds(lower, upper, exact=exact)


# --------------------------------------------------------------------------
# ellipsoids, balls and polydiscs in any dimension


def pk_ellipsoid(axes: Sequence[RationalLike], k: int) -> PackingResult:
    """p_1 and p_2 of E(a_1, ..., a_n)."""
    e = Ellipsoid(tuple(as_rational(x) for x in axes))
    n = e.n
    if k == 1:
        c = e.axes[0]
        form = "a1"
    elif k == 2:
        c = min(e.axes[0], e.axes[-1] / 2)
        form = "a1" if c == e.axes[0] else f"a{n}/2"
    else:
        raise RangeError("ellipsoid packing numbers are known for k <= 2 only")
    return _result(k, c**n, e.volume, n=n, capacity_form=form, regime="ellipsoid")


def pk_ball_highdim(n: int, k: int) -> PackingResult:
    """p_k of B^{2n}(1).  Outside the known cases a lower bound flagged inexact."""
    ball = Ball(n)
    _check_k(k)
    if n == 2:
        return pk_cp2(1, k)
    if k == 1:
        return PackingResult(1, ONE, ONE, ball.volume, n, capacity_form="1", regime="full")
    if k <= 2**n:
        return PackingResult(k, Fraction(k, 2**n), Fraction(1, 2**n), ball.volume, n,
                             capacity_form="1/2", regime="halves")
    l = _ceil_root(k, n)
    if l**n == k:
        return PackingResult(k, ONE, Fraction(1, k), ball.volume, n,
                             capacity_form=f"1/{l}", regime="full")
    return PackingResult(k, Fraction(k, l**n), Fraction(1, l**n), ball.volume, n,
                         capacity_form=f"1/{l}", regime="partial", exact=False, upper=ONE)


def _ceil_root(k: int, n: int) -> int:
    l = max(1, round(k ** (1.0 / n)))
    while l**n < k:
        l += 1
    while l > 1 and (l - 1) ** n >= k:
        l -= 1
    return l


def pk_polydisc(sides: Sequence[RationalLike], k: int) -> PackingResult:
    """One ball by non-squeezing, or a full packing by n! a_1...a_n balls for integral sides."""
    pd = Polydisc(tuple(as_rational(x) for x in sides))
    n = pd.n
    _check_k(k)
    if k == 1:
        c = min(pd.sides)
        return _result(1, c**n, pd.volume, n=n, capacity_form="min", regime="single")
    if all(s.denominator == 1 for s in pd.sides) and k == math.factorial(n) * int(pd.volume):
        return PackingResult(k, ONE, Fraction(1), pd.volume, n, capacity_form="1", regime="full")
    raise RangeError("polydisc packing numbers are known here only for k = 1 and the integral full packing")


# --------------------------------------------------------------------------
# the one-ball bound for surface x torus


def jiang_lower_bound(a: RationalLike, precision: int = DEFAULT_PRECISION) -> HighPrecisionReal:
    """max{a + 1 - sqrt(2a+1), 2} / (4a), certified to ``precision`` digits."""
    a = as_rational(a)
    if a < 1:
        raise RangeError("the bound needs a >= 1")
    # a + 1 - sqrt(2a+1) >= 2 exactly when a >= 4
    if a <= 4:
        return HighPrecisionReal.from_rational(1 / (2 * a), precision)
    root = _rational_sqrt(2 * a + 1)
    if root is not None:
        return HighPrecisionReal.from_rational((a + 1 - root) / (4 * a), precision)

    def f(ctx):
        x = iv_rational(ctx, a)
        return (x + 1 - ctx.sqrt(2 * x + 1)) / (4 * x)

    return HighPrecisionReal.compute(f, precision)


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    p, s = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if p * p == q.numerator and s * s == q.denominator:
        return Fraction(p, s)
    return None


def jiang_grid_minimum(
    start: RationalLike = 1, stop: RationalLike = 100, step: RationalLike = F(1, 100),
    precision: int = DEFAULT_PRECISION,
) -> tuple[HighPrecisionReal, Fraction]:
    """Smallest bound value over an evenly spaced grid, with its location."""
    start, stop, step = as_rational(start), as_rational(stop), as_rational(step)
    best, where = None, None
    x = start
    while x <= stop:
        v = jiang_lower_bound(x, precision)
        if best is None or v.upper < best.upper:
            best, where = v, x
        x += step
    return best, where


# --------------------------------------------------------------------------
# products of surfaces


@dataclass(frozen=True)
class SurfaceProductBound:
    """A lower bound for p_k of a product of two positive-genus surfaces."""

    k: int
    lower: HighPrecisionReal
    source: str
    stability_upper: Optional[Fraction] = None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "lower": self.lower.to_json(),
            "source": self.source,
            "stability_upper": None if self.stability_upper is None else format_rational(self.stability_upper),
            "lower_bound_only": True,
        }


def product_surfaces_lower(g: int, h: int, a: RationalLike, b: RationalLike, k: int,
                           precision: int = DEFAULT_PRECISION) -> SurfaceProductBound:
    a, b = as_rational(a), as_rational(b)
    if g < 1 or h < 1:
        raise RangeError("both genera must be at least 1")
    if a < b:
        raise RangeError("order the factors so that a >= b")
    base = pk_bundle(TrivialBundle(a, b), k)
    lower = HighPrecisionReal.from_rational(base.p, precision)
    source = "box"
    if k == 1 and (h == 1 or (g == 1 and a == b)):
        jb = jiang_lower_bound(a / b, precision)
        if jb.certainly_gt(lower):
            lower, source = jb, "torus"
    upper = None
    if a.denominator == 1 and b.denominator == 1:
        if g == h == 1 and a == b == 1:
            upper = F(2)
        elif a != 1 and b != 1:
            upper = 2 * a * b
        else:
            upper = 8 * a * b
    return SurfaceProductBound(k, lower, source, upper)


def vk_constant(k: int) -> Fraction:
    """Volume-preserving embeddings always fill: the constant 1."""
    _check_k(k)
    return ONE


# --------------------------------------------------------------------------
# dispatch


def pk_bundle(shape, k: int, method: str = "auto") -> PackingResult:
    if method not in ("auto", "infimum", "piecewise"):
        raise ValueError(f"unknown method {method!r}")
    if isinstance(shape, TrivialBundle):
        fn = pk_piecewise_trivial if method == "piecewise" else pk_trivial_infimum
        return fn(shape.a, shape.b, k)
    if isinstance(shape, Twisted):
        if method == "piecewise":
            return pk_piecewise_twisted(shape.a, shape.b, k)
        return pk_twisted_infimum(shape.a, shape.b, k)
    raise TypeError("not an S^2 bundle")


def packing_number(shape: ManifoldSpec, k: int, method: str = "auto") -> PackingResult:
    if isinstance(shape, CP2):
        return pk_cp2(shape.a, k)
    if isinstance(shape, (TrivialBundle, Twisted)):
        return pk_bundle(shape, k, method)
    if isinstance(shape, SigmaGBundle):
        return pk_sigma_g(shape.genus, shape.a, shape.b, k, shape.twisted)
    if isinstance(shape, Ellipsoid):
        return pk_ellipsoid(shape.axes, k)
    if isinstance(shape, Ball):
        if shape.a != 1:
            r = pk_ball_highdim(shape.n, k)
            scale = shape.a**shape.n
            return PackingResult(k, r.p, r.c_power * scale, shape.volume, r.n, r.capacity_form,
                                 r.witness, r.regime, r.exact, r.upper)
        return pk_ball_highdim(shape.n, k)
    if isinstance(shape, Polydisc):
        return pk_polydisc(shape.sides, k)
    raise TypeError(f"unsupported shape {shape!r}")


# --------------------------------------------------------------------------
# exact search for full-packing ratios


@dataclass(frozen=True)
class QuadraticSurd:
    """x + y*sqrt(s) with s a squarefree integer > 1, or y = 0."""

    x: Fraction
    y: Fraction = Fraction(0)
    s: int = 1

    @classmethod
    def make(cls, x: Fraction, y: Fraction, radicand: Fraction) -> "QuadraticSurd":
        if y == 0 or radicand == 0:
            return cls(Fraction(x))
        # sqrt(p/q) = sqrt(p q)/q, then pull squares out of p q
        whole = radicand.numerator * radicand.denominator
        sq, free = _split_square(whole)
        y = y * sq / radicand.denominator
        if free == 1:
            return cls(x + y)
        return cls(Fraction(x), Fraction(y), free)

    def sign(self) -> int:
        sx = (self.x > 0) - (self.x < 0)
        sy = (self.y > 0) - (self.y < 0)
        if sy == 0 or sx == sy:
            return sx or sy
        if sx == 0:
            return sy
        lhs, rhs = self.x * self.x, self.y * self.y * self.s
        if lhs == rhs:
            return 0
        return sx if lhs > rhs else sy

    def __sub__(self, other: "QuadraticSurd") -> "QuadraticSurd":
        other = _lift(other)
        if other.y != 0 and self.y != 0 and other.s != self.s:
            raise ValueError("mixed radicands")
        s = self.s if self.y != 0 else other.s
        return _normal(self.x - other.x, self.y - other.y, s)

    def compare(self, other) -> int:
        other = _lift(other)
        if self.y != 0 and other.y != 0 and self.s != other.s:
            # both irrational with different radicands: never equal, decide numerically
            return _numeric_compare(self, other)
        return (self - other).sign()

    def mul(self, other: "QuadraticSurd") -> "QuadraticSurd":
        other = _lift(other)
        if other.y == 0:
            return _normal(self.x * other.x, self.y * other.x, self.s)
        if self.y == 0:
            return _normal(self.x * other.x, self.x * other.y, other.s)
        if self.s != other.s:
            raise ValueError("mixed radicands")
        return _normal(self.x * other.x + self.y * other.y * self.s,
                       self.x * other.y + self.y * other.x, self.s)

    def approx(self, precision: int = 40) -> HighPrecisionReal:
        if self.y == 0:
            return HighPrecisionReal.from_rational(self.x, precision)

        def f(ctx):
            return iv_rational(ctx, self.x) + iv_rational(ctx, self.y) * ctx.sqrt(ctx.mpf(self.s))

        return HighPrecisionReal.compute(f, precision)

    def is_rational(self) -> bool:
        return self.y == 0

    def __str__(self) -> str:
        if self.y == 0:
            return format_rational(self.x)
        return f"{format_rational(self.x)}{'+' if self.y > 0 else '-'}{format_rational(abs(self.y))}*sqrt({self.s})"


def _normal(x: Fraction, y: Fraction, s: int) -> QuadraticSurd:
    if y == 0 or s == 1:
        return QuadraticSurd(x + (y if s == 1 else 0))
    return QuadraticSurd(x, y, s)


def _lift(v) -> QuadraticSurd:
    return v if isinstance(v, QuadraticSurd) else QuadraticSurd(Fraction(v))


def _numeric_compare(u: QuadraticSurd, v: QuadraticSurd) -> int:
    hu, hv = u.approx(), v.approx()
    if hu.certainly_lt(hv):
        return -1
    if hu.certainly_gt(hv):
        return 1
    raise ArithmeticError("could not separate two surds")


def _split_square(n: int) -> tuple[int, int]:
    """n = sq^2 * free with free squarefree."""
    sq, free, d = 1, 1, 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
            sq *= d
        if n % d == 0:
            n //= d
            free *= d
        d += 1
    return sq, free * n


def _constraint_forms(family: str, k: int) -> list[tuple[Fraction, Fraction, int]]:
    """Capacity bounds (u a + v b)/D from every class, as (u, v, D)."""
    out = []
    if family == "trivial":
        for (n1, n2, *_) in solve_diophantine_trivial(k):
            out.append((Fraction(n1), Fraction(n2), 2 * n1 + 2 * n2 - 1))
    else:
        for (n1, n2, *_) in solve_diophantine_twisted(k):
            den = n1 + 2 * n2 - 1
            if den:
                # alpha n1 + beta n2 with alpha = a - b/2, beta = b
                out.append((Fraction(n1), Fraction(n2) - Fraction(n1, 2), den))
    return sorted(set(out))


def _roots(k: int, u: Fraction, v: Fraction, d: int) -> list[QuadraticSurd]:
    """Roots in r of k (u + v r)^2 - 2 d^2 r, the volume constraint per class."""
    if v == 0:
        return [QuadraticSurd(k * u * u / (2 * d * d))]
    disc = Fraction(d * d) * (d * d - 2 * k * u * v)
    if disc < 0:
        return []
    base = (d * d - k * u * v) / (k * v * v)
    scale = 1 / (k * v * v)
    return [QuadraticSurd.make(base, sgn * scale, disc) for sgn in (-1, 1)]


def _evaluate(k: int, u: Fraction, v: Fraction, d: int, r: QuadraticSurd) -> int:
    lin = _normal(u + v * r.x, v * r.y, r.s)
    val = lin.mul(lin).mul(_lift(Fraction(k)))
    val = val - r.mul(_lift(Fraction(2 * d * d)))
    return val.sign()


def full_packing_ratios(family: str, k: int) -> tuple[QuadraticSurd, ...]:
    """Every ratio b/a in the admissible range at which p_k equals 1.

    The ratios where some class forces p_k < 1 form a finite union of open
    intervals, so the full-packing locus is a finite set of roots unless a
    gap between consecutive roots is itself full; that case raises, since
    it would mean a whole interval of full packings.
    """
    if family not in ("trivial", "twisted"):
        raise ValueError("family is 'trivial' or 'twisted'")
    _check_k(k)
    if k > MAX_BUNDLE_POINTS:
        raise BeyondDemazureRange("full-packing search needs the finite class list")
    hi = ONE if family == "trivial" else F(2)
    forms = _constraint_forms(family, k)

    def is_full(r: QuadraticSurd) -> bool:
        return all(_evaluate(k, u, v, d, r) >= 0 for (u, v, d) in forms)

    cands: list[QuadraticSurd] = []
    for (u, v, d) in forms:
        for r in _roots(k, u, v, d):
            if r.sign() > 0 and r.compare(hi) <= 0:
                cands.append(r)
    if family == "trivial":
        cands.append(QuadraticSurd(hi))
    uniq: list[QuadraticSurd] = []
    for r in cands:
        if not any(r.compare(q) == 0 for q in uniq):
            uniq.append(r)
    uniq.sort(key=lambda r: r.approx().midpoint())
    points = [Fraction(0)] + uniq + [hi]
    for left, right in zip(points, points[1:]):
        mid = _rational_between(_lift(left), _lift(right))
        if mid is not None and is_full(QuadraticSurd(mid)):
            raise ArithmeticError(f"full packings on a whole interval near {mid}")
    if family == "twisted":
        uniq = [r for r in uniq if r.compare(hi) < 0]
    return tuple(r for r in uniq if is_full(r))


def _rational_between(lo: QuadraticSurd, hi: QuadraticSurd) -> Optional[Fraction]:
    if lo.compare(hi) >= 0:
        return None
    m = (lo.approx().midpoint() + hi.approx().midpoint()) / 2
    m = m.limit_denominator(10**30)
    if lo.compare(m) < 0 and hi.compare(m) > 0:
        return m
    return None
