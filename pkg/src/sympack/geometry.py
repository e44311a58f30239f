"""Exact rational plane geometry.

Everything here works over :class:`fractions.Fraction`; no predicate ever
touches a float.  Polygons are simple, stored counterclockwise with duplicate
and collinear vertices removed, and compare equal when they describe the same
vertex cycle.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import InvalidPolygon

Rational = Fraction
RationalLike = Union[Fraction, int, str]

MAX_VERTICES = 16


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused on purpose: a binary float almost never is the number
    the caller had in mind.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational string")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational {x!r}") from exc
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Point2(NamedTuple):
    x1: Fraction
    x2: Fraction

    @classmethod
    def of(cls, x1: RationalLike, x2: RationalLike) -> "Point2":
        return cls(as_rational(x1), as_rational(x2))


def _cross(o: Point2, p: Point2, q: Point2) -> Fraction:
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def _signed_area2(vs: Sequence[Point2]) -> Fraction:
    n = len(vs)
    return sum(
        (vs[i][0] * vs[(i + 1) % n][1] - vs[(i + 1) % n][0] * vs[i][1] for i in range(n)),
        Fraction(0),
    )


def _on_segment(p: Point2, q: Point2, r: Point2) -> bool:
    """r lies on the closed segment pq (assumes collinearity already checked)."""
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool:
    """Closed-segment intersection test."""
    d1 = _cross(q1, q2, p1)
    d2 = _cross(q1, q2, p2)
    d3 = _cross(p1, p2, q1)
    d4 = _cross(p1, p2, q2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    if d1 == 0 and _on_segment(q1, q2, p1):
        return True
    if d2 == 0 and _on_segment(q1, q2, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, q1):
        return True
    if d4 == 0 and _on_segment(p1, p2, q2):
        return True
    return False


def _simplify(vs: list[Point2]) -> list[Point2]:
    # drop repeated points, then collinear (including back-tracking) vertices
    out: list[Point2] = []
    for v in vs:
        if not out or out[-1] != v:
            out.append(v)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        n = len(out)
        for i in range(n):
            if _cross(out[i - 1], out[i], out[(i + 1) % n]) == 0:
                del out[i]
                changed = True
                break
    return out


class Polygon:
    """Simple polygon with exact rational vertices, normalized counterclockwise."""

    __slots__ = ("vertices", "_key", "bbox", "_convex")

    def __init__(self, vertices: Iterable[Sequence[RationalLike]]):
        vs = [Point2.of(v[0], v[1]) for v in vertices]
        vs = _simplify(vs)
        if len(vs) < 3:
            raise InvalidPolygon("polygon needs at least 3 non-collinear vertices")
        if len(vs) > MAX_VERTICES:
            raise InvalidPolygon(f"polygon has {len(vs)} vertices; at most {MAX_VERTICES} supported")
        area2 = _signed_area2(vs)
        if area2 == 0:
            raise InvalidPolygon("degenerate polygon (zero area)")
        if area2 < 0:
            vs.reverse()
        convex = _is_convex_cycle(vs)
        if not convex and not _is_simple(vs):
            raise InvalidPolygon("polygon is self-intersecting")
        self.vertices: tuple[Point2, ...] = tuple(vs)
        start = min(range(len(vs)), key=lambda i: vs[i])
        self._key = tuple(vs[start:] + vs[:start])
        xs, ys = [v[0] for v in vs], [v[1] for v in vs]
        self.bbox = (min(xs), min(ys), max(xs), max(ys))
        self._convex = True if convex else None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Polygon) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        pts = ", ".join(f"({format_rational(x)}, {format_rational(y)})" for x, y in self.vertices)
        return f"Polygon([{pts}])"

    @property
    def area(self) -> Fraction:
        return polygon_area(self)

    def edges(self) -> list[tuple[Point2, Point2]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def is_convex(self) -> bool:
        if self._convex is None:
            n = len(self.vertices)
            self._convex = all(
                _cross(self.vertices[i - 1], self.vertices[i], self.vertices[(i + 1) % n]) > 0 for i in range(n)
            )
        return self._convex

    def translate(self, dx: RationalLike, dy: RationalLike) -> "Polygon":
        dx, dy = as_rational(dx), as_rational(dy)
        return Polygon([(x + dx, y + dy) for x, y in self.vertices])


def _is_convex_cycle(vs: Sequence[Point2]) -> bool:
    """Strict left turns everywhere and a single turn around, hence simple and convex."""
    n = len(vs)
    if any(_cross(vs[i - 1], vs[i], vs[(i + 1) % n]) <= 0 for i in range(n)):
        return False
    # a star polygon also turns left everywhere but winds more than once
    signs = [d for d in ((vs[(i + 1) % n][0] > vs[i][0]) - (vs[(i + 1) % n][0] < vs[i][0]) for i in range(n)) if d]
    return sum(signs[i] != signs[i - 1] for i in range(len(signs))) == 2


def _is_simple(vs: Sequence[Point2]) -> bool:
    n = len(vs)
    if n == 3:
        return True
    edges = [(vs[i], vs[(i + 1) % n]) for i in range(n)]
    for i, j in combinations(range(n), 2):
        if j == i + 1 or (i == 0 and j == n - 1):
            # adjacent edges share exactly one vertex; overlap would need collinearity
            continue
        if segments_intersect(*edges[i], *edges[j]):
            return False
    return True


def polygon_area(p: Polygon) -> Fraction:
    """Exact enclosed area by the shoelace formula."""
    a = _signed_area2(p.vertices) / 2
    if a <= 0:
        raise InvalidPolygon("degenerate polygon (zero area)")
    return a


def triangulate(p: Polygon) -> list[tuple[Point2, Point2, Point2]]:
    """Ear-clipping triangulation; exact, for simple CCW polygons."""
    vs = list(p.vertices)
    if p.is_convex():
        return [(vs[0], vs[i], vs[i + 1]) for i in range(1, len(vs) - 1)]
    tris = []
    while len(vs) > 3:
        n = len(vs)
        for i in range(n):
            a, b, c = vs[i - 1], vs[i], vs[(i + 1) % n]
            if _cross(a, b, c) <= 0:
                continue
            others = (v for v in vs if v not in (a, b, c))
            if any(_in_closed_triangle(v, a, b, c) for v in others):
                continue
            tris.append((a, b, c))
            del vs[i]
            break
        else:  # pragma: no cover - a simple polygon always has an ear
            raise InvalidPolygon("triangulation failed; polygon not simple")
    tris.append((vs[0], vs[1], vs[2]))
    return tris


def _in_closed_triangle(v: Point2, a: Point2, b: Point2, c: Point2) -> bool:
    return _cross(a, b, v) >= 0 and _cross(b, c, v) >= 0 and _cross(c, a, v) >= 0


def _convex_interiors_disjoint(P: Sequence[Point2], Q: Sequence[Point2]) -> bool:
    # separating axis test with touching allowed; P, Q convex and CCW
    for A, B in ((P, Q), (Q, P)):
        n = len(A)
        for i in range(n):
            p, q = A[i], A[(i + 1) % n]
            if all(_cross(p, q, v) <= 0 for v in B):
                return True
    return False


def interiors_disjoint(p: Polygon, q: Polygon) -> bool:
    """True iff the open interiors of ``p`` and ``q`` do not meet."""
    (px0, py0, px1, py1), (qx0, qy0, qx1, qy1) = p.bbox, q.bbox
    if px1 <= qx0 or qx1 <= px0 or py1 <= qy0 or qy1 <= py0:
        return True
    if p.is_convex() and q.is_convex():
        return _convex_interiors_disjoint(p.vertices, q.vertices)
    tp = triangulate(p)
    tq = triangulate(q)
    return all(_convex_interiors_disjoint(s, t) for s in tp for t in tq)


# --------------------------------------------------------------------------
# container regions


@dataclass(frozen=True)
class Box:
    """Rectangle ]0,a[ x ]0,b[."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        if self.a <= 0 or self.b <= 0:
            raise ValueError("box sides must be positive")

    @property
    def polygon(self) -> Polygon:
        return Polygon([(0, 0), (self.a, 0), (self.a, self.b), (0, self.b)])

    @property
    def area(self) -> Fraction:
        return self.a * self.b


@dataclass(frozen=True)
class Simplex:
    """Triangle x1, x2 > 0, x1 + x2 < w."""

    w: Fraction

    def __post_init__(self):
        object.__setattr__(self, "w", as_rational(self.w))
        if self.w <= 0:
            raise ValueError("simplex width must be positive")

    @property
    def polygon(self) -> Polygon:
        return Polygon([(0, 0), (self.w, 0), (0, self.w)])

    @property
    def area(self) -> Fraction:
        return self.w * self.w / 2


@dataclass(frozen=True)
class TruncatedSimplex:
    """Simplex of width ``w_outer`` with the corner simplex of width ``w_inner`` at the origin removed."""

    w_inner: Fraction
    w_outer: Fraction

    def __post_init__(self):
        object.__setattr__(self, "w_inner", as_rational(self.w_inner))
        object.__setattr__(self, "w_outer", as_rational(self.w_outer))
        if not 0 < self.w_inner < self.w_outer:
            raise ValueError("need 0 < w_inner < w_outer")

    @property
    def polygon(self) -> Polygon:
        i, o = self.w_inner, self.w_outer
        return Polygon([(i, 0), (o, 0), (0, o), (0, i)])

    @property
    def area(self) -> Fraction:
        return (self.w_outer**2 - self.w_inner**2) / 2


@dataclass(frozen=True)
class SkewSimplex:
    """Triangle x1/a + x2/b < 1 in the positive quadrant."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        if self.a <= 0 or self.b <= 0:
            raise ValueError("skew simplex sides must be positive")

    @property
    def polygon(self) -> Polygon:
        return Polygon([(0, 0), (self.a, 0), (0, self.b)])

    @property
    def area(self) -> Fraction:
        return self.a * self.b / 2


Region = Union[Box, Simplex, TruncatedSimplex, SkewSimplex]


def contains(container: Region, p: Polygon) -> bool:
    """Closure of ``p`` lies in the closure of ``container``.

    Every region is convex, so checking the vertices of ``p`` suffices.
    """
    c = container.polygon.vertices
    n = len(c)
    return all(_cross(c[i], c[(i + 1) % n], v) >= 0 for i in range(n) for v in p.vertices)


# --------------------------------------------------------------------------
# affine maps and symplectic matrices

RationalMatrix = tuple[tuple[Fraction, ...], ...]


def matrix(rows: Iterable[Iterable[RationalLike]]) -> RationalMatrix:
    m = tuple(tuple(as_rational(x) for x in row) for row in rows)
    if any(len(r) != len(m) for r in m):
        raise ValueError("matrix must be square")
    return m


def mat_mul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def transpose(a: RationalMatrix) -> RationalMatrix:
    return tuple(zip(*a))


def determinant(a: RationalMatrix) -> Fraction:
    m = [list(r) for r in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for j in range(c, n):
                    m[r][j] -= f * m[c][j]
    return det


def diagonal(entries: Iterable[RationalLike]) -> RationalMatrix:
    e = [as_rational(x) for x in entries]
    return tuple(tuple(e[i] if i == j else Fraction(0) for j in range(len(e))) for i in range(len(e)))


def standard_symplectic_form(n: int) -> RationalMatrix:
    """Gram matrix of sum dx_i ^ dy_i in coordinate order (x1..xn, y1..yn)."""
    size = 2 * n
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i in range(n):
        rows[i][n + i] = Fraction(1)
        rows[n + i][i] = Fraction(-1)
    return tuple(tuple(r) for r in rows)


def is_linear_symplectic(m: RationalMatrix) -> bool:
    """m^T J m == J, coordinates ordered as the x-block followed by the y-block."""
    size = len(m)
    if size % 2:
        raise ValueError("symplectic matrices have even dimension")
    J = standard_symplectic_form(size // 2)
    return mat_mul(mat_mul(transpose(m), J), m) == J


@dataclass(frozen=True)
class AffineMap2:
    linear: RationalMatrix
    offset: Point2 = Point2(Fraction(0), Fraction(0))

    def __post_init__(self):
        object.__setattr__(self, "linear", matrix(self.linear))
        object.__setattr__(self, "offset", Point2.of(*self.offset))
        if len(self.linear) != 2:
            raise ValueError("AffineMap2 needs a 2x2 linear part")
        if self.det == 0:
            raise ValueError("singular affine map")

    @property
    def det(self) -> Fraction:
        (a, b), (c, d) = self.linear
        return a * d - b * c

    def __call__(self, pt: Sequence[Fraction]) -> Point2:
        (a, b), (c, d) = self.linear
        return Point2(a * pt[0] + b * pt[1] + self.offset[0], c * pt[0] + d * pt[1] + self.offset[1])

    @classmethod
    def translation(cls, dx: RationalLike, dy: RationalLike) -> "AffineMap2":
        return cls(((1, 0), (0, 1)), Point2.of(dx, dy))


def apply_affine(m: AffineMap2, p: Polygon) -> Polygon:
    return Polygon([m(v) for v in p.vertices])


# --------------------------------------------------------------------------
# convex clipping, used for the exact polygon-difference identity


def clip_halfplane(vs: Sequence[Point2], a: Fraction, b: Fraction, c: Fraction) -> list[Point2]:
    """Sutherland-Hodgman clip of a convex vertex cycle to a*x1 + b*x2 <= c."""
    out: list[Point2] = []
    n = len(vs)
    for i in range(n):
        p, q = vs[i], vs[(i + 1) % n]
        fp = a * p[0] + b * p[1] - c
        fq = a * q[0] + b * q[1] - c
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append(Point2(p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def convex_difference(p: Polygon, t: Polygon) -> Polygon:
    """Closure of ``p`` minus ``t`` when ``t`` is a convex piece cut off by one of its edge lines.

    Raises :class:`InvalidPolygon` if ``t`` is not inside ``p`` or the
    difference is not a single convex polygon obtained that way.
    """
    if not p.is_convex() or not t.is_convex():
        raise InvalidPolygon("convex_difference needs convex operands")
    if not all(_in_convex(v, p.vertices) for v in t.vertices):
        raise InvalidPolygon("subtrahend is not contained in the minuend")
    target = p.area - t.area
    for u, v in t.edges():
        # outer side of edge uv of a CCW polygon: cross(u, v, x) <= 0
        a = v[1] - u[1]
        b = -(v[0] - u[0])
        c = a * u[0] + b * u[1]
        # cross(u,v,x) = -(a*x1 + b*x2 - c); keep cross <= 0  <=>  -(a x1 + b x2) <= -c
        clipped = clip_halfplane(p.vertices, -a, -b, -c)
        if len(clipped) < 3 or _signed_area2(clipped) != 2 * target:
            continue
        return Polygon(clipped)
    raise InvalidPolygon("difference is not a convex polygon cut along an edge of the subtrahend")


def _in_convex(v: Point2, cyc: Sequence[Point2]) -> bool:
    n = len(cyc)
    return all(_cross(cyc[i], cyc[(i + 1) % n], v) >= 0 for i in range(n))
