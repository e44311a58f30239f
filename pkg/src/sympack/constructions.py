"""Explicit ball packings, described through their shadows in the x-plane.

A piece certifies that B^4(c) embeds into ``piece x unit square``.  Right
isosceles triangles of leg c are the basic certificate; the handful of
quadrilaterals read off the published pictures are accepted as such, and
anything user-supplied is carried as ``Trusted`` and reported.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Mapping, Optional, Union

from .errors import RangeError, RegimeViolation
from .geometry import (
    Box,
    Polygon,
    Region,
    Simplex,
    TruncatedSimplex,
    RationalLike,
    as_rational,
    contains,
    convex_difference,
    diagonal,
    format_rational,
    interiors_disjoint,
    is_linear_symplectic,
    matrix,
)

F = Fraction
ZERO, ONE = F(0), F(1)

# --------------------------------------------------------------------------
# certificates

ORIENTATIONS = {"NE": (1, 1), "NW": (-1, 1), "SE": (1, -1), "SW": (-1, -1)}


@dataclass(frozen=True)
class Triangle:
    orientation: str

    def __post_init__(self):
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f"unknown orientation {self.orientation!r}")

    @property
    def tag(self) -> str:
        return f"triangle-{self.orientation}"


@dataclass(frozen=True)
class PaperQuadrilateral:
    family: str

    @property
    def tag(self) -> str:
        return f"quadrilateral-{self.family}"


@dataclass(frozen=True)
class Trusted:
    note: str = ""

    @property
    def tag(self) -> str:
        return "trusted"


Certificate = Union[Triangle, PaperQuadrilateral, Trusted]


def parse_certificate(tag: str, note: str = "") -> Certificate:
    if tag.startswith("triangle-"):
        return Triangle(tag.split("-", 1)[1])
    if tag.startswith("quadrilateral-"):
        return PaperQuadrilateral(tag.split("-", 1)[1])
    if tag == "trusted":
        return Trusted(note)
    raise ValueError(f"unknown certificate {tag!r}")


def corner_triangle(x: RationalLike, y: RationalLike, c: RationalLike, orientation: str) -> Polygon:
    """Right isosceles triangle with the right angle at (x, y) and legs of length c."""
    x, y, c = as_rational(x), as_rational(y), as_rational(c)
    sx, sy = ORIENTATIONS[orientation]
    return Polygon([(x, y), (x + sx * c, y), (x, y + sy * c)])


def triangle_matches(poly: Polygon, c: Fraction, orientation: str) -> bool:
    if len(poly) != 3:
        return False
    for v in poly.vertices:
        if corner_triangle(v[0], v[1], c, orientation) == poly:
            return True
    return False


@dataclass(frozen=True)
class ShadowPiece:
    poly: Polygon
    capacity: Fraction
    certificate: Certificate

    def __post_init__(self):
        object.__setattr__(self, "capacity", as_rational(self.capacity))
        if self.capacity <= 0:
            raise ValueError("capacity must be positive")

    @property
    def ball_area(self) -> Fraction:
        return self.capacity**2 / 2

    def certificate_valid(self) -> bool:
        cert = self.certificate
        if isinstance(cert, Triangle):
            return triangle_matches(self.poly, self.capacity, cert.orientation)
        if isinstance(cert, PaperQuadrilateral):
            return self.poly.area == self.ball_area
        return True


def triangle_piece(x, y, c, orientation: str) -> ShadowPiece:
    return ShadowPiece(corner_triangle(x, y, c, orientation), as_rational(c), Triangle(orientation))


# --------------------------------------------------------------------------
# packings and verification


@dataclass(frozen=True)
class ShadowPacking:
    container: Region
    pieces: tuple[ShadowPiece, ...]
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def fill(self) -> Fraction:
        return sum((p.ball_area for p in self.pieces), ZERO) / self.container.area

    def subset(self, count: int) -> "ShadowPacking":
        if not 0 < count <= len(self.pieces):
            raise RangeError(f"cannot take {count} of {len(self.pieces)} pieces")
        meta = dict(self.meta, count=str(count))
        return ShadowPacking(self.container, self.pieces[:count], meta)


@dataclass(frozen=True)
class VerificationReport:
    disjoint: bool
    contained: bool
    fill: Fraction
    certificates_ok: bool
    certificates_valid: bool
    areas_ok: bool
    overlapping: tuple[tuple[int, int], ...] = ()
    outside: tuple[int, ...] = ()

    @property
    def ok(self) -> bool:
        return self.disjoint and self.contained and self.certificates_valid and self.areas_ok and self.fill <= 1

    def to_json(self) -> dict:
        return {
            "disjoint": self.disjoint,
            "contained": self.contained,
            "fill": format_rational(self.fill),
            "certificates_ok": self.certificates_ok,
            "certificates_valid": self.certificates_valid,
            "areas_ok": self.areas_ok,
            "overlapping": [list(p) for p in self.overlapping],
            "outside": list(self.outside),
        }


def verify(packing: ShadowPacking) -> VerificationReport:
    pieces = packing.pieces
    overlapping = tuple(
        (i, j) for i, j in combinations(range(len(pieces)), 2)
        if not interiors_disjoint(pieces[i].poly, pieces[j].poly)
    )
    outside = tuple(i for i, p in enumerate(pieces) if not contains(packing.container, p.poly))
    return VerificationReport(
        disjoint=not overlapping,
        contained=not outside,
        fill=packing.fill,
        certificates_ok=not any(isinstance(p.certificate, Trusted) for p in pieces),
        certificates_valid=all(p.certificate_valid() for p in pieces),
        areas_ok=all(p.poly.area >= p.ball_area for p in pieces),
        overlapping=overlapping,
        outside=outside,
    )


def _meta(name: str, **params) -> dict:
    return {"construction": name, **{k: format_rational(as_rational(v)) for k, v in params.items()}}


# --------------------------------------------------------------------------
# S^2(a) x S^2(b)


def build_rows_trivial(a: RationalLike, b: RationalLike, k: int) -> ShadowPacking:
    """k triangles of width b, two per b-square, filling the box from the left."""
    a, b = as_rational(a), as_rational(b)
    if not (0 < b <= a) or k < 1:
        raise RangeError("need 0 < b <= a and k >= 1")
    if (k + 1) // 2 * b > a:
        raise RegimeViolation(f"{(k + 1) // 2} squares of side {b} do not fit into width {a}")
    pieces = []
    for i in range(k):
        col = i // 2
        if i % 2 == 0:
            pieces.append(triangle_piece(col * b, 0, b, "NE"))
        else:
            pieces.append(triangle_piece((col + 1) * b, b, b, "SW"))
    return ShadowPacking(Box(a, b), pieces, _meta("rows-trivial", a=a, b=b, k=k))


def k34_capacity(a: Fraction, b: Fraction) -> Fraction:
    return (a + b) / 3


def k34_quadrilaterals(a: RationalLike, b: RationalLike) -> tuple[Polygon, Polygon]:
    """The slanted piece of the three and four ball packings, and its mirror image."""
    a, b = as_rational(a), as_rational(b)
    c = k34_capacity(a, b)
    q = Polygon([(0, c), (a - c, b - c), (c, c), (a - c, b)])
    # point reflection through the centre of the box
    q2 = Polygon([(a - x, b - y) for x, y in q.vertices])
    return q, q2


def build_k34_trivial(a: RationalLike, b: RationalLike, k: int) -> ShadowPacking:
    a, b = as_rational(a), as_rational(b)
    if k not in (3, 4):
        raise RangeError("this construction is for k = 3 or 4")
    if not (b > 0 and 2 * b >= a >= b):
        raise RegimeViolation("needs 1/2 <= b/a <= 1")
    c = k34_capacity(a, b)
    q, q2 = k34_quadrilaterals(a, b)
    cert = PaperQuadrilateral("k34")
    pieces = [triangle_piece(0, 0, c, "NE"), ShadowPiece(q, c, cert), ShadowPiece(q2, c, cert)]
    if k == 4:
        pieces.append(triangle_piece(a, b, c, "SW"))
    return ShadowPacking(Box(a, b), pieces, _meta("k34-trivial", a=a, b=b, k=k))


def build_full_square_grid(m: int, b: RationalLike, l: int) -> ShadowPacking:
    """Box(m b, b) cut into (b/l)-squares, each split along its anti-diagonal."""
    b = as_rational(b)
    if m < 1 or l < 1 or b <= 0:
        raise RangeError("need m, l >= 1 and b > 0")
    s = b / l
    pieces = []
    for i in range(m * l):
        for j in range(l):
            pieces.append(triangle_piece(i * s, j * s, s, "NE"))
            pieces.append(triangle_piece((i + 1) * s, (j + 1) * s, s, "SW"))
    return ShadowPacking(Box(m * b, b), pieces, _meta("square-grid", m=m, b=b, l=l))


# --------------------------------------------------------------------------
# the twisted bundle, as the truncated simplex alpha < x1 + x2 < alpha + beta


def _strip_pieces(alpha: Fraction, beta: Fraction, k: int) -> list[ShadowPiece]:
    ups = (k + 1) // 2
    downs = k // 2
    pieces = []
    for i in range(ups):
        pieces.append(triangle_piece(alpha - i * beta, i * beta, beta, "NE"))
        if i < downs:
            pieces.append(triangle_piece(alpha - i * beta, (i + 1) * beta, beta, "SW"))
    return pieces


def build_strip_twisted(a: RationalLike, b: RationalLike, k: int) -> ShadowPacking:
    """Alternating up and down triangles of width beta along the diagonal strip."""
    a, b = as_rational(a), as_rational(b)
    if not a > b / 2 > 0 or k < 1:
        raise RangeError("need a > b/2 > 0 and k >= 1")
    alpha, beta = a - b / 2, b
    if k // 2 * beta > alpha:
        raise RegimeViolation(f"{k} balls of width {beta} do not fit along the strip")
    return ShadowPacking(TruncatedSimplex(alpha, alpha + beta), _strip_pieces(alpha, beta, k),
                         _meta("strip-twisted", a=a, b=b, k=k))


def build_shells_twisted(l: int, m: int, t: RationalLike = 1) -> ShadowPacking:
    """Full packing at beta/alpha = l/(m-l), one strip packing per shell."""
    t = as_rational(t)
    if not m > l >= 1 or t <= 0:
        raise RangeError("need m > l >= 1 and t > 0")
    alpha, beta = (m - l) * t, l * t
    pieces = []
    for i in range(1, l + 1):
        pieces.extend(_strip_pieces((m - i) * t, t, 2 * m + 1 - 2 * i))
    return ShadowPacking(TruncatedSimplex(alpha, alpha + beta), pieces, _meta("shells-twisted", l=l, m=m, t=t))


def shell_counts(l: int, m: int) -> tuple[int, ...]:
    return tuple(2 * m + 1 - 2 * i for i in range(1, l + 1))


def six_ball_capacity(alpha: Fraction, beta: Fraction) -> Fraction:
    return (alpha + 3 * beta) / 6


def six_ball_quadrilateral(alpha: RationalLike, beta: RationalLike) -> ShadowPiece:
    """The slanted middle piece of the six ball packing, valid for 1/3 <= beta/alpha <= 5/3."""
    alpha, beta = as_rational(alpha), as_rational(beta)
    if not (alpha > 0 and 3 * beta >= alpha and 3 * beta <= 5 * alpha):
        raise RegimeViolation("needs 1/3 <= beta/alpha <= 5/3")
    c = six_ball_capacity(alpha, beta)
    s = alpha + beta
    poly = Polygon([(s - 2 * c, c), (s / 2, s / 2), (s - c, c), (s / 2, s / 2 - c)])
    return ShadowPiece(poly, c, PaperQuadrilateral("six-ball"))


# --------------------------------------------------------------------------
# CP^2


def build_grid_cp2(w: RationalLike, l: int, count: Optional[int] = None) -> ShadowPacking:
    """The simplex of width w tiled by l^2 triangles of width w/l."""
    w = as_rational(w)
    if l < 1 or w <= 0:
        raise RangeError("need l >= 1 and w > 0")
    s = w / l
    pieces = []
    for i in range(l):
        for j in range(l - i):
            pieces.append(triangle_piece(i * s, j * s, s, "NE"))
            if i + j <= l - 2:
                pieces.append(triangle_piece((i + 1) * s, (j + 1) * s, s, "SW"))
    packing = ShadowPacking(Simplex(w), pieces, _meta("grid-cp2", w=w, l=l))
    return packing if count is None else packing.subset(count)


# --------------------------------------------------------------------------
# blowing up a point of the bundle


@dataclass(frozen=True)
class BallList:
    capacities: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "capacities", tuple(sorted((as_rational(c) for c in self.capacities), reverse=True)))
        if any(c <= 0 for c in self.capacities):
            raise ValueError("ball capacities must be positive")

    @property
    def volume(self) -> Fraction:
        return sum((c * c / 2 for c in self.capacities), ZERO)


@dataclass(frozen=True)
class CP2Instance:
    width: Fraction
    balls: BallList


@dataclass(frozen=True)
class BundleInstance:
    a: Fraction
    b: Fraction
    c: Fraction
    k: int


def blowup_correspondence(a: RationalLike, b: RationalLike, c: RationalLike, k: int) -> CP2Instance:
    """k balls B(c) in S^2(a) x S^2(b) versus CP^2(a+b-c) with balls a-c, b-c and k-1 copies of c."""
    a, b, c = as_rational(a), as_rational(b), as_rational(c)
    if not (0 < c < b <= a) or k < 1:
        raise RangeError("need 0 < c < b <= a and k >= 1")
    width = a + b - c
    if width**2 - (a - c) ** 2 - (b - c) ** 2 != 2 * a * b - c**2:
        raise AssertionError("volume identity failed")
    return CP2Instance(width, BallList((a - c, b - c) + (c,) * (k - 1)))


def blowup_correspondence_inverse(inst: CP2Instance, k: int) -> BundleInstance:
    caps = list(inst.balls.capacities)
    if len(caps) != k + 1:
        raise RangeError(f"expected {k + 1} balls, got {len(caps)}")
    # the two special balls sum to width - c; try each pair
    for i, j in combinations(range(len(caps)), 2):
        c = inst.width - caps[i] - caps[j]
        rest = caps[:i] + caps[i + 1:j] + caps[j + 1:]
        if c > 0 and all(r == c for r in rest):
            x, y = sorted((caps[i], caps[j]), reverse=True)
            return BundleInstance(x + c, y + c, c, k)
    raise RangeError("ball list is not of the blown-up form")


def blowup_region_sides(a: RationalLike, b: RationalLike, c: RationalLike) -> tuple[Polygon, Polygon]:
    """Both sides of the region identity as explicit polygons."""
    a, b, c = as_rational(a), as_rational(b), as_rational(c)
    if not 0 < c < b <= a:
        raise RangeError("need 0 < c < b <= a")
    w = a + b - c
    left = Simplex(w).polygon
    left = convex_difference(left, Polygon([(a, 0), (w, 0), (a, b - c)]))
    left = convex_difference(left, Polygon([(0, b), (0, w), (a - c, b)]))
    right = convex_difference(Box(a, b).polygon, Polygon([(a, b - c), (a, b), (a - c, b)]))
    return left, right


def region_identity_figure9(a: RationalLike, b: RationalLike, c: RationalLike) -> bool:
    left, right = blowup_region_sides(a, b, c)
    return left == right


# --------------------------------------------------------------------------
# stackings in higher dimension: x-simplex times y-box


@dataclass(frozen=True)
class StackPiece:
    """Image of Delta^n(c) x unit cube under a diagonal linear map, shifted in y."""

    capacity: Fraction
    scales: tuple[Fraction, ...]  # (x_1..x_n, y_1..y_n) diagonal of the map
    y_offset: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.y_offset)

    @property
    def x_widths(self) -> tuple[Fraction, ...]:
        return tuple(self.capacity * s for s in self.scales[: self.n])

    @property
    def y_box(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple((o, o + s) for o, s in zip(self.y_offset, self.scales[self.n:]))

    @property
    def volume(self) -> Fraction:
        return math.prod(self.x_widths, start=ONE) / math.factorial(self.n) * math.prod(
            (hi - lo for lo, hi in self.y_box), start=ONE)

    @property
    def ball_volume(self) -> Fraction:
        return self.capacity**self.n / math.factorial(self.n)

    def map_symplectic(self) -> bool:
        return is_linear_symplectic(diagonal(self.scales))


@dataclass(frozen=True)
class StackPacking:
    x_widths: tuple[Fraction, ...]
    y_box: tuple[tuple[Fraction, Fraction], ...]
    pieces: tuple[StackPiece, ...]
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        caps = {p.capacity for p in self.pieces}
        if len(caps) > 1:
            raise ValueError("stack packings use balls of one size")

    @property
    def n(self) -> int:
        return len(self.x_widths)

    @property
    def volume(self) -> Fraction:
        return math.prod(self.x_widths, start=ONE) / math.factorial(self.n) * math.prod(
            (hi - lo for lo, hi in self.y_box), start=ONE)

    @property
    def fill(self) -> Fraction:
        return sum((p.ball_volume for p in self.pieces), ZERO) / self.volume


@dataclass(frozen=True)
class StackReport:
    disjoint: bool
    contained: bool
    symplectic: bool
    volumes_match: bool
    fill: Fraction

    @property
    def ok(self) -> bool:
        return self.disjoint and self.contained and self.symplectic and self.volumes_match

    def to_json(self) -> dict:
        return {"disjoint": self.disjoint, "contained": self.contained, "symplectic": self.symplectic,
                "volumes_match": self.volumes_match, "fill": format_rational(self.fill)}


def _boxes_disjoint(p, q) -> bool:
    return any(ph <= ql or qh <= pl for (pl, ph), (ql, qh) in zip(p, q))


def verify_stack(s: StackPacking) -> StackReport:
    # every piece shares the corner of the x-simplex, so disjointness lives in y
    disjoint = all(_boxes_disjoint(p.y_box, q.y_box) for p, q in combinations(s.pieces, 2))
    contained = all(
        all(w <= W for w, W in zip(p.x_widths, s.x_widths))
        and all(L <= lo and hi <= H for (lo, hi), (L, H) in zip(p.y_box, s.y_box))
        for p in s.pieces
    )
    return StackReport(
        disjoint=disjoint,
        contained=contained,
        symplectic=all(p.map_symplectic() for p in s.pieces),
        volumes_match=all(p.volume == p.ball_volume for p in s.pieces),
        fill=s.fill,
    )


def build_stack_ball_highdim(n: int, l: int) -> StackPacking:
    """l^n balls B^{2n}(1/l) in Delta^n(1) x unit cube, stacked on a y-grid of mesh 1/l."""
    if n < 1 or l < 1:
        raise RangeError("need n, l >= 1")
    step = F(1, l)
    scales = (F(l),) * n + (step,) * n
    pieces = [StackPiece(step, scales, tuple(j * step for j in idx)) for idx in product(range(l), repeat=n)]
    return StackPacking((ONE,) * n, ((ZERO, ONE),) * n, pieces, _meta("stack-ball", n=n, l=l))


def build_ellipsoid_full(k: int) -> StackPacking:
    """k unit balls in Delta(1, k) x unit square: the full packing of E(1, k)."""
    if k < 1:
        raise RangeError("need k >= 1")
    scales = (ONE, F(k), ONE, F(1, k))
    pieces = [StackPiece(ONE, scales, (ZERO, F(i, k))) for i in range(k)]
    return StackPacking((ONE, F(k)), ((ZERO, ONE), (ZERO, ONE)), pieces, _meta("ellipsoid-full", k=k))


# --------------------------------------------------------------------------
# the surface times torus embedding

# (x1, x2, y1, y2) -> (x1 + y2, -y2, y1, y1 + x2) in x-block, y-block order
PHI_MATRIX = matrix([[1, 0, 0, 1], [0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 1, 0]])


def phi(x1: Fraction, y1: Fraction, x2: Fraction, y2: Fraction) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    return x1 + y2, y1, -y2, y1 + x2


def _frac(q: Fraction) -> Fraction:
    return q - math.floor(q)


def _preimages(a: Fraction, X1: Fraction, Y1: Fraction, X2: Fraction, Y2: Fraction) -> list[tuple]:
    """All points of R(a) x R(a) whose image has first pair (X1, Y1) and torus pair (X2, Y2) mod 1."""
    out = []
    y1 = Y1
    if not 0 < y1 < a:
        return out
    # y2 = -X2 + n3 in (0, a);  x2 = Y2 - y1 + n4 in (0, 1)
    for n3 in range(math.floor(X2), math.ceil(X2 + a) + 1):
        y2 = n3 - X2
        if not 0 < y2 < a:
            continue
        x1 = X1 - y2
        if not 0 < x1 < 1:
            continue
        base = Y2 - y1
        for n4 in range(-math.ceil(abs(base)) - 1, math.ceil(abs(base)) + 2):
            x2 = base + n4
            if 0 < x2 < 1:
                out.append((x1, y1, x2, y2))
    return out


@dataclass(frozen=True)
class JiangReport:
    a: Fraction
    symplectic: bool
    samples: int
    collisions: int
    unique_preimages: bool
    stated_box: bool
    plane_pair_bounded: bool
    area: Fraction

    @property
    def ok(self) -> bool:
        return self.symplectic and self.collisions == 0 and self.unique_preimages and self.stated_box

    def to_json(self) -> dict:
        return {
            "a": format_rational(self.a), "symplectic": self.symplectic, "samples": self.samples,
            "collisions": self.collisions, "unique_preimages": self.unique_preimages,
            "stated_box": self.stated_box, "plane_pair_bounded": self.plane_pair_bounded,
            "target_area": format_rational(self.area),
        }


def check_jiang_embedding(a: RationalLike, samples: int = 10_000, seed: int = 0, denominator: int = 997) -> JiangReport:
    """Sample R(a) x R(a) with exact rationals and test the embedding claims."""
    a = as_rational(a)
    if a < 1:
        raise RangeError("needs a >= 1")
    rng = random.Random(seed)

    def open_unit() -> Fraction:
        return F(rng.randint(1, denominator - 1), denominator)

    seen: dict[tuple, tuple] = {}
    collisions = 0
    unique = True
    torus_box = plane_box = True
    for _ in range(samples):
        x1, x2 = open_unit(), open_unit()
        y1, y2 = a * open_unit(), a * open_unit()
        X1, Y1, X2, Y2 = phi(x1, y1, x2, y2)
        key = (X1, Y1, _frac(X2), _frac(Y2))
        pt = (x1, y1, x2, y2)
        if key in seen and seen[key] != pt:
            collisions += 1
        seen.setdefault(key, pt)
        if _preimages(a, X1, Y1, _frac(X2), _frac(Y2)) != [pt]:
            unique = False
        torus_box &= -a < X2 < 0 and -a - 1 < Y2 < a + 1
        plane_box &= 0 < X1 < a + 1 and 0 < Y1 < a
    return JiangReport(a, is_linear_symplectic(PHI_MATRIX), samples, collisions, unique,
                       torus_box, plane_box, 2 * a * (a + 1))


# --------------------------------------------------------------------------
# registry used by the command line

CONSTRUCTIONS = {
    "rows-trivial": (build_rows_trivial, ("a", "b", "k")),
    "k34-trivial": (build_k34_trivial, ("a", "b", "k")),
    "square-grid": (build_full_square_grid, ("m", "b", "l")),
    "strip-twisted": (build_strip_twisted, ("a", "b", "k")),
    "shells-twisted": (build_shells_twisted, ("l", "m", "t")),
    "grid-cp2": (build_grid_cp2, ("w", "l")),
}
INTEGER_PARAMS = {"k", "l", "m"}
