"""Exceptional classes on blow-ups of CP^2 and of the two S^2-bundles over S^2.

Homology classes are integer coefficient vectors over a named basis:

* ``CP2Blowup(N)``        basis (L, D1..DN),     c1 = 3L - sum D_i
* ``TrivialBundleBlowup`` basis (B, F, E1..Ek),  c1 = 2B + (2-2g)F - sum E_i
* ``TwistedBlowup``       basis (A, F, E1..Ek),  c1 = 2A + (3-2g)F - sum E_i

A class written ``dL - sum m_i D_i`` has coefficient vector ``(d, -m_1, ...)``.
The exceptional set of CP^2 blown up at N <= 8 points is generated twice,
by a bounded search and by Cremona reflections, and the two are required to
coincide.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator, Sequence

from .errors import BasisMismatch, BeyondDemazureRange, RangeError

MAX_CP2_POINTS = 8
MAX_BUNDLE_POINTS = MAX_CP2_POINTS - 1
# a (-1)-class on an 8-point blow-up has degree at most 6
DEGREE_BOUND = 8
BUNDLE_COEFF_BOUND = 8


@dataclass(frozen=True)
class BasisSpec:
    kind: str  # "cp2" | "trivial" | "twisted"
    points: int
    genus: int = 0

    def __post_init__(self):
        if self.kind not in ("cp2", "trivial", "twisted"):
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if self.points < 0 or self.genus < 0:
            raise ValueError("points and genus must be nonnegative")

    @property
    def rank(self) -> int:
        return 1 + self.points if self.kind == "cp2" else 2 + self.points

    @property
    def names(self) -> tuple[str, ...]:
        if self.kind == "cp2":
            return ("L",) + tuple(f"D{i}" for i in range(1, self.points + 1))
        base = ("B", "F") if self.kind == "trivial" else ("A", "F")
        return base + tuple(f"E{i}" for i in range(1, self.points + 1))

    def gram(self) -> tuple[tuple[int, ...], ...]:
        n = self.rank
        g = [[0] * n for _ in range(n)]
        if self.kind == "cp2":
            g[0][0] = 1
            first = 1
        else:
            if self.kind == "trivial":
                g[0][1] = g[1][0] = 1
            else:
                g[0][0] = -1
                g[0][1] = g[1][0] = 1
            first = 2
        for i in range(first, n):
            g[i][i] = -1
        return tuple(tuple(r) for r in g)

    def c1(self) -> "HomologyClass":
        if self.kind == "cp2":
            head = (3,)
        elif self.kind == "trivial":
            head = (2, 2 - 2 * self.genus)
        else:
            head = (2, 3 - 2 * self.genus)
        return HomologyClass(self, head + (-1,) * self.points)


def CP2Blowup(n: int) -> BasisSpec:
    return BasisSpec("cp2", n)


def TrivialBundleBlowup(k: int, genus: int = 0) -> BasisSpec:
    return BasisSpec("trivial", k, genus)


def TwistedBlowup(k: int, genus: int = 0) -> BasisSpec:
    return BasisSpec("twisted", k, genus)


@dataclass(frozen=True)
class HomologyClass:
    basis: BasisSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != self.basis.rank:
            raise BasisMismatch(f"{len(self.coeffs)} coefficients for a rank-{self.basis.rank} basis")

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        _same_basis(self, other)
        return HomologyClass(self.basis, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        _same_basis(self, other)
        return HomologyClass(self.basis, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __mul__(self, n: int) -> "HomologyClass":
        return HomologyClass(self.basis, tuple(n * x for x in self.coeffs))

    __rmul__ = __mul__

    def __str__(self) -> str:
        terms = []
        for name, c in zip(self.basis.names, self.coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            terms.append(f"{sign}{mag}{name}")
        if not terms:
            return "0"
        s = "".join(terms)
        return s[1:] if s[0] == "+" else s

    @property
    def head(self) -> tuple[int, ...]:
        """Coefficients on the non-exceptional generators."""
        return self.coeffs[:1] if self.basis.kind == "cp2" else self.coeffs[:2]

    @property
    def multiplicities(self) -> tuple[int, ...]:
        """The m_i in ``... - sum m_i E_i``."""
        return tuple(-c for c in self.coeffs[len(self.head):])

    def self_intersection(self) -> int:
        return intersection(self, self)

    def chern(self) -> int:
        return intersection(self.basis.c1(), self)

    def is_exceptional(self) -> bool:
        return self.self_intersection() == -1 and self.chern() == 1


def _same_basis(x: HomologyClass, y: HomologyClass) -> None:
    if x.basis != y.basis:
        raise BasisMismatch(f"classes over different bases: {x.basis} vs {y.basis}")


def intersection(x: HomologyClass, y: HomologyClass) -> int:
    _same_basis(x, y)
    g = x.basis.gram()
    return sum(x.coeffs[i] * g[i][j] * y.coeffs[j] for i in range(len(g)) for j in range(len(g)) if g[i][j])


def generator(basis: BasisSpec, name: str) -> HomologyClass:
    idx = basis.names.index(name)
    return HomologyClass(basis, tuple(1 if i == idx else 0 for i in range(basis.rank)))


# --------------------------------------------------------------------------
# CP^2 blown up at N points


def canonical_key(e: HomologyClass) -> tuple:
    # degree, then sorted multiplicities, then the index pattern
    m = e.multiplicities
    return (e.coeffs[0], tuple(sorted(m, reverse=True)), tuple(-abs(x) for x in m), m)


def _check_cp2_points(n: int) -> None:
    if not 1 <= n <= MAX_CP2_POINTS:
        if n > MAX_CP2_POINTS:
            raise BeyondDemazureRange(f"{n} blow-up points: the exceptional set is infinite beyond 8 points")
        raise RangeError("need at least one blow-up point")


def _descending_tuples(length: int, total: int, squares: int, hi: int, lo: int) -> Iterator[tuple[int, ...]]:
    """Non-increasing integer tuples in [lo, hi] with given sum and sum of squares."""
    if length == 0:
        if total == 0 and squares == 0:
            yield ()
        return
    for first in range(min(hi, math.isqrt(squares)), lo - 1, -1):
        rest_sq = squares - first * first
        rest_sum = total - first
        r = length - 1
        # Cauchy-Schwarz on the tail, and the tail sits below `first`
        if rest_sum * rest_sum > r * rest_sq:
            continue
        if rest_sum > r * first or rest_sum < r * lo:
            continue
        for tail in _descending_tuples(r, rest_sum, rest_sq, first, lo):
            yield (first,) + tail


def _distinct_permutations(t: Sequence[int]) -> set[tuple[int, ...]]:
    return set(permutations(t))


@lru_cache(maxsize=None)
def _brute_force_cp2(n: int) -> frozenset[HomologyClass]:
    basis = CP2Blowup(n)
    found = set()
    for d in range(-DEGREE_BOUND, DEGREE_BOUND + 1):
        # d^2 - sum m^2 = -1 and 3d - sum m = 1
        squares = d * d + 1
        total = 3 * d - 1
        bound = math.isqrt(squares)
        for ms in _descending_tuples(n, total, squares, bound, -bound):
            for perm in _distinct_permutations(ms):
                found.add(HomologyClass(basis, (d,) + tuple(-m for m in perm)))
    return frozenset(found)


def _cremona_orbit_cp2(n: int) -> frozenset[HomologyClass]:
    big = max(n, 3)
    basis = CP2Blowup(big)
    roots = []
    for i, j, k in combinations(range(1, big + 1), 3):
        v = [0] * (big + 1)
        v[0] = 1
        v[i] = v[j] = v[k] = -1
        roots.append(tuple(v))
    for i, j in combinations(range(1, big + 1), 2):
        v = [0] * (big + 1)
        v[i], v[j] = 1, -1
        roots.append(tuple(v))
    g = basis.gram()

    def pair(x, y):
        return sum(x[i] * g[i][i] * y[i] for i in range(len(x)))

    seeds = [tuple(1 if i == j else 0 for i in range(big + 1)) for j in range(1, big + 1)]
    orbit = set(seeds)
    frontier = list(seeds)
    while frontier:
        nxt = []
        for e in frontier:
            for r in roots:
                # reflection in a (-2)-root: e + (e.r) r
                s = pair(e, r)
                if s == 0:
                    continue
                img = tuple(x + s * y for x, y in zip(e, r))
                if img not in orbit:
                    orbit.add(img)
                    nxt.append(img)
        frontier = nxt
    small = CP2Blowup(n)
    return frozenset(HomologyClass(small, c[: n + 1]) for c in orbit if not any(c[n + 1 :]))


@lru_cache(maxsize=None)
def enumerate_exceptional_cp2(n: int) -> tuple[HomologyClass, ...]:
    """All exceptional classes of CP^2 blown up at ``n`` <= 8 points, canonically sorted.

    The bounded search and the Cremona orbit must agree exactly; a mismatch is
    raised as an error rather than resolved.
    """
    _check_cp2_points(n)
    brute = _brute_force_cp2(n)
    orbit = _cremona_orbit_cp2(n)
    if brute != orbit:
        raise RuntimeError(
            f"exceptional class generators disagree for N={n}: "
            f"{len(brute - orbit)} only by search, {len(orbit - brute)} only by Cremona orbit"
        )
    return tuple(sorted(brute, key=canonical_key))


def cremona_orbit_cp2(n: int) -> tuple[HomologyClass, ...]:
    _check_cp2_points(n)
    return tuple(sorted(_cremona_orbit_cp2(n), key=canonical_key))


def brute_force_cp2(n: int) -> tuple[HomologyClass, ...]:
    _check_cp2_points(n)
    return tuple(sorted(_brute_force_cp2(n), key=canonical_key))


# --------------------------------------------------------------------------
# basis changes (the diffeomorphisms of bundle blow-ups with CP^2 blow-ups)


def _check_bundle_points(k: int, minimum: int = 1) -> None:
    if k > MAX_BUNDLE_POINTS:
        raise BeyondDemazureRange(f"k={k}: beyond Demazure range (k+1 > 8 blow-up points)")
    if k < minimum:
        raise RangeError(f"k must be at least {minimum}")


def basis_change_trivial(x: HomologyClass) -> HomologyClass:
    """CP2Blowup(k+1) -> TrivialBundleBlowup(k): L->B+F-E1, D1->B-E1, D2->F-E1, D_{i+1}->E_i."""
    if x.basis.kind != "cp2" or x.basis.points < 2:
        raise BasisMismatch("expected a class over CP2Blowup(k+1) with k >= 1")
    d, c1, c2, *rest = x.coeffs
    k = x.basis.points - 1
    return HomologyClass(TrivialBundleBlowup(k), (d + c1, d + c2, -d - c1 - c2, *rest))


def basis_change_trivial_inverse(x: HomologyClass) -> HomologyClass:
    if x.basis.kind != "trivial" or x.basis.genus != 0 or x.basis.points < 1:
        raise BasisMismatch("expected a class over TrivialBundleBlowup(k) with k >= 1")
    n1, n2, e1, *rest = x.coeffs
    return HomologyClass(CP2Blowup(x.basis.points + 1), (n1 + n2 + e1, -n2 - e1, -n1 - e1, *rest))


def basis_change_twisted(x: HomologyClass) -> HomologyClass:
    """CP2Blowup(k+1) -> TwistedBlowup(k): L->A+F, D1->A, D_{i+1}->E_i."""
    if x.basis.kind != "cp2" or x.basis.points < 1:
        raise BasisMismatch("expected a class over CP2Blowup(k+1)")
    d, c1, *rest = x.coeffs
    return HomologyClass(TwistedBlowup(x.basis.points - 1), (d + c1, d, *rest))


def basis_change_twisted_inverse(x: HomologyClass) -> HomologyClass:
    if x.basis.kind != "twisted" or x.basis.genus != 0:
        raise BasisMismatch("expected a class over TwistedBlowup(k, g=0)")
    n1, n2, *rest = x.coeffs
    return HomologyClass(CP2Blowup(x.basis.points + 1), (n2, n1 - n2, *rest))


# --------------------------------------------------------------------------
# the Diophantine systems for the bundles

Solution = tuple[int, ...]  # (n1, n2, m1, ..., mk), m descending


def _bundle_solutions(k: int, square_rhs, linear_rhs) -> tuple[Solution, ...]:
    out = []
    for n1 in range(BUNDLE_COEFF_BOUND + 1):
        for n2 in range(BUNDLE_COEFF_BOUND + 1):
            squares = square_rhs(n1, n2) + 1
            total = linear_rhs(n1, n2) - 1
            if squares < 0 or total < 0:
                continue
            for ms in _descending_tuples(k, total, squares, math.isqrt(squares), 0):
                out.append((n1, n2) + ms)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def solve_diophantine_trivial(k: int) -> tuple[Solution, ...]:
    """Nonnegative solutions of 2 n1 n2 = sum m^2 - 1, 2 n1 + 2 n2 = sum m + 1."""
    _check_bundle_points(k)
    return _bundle_solutions(k, lambda n1, n2: 2 * n1 * n2, lambda n1, n2: 2 * n1 + 2 * n2)


@lru_cache(maxsize=None)
def solve_diophantine_twisted(k: int) -> tuple[Solution, ...]:
    """Nonnegative solutions of n1 (2 n2 - n1) = sum m^2 - 1, n1 + 2 n2 = sum m + 1."""
    _check_bundle_points(k)
    return _bundle_solutions(k, lambda n1, n2: n1 * (2 * n2 - n1), lambda n1, n2: n1 + 2 * n2)


def solution_class(sol: Solution, basis: BasisSpec) -> HomologyClass:
    n1, n2, *ms = sol
    return HomologyClass(basis, (n1, n2, *(-m for m in ms)))


def _nonnegative_images(k: int, change) -> set[Solution]:
    out = set()
    for e in enumerate_exceptional_cp2(k + 1):
        img = change(e)
        ms = img.multiplicities
        if all(m >= 0 for m in ms):
            out.add(tuple(img.head) + tuple(sorted(ms, reverse=True)))
    return out


def trivial_solutions_via_cp2(k: int) -> tuple[Solution, ...]:
    _check_bundle_points(k)
    return tuple(sorted(_nonnegative_images(k, basis_change_trivial)))


def twisted_solutions_via_cp2(k: int) -> tuple[Solution, ...]:
    _check_bundle_points(k, minimum=0)
    return tuple(sorted(_nonnegative_images(k, basis_change_twisted)))


def exceptional_classes_sigma_g(k: int, genus: int, twisted: bool = True) -> tuple[HomologyClass, ...]:
    """{E_1..E_k, F-E_1..F-E_k} on a bundle over a surface of genus >= 1 blown up at k points."""
    if genus < 1:
        raise RangeError("genus 0 bundles: use the bundle enumerators")
    if k < 1:
        raise RangeError("k must be at least 1")
    basis = TwistedBlowup(k, genus) if twisted else TrivialBundleBlowup(k, genus)
    F = generator(basis, "F")
    es = [generator(basis, f"E{i}") for i in range(1, k + 1)]
    return tuple(es) + tuple(F - e for e in es)


def classes_for_model(model: str, points: int) -> tuple[HomologyClass, ...]:
    """Exceptional classes for the CLI: all of them for cp2, the m >= 0 ones for the bundles."""
    if model == "cp2":
        return enumerate_exceptional_cp2(points)
    if model == "trivial":
        basis = TrivialBundleBlowup(points)
        return tuple(solution_class(s, basis) for s in solve_diophantine_trivial(points))
    if model == "twisted":
        basis = TwistedBlowup(points)
        return tuple(solution_class(s, basis) for s in solve_diophantine_twisted(points))
    raise ValueError(f"unknown model {model!r}")

