"""Exhaustive small-d checks of the counting and isoperimetric lemmas.

Each function returns the exact quantity next to the closed-form bound it
is compared against.  Bounds that are only asymptotic carry a configurable
constant and are reported, not asserted.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Iterator

import mpmath

from .cube import (
    Cube,
    Side,
    distance,
    even_hamming_ball,
    interior,
    is_k_linked,
    k_components,
    neighborhood,
    parity,
    side_of,
)
from .errors import InstanceTooLarge

MAX_LAB_DIM = 4


def _guard(cube: Cube, limit: int = MAX_LAB_DIM) -> None:
    if cube.d > limit:
        raise InstanceTooLarge("instance too large: exhaustive scan refused for d=%d" % cube.d)


def compositions(m: int) -> Iterator[tuple[int, ...]]:
    """All compositions of m, generated by choosing cut points."""
    if m < 1:
        raise ValueError("m must be positive")
    for mask in range(1 << (m - 1)):
        parts, run = [], 1
        for i in range(m - 1):
            if (mask >> i) & 1:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield tuple(parts)


def compositions_count(m: int) -> int:
    if m < 1:
        raise ValueError("m must be positive")
    return 1 << (m - 1)


@dataclass(frozen=True)
class BoundedCompositions:
    m: int
    b: int
    count: int
    log2_bound: float

    @property
    def bound(self) -> float:
        return 2.0 ** self.log2_bound

    @property
    def holds(self) -> bool:
        with mpmath.workprec(128):
            return mpmath.log(self.count, 2) < self._log2_bound_mp()

    def _log2_bound_mp(self):
        return self.b * mpmath.log(mpmath.e * self.m / self.b, 2)


def compositions_bounded(m: int, b: int) -> BoundedCompositions:
    """Compositions of m with at most b parts, against ``2**(b log2(e m / b))``."""
    if not (1 <= b and 2 * b <= m):
        raise ValueError("need 1 <= b <= m/2")
    count = sum(math.comb(m - 1, i) for i in range(b))
    with mpmath.workprec(128):
        lb = float(b * mpmath.log(mpmath.e * m / b, 2))
    return BoundedCompositions(m, b, count, lb)


def _linkage_offsets(d: int, linkage: str) -> list[int]:
    if linkage == "adjacency":
        return [1 << i for i in range(d)]
    if linkage == "two_linked":
        return [(1 << i) | (1 << j) for i, j in combinations(range(d), 2)]
    raise ValueError("linkage must be 'adjacency' or 'two_linked'")


def _aux_vertices(cube: Cube, root: int, linkage: str) -> frozenset:
    if linkage == "two_linked":
        return cube.odd if parity(root) else cube.even
    return cube.vertices


@dataclass(frozen=True)
class ConnectedCount:
    d: int
    root: int
    n: int
    linkage: str
    count: int
    delta: int
    max_degree: int

    @property
    def tree_bound(self) -> float:
        return (math.e * self.delta) ** self.n

    @property
    def holds(self) -> bool:
        return self.count <= self.tree_bound


def connected_subsets_iter(cube: Cube, root: int, n: int, linkage: str = "adjacency") -> Iterator[frozenset]:
    """n-sets containing ``root`` that are connected in the auxiliary graph.

    Adjacency means Hamming distance 1 on all of Q_d; ``two_linked`` means
    distance 2 within the root's side.  Each set is produced exactly once:
    sets are grown one vertex at a time and deduplicated per level.
    """
    offsets = _linkage_offsets(cube.d, linkage)
    level = {frozenset((root,))}
    for _ in range(n - 1):
        nxt = set()
        for S in level:
            for x in S:
                for o in offsets:
                    y = x ^ o
                    if y not in S:
                        nxt.add(S | {y})
        level = nxt
    return iter(sorted(level, key=sorted))


def connected_subsets(cube: Cube, root: int, n: int, linkage: str = "adjacency") -> ConnectedCount:
    _guard(cube)
    if n < 1 or n > 5:
        raise InstanceTooLarge("connected-subset enumeration limited to 1 <= n <= 5")
    cube.check((root,))
    count = sum(1 for _ in connected_subsets_iter(cube, root, n, linkage))
    offsets = _linkage_offsets(cube.d, linkage)
    delta = cube.d if linkage == "adjacency" else cube.d ** 2
    return ConnectedCount(cube.d, root, n, linkage, count, delta, len(offsets))


@dataclass(frozen=True)
class RootedCensus:
    d: int
    y_size: int
    x: int
    b: int
    count: int
    c: float

    @property
    def bound(self) -> float:
        return math.comb(self.y_size, self.b) * float(self.d) ** (self.c * self.x)

    @property
    def in_hypothesis(self) -> bool:
        """Whether ``b <= |Y|/2``, the regime where the bound is claimed."""
        return 2 * self.b <= self.y_size


def rooted_two_linked_census(cube: Cube, Y, x: int, b: int, c: float = 2.0) -> RootedCensus:
    """Sets X on Y's side with |X| = x, at most b 2-components, each meeting Y."""
    _guard(cube)
    Y = cube.check(Y)
    s = side_of(Y)
    if s not in (Side.EVEN, Side.ODD):
        raise ValueError("Y must be a nonempty one-sided set")
    side = cube.side_set(s)
    if not 0 <= x <= len(side):
        raise ValueError("x out of range")
    count = 0
    for X in combinations(sorted(side), x):
        comps = k_components(X, 2, cube).components
        if len(comps) <= b and all(comp & Y for comp in comps):
            count += 1
    return RootedCensus(cube.d, len(Y), x, b, count, c)


def sandwiched_sets(cube: Cube, a: int, side: Side) -> Iterator[frozenset]:
    """Size-a subsets of ``side`` with ``B(v,l) ⊆ A ⊆ B(v,l+2)`` for some v, l ≡ |v| mod 2."""
    seen = set()
    for v in range(cube.N):
        for l in range(parity(v), cube.d + 1, 2):
            inner = even_hamming_ball(v, l, cube, side)
            if len(inner) > a:
                break
            outer = even_hamming_ball(v, l + 2, cube, side)
            if len(outer) < a:
                continue
            shell = sorted(outer - inner)
            for extra in combinations(shell, a - len(inner)):
                A = inner | frozenset(extra)
                if A not in seen:
                    seen.add(A)
                    yield A


def canonical_ball_set(cube: Cube, a: int, side: Side) -> frozenset:
    """First a vertices of ``side`` ordered by (distance from the side's least vertex, index)."""
    pts = sorted(cube.side_set(side))
    center = pts[0]
    return frozenset(sorted(pts, key=lambda w: (distance(center, w), w))[:a])


@dataclass(frozen=True)
class BoundaryMin:
    d: int
    a: int
    side: str
    min: int | None
    argmin_sample: tuple[int, ...] | None
    ball_value: int
    sandwich_min: int | None

    @property
    def exhaustive(self) -> bool:
        return self.min is not None

    @property
    def attained_by_sandwich(self) -> bool | None:
        return None if self.min is None else self.sandwich_min == self.min


def min_vertex_boundary(cube: Cube, a: int, side: Side = Side.EVEN, max_sets: int = 100_000) -> BoundaryMin:
    """Exact ``min |N(A)|`` over one-sided A with |A| = a, plus the Hamming-ball comparisons.

    Falls back to the ball value alone when the subset count exceeds ``max_sets``.
    """
    pts = sorted(cube.side_set(side))
    if not 1 <= a <= len(pts):
        raise ValueError("a out of range")
    ball = len(neighborhood(canonical_ball_set(cube, a, side), cube))
    if math.comb(len(pts), a) > max_sets:
        return BoundaryMin(cube.d, a, side.value, None, None, ball, None)
    best, arg = None, None
    for A in combinations(pts, a):
        g = len(neighborhood(A, cube))
        if best is None or g < best:
            best, arg = g, A
    sandwich = min(len(neighborhood(A, cube)) for A in sandwiched_sets(cube, a, side))
    return BoundaryMin(cube.d, a, side.value, best, arg, ball, sandwich)


@dataclass(frozen=True)
class SapozhenkoCensus:
    d: int
    g: int
    b: int | None
    count_G: int
    count_H: int | None
    zeta: float
    lemma_bounds: dict

    def to_row(self) -> dict:
        return asdict(self)


def two_linked_even_sets(cube: Cube) -> Iterator[frozenset]:
    """Every nonempty 2-linked subset of the even side."""
    evens = sorted(cube.even)
    for mask in range(1, 1 << len(evens)):
        A = frozenset(v for i, v in enumerate(evens) if (mask >> i) & 1)
        if is_k_linked(A, 2, cube):
            yield A


def boundary_profile(cube: Cube) -> dict[tuple[int, int], int]:
    """``(|N(A)|, |B(A)|) -> count`` over nonempty 2-linked even A."""
    _guard(cube)
    prof: dict = {}
    for A in two_linked_even_sets(cube):
        key = (len(neighborhood(A, cube)), len(interior(A, cube)))
        prof[key] = prof.get(key, 0) + 1
    return prof


def sapozhenko_census(cube: Cube, g: int, b: int | None = None, zeta: float = 1.0,
                      profile: dict | None = None) -> SapozhenkoCensus:
    if profile is None:
        profile = boundary_profile(cube)
    count_G = sum(n for (gg, _), n in profile.items() if gg == g)
    count_H = None if b is None else profile.get((g, b), 0)
    d = cube.d
    logd = math.log2(d) if d > 1 else float("nan")
    bounds = {"G_log2": g - zeta * g / logd}
    if b is not None:
        bounds["H_log2"] = d + g - b - zeta * g / logd
    return SapozhenkoCensus(d, g, b, count_G, count_H, zeta, bounds)
