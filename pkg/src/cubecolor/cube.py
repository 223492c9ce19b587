"""The hypercube Q_d: vertices, parity sides, neighborhoods and linkage.

Vertices are plain integers in ``[0, 2**d)``; bit ``i`` is coordinate ``i``.
Vertex sets are ``frozenset`` objects.  Every function that returns a
sequence of sets returns them ordered by smallest member so results are
reproducible.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .errors import DimensionError

log = logging.getLogger(__name__)

MAX_DIM = 24

VertexSet = frozenset


class Side(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"
    EMPTY = "empty"

    def opposite(self) -> "Side":
        if self is Side.EVEN:
            return Side.ODD
        if self is Side.ODD:
            return Side.EVEN
        raise ValueError("only a one-sided set has an opposite side")


def parity(v: int) -> int:
    return v.bit_count() & 1


def distance(u: int, v: int) -> int:
    return (u ^ v).bit_count()


@dataclass(frozen=True)
class Cube:
    """Q_d with ``N = 2**d`` vertices."""

    d: int
    N: int = field(init=False)

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise DimensionError("dimension must be a positive integer, got %r" % (self.d,))
        if self.d > MAX_DIM:
            raise DimensionError("d=%d exceeds the explicit-set limit %d" % (self.d, MAX_DIM))
        object.__setattr__(self, "N", 1 << self.d)

    @cached_property
    def even(self) -> frozenset:
        return frozenset(v for v in range(self.N) if not parity(v))

    @cached_property
    def odd(self) -> frozenset:
        return frozenset(v for v in range(self.N) if parity(v))

    @cached_property
    def vertices(self) -> frozenset:
        return frozenset(range(self.N))

    def side_set(self, side: Side) -> frozenset:
        if side is Side.EVEN:
            return self.even
        if side is Side.ODD:
            return self.odd
        raise ValueError("side must be even or odd")

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(v ^ (1 << i) for i in range(self.d))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.neighbors(v) for v in range(self.N))

    def edges(self):
        """Yield each edge once as ``(even end, odd end)``."""
        for v in sorted(self.even):
            for w in self.adjacency[v]:
                yield v, w

    def check(self, X: Iterable[int]) -> frozenset:
        X = frozenset(X)
        for v in X:
            if not (isinstance(v, int) and 0 <= v < self.N):
                raise DimensionError("vertex %r is not in Q_%d" % (v, self.d))
        return X


def side_of(X: Iterable[int]) -> Side:
    seen = {parity(v) for v in X}
    if not seen:
        return Side.EMPTY
    if len(seen) == 2:
        return Side.MIXED
    return Side.ODD if seen.pop() else Side.EVEN


def _one_sided(X: frozenset, what: str) -> Side:
    s = side_of(X)
    if s is Side.MIXED:
        raise ValueError("%s requires a one-sided vertex set" % what)
    return s


def neighborhood(X: Iterable[int], cube: Cube) -> frozenset:
    X = cube.check(X)
    adj = cube.adjacency
    out = set()
    for x in X:
        out.update(adj[x])
    return frozenset(out)


def second_neighborhood(X: Iterable[int], cube: Cube) -> frozenset:
    return neighborhood(neighborhood(X, cube), cube)


def interior(X: Iterable[int], cube: Cube) -> frozenset:
    """``B(X)``: opposite-side vertices whose whole neighborhood lies in X."""
    X = cube.check(X)
    s = _one_sided(X, "interior")
    if s is Side.EMPTY:
        return frozenset()
    adj = cube.adjacency
    candidates = neighborhood(X, cube)
    return frozenset(y for y in candidates if all(w in X for w in adj[y]))


def boundary_edges(X: Iterable[int], Y: Iterable[int], cube: Cube) -> int:
    """Number of edges with one end in X and the other in Y."""
    X = cube.check(X)
    Y = cube.check(Y)
    if X & Y:
        raise ValueError("boundary_edges needs disjoint sets")
    if len(X) > len(Y):
        X, Y = Y, X
    adj = cube.adjacency
    return sum(1 for x in X for w in adj[x] if w in Y)


def degree_into(v: int, S: frozenset, cube: Cube) -> int:
    return sum(1 for w in cube.adjacency[v] if w in S)


def closure(A: Iterable[int], cube: Cube) -> frozenset:
    """``[A] = {x : N(x) ⊆ N(A)}``; always on the side of A."""
    A = cube.check(A)
    s = _one_sided(A, "closure")
    if s is Side.EMPTY:
        raise ValueError("closure of the empty set is not defined here")
    NA = neighborhood(A, cube)
    adj = cube.adjacency
    return frozenset(x for x in neighborhood(NA, cube) if all(w in NA for w in adj[x]))


@dataclass(frozen=True)
class LinkageDecomposition:
    k: int
    components: tuple[frozenset, ...]

    @property
    def count(self) -> int:
        return len(self.components)

    def singletons(self) -> tuple[frozenset, ...]:
        return tuple(c for c in self.components if len(c) == 1)

    def non_singletons(self) -> tuple[frozenset, ...]:
        return tuple(c for c in self.components if len(c) > 1)


def _offsets(d: int, k: int) -> list[int]:
    return [sum(1 << i for i in bits) for r in range(1, k + 1) for bits in combinations(range(d), r)]


def k_components(X: Iterable[int], k: int, cube: Cube) -> LinkageDecomposition:
    """Split X into maximal k-linked subsets."""
    X = cube.check(X)
    if k < 1:
        raise ValueError("linkage radius must be positive")
    _one_sided(X, "k_components")
    offsets = _offsets(cube.d, min(k, cube.d))
    use_pairs = len(X) < len(offsets)
    members = sorted(X)
    seen: set[int] = set()
    comps = []
    for root in members:
        if root in seen:
            continue
        comp = {root}
        seen.add(root)
        stack = [root]
        while stack:
            x = stack.pop()
            if use_pairs:
                near = (y for y in members if y not in seen and distance(x, y) <= k)
            else:
                near = (x ^ o for o in offsets if (x ^ o) in X and (x ^ o) not in seen)
            for y in list(near):
                seen.add(y)
                comp.add(y)
                stack.append(y)
        comps.append(frozenset(comp))
    return LinkageDecomposition(k, tuple(comps))


def is_k_linked(X: Iterable[int], k: int, cube: Cube) -> bool:
    X = frozenset(X)
    return bool(X) and k_components(X, k, cube).count == 1


def even_hamming_ball(v: int, r: int, cube: Cube, side: Side = Side.EVEN) -> frozenset:
    """Vertices of ``side`` within Hamming distance r of v."""
    cube.check((v,))
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r > cube.d:
        log.info("radius %d exceeds d=%d; using the full side", r, cube.d)
        r = cube.d
    return frozenset(w for w in cube.side_set(side) if distance(v, w) <= r)
