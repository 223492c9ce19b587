"""Exact counts of proper colorings and independent sets of Q_d.

Two independent routes are provided for each count: a direct exhaustive
scan and a recursion through ``Q_d = Q_{d-1} x K_2``.  Colors are ``1..q``.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from . import _kernels
from .cube import Cube
from .errors import InstanceTooLarge

# q**N ceiling for exhaustive assignment scans: admits (d=3, q=4) and (d=4, q=2).
MAX_ASSIGNMENTS = 4 ** 8
MAX_ISET_SCAN_DIM = 4
MAX_ISET_PRODUCT_DIM = 5


@dataclass(frozen=True)
class Coloring:
    """A proper coloring of Q_d; ``colors[v]`` is the color of vertex v."""

    colors: tuple[int, ...]
    q: int
    cube: Cube = field(compare=False)

    def __post_init__(self):
        colors = tuple(self.colors)
        object.__setattr__(self, "colors", colors)
        if len(colors) != self.cube.N:
            raise ValueError("expected %d colors, got %d" % (self.cube.N, len(colors)))
        for c in colors:
            if not 1 <= c <= self.q:
                raise ValueError("color %r outside 1..%d" % (c, self.q))
        for v, w in self.cube.edges():
            if colors[v] == colors[w]:
                raise ValueError("improper: vertices %d and %d share color %d" % (v, w, colors[v]))

    @classmethod
    def from_string(cls, s: str, q: int = 4) -> "Coloring":
        s = s.strip()
        n = len(s)
        if n < 2 or n & (n - 1):
            raise ValueError("coloring string length must be a power of two >= 2")
        return cls(tuple(int(ch) for ch in s), q, Cube(n.bit_length() - 1))

    @property
    def d(self) -> int:
        return self.cube.d

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def restrict(self, U) -> dict[int, int]:
        return {u: self.colors[u] for u in sorted(U)}

    def image(self, U) -> frozenset:
        return frozenset(self.colors[u] for u in U)

    def __str__(self) -> str:
        return "".join(str(c) for c in self.colors)


@dataclass(frozen=True)
class CountResult:
    value: int
    method: str
    d: int
    q: int | None
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self, timestamp: bool = True) -> dict:
        out = {"d": self.d, "q": self.q, "method": self.method, "value": str(self.value)}
        if timestamp:
            out["elapsed_ms"] = round(self.elapsed * 1000.0, 3)
        return out


def _check_enumerable(d: int, q: int) -> None:
    if q < 1:
        raise ValueError("palette size must be positive")
    if q ** (1 << d) > MAX_ASSIGNMENTS:
        raise InstanceTooLarge("instance too large: %d^%d assignments for d=%d, q=%d" % (q, 1 << d, d, q))


def _packed(d: int, q: int, backend=None) -> bytes:
    return _kernels.get_backend(backend).enumerate_proper(d, q)


def enumerate_colorings(cube: Cube, q: int) -> Iterator[Coloring]:
    """Yield every proper q-coloring once, lexicographically by color sequence."""
    _check_enumerable(cube.d, q)
    flat = _packed(cube.d, q)
    n = cube.N
    for i in range(0, len(flat), n):
        yield Coloring(tuple(c + 1 for c in flat[i:i + n]), q, cube)


def coloring_tuples(cube: Cube, q: int) -> list[tuple[int, ...]]:
    """Same order as :func:`enumerate_colorings`, as raw tuples (no validation)."""
    _check_enumerable(cube.d, q)
    flat = _packed(cube.d, q)
    n = cube.N
    return [tuple(c + 1 for c in flat[i:i + n]) for i in range(0, len(flat), n)]


def count_colorings_bruteforce(cube: Cube, q: int, backend: str | None = None) -> CountResult:
    t0 = time.perf_counter()
    _check_enumerable(cube.d, q)
    value = len(_packed(cube.d, q, backend)) // cube.N
    return CountResult(value, "bruteforce", cube.d, q, time.perf_counter() - t0)


def _shards(m: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, m or 1))
    step, extra = divmod(m, workers)
    out, lo = [], 0
    for k in range(workers):
        hi = lo + step + (1 if k < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def _sharded_sum(fn, m: int, workers: int) -> int:
    shards = _shards(m, workers)
    if len(shards) == 1:
        return fn(*shards[0])
    with ThreadPoolExecutor(max_workers=len(shards)) as pool:
        return sum(pool.map(lambda se: fn(*se), shards))


def count_colorings_product(cube: Cube, q: int, workers: int = 1, backend: str | None = None) -> CountResult:
    """Count pairs of proper colorings of Q_{d-1} that differ at every vertex."""
    t0 = time.perf_counter()
    d = cube.d
    if d == 1:
        value = q * (q - 1)
    else:
        try:
            _check_enumerable(d - 1, q)
        except InstanceTooLarge:
            raise InstanceTooLarge(
                "instance too large: product method needs all colorings of Q_%d, %d^%d assignments"
                % (d - 1, q, 1 << (d - 1))) from None
        k = _kernels.get_backend(backend)
        flat = k.enumerate_proper(d - 1, q)
        n = 1 << (d - 1)
        value = _sharded_sum(lambda lo, hi: k.count_avoiding_pairs(flat, n, lo, hi), len(flat) // n, workers)
    return CountResult(value, "product", d, q, time.perf_counter() - t0)


def count_colorings(cube: Cube, q: int, method: str = "auto", workers: int = 1) -> CountResult:
    if method == "brute":
        method = "bruteforce"
    if method == "auto":
        try:
            _check_enumerable(cube.d, q)
            method = "bruteforce"
        except InstanceTooLarge:
            method = "product"
    if method == "bruteforce":
        return count_colorings_bruteforce(cube, q)
    if method == "product":
        return count_colorings_product(cube, q, workers=workers)
    raise ValueError("unknown counting method %r" % method)


def count_independent_sets(cube: Cube, method: str = "exhaustive", workers: int = 1,
                           backend: str | None = None) -> CountResult:
    """i(Q_d) by subset scan, or by counting disjoint pairs of independent sets of Q_{d-1}."""
    t0 = time.perf_counter()
    d = cube.d
    k = _kernels.get_backend(backend)
    if method == "exhaustive":
        if d > MAX_ISET_SCAN_DIM:
            raise InstanceTooLarge("instance too large: subset scan over 2^%d sets" % cube.N)
        value = k.count_independent(d)
    elif method == "product":
        if d > MAX_ISET_PRODUCT_DIM:
            raise InstanceTooLarge("instance too large: product recursion needs i(Q_%d) list" % (d - 1))
        if d == 1:
            value = 3
        else:
            masks = k.independent_masks(d - 1)
            value = _sharded_sum(lambda lo, hi: k.count_disjoint_pairs(masks, lo, hi), len(masks), workers)
    else:
        raise ValueError("unknown method %r" % method)
    return CountResult(value, method, d, None, time.perf_counter() - t0)


def count_pure_colorings(cube: Cube, phase=None) -> int:
    """Colorings agreeing with a phase everywhere: each vertex picks within its pair."""
    return 1 << cube.N
