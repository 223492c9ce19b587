"""Phases (ordered equipartitions of the 4-color palette), flaws, ideality and F*.

A coloring agrees with phase ``(C, D)`` at v when v is even and ``f_v ∈ C``,
or v is odd and ``f_v ∈ D``.  The flaws are the vertices where it disagrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable

from .counting import Coloring, enumerate_colorings
from .cube import Cube, distance, neighborhood, parity

PALETTE = frozenset({1, 2, 3, 4})

Threshold = Callable[[int], float]


def default_threshold(d: int) -> float:
    return 1.9 ** d


def threshold_from_base(base: float) -> Threshold:
    return lambda d: base ** d


@dataclass(frozen=True, order=True)
class Phase:
    C: tuple[int, int]
    D: tuple[int, int]

    def __post_init__(self):
        C, D = tuple(sorted(self.C)), tuple(sorted(self.D))
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)
        if len(set(C)) != 2 or len(set(D)) != 2 or set(C) | set(D) != PALETTE:
            raise ValueError("(C, D) must split {1,2,3,4} into two pairs")

    @classmethod
    def parse(cls, s: str) -> "Phase":
        c, dd = s.split("|")
        return cls(tuple(int(x) for x in c), tuple(int(x) for x in dd))

    def swapped(self) -> "Phase":
        return Phase(self.D, self.C)

    def agrees(self, v: int, color: int) -> bool:
        return (color in self.D) if parity(v) else (color in self.C)

    def __str__(self) -> str:
        return "%d%d|%d%d" % (self.C + self.D)


PHASES: tuple[Phase, ...] = tuple(
    Phase(C, tuple(sorted(PALETTE - set(C)))) for C in combinations((1, 2, 3, 4), 2)
)
MAIN = Phase((1, 2), (3, 4))


def _require_four(f: Coloring) -> None:
    if f.q != 4:
        raise ValueError("phase machinery is defined for q = 4 only")


def flaw_set(f: Coloring, phase: Phase) -> frozenset:
    _require_four(f)
    C, D = phase.C, phase.D
    return frozenset(
        v for v, c in enumerate(f.colors) if (c not in D if parity(v) else c not in C)
    )


@dataclass(frozen=True)
class PhaseReport:
    phase: Phase | None
    flaws: frozenset
    threshold_used: float
    ideal: bool
    in_fstar: bool
    flaw_counts: tuple[int, ...]

    @property
    def flaw_count(self) -> int:
        return len(self.flaws)

    def to_dict(self) -> dict:
        return {
            "phase": None if self.phase is None else str(self.phase),
            "flaw_count": self.flaw_count,
            "flaws": sorted(self.flaws),
            "ideal": self.ideal,
            "in_fstar": self.in_fstar,
            "threshold": self.threshold_used,
            "all_flaw_counts": {str(p): n for p, n in zip(PHASES, self.flaw_counts)},
        }


def _pairwise_far(X: Iterable[int], r: int = 3) -> bool:
    return all(distance(u, v) >= r for u, v in combinations(sorted(X), 2))


def _fstar_inequality(flaws: frozenset, cube: Cube) -> bool:
    even = frozenset(v for v in flaws if not parity(v))
    odd = flaws - even
    return len(neighborhood(even, cube)) >= len(neighborhood(odd, cube))


def classify(f: Coloring, threshold: Threshold | None = None) -> PhaseReport:
    """Main phase by argmin over the six phases, ties to the earlier phase."""
    _require_four(f)
    threshold = threshold or default_threshold
    t = threshold(f.d)
    flaw_sets = [flaw_set(f, p) for p in PHASES]
    counts = tuple(len(x) for x in flaw_sets)
    best = min(range(len(PHASES)), key=lambda i: (counts[i], i))
    if counts[best] >= t:
        return PhaseReport(None, frozenset(), t, False, False, counts)
    phase, flaws = PHASES[best], flaw_sets[best]
    ideal = _pairwise_far(flaws)
    fstar = (not ideal) and phase == MAIN and _fstar_inequality(flaws, f.cube)
    return PhaseReport(phase, flaws, t, ideal, fstar, counts)


main_phase = classify


def is_ideal(f: Coloring, threshold: Threshold | None = None) -> bool:
    return classify(f, threshold).ideal


def in_Fstar(f: Coloring, threshold: Threshold | None = None) -> bool:
    return classify(f, threshold).in_fstar


@dataclass(frozen=True)
class IdealCensus:
    d: int
    ideal: int
    total: int
    upper_bound: int
    by_phase: dict

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "ideal": str(self.ideal),
            "total": str(self.total),
            "upper_bound": str(self.upper_bound),
            "by_phase": {k: str(v) for k, v in self.by_phase.items()},
        }


def ideal_census(cube: Cube, threshold: Threshold | None = None) -> IdealCensus:
    from .asymptotics import ideal_upper_bound

    by_phase = {str(p): 0 for p in PHASES}
    ideal = total = 0
    for f in enumerate_colorings(cube, 4):
        total += 1
        rep = classify(f, threshold)
        if rep.ideal:
            ideal += 1
            by_phase[str(rep.phase)] += 1
    return IdealCensus(cube.d, ideal, total, ideal_upper_bound(cube).exact, by_phase)


def fstar_census(cube: Cube, threshold: Threshold | None = None) -> list[Coloring]:
    """Members of F*, in the enumeration order of proper colorings."""
    return [f for f in enumerate_colorings(cube, 4) if classify(f, threshold).in_fstar]
