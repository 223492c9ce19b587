"""Shannon entropy (in bits) over finitely supported distributions.

Probabilities are kept as :class:`fractions.Fraction` whenever the input is
an exact count table, so the only rounding is in the final ``log2``/``fsum``.
Outcomes for coloring ensembles are color tuples indexed by vertex.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .cube import Cube, boundary_edges, degree_into, parity

TOL = 1e-9


@dataclass(frozen=True)
class FiniteDistribution:
    support: tuple
    probabilities: tuple

    def __post_init__(self):
        if len(self.support) != len(self.probabilities):
            raise ValueError("support and probabilities differ in length")
        if len(set(self.support)) != len(self.support):
            raise ValueError("support items must be distinct")
        if any(p < 0 for p in self.probabilities):
            raise ValueError("negative probability")
        if abs(float(sum(self.probabilities)) - 1.0) > 1e-12:
            raise ValueError("probabilities do not sum to 1")

    @classmethod
    def uniform(cls, items: Iterable[Hashable]) -> "FiniteDistribution":
        items = tuple(items)
        if not items:
            raise ValueError("uniform distribution over an empty set")
        p = Fraction(1, len(items))
        return cls(items, (p,) * len(items))

    @classmethod
    def from_weights(cls, weights: Mapping[Hashable, object]) -> "FiniteDistribution":
        items = [(x, w) for x, w in weights.items() if w]
        total = sum(w for _, w in items)
        if not total:
            raise ValueError("all weights are zero")
        exact = all(isinstance(w, (int, Fraction)) for _, w in items)
        return cls(
            tuple(x for x, _ in items),
            tuple((Fraction(w) / total) if exact else (w / total) for _, w in items),
        )

    def items(self):
        return zip(self.support, self.probabilities)

    def map(self, fn: Callable) -> "FiniteDistribution":
        """Distribution of ``fn(outcome)``."""
        acc: dict = defaultdict(int)
        for x, p in self.items():
            acc[fn(x)] += p
        return FiniteDistribution(tuple(acc), tuple(acc.values()))

    def condition(self, pred: Callable) -> "FiniteDistribution":
        return FiniteDistribution.from_weights({x: p for x, p in self.items() if pred(x)})

    def __len__(self) -> int:
        return len(self.support)


def _bits(p) -> float:
    # log2(1/p), exact numerator/denominator logs for rationals
    if isinstance(p, Fraction):
        return math.log2(p.denominator) - math.log2(p.numerator)
    return -math.log2(p)


def entropy(dist: FiniteDistribution) -> float:
    return math.fsum(float(p) * _bits(p) for p in dist.probabilities if p)


def conditional_entropy(joint: FiniteDistribution) -> float:
    """H(X|Y) for a distribution over pairs ``(x, y)``."""
    py: dict = defaultdict(int)
    for (x, y), p in joint.items():
        py[y] += p
    terms = []
    for (x, y), p in joint.items():
        if p:
            pxy = p / py[y]
            terms.append(float(p) * _bits(pxy))
    return math.fsum(terms)


def entropy_of(dist: FiniteDistribution, fn: Callable) -> float:
    return entropy(dist.map(fn))


def conditional_entropy_of(dist: FiniteDistribution, x: Callable, y: Callable) -> float:
    return conditional_entropy(dist.map(lambda o: (x(o), y(o))))


@dataclass(frozen=True)
class CoverWeights:
    weights: Mapping[frozenset, float]

    def validate(self, k: int, tol: float = 1e-12) -> None:
        totals = [0] * k
        for A, w in self.weights.items():
            if w < 0:
                raise ValueError("cover weights must be nonnegative")
            for i in A:
                if not 0 <= i < k:
                    raise ValueError("cover mentions coordinate %r outside range" % (i,))
                totals[i] += w
        for i, s in enumerate(totals):
            if abs(float(s) - 1.0) > tol:
                raise ValueError("coordinate %d is covered with total weight %s, not 1" % (i, s))


@dataclass(frozen=True)
class ShearerResult:
    lhs: float
    rhs: float
    holds: bool


def shearer_check(vector_dist: FiniteDistribution, cover: CoverWeights, tol: float = TOL) -> ShearerResult:
    k = len(vector_dist.support[0])
    cover.validate(k)
    lhs = entropy(vector_dist)
    terms = []
    for A, w in cover.weights.items():
        if w:
            idx = tuple(sorted(A))
            terms.append(float(w) * entropy_of(vector_dist, lambda x: tuple(x[i] for i in idx)))
    rhs = math.fsum(terms)
    return ShearerResult(lhs, rhs, lhs <= rhs + tol)


def neighborhood_cover(cube: Cube) -> tuple[tuple[int, ...], CoverWeights]:
    """Cover of the even coordinates by the sets ``N_u`` (u odd), each of weight 1/d.

    Returns the even vertices in coordinate order together with the cover
    expressed in coordinate indices.
    """
    evens = tuple(sorted(cube.even))
    pos = {v: i for i, v in enumerate(evens)}
    w = Fraction(1, cube.d)
    weights = {}
    for u in sorted(cube.odd):
        key = frozenset(pos[v] for v in cube.adjacency[u])
        weights[key] = weights.get(key, 0) + w
    return evens, CoverWeights(weights)


@dataclass(frozen=True)
class TuTerms:
    """Pieces of ``T(u) = H(f_{N_u})/d + H(f_u | f(N_u))``."""

    u: int
    d: int
    h_image: float
    h_tuple_given_image: float
    h_u_given_image: float

    @property
    def main_part(self) -> float:
        return self.h_tuple_given_image / self.d + self.h_u_given_image

    @property
    def value(self) -> float:
        return (self.h_image + self.h_tuple_given_image) / self.d + self.h_u_given_image


def t_u_terms(ensemble: FiniteDistribution, u: int, cube: Cube) -> TuTerms:
    if not parity(u):
        raise ValueError("T(u) is taken at odd vertices only")
    nb = cube.adjacency[u]
    tup = lambda f: tuple(f[w] for w in nb)
    img = lambda f: frozenset(f[w] for w in nb)
    return TuTerms(
        u,
        cube.d,
        entropy_of(ensemble, img),
        conditional_entropy_of(ensemble, tup, img),
        conditional_entropy_of(ensemble, lambda f: f[u], img),
    )


def t_u(ensemble: FiniteDistribution, u: int, cube: Cube) -> float:
    return t_u_terms(ensemble, u, cube).value


@dataclass(frozen=True)
class AuditRecord:
    lhs: float
    terms: dict
    rhs: float
    holds: bool
    n2u: dict | None

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {
            "H(f)": {"lhs": self.lhs, "rhs": self.rhs, "slack": self.slack, "holds": self.holds,
                     "terms": self.terms},
            "N2U": self.n2u,
        }


def _fixed_on(ensemble: FiniteDistribution, V) -> bool:
    first = ensemble.support[0]
    return all(all(f[v] == first[v] for v in V) for f in ensemble.support)


def decomposition_audit(ensemble: FiniteDistribution, U: Iterable[int], V: Iterable[int], cube: Cube,
                        tol: float = TOL) -> AuditRecord:
    """Check ``H(f) <= Σ_U T(u) + Σ_{O∖U} H(f_u|f(N_u)) + Σ_E (1 - d_U(v)/d) H(f_v)``.

    When the ensemble fixes the colors on ``V`` the refined bound on the last
    sum, ``N/2 - |U| - |∇(V, O∖U)|/d``, is also evaluated.  That bound assumes
    each even vertex outside V has at most two possible colors; the record
    says whether this holds and, if so, whether the bound does.
    """
    U = cube.check(U)
    V = cube.check(V)
    if any(not parity(u) for u in U) or any(parity(v) for v in V):
        raise ValueError("U must be odd vertices and V even vertices")
    d = cube.d
    lhs = entropy(ensemble)
    t_sum = math.fsum(t_u(ensemble, u, cube) for u in sorted(U))
    rest_odd = math.fsum(
        conditional_entropy_of(ensemble, lambda f, u=u: f[u],
                               lambda f, u=u: frozenset(f[w] for w in cube.adjacency[u]))
        for u in sorted(cube.odd - U)
    )
    h_even = {v: entropy_of(ensemble, lambda f, v=v: f[v]) for v in sorted(cube.even)}
    weight = {v: Fraction(d - degree_into(v, U, cube), d) for v in h_even}
    even_sum = math.fsum(float(weight[v]) * h_even[v] for v in h_even)
    rhs = math.fsum([t_sum, rest_odd, even_sum])
    terms = {"T": t_sum, "odd_rest": rest_odd, "even_weighted": even_sum}

    n2u = None
    if _fixed_on(ensemble, V):
        rest = cube.odd - U
        bound = Fraction(cube.N, 2) - len(U) - Fraction(boundary_edges(V, rest, cube), d)
        identity = sum((weight[v] for v in V), Fraction(0)) == Fraction(boundary_edges(V, rest, cube), d)
        two_colors = all(
            len({f[v] for f in ensemble.support}) <= 2 for v in cube.even - V
        )
        n2u = {
            "bound": float(bound),
            "bound_exact": str(bound),
            "identity": identity,
            "applicable": two_colors,
            "holds": (even_sum <= float(bound) + tol) if two_colors else None,
        }
    return AuditRecord(lhs, terms, rhs, lhs <= rhs + tol, n2u)


def split_neighborhood_ensembles(colorings: Sequence[tuple], u: int, cube: Cube, is_good: Callable[[int, int], bool]):
    """Yield ``(X, Y, ensemble)`` for each split of ``N_u`` into nonempty good X and bad Y.

    The ensemble is uniform over the colorings in which X is entirely good
    and Y entirely bad; empty families are skipped.
    """
    nb = cube.adjacency[u]
    for r in range(1, len(nb)):
        for X in combinations(nb, r):
            Y = tuple(w for w in nb if w not in X)
            members = [f for f in colorings
                       if all(is_good(w, f[w]) for w in X) and not any(is_good(w, f[w]) for w in Y)]
            if members:
                yield frozenset(X), frozenset(Y), FiniteDistribution.uniform(members)

