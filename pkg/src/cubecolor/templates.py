"""Template decomposition of an F* coloring, plus the checks that go with it.

The even flaws split into non-singleton 2-components (``A``) and singletons
(``A_hat``); the odd flaws outside ``N(A ∪ A_hat)`` split into components
that meet ``N^2(G ∪ G_hat)`` (``P``), and non-singleton / singleton ones that
do not (``Pbar`` / ``Phat``).  Components are *small* when their
neighborhood is below the cutoff ``2**(log2(d)**3)``, *large* otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .counting import Coloring
from .cube import (
    Cube,
    boundary_edges,
    closure,
    degree_into,
    interior,
    k_components,
    neighborhood,
    parity,
    second_neighborhood,
)
from .errors import NotInFstar
from .phases import MAIN, Threshold, classify, flaw_set


def default_cutoff(d: int) -> float:
    return 2.0 ** (math.log2(d) ** 3)


def _union(sets) -> frozenset:
    out: set = set()
    for s in sets:
        out |= s
    return frozenset(out)


@dataclass(frozen=True)
class Template:
    d: int
    X: frozenset
    A_list: tuple[frozenset, ...]
    Ahat_list: tuple[frozenset, ...]
    G_list: tuple[frozenset, ...]
    Ghat_list: tuple[frozenset, ...]
    R: frozenset
    P_list: tuple[frozenset, ...]
    Pbar_list: tuple[frozenset, ...]
    Phat_list: tuple[frozenset, ...]
    Q_list: tuple[frozenset, ...]
    Qbar_list: tuple[frozenset, ...]
    Qhat_list: tuple[frozenset, ...]
    cutoff: float
    A_large_flags: tuple[bool, ...]
    P_large_flags: tuple[bool, ...]
    Pbar_large_flags: tuple[bool, ...]
    b: int
    exceptional: bool

    A: frozenset = field(init=False)
    A_hat: frozenset = field(init=False)
    G: frozenset = field(init=False)
    G_hat: frozenset = field(init=False)
    P: frozenset = field(init=False)
    Pbar: frozenset = field(init=False)
    Phat: frozenset = field(init=False)
    Q: frozenset = field(init=False)
    Qbar: frozenset = field(init=False)
    Qhat: frozenset = field(init=False)

    def __post_init__(self):
        for name, parts in [("A", self.A_list), ("A_hat", self.Ahat_list), ("G", self.G_list),
                            ("G_hat", self.Ghat_list), ("P", self.P_list), ("Pbar", self.Pbar_list),
                            ("Phat", self.Phat_list), ("Q", self.Q_list), ("Qbar", self.Qbar_list),
                            ("Qhat", self.Qhat_list)]:
            object.__setattr__(self, name, _union(parts))

    # small / large splits
    def _split(self, parts, flags, large):
        return _union(p for p, fl in zip(parts, flags) if fl == large)

    @property
    def A_small(self):
        return self._split(self.A_list, self.A_large_flags, False)

    @property
    def A_large(self):
        return self._split(self.A_list, self.A_large_flags, True)

    @property
    def G_small(self):
        return self._split(self.G_list, self.A_large_flags, False)

    @property
    def G_large(self):
        return self._split(self.G_list, self.A_large_flags, True)

    @property
    def P_small(self):
        return self._split(self.P_list, self.P_large_flags, False)

    @property
    def P_large(self):
        return self._split(self.P_list, self.P_large_flags, True)

    @property
    def Q_small(self):
        return self._split(self.Q_list, self.P_large_flags, False)

    @property
    def Q_large(self):
        return self._split(self.Q_list, self.P_large_flags, True)

    @property
    def Pbar_small(self):
        return self._split(self.Pbar_list, self.Pbar_large_flags, False)

    @property
    def Pbar_large(self):
        return self._split(self.Pbar_list, self.Pbar_large_flags, True)

    @property
    def Qbar_small(self):
        return self._split(self.Qbar_list, self.Pbar_large_flags, False)

    @property
    def Qbar_large(self):
        return self._split(self.Qbar_list, self.Pbar_large_flags, True)

    @property
    def i_A_small(self) -> int:
        return self.A_large_flags.count(False)

    @property
    def i_P_small(self) -> int:
        return self.P_large_flags.count(False)

    @property
    def i_Pbar_small(self) -> int:
        return self.Pbar_large_flags.count(False)

    @property
    def g(self) -> int:
        return len(self.G)

    @property
    def g_hat(self) -> int:
        return len(self.G_hat)

    @property
    def g_bar(self) -> int:
        return self.g + self.g_hat

    def small_P_components(self) -> list[tuple[frozenset, frozenset]]:
        return [(p, q) for p, q, fl in zip(self.P_list, self.Q_list, self.P_large_flags) if not fl]

    def large_P_components(self) -> list[frozenset]:
        return [p for p, fl in zip(self.P_list, self.P_large_flags) if fl]

    def to_dict(self) -> dict:
        sets = {
            "X": self.X, "A": self.A, "A_hat": self.A_hat, "G": self.G, "G_hat": self.G_hat,
            "R": self.R, "P": self.P, "Pbar": self.Pbar, "Phat": self.Phat, "Q": self.Q,
            "Qbar": self.Qbar, "Qhat": self.Qhat, "A_small": self.A_small, "A_large": self.A_large,
            "P_small": self.P_small, "P_large": self.P_large, "Pbar_small": self.Pbar_small,
            "Pbar_large": self.Pbar_large,
        }
        lists = {
            "A_list": self.A_list, "Ahat_list": self.Ahat_list, "P_list": self.P_list,
            "Pbar_list": self.Pbar_list, "Phat_list": self.Phat_list,
        }
        out = {k: sorted(v) for k, v in sets.items()}
        out.update({k: [sorted(c) for c in v] for k, v in lists.items()})
        out.update({
            "d": self.d, "cutoff": self.cutoff, "b": self.b, "g": self.g, "g_hat": self.g_hat,
            "g_bar": self.g_bar, "i_A_small": self.i_A_small, "i_P_small": self.i_P_small,
            "i_Pbar_small": self.i_Pbar_small, "exceptional": self.exceptional,
        })
        return out


def is_exceptional(a: int, pbar: int, p: int, g_hat: int, d: int) -> bool:
    """Empty A, Pbar and P, with few singleton-boundary vertices."""
    if a or pbar or p:
        return False
    if d == 1:
        return True
    return g_hat <= d * d / math.log2(d)


def decompose(f: Coloring, threshold: Threshold | None = None, cutoff: float | None = None,
              require_fstar: bool = True) -> Template:
    """Template of ``f`` relative to the phase ({1,2},{3,4})."""
    cube = f.cube
    if require_fstar:
        rep = classify(f, threshold)
        if rep.phase is None:
            raise NotInFstar("no main phase")
        if rep.phase != MAIN:
            raise NotInFstar("main phase is %s, not %s" % (rep.phase, MAIN))
        if rep.ideal:
            raise NotInFstar("coloring is ideal")
        if not rep.in_fstar:
            raise NotInFstar("|N(X∩E)| < |N(X∩O)|")
        X = rep.flaws
    else:
        X = flaw_set(f, MAIN)
    if cutoff is None:
        cutoff = default_cutoff(cube.d)

    XE = frozenset(v for v in X if not parity(v))
    XO = X - XE
    comps_E = k_components(XE, 2, cube)
    A_list = comps_E.non_singletons()
    Ahat_list = comps_E.singletons()
    G_list = tuple(neighborhood(a, cube) for a in A_list)
    Ghat_list = tuple(neighborhood(a, cube) for a in Ahat_list)
    GG = _union(G_list + Ghat_list)
    R = cube.odd - GG
    near = second_neighborhood(GG, cube)

    P_list, Pbar_list, Phat_list = [], [], []
    for comp in k_components(XO & R, 2, cube).components:
        if comp & near:
            P_list.append(comp)
        elif len(comp) > 1:
            Pbar_list.append(comp)
        else:
            Phat_list.append(comp)
    Q_list = tuple(neighborhood(p, cube) for p in P_list)
    Qbar_list = tuple(neighborhood(p, cube) for p in Pbar_list)
    Qhat_list = tuple(neighborhood(p, cube) for p in Phat_list)

    A_large = tuple(len(g) >= cutoff for g in G_list)
    P_large = tuple(len(q) >= cutoff for q in Q_list)
    Pbar_large = tuple(len(q) >= cutoff for q in Qbar_list)
    A_l = _union(a for a, fl in zip(A_list, A_large) if fl)
    b = len(interior(A_l, cube)) if A_l else 0
    a = sum(len(x) for x in A_list)
    g_hat = sum(len(x) for x in Ghat_list)

    return Template(
        d=cube.d, X=X, A_list=A_list, Ahat_list=Ahat_list, G_list=G_list, Ghat_list=Ghat_list,
        R=R, P_list=tuple(P_list), Pbar_list=tuple(Pbar_list), Phat_list=tuple(Phat_list),
        Q_list=Q_list, Qbar_list=Qbar_list, Qhat_list=Qhat_list, cutoff=cutoff,
        A_large_flags=A_large, P_large_flags=P_large, Pbar_large_flags=Pbar_large, b=b,
        exceptional=is_exceptional(a, sum(map(len, Pbar_list)), sum(map(len, P_list)), g_hat, cube.d),
    )


@dataclass(frozen=True)
class ComponentCheck:
    family: str
    index: int
    component: frozenset
    colors: frozenset
    neighbor_colors: frozenset
    passed: bool


@dataclass(frozen=True)
class MonochromaticReport:
    consistent: bool
    checks: tuple[ComponentCheck, ...]

    @property
    def passed(self) -> bool:
        return self.consistent and all(c.passed for c in self.checks)

    def failures(self) -> list[ComponentCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "passed": self.passed,
            "components": [
                {"family": c.family, "index": c.index, "component": sorted(c.component),
                 "colors": sorted(c.colors), "neighbor_colors": sorted(c.neighbor_colors),
                 "passed": c.passed}
                for c in self.checks
            ],
        }


def _colors_of(f: Coloring, Z) -> frozenset:
    return frozenset(f.colors[v] for v in Z if 0 <= v < len(f.colors))


def verify_monochromatic(f: Coloring, t: Template, F_sets: Sequence[frozenset] = ()) -> MonochromaticReport:
    """Each bad odd component Z with good neighborhood: Z and N(Z) are single-colored.

    The color of N(Z) must be the other color of the main phase's even pair.
    Mismatched inputs are reported through ``consistent``, never raised.
    """
    cube = f.cube
    consistent = t.d == f.d
    if consistent:
        X = flaw_set(f, MAIN)
        XE = frozenset(v for v in X if not parity(v))
        consistent = XE == (t.A | t.A_hat) and (X - XE) & t.R == (t.P | t.Pbar | t.Phat)
    C = set(MAIN.C)
    checks = []
    families = [("Pbar", t.Pbar_list), ("Phat", t.Phat_list),
                ("P_small", [p for p, _ in t.small_P_components()])]
    for family, parts in families:
        for i, Z in enumerate(parts):
            zc = _colors_of(f, Z)
            nz = _colors_of(f, neighborhood(Z, cube)) if consistent else frozenset()
            ok = consistent and len(zc) == 1 and len(nz) == 1 and zc <= C and nz == frozenset(C - zc)
            checks.append(ComponentCheck(family, i, Z, zc, nz, ok))
    for i, F in enumerate(F_sets):
        fc = _colors_of(f, F)
        checks.append(ComponentCheck("F", i, F, fc, frozenset(), consistent and len(fc) <= 1))
    return MonochromaticReport(consistent, tuple(checks))


@dataclass(frozen=True)
class SFPair:
    S: frozenset
    F: frozenset
    target_component: frozenset


def sf_conditions(pair: SFPair, t: Template, cube: Cube, log=math.log2) -> dict[str, bool]:
    """The three approximation conditions, evaluated separately."""
    P = pair.target_component
    if P not in t.P_list:
        raise ValueError("target component is not one of the template's P components")
    Qi = t.Q_list[t.P_list.index(P)]
    d = cube.d
    need = d - d / log(d) if d > 1 else -math.inf
    contain = closure(P, cube) <= pair.S and pair.F <= Qi
    degree = all(degree_into(u, pair.F, cube) >= need for u in pair.S)
    avoid = not (pair.S & (t.G | t.G_hat)) and not (pair.F & (t.Qbar | t.Qhat | t.Q_small))
    return {"contains": contain, "degree": degree, "disjoint": avoid}


def verify_SF(pair: SFPair, t: Template, cube: Cube, log=math.log2) -> bool:
    return all(sf_conditions(pair, t, cube, log).values())


def canonical_sf_pair(t: Template, P: frozenset, cube: Cube) -> SFPair:
    """``S = [P_i] \\ (G ∪ G_hat)``, ``F = Q_i``."""
    Qi = t.Q_list[t.P_list.index(P)]
    return SFPair(closure(P, cube) - (t.G | t.G_hat), Qi, P)


@dataclass(frozen=True)
class CostConstants:
    """Stand-ins for the unspecified constants: ``zeta`` for Ω(·), ``c`` for O(·)."""

    zeta: float = 1.0
    c: float = 2.0


def _xlogx_over(x: float, d: int) -> float:
    return 0.0 if x <= 0 else (x / d) * math.log2(x / d)


def template_cost_ledger(t: Template, cube: Cube, sf_pairs: Sequence[SFPair] = (),
                         constants: CostConstants = CostConstants()) -> dict:
    """Every constant-free cost expression of the template and coloring stages.

    Returned as ``{"template": {...}, "coloring": {...}}`` of labeled floats.
    Nothing is asserted: the inequalities these feed are asymptotic.
    """
    d, N = cube.d, cube.N
    z, c = constants.zeta, constants.c
    logd = math.log2(d) if d > 1 else 0.0
    half = N // 2
    a_hat, p_hat = len(t.A_hat), len(t.Phat)
    g_hat, g_bar = t.g_hat, t.g_bar
    a_s, g_s, g_l = len(t.A_small), len(t.G_small), len(t.G_large)
    pbar_s = len(t.Pbar_small)
    qbar_s, qbar_l = len(t.Qbar_small), len(t.Qbar_large)
    p_s = len(t.P_small)
    q_l = len(t.Q_large)
    i_ps = t.i_P_small
    S = _union(pr.S for pr in sf_pairs)
    F = _union(pr.F for pr in sf_pairs)
    s = len(S)
    per_log = (1.0 / logd) if logd else 0.0

    template = {
        "A_hat": math.log2(math.comb(half, a_hat)),
        "A_hat_bound": g_hat - z * _xlogx_over(g_hat, d),
        "A_small": t.i_A_small * (d - 1) + c * a_s * logd,
        "P_hat": math.log2(math.comb(half, p_hat)),
        "P_hat_bound": float(p_hat * d),
        "Pbar_small": t.i_Pbar_small * (d - 1) + c * pbar_s * logd,
        "P_small": (i_ps * math.log2(math.e * g_bar * d * d / i_ps) if i_ps else 0.0) + c * p_s * logd,
        "Alcost": (g_l - t.b - z * g_l * per_log) if g_l else 0.0,
        "barQlcost": (qbar_l - z * qbar_l * per_log) if qbar_l else 0.0,
        "pLis": c * q_l * logd / d,
        "SFcost": c * q_l * logd * logd / d,
        "params": c * math.log2(g_bar) if g_bar > 1 else 0.0,
        "ppp": float(len(t.P_list) + len(t.Pbar_list) + p_hat),
    }
    R = t.R
    # Q^s and F lie on the even side, R on the odd side.
    qs_edges = boundary_edges(t.Q_small, R, cube)
    f_edges = boundary_edges(F, R, cube)
    log3m1 = math.log2(3) - 1
    C1 = t.g + t.b + g_hat + c * g_bar / d
    C2 = half - g_bar + s * log3m1
    C3 = half - g_bar - (len(t.Qbar) + len(t.Qhat) + qs_edges / d + f_edges / d)
    coloring = {
        "C1": C1,
        "C2": C2,
        "C3": C3,
        "colorsummary": N + t.b - g_bar + s * log3m1 - (len(t.Qbar) + len(t.Qhat))
        - (qs_edges + f_edges) / d + c * g_bar / d,
        "CS": N - g_hat - len(t.Qhat) - g_s - g_l + t.b - qbar_s - qbar_l + s * log3m1
        - (qs_edges + f_edges) / d,
    }
    return {"template": template, "coloring": coloring}


def template_key(f: Coloring, t: Template) -> tuple:
    """What the template stage plus the cheap color choices pin down.

    Even flaws, the Pbar / Phat / small-P components and one color for each
    of those components.
    """
    comps = tuple(t.Pbar_list) + tuple(t.Phat_list) + tuple(p for p, _ in t.small_P_components())
    colors = tuple(f.colors[min(Z)] for Z in comps)
    return (t.A | t.A_hat, t.Pbar_list, t.Phat_list, tuple(p for p, _ in t.small_P_components()), colors)


def fixed_template_classes(members: Sequence[Coloring], threshold: Threshold | None = None,
                           cutoff: float | None = None) -> dict[tuple, list[Coloring]]:
    """Group F* members by :func:`template_key`, keeping enumeration order."""
    groups: dict[tuple, list[Coloring]] = {}
    for f in members:
        t = decompose(f, threshold, cutoff)
        groups.setdefault(template_key(f, t), []).append(f)
    return groups


def fixed_vertices(t: Template) -> frozenset:
    """Even vertices whose colors the cheap choices determine: Qbar ∪ Qhat ∪ Q^s."""
    return t.Qbar | t.Qhat | t.Q_small
