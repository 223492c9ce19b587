"""Closed-form counts and bounds, exact where possible and in log2 otherwise.

All real arithmetic runs through mpmath at ``PREC`` bits.  Where a formula
has an unspecified ``o(1)`` it is evaluated at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import mpmath

from .cube import Cube

PREC = 128


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass(frozen=True)
class LogValue:
    """A positive quantity held as ``log2``; ``exact`` when it is an integer we know."""

    log2_value: mpmath.mpf
    exact: int | None = None
    power_of_two: Fraction | None = None
    coefficient: mpmath.mpf | None = None

    def __post_init__(self):
        if self.exact is not None and self.exact > 0:
            with mpmath.workprec(PREC):
                if abs(self.log2_value - mpmath.log(self.exact, 2)) >= 1e-9:
                    raise ValueError("log2_value disagrees with exact value")

    @property
    def value(self) -> mpmath.mpf:
        with mpmath.workprec(PREC):
            return mpmath.power(2, self.log2_value)

    def to_dict(self) -> dict:
        out = {"log2": mpmath.nstr(self.log2_value, 20)}
        if self.exact is not None:
            out["exact"] = str(self.exact)
        if self.power_of_two is not None:
            out["power_of_two"] = str(self.power_of_two)
            out["coefficient"] = mpmath.nstr(self.coefficient, 20)
        return out


def _log_value(coefficient, power: Fraction) -> LogValue:
    with mpmath.workprec(PREC):
        lv = mpmath.log(coefficient, 2) + _mp(power)
    return LogValue(lv, None, power, coefficient)


def theorem_value(which: str, cube: Cube) -> LogValue:
    """Right-hand side of ``C_4 ~ 6e 2^N``, ``C_3 ~ 6e 2^{N/2}`` or ``i ~ 2 sqrt(e) 2^{N/2}``."""
    N = cube.N
    with mpmath.workprec(PREC):
        if which == "C4":
            return _log_value(6 * mpmath.e, Fraction(N))
        if which == "C3":
            return _log_value(6 * mpmath.e, Fraction(N, 2))
        if which == "ISets":
            return _log_value(2 * mpmath.sqrt(mpmath.e), Fraction(N, 2))
    raise ValueError("which must be C4, C3 or ISets")


def ideal_terms(cube: Cube) -> list[int]:
    """``C(N,k) 2^{N-dk}`` for ``0 <= k <= N/d``."""
    N, d = cube.N, cube.d
    return [math.comb(N, k) << (N - d * k) for k in range(N // d + 1)]


def ideal_upper_bound(cube: Cube) -> LogValue:
    """``6 Σ_k C(N,k) 2^{N-dk}``, checked against ``6e 2^N`` by exact rationals.

    With ``2^{dk} = N^k`` each ratio term is ``C(N,k)/N^k <= 1/k!``, so the
    sum is compared with a rational partial sum of e's series that is
    itself below e.
    """
    total = 6 * sum(ideal_terms(cube))
    if not ideal_bound_below_theorem(cube):
        raise ArithmeticError("ideal bound is not below 6e 2^N")
    with mpmath.workprec(PREC):
        return LogValue(mpmath.log(total, 2), total)


def ideal_bound_below_theorem(cube: Cube) -> bool:
    """Exact-rational certificate that ``ideal_upper_bound < 6e 2^N``."""
    # Sum of C(N,k)/N^k over k <= K, against the (K+1)-term partial sum of e.
    N = cube.N
    K = N // cube.d
    ratio = Fraction(sum(ideal_terms(cube)), 1 << N)
    return ratio < sum(Fraction(1, math.factorial(j)) for j in range(K + 2))


def f_q(q: int, d: int) -> Fraction:
    """Exponent of the isolated-flaw factor: two terms in ``floor``/``ceil`` of q/2."""
    lo, hi = q // 2, (q + 1) // 2
    t1 = Fraction(hi, 2 * lo) * (2 - Fraction(2, hi)) ** d
    t2 = Fraction(lo, 2 * hi) * (2 - Fraction(2, lo)) ** d
    return t1 + t2


def eg_conjecture_value(q: int, cube: Cube) -> LogValue:
    """``(1 + [q odd]) C(q, ⌊q/2⌋) (⌊q/2⌋⌈q/2⌉)^{N/2} exp(f(q))`` with the o(1) at 0."""
    if q < 2:
        raise ValueError("q must be at least 2")
    lo, hi = q // 2, (q + 1) // 2
    lead = (2 if q % 2 else 1) * math.comb(q, lo)
    fq = f_q(q, cube.d)
    with mpmath.workprec(PREC):
        lv = (mpmath.log(lead, 2) + mpmath.mpf(cube.N) / 2 * mpmath.log(lo * hi, 2)
              + _mp(fq) * mpmath.log(mpmath.e, 2))
    return LogValue(lv)


def conjecture_56_value(q: int, cube: Cube) -> LogValue:
    """The sharper guess for q in {5, 6}; same expression as the general one without o(1)."""
    if q not in (5, 6):
        raise ValueError("only stated for q in {5, 6}")
    return eg_conjecture_value(q, cube)


@dataclass(frozen=True)
class MainLemmaBound:
    branch: str
    log2_value: mpmath.mpf
    sum_g: mpmath.mpf | None
    sum_hat: mpmath.mpf | None
    aggregate: mpmath.mpf | None
    zeta: float

    def to_dict(self) -> dict:
        s = lambda x: None if x is None else mpmath.nstr(x, 20)
        return {"branch": self.branch, "log2": s(self.log2_value), "sum_g": s(self.sum_g),
                "sum_hat": s(self.sum_hat), "aggregate": s(self.aggregate), "zeta": self.zeta}


def lemma_mp_bound(g: int, g_hat: int, cube: Cube, zeta: float = 1.0) -> MainLemmaBound:
    """Density bound for colorings with given ``|G|``, ``|G_hat|``; Ω replaced by zeta.

    Also evaluates the geometric sums that aggregate it over all (g, g_hat):
    ``x^d/(1-x)`` with ``x = 2^{-zeta/log d}`` and ``y^{d^2/log d}/(1-y)`` with
    ``y = 2^{-zeta log(d/log d)/d}``.
    """
    if g < 0 or g_hat < 0:
        raise ValueError("g and g_hat must be nonnegative")
    d = cube.d
    with mpmath.workprec(PREC):
        z = mpmath.mpf(zeta)
        logd = mpmath.log(d, 2)
        cut = mpmath.inf if d == 1 else mpmath.mpf(d) ** 2 / logd
        if g == 0 and g_hat <= cut:
            branch, lv = "small", -z * d
        else:
            branch = "general"
            gh = mpmath.mpf(g_hat) / d
            xlx = gh * mpmath.log(gh, 2) if g_hat else mpmath.mpf(0)
            lv = -z * (mpmath.mpf(g) / logd + xlx) if d > 1 else -mpmath.inf
        sum_g = sum_hat = agg = None
        if d >= 2:
            x = mpmath.power(2, -z / logd)
            sum_g = mpmath.power(x, d) / (1 - x)
            y = mpmath.power(2, -z * mpmath.log(d / logd, 2) / d)
            if y < 1:
                sum_hat = mpmath.power(y, cut) / (1 - y)
                agg = cut * sum_g + (1 + sum_g) * sum_hat
    return MainLemmaBound(branch, lv, sum_g, sum_hat, agg, zeta)


def _fmt(x) -> str:
    if x is None:
        return ""
    return mpmath.nstr(mpmath.mpf(x), 12)


def ratio_report(d_range: Iterable[int], q: int, threshold=None, workers: int = 1) -> list[dict]:
    """One row per d: exact count, ideal census, closed forms and their ratios."""
    from .counting import count_colorings
    from .errors import InstanceTooLarge
    from .phases import ideal_census

    rows = []
    theorem = {4: "C4", 3: "C3"}.get(q)
    for d in d_range:
        cube = Cube(d)
        row: dict = {"d": d, "q": q, "N": cube.N}
        try:
            res = count_colorings(cube, q, workers=workers)
            exact = res.value
            row["exact"] = str(exact)
            row["method"] = res.method
        except InstanceTooLarge:
            exact = None
            row["exact"] = ""
            row["method"] = ""
        ideal = ub = None
        if q == 4:
            ub = ideal_upper_bound(cube).exact
            row["ideal_upper_bound"] = str(ub)
            if d <= 3:
                ideal = ideal_census(cube, threshold).ideal
        row["ideal_census"] = "" if ideal is None else str(ideal)
        with mpmath.workprec(PREC):
            th = theorem_value(theorem, cube).value if theorem else None
            eg = eg_conjecture_value(q, cube).value
            row["theorem"] = _fmt(th)
            row["eg_conjecture"] = _fmt(eg)
            row["exact/theorem"] = _fmt(exact / th) if exact and th else ""
            row["exact/eg_conjecture"] = _fmt(exact / eg) if exact else ""
            row["ideal/exact"] = _fmt(mpmath.mpf(ideal) / exact) if ideal is not None and exact else ""
            row["ideal/ideal_upper_bound"] = _fmt(mpmath.mpf(ideal) / ub) if ideal is not None else ""
            row["ideal_upper_bound/theorem"] = _fmt(ub / th) if ub and th else ""
        rows.append(row)
    return rows
