import json
import math
from itertools import combinations

import pytest

from cubecolor.counting import Coloring
from cubecolor.cube import Cube, closure, distance, k_components, neighborhood
from cubecolor.errors import NotInFstar
from cubecolor.phases import MAIN, classify, flaw_set
from cubecolor.templates import (
    CostConstants,
    SFPair,
    Template,
    canonical_sf_pair,
    decompose,
    default_cutoff,
    fixed_template_classes,
    fixed_vertices,
    is_exceptional,
    sf_conditions,
    template_cost_ledger,
    template_key,
    verify_monochromatic,
    verify_SF,
)


def groups(X, k=2):
    """Maximal k-linked pieces of X by pairwise distance (oracle)."""
    X = sorted(X)
    comp = {x: {x} for x in X}
    for u, v in combinations(X, 2):
        if distance(u, v) <= k and comp[u] is not comp[v]:
            merged = comp[u] | comp[v]
            for w in merged:
                comp[w] = merged
    return sorted({frozenset(c) for c in comp.values()}, key=min)


def nbhd(S, d):
    return {v ^ (1 << i) for v in S for i in range(d)}


def oracle_template(f):
    d = f.d
    n = 1 << d
    even = {v for v in range(n) if bin(v).count("1") % 2 == 0}
    odd = set(range(n)) - even
    X = {v for v in range(n) if (f[v] not in (3, 4)) if v in odd} | {v for v in even if f[v] not in (1, 2)}
    comps_E = groups(X & even)
    A = [c for c in comps_E if len(c) > 1]
    Ahat = [c for c in comps_E if len(c) == 1]
    GG = nbhd(set().union(*comps_E), d) if comps_E else set()
    R = odd - GG
    near = nbhd(nbhd(GG, d), d)
    P, Pbar, Phat = [], [], []
    for c in groups(X & R):
        if c & near:
            P.append(c)
        elif len(c) > 1:
            Pbar.append(c)
        else:
            Phat.append(c)
    return {"X": X, "A": A, "Ahat": Ahat, "R": R, "P": P, "Pbar": Pbar, "Phat": Phat}


def template_instances(colorings_d3, fstar_d3, fstar_d4_sample, relaxed_d4_sample):
    """(coloring, template) pairs: F* at d=3 and sampled d=4, plus relaxed ones.

    Relaxed means any flawed coloring with main phase 12|34, decomposed
    without the F* test; at d=3 these add singleton odd flaws, at d=4 they
    supply P and Pbar components.
    """
    out = [(f, decompose(f)) for f in fstar_d3]
    out += [(f, decompose(f)) for f in fstar_d4_sample]
    for f in colorings_d3:
        if flaw_set(f, MAIN) and classify(f).phase == MAIN:
            out.append((f, decompose(f, require_fstar=False)))
    out += [(f, decompose(f, require_fstar=False)) for f in relaxed_d4_sample]
    return out


@pytest.fixture(scope="module")
def instances(colorings_d3, fstar_d3, fstar_d4_sample, relaxed_d4_sample):
    return template_instances(colorings_d3, fstar_d3, fstar_d4_sample, relaxed_d4_sample)


def test_instances_cover_every_family(instances):
    assert any(t.A_list for _, t in instances)
    assert any(t.Ahat_list for _, t in instances)
    assert any(t.P_list for _, t in instances)
    assert any(t.Pbar_list for _, t in instances)
    assert any(t.Phat_list for _, t in instances)
    assert any(t.P_list and t.d == 4 for _, t in instances)


class TestDecompose:
    def test_census_size(self, fstar_d3):
        assert len(fstar_d3) == 72

    def test_first_census_member(self, fstar_d3):
        f = fstar_d3[0]
        assert str(f) == "12314324"
        t = decompose(f)
        want = oracle_template(f)
        assert t.A | t.A_hat == frozenset(want["X"]) & f.cube.even
        assert t.A_list == () and t.Ahat_list == (frozenset({5}),)
        assert list(t.P_list) == want["P"] and list(t.Pbar_list) == want["Pbar"]
        assert list(t.Phat_list) == want["Phat"]
        assert t.X == {1, 5}

    def test_matches_oracle(self, instances):
        for f, t in instances:
            want = oracle_template(f)
            assert t.X == want["X"]
            assert list(t.A_list) == want["A"] and list(t.Ahat_list) == want["Ahat"]
            assert t.R == want["R"]
            assert (list(t.P_list), list(t.Pbar_list), list(t.Phat_list)) == (want["P"], want["Pbar"], want["Phat"])

    def test_partition_exactness(self, instances):
        for f, t in instances:
            XE = frozenset(v for v in t.X if v in f.cube.even)
            assert t.A | t.A_hat == XE and not t.A & t.A_hat
            assert t.P | t.Pbar | t.Phat == t.X & t.R
            assert sum(map(len, t.P_list + t.Pbar_list + t.Phat_list)) == len(t.X & t.R)
            assert all(len(c) == 1 for c in t.Ahat_list) and all(len(c) > 1 for c in t.A_list)
            assert all(len(c) == 1 for c in t.Phat_list) and all(len(c) > 1 for c in t.Pbar_list)
            assert t.R == f.cube.odd - (t.G | t.G_hat)

    def test_classification_by_second_neighborhood(self, instances):
        for f, t in instances:
            near = neighborhood(neighborhood(t.G | t.G_hat, f.cube), f.cube)
            assert all(P & near for P in t.P_list)
            assert not any(P & near for P in t.Pbar_list + t.Phat_list)

    def test_disjoint_neighborhoods(self, instances):
        for f, t in instances:
            for fam in (t.G_list + t.Ghat_list, t.Q_list + t.Qbar_list + t.Qhat_list):
                for a, b in combinations(fam, 2):
                    assert not a & b

    def test_q_sets_are_good(self, instances):
        for f, t in instances:
            assert not (t.Q | t.Qbar | t.Qhat) & t.X

    def test_closure_of_P_avoids_boundaries(self, instances):
        checked = 0
        for f, t in instances:
            for P in t.P_list + t.Pbar_list + t.Phat_list:
                if not neighborhood(P, f.cube) & (t.A | t.A_hat):
                    checked += 1
                    assert not closure(P, f.cube) & (t.G | t.G_hat)
        assert checked

    def test_exceptional_flag(self, instances):
        for f, t in instances:
            a, pbar, p = len(t.A), len(t.Pbar), len(t.P)
            want = a == pbar == p == 0 and t.g_hat <= f.d ** 2 / math.log2(f.d)
            assert t.exceptional == want == is_exceptional(a, pbar, p, t.g_hat, f.d)

    def test_exceptional_members_have_flaws_in_boundary(self, fstar_d3):
        seen = 0
        for f in fstar_d3:
            t = decompose(f)
            if t.exceptional:
                seen += 1
                assert t.X & t.G_hat
        assert seen == 48

    def test_two_linked_pair(self, colorings_d3):
        hits = 0
        for f in colorings_d3:
            if classify(f).phase == MAIN and flaw_set(f, MAIN) & f.cube.even == {0, 3}:
                t = decompose(f, require_fstar=False)
                assert t.A == {0, 3} and t.A_hat == frozenset() and t.i_A_small == 1
                assert k_components({0, 3}, 2, f.cube).count == 1
                hits += 1
        assert hits

    def test_no_odd_flaws(self, instances):
        hits = 0
        for f, t in instances:
            if not t.X & f.cube.odd:
                hits += 1
                assert t.P_list == t.Pbar_list == t.Phat_list == ()
                assert not t.R & t.X
        assert hits

    def test_rejections_name_condition(self, colorings_d3, relaxed_d4_sample):
        pure = Coloring.from_string("13313113")
        with pytest.raises(NotInFstar, match="ideal"):
            decompose(pure)
        other = next(f for f in colorings_d3 if classify(f).phase != MAIN)
        with pytest.raises(NotInFstar, match="main phase"):
            decompose(other)
        with pytest.raises(NotInFstar, match="no main phase"):
            decompose(pure, threshold=lambda d: 0)
        odd_heavy = next(f for f in relaxed_d4_sample
                         if classify(f).phase == MAIN and not classify(f).ideal and not classify(f).in_fstar)
        with pytest.raises(NotInFstar, match=r"N\(X∩E\)") as exc:
            decompose(odd_heavy)
        assert exc.value.condition

    def test_default_cutoff_makes_everything_small(self, instances):
        for f, t in instances:
            assert t.cutoff == default_cutoff(f.d)
            if f.d >= 3:
                assert not t.A_large and not t.P_large and t.b == 0

    def test_low_cutoff_marks_large(self, fstar_d4_sample):
        f = next(f for f in fstar_d4_sample if decompose(f).A_list)
        t = decompose(f, cutoff=1)
        assert t.A_large == t.A and t.G_large == t.G and t.i_A_small == 0
        assert t.b == len({v for v in f.cube.odd if set(f.cube.neighbors(v)) <= t.A})

    def test_to_dict_is_json(self, fstar_d3):
        d = decompose(fstar_d3[0]).to_dict()
        json.dumps(d)
        assert d["A_hat"] == [5] and d["g_hat"] == 3 and d["X"] == [1, 5]


class TestMonochromatic:
    def test_all_instances_pass(self, instances):
        components = 0
        for f, t in instances:
            rep = verify_monochromatic(f, t)
            assert rep.consistent and rep.passed, rep.failures()
            components += len(rep.checks)
        assert components

    def test_census_members_pass(self, fstar_d3):
        for f in fstar_d3:
            assert verify_monochromatic(f, decompose(f)).passed

    def test_vacuous(self, fstar_d3):
        f = fstar_d3[0]
        rep = verify_monochromatic(f, decompose(f))
        assert rep.checks == () and rep.passed

    def test_foreign_template_reported(self, instances):
        f, t = next((f, t) for f, t in instances if t.Phat_list and f.d == 3)
        other = next(g for g, s in instances if g.d == 3 and s.X != t.X)
        rep = verify_monochromatic(other, t)
        assert not rep.consistent and not rep.passed and rep.failures()
        small = Coloring.from_string("1331")
        assert not verify_monochromatic(small, t).passed

    def test_F_sets(self, instances):
        f, t = next((f, t) for f, t in instances if t.P_list)
        Q = t.Q_list[0]
        assert verify_monochromatic(f, t, [Q]).passed
        assert not verify_monochromatic(f, t, [f.cube.even]).passed

    def test_to_dict(self, instances):
        f, t = next((f, t) for f, t in instances if t.Pbar_list)
        json.dumps(verify_monochromatic(f, t).to_dict())


class TestSF:
    @staticmethod
    def _large(instances):
        out = []
        for f, t in instances:
            if t.P_list:
                out.append((f, decompose(f, cutoff=1, require_fstar=False)))
        return out

    def test_canonical_pair_holds(self, instances):
        large = self._large(instances)
        assert any(f.d == 4 for f, _ in large)
        for f, t in large:
            for P in t.large_P_components():
                pair = canonical_sf_pair(t, P, f.cube)
                conds = sf_conditions(pair, t, f.cube)
                assert conds["contains"] and conds["disjoint"]
                d = f.d
                want = all(sum(1 for w in f.cube.neighbors(u) if w in pair.F) >= d - d / math.log2(d)
                           for u in pair.S)
                assert conds["degree"] == want
                assert verify_SF(pair, t, f.cube) == want

    def test_default_cutoff_clashes_with_small_Q(self, instances):
        f, t = next((f, t) for f, t in instances if t.P_list)
        pair = canonical_sf_pair(t, t.P_list[0], f.cube)
        assert not sf_conditions(pair, t, f.cube)["disjoint"]

    def test_missing_closure_vertex(self, instances):
        f, t = self._large(instances)[0]
        P = t.P_list[0]
        pair = canonical_sf_pair(t, P, f.cube)
        v = min(pair.S)
        assert not verify_SF(SFPair(pair.S - {v}, pair.F, P), t, f.cube)

    def test_F_outside_Q(self, instances):
        f, t = self._large(instances)[0]
        P = t.P_list[0]
        pair = canonical_sf_pair(t, P, f.cube)
        extra = min(f.cube.even - pair.F)
        assert not verify_SF(SFPair(pair.S, pair.F | {extra}, P), t, f.cube)

    def test_natural_log_option(self, instances):
        f, t = self._large(instances)[0]
        pair = canonical_sf_pair(t, t.P_list[0], f.cube)
        assert set(sf_conditions(pair, t, f.cube, log=math.log)) == {"contains", "degree", "disjoint"}

    def test_target_must_be_P(self, fstar_d3):
        t = decompose(fstar_d3[0])
        with pytest.raises(ValueError):
            sf_conditions(SFPair(frozenset(), frozenset(), frozenset({1})), t, Cube(3))


def empty_template(d):
    c = Cube(d)
    f = Coloring(tuple(3 if bin(v).count("1") % 2 else 1 for v in range(c.N)), 4, c)
    return f, decompose(f, require_fstar=False)


class TestLedger:
    def test_empty_template_terms_zero(self):
        f, t = empty_template(3)
        led = template_cost_ledger(t, f.cube)
        assert all(v == 0 for v in led["template"].values())
        assert led["coloring"]["C1"] == 0
        assert led["coloring"]["C2"] == led["coloring"]["C3"] == 4
        assert led["coloring"]["CS"] == 8

    def test_singleton_term(self, fstar_d3):
        for f in fstar_d3:
            t = decompose(f)
            if not t.A and t.A_hat:
                led = template_cost_ledger(t, f.cube)
                assert led["template"]["A_hat"] == math.log2(math.comb(4, len(t.A_hat)))

    def test_constants_flow_through(self, fstar_d3):
        t = decompose(fstar_d3[0])
        a = template_cost_ledger(t, Cube(3), constants=CostConstants(zeta=1, c=2))
        b = template_cost_ledger(t, Cube(3), constants=CostConstants(zeta=1, c=3))
        assert a["template"]["params"] > 0
        assert b["template"]["params"] == pytest.approx(1.5 * a["template"]["params"])
        assert b["coloring"]["C1"] > a["coloring"]["C1"]

    def test_stable_snapshot(self, fstar_d3):
        f = fstar_d3[0]
        t = decompose(f)
        one = json.dumps(template_cost_ledger(t, f.cube), sort_keys=True)
        two = json.dumps(template_cost_ledger(decompose(f), f.cube), sort_keys=True)
        assert one == two
        led = json.loads(one)
        assert led["template"]["A_hat"] == pytest.approx(2.0)
        assert led["coloring"]["C1"] == pytest.approx(3 + 2 * 3 / 3)


class TestFixedTemplates:
    def test_classes_partition_census(self, fstar_d3):
        classes = fixed_template_classes(fstar_d3)
        assert sum(map(len, classes.values())) == 72
        for key, members in classes.items():
            for f in members:
                assert template_key(f, decompose(f)) == key

    def test_fixed_vertices_are_fixed(self, fstar_d3):
        for members in fixed_template_classes(fstar_d3).values():
            V = fixed_vertices(decompose(members[0]))
            for v in V:
                assert len({f[v] for f in members}) == 1
