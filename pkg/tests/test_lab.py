import random
from fractions import Fraction
from itertools import product

import pytest

from garsidelab.certify import Padder, structural_seed
from garsidelab.coxeter import UnsupportedType, all_elements, build_root_system
from garsidelab.garside import ArtinGroup, exponent_sum, project_to_W
from garsidelab.lab import (
    CSV_COLUMNS,
    CapExceeded,
    SubgroupSpec,
    census_certified,
    census_csv,
    census_manifest,
    enumerate_ball,
    estimate_R0,
    covering_check,
    positive_elements_of_length,
    subgroup_generators,
)


def test_full_generators_a2():
    spec = subgroup_generators("full", "A2")
    assert sorted(str(g) for g in spec.gens) == sorted(
        str(ArtinGroup("A2").element(w)) for w in ("1", "-1", "2", "-2"))
    assert spec.check() == []


def test_pure_a1():
    spec = subgroup_generators("pure", "A1")
    G = ArtinGroup("A1")
    assert {g.key for g in spec.gens} == {G.element("1 1").key, G.element("-1 -1").key}


@pytest.mark.parametrize("name", ["A2", "A3", "B3"])
def test_pure_generators_valid(name):
    spec = subgroup_generators("pure", name)
    assert spec.check() == []
    # Schreier bound: at most |W| (n - 1) + 1 nontrivial generators, doubled by inverses
    W = len(all_elements(spec.rs))
    assert len(spec.gens) <= 2 * (W * (spec.rs.rank - 1) + 1)


def _positive_classes(length, m_rel=((1, 2, 1), (2, 1, 2))):
    # union-find over positive words of A2 under 121 <-> 212
    words = list(product((1, 2), repeat=length))
    parent = {w: w for w in words}

    def find(w):
        while parent[w] != w:
            w = parent[w]
        return w

    u, v = m_rel
    for w in words:
        for i in range(length - 2):
            if w[i:i + 3] == u:
                ww = w[:i] + v + w[i + 3:]
                parent[find(ww)] = find(w)
    return len({find(w) for w in words})


def test_positive_layer_counts_match_brute_force():
    rs = build_root_system("A2")
    for L in range(0, 7):
        assert len(positive_elements_of_length(rs, L)) == _positive_classes(L)


def test_commutator_generators_a2():
    spec = subgroup_generators("commutator", "A2")
    assert spec.check() == []
    G = ArtinGroup("A2")
    dinv = G.delta(-1)
    expected = {(dinv * a).key for a in positive_elements_of_length(G.rs, 3)} - {G.identity().key}
    keys = {g.key for g in spec.gens}
    assert expected <= keys
    assert keys == expected | {g.inverse().key for g in spec.gens if g.key in expected}
    assert all(exponent_sum(g) == 0 for g in spec.gens)


def test_commutator_gate():
    with pytest.raises(UnsupportedType):
        subgroup_generators("commutator", "B3")
    with pytest.raises(ValueError):
        subgroup_generators("nonsense", "A2")


def test_ball_sizes_a2():
    b = enumerate_ball(subgroup_generators("full", "A2"), 4)
    assert b.sizes()[:3] == [1, 5, 17]
    assert enumerate_ball(subgroup_generators("full", "A2"), 0).sizes() == [1]


def test_ball_matches_word_oracle():
    # distinct elements among words of length <= 4 equals |B(4)|
    G = ArtinGroup("A2")
    keys = set()
    for L in range(5):
        for w in product((1, -1, 2, -2), repeat=L):
            keys.add(G.element(list(w)).key)
    assert len(keys) == enumerate_ball(subgroup_generators("full", "A2"), 4).sizes()[-1]


def test_ball_deterministic_and_order_free():
    spec = subgroup_generators("full", "A3")
    a = enumerate_ball(spec, 3)
    b = enumerate_ball(spec, 3)
    assert [x.key for x in a.elements] == [x.key for x in b.elements]
    gens = list(spec.gens)
    random.Random(3).shuffle(gens)
    c = enumerate_ball(SubgroupSpec("full", spec.ctype, gens), 3)
    assert c.sizes() == a.sizes()
    assert {x.key for x in c.elements} == {x.key for x in a.elements}


@pytest.mark.parametrize("kind,name,R", [("full", "A2", 6), ("full", "B3", 3), ("pure", "A2", 3),
                                         ("commutator", "A2", 3)])
def test_growth_sanity(kind, name, R):
    spec = subgroup_generators(kind, name)
    b = enumerate_ball(spec, R)
    spheres, balls = b.spheres(), b.sizes()
    assert all(x < y for x, y in zip(balls, balls[1:]))
    for r in range(1, R):
        assert spheres[r + 1] <= len(spec.gens) * spheres[r]
    for R1 in range(R + 1):
        for R0 in range(R1 + 1):
            assert balls[R1] <= balls[R1 - R0] * balls[R0]


def test_ball_members_lie_in_subgroup():
    for kind, pred in (("pure", lambda g: project_to_W(g).length == 0),
                       ("commutator", lambda g: exponent_sum(g) == 0)):
        for g in enumerate_ball(subgroup_generators(kind, "A2"), 2).elements:
            assert pred(g)


def test_cap_exceeded():
    with pytest.raises(CapExceeded) as info:
        enumerate_ball(subgroup_generators("full", "A2"), 6, cap=100)
    assert info.value.partial == [1, 5, 17, 47]


@pytest.fixture(scope="module")
def census_a2():
    return census_certified(subgroup_generators("full", "A2"), 8, structural_seed("A2", 1, N=2))


def test_census_a2(census_a2):
    c = census_a2
    assert c.rows[0].certified == 0 and c.rows[0].proportion == 0
    assert c.R0 == 5
    assert c.rows[8].certified > 0
    for row in c.rows:
        assert row.certified <= row.ball
        if row.within_R0 is not None:
            assert row.within_R0 <= row.ball
        if row.R > c.R0:
            assert row.epsilon == row.epsilon_prime / c.rows[c.R0].ball
            assert row.proportion >= row.epsilon > 0


def test_covering_checks(census_a2):
    c = census_a2
    assert covering_check(c, c.R0).vacuous
    for R in range(c.R0 + 1, 9):
        rep = covering_check(c, R)
        assert rep.passed and not rep.vacuous
    empty = [False] * len(c.certified_flags)
    rep = covering_check(c, c.R0 + 2, certified=empty)
    assert not rep.distance_ok and not rep.counting_ok


def test_census_permutation_invariant():
    spec = subgroup_generators("full", "A2")
    seed = structural_seed("A2", 1, N=2)
    a = census_certified(spec, 6, seed)
    gens = list(spec.gens)[::-1]
    b = census_certified(SubgroupSpec("full", spec.ctype, gens), 6, seed)
    assert [r.certified for r in a.rows] == [r.certified for r in b.rows]
    assert a.R0 == b.R0


def test_census_outputs(census_a2):
    text = census_csv(census_a2)
    lines = text.strip().splitlines()
    assert lines[0].split(",") == CSV_COLUMNS
    assert len(lines) == 10
    last = lines[-1].split(",")
    assert last[0] == "A2" and last[1] == "full" and last[-1] == "2"
    assert last[-2] == "structural-search"
    assert Fraction(last[9]) == census_a2.rows[8].epsilon_prime
    man = census_manifest(census_a2)
    assert man["R0"] == 5 and len(man["generators"]) == 4


def test_census_ball_max_mode():
    spec = subgroup_generators("full", "A2")
    c = census_certified(spec, 8, structural_seed("A2", 1, N=2), r0_mode="ball-max")
    assert c.R0_source in ("ball-max", "no-certified-path")
    c = census_certified(spec, 8, structural_seed("A2", 1, N=2), padding_bound=3)
    assert c.R0 == 3 and c.R0_source == "padding-bound"


def test_census_seed_type_mismatch():
    with pytest.raises(ValueError):
        census_certified(subgroup_generators("full", "A2"), 2, structural_seed("A3", 1, N=2))


def test_estimate_R0_plain():
    spec = subgroup_generators("full", "A2")
    P = Padder("A2", 2)
    est = estimate_R0(spec, 4, P, search_radius=6)
    assert est.paddings >= 1
    assert est.value <= P.padding_bound("plain")


def test_estimate_R0_constraints():
    P = Padder("A2", 2)
    for kind, check in (("pure", lambda x: project_to_W(x).length == 0),
                        ("commutator", lambda x: exponent_sum(x) == 0)):
        spec = subgroup_generators(kind, "A2")
        ball = enumerate_ball(spec, 2)
        for g in ball.elements:
            assert check(P.pad(g, kind).x)
        est = estimate_R0(spec, 2, P)
        assert est.value >= 1 and not est.exact
