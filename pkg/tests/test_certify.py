import json

import pytest

from garsidelab.coxeter import UnsupportedType, all_elements, build_root_system, cox_from_word
from garsidelab.garside import (
    ArtinElement,
    ArtinGroup,
    atom,
    exponent_sum,
    is_left_weighted,
    is_normal,
    is_rigid,
    project_to_W,
)
from garsidelab.certify import (
    MAX_FACTORS,
    LoxodromicSeed,
    Padder,
    SearchExhausted,
    SeedRegistry,
    build_w_p,
    build_w_r,
    build_w_z,
    certify,
    choose_atom_for_type,
    delta_over,
    find_structural_xa,
    is_structural_seed,
    make_certificate,
    odd_edges_connected,
    structural_seed,
)
from garsidelab.lab import enumerate_ball, subgroup_generators


def words(chain):
    return [list(f.word) for f in chain]


@pytest.mark.parametrize("name,a", [("B4", 2), ("D5", 3), ("E7", 4), ("F4", 2), ("H3", 2),
                                    ("H4", 2), ("I2(6)", 2), ("A3", 1)])
def test_choose_atom(name, a):
    assert choose_atom_for_type(name) == a


def test_structural_search():
    assert str(find_structural_xa("A2", 1, 2, 2)) == "D^0 | 1 | 1"
    assert str(find_structural_xa("A2", 1, 1)) == "D^0 | 1"
    x = find_structural_xa("B3", 2, 3, 2)
    assert is_structural_seed(x, 2)
    with pytest.raises(SearchExhausted):
        find_structural_xa("A2", 1, 1, 2)


def test_structural_predicate_rejects():
    G = ArtinGroup("A2")
    assert not is_structural_seed(G.element("1 2"), 1)
    assert not is_structural_seed(G.element("1 1"), 2)
    assert not is_structural_seed(G.element(""), 1)
    assert is_structural_seed(G.element("1 1 1"), 1)


def test_w_z_w_r_examples():
    rs = build_root_system("A2")
    assert words(build_w_z(rs, 1, 1)) == [[1]]
    assert words(build_w_z(rs, 2, 1)) == [[2], [2, 1], [1]]
    assert words(build_w_r(rs, 1, 2)) == [[1], [1, 2], [2, 1]]
    assert words(build_w_r(rs, 2, 1)) == [[2], [2, 1], [1, 2]]


@pytest.mark.parametrize("name", ["A3", "B3", "D4", "H3", "I2(5)", "F4", "A5"])
def test_chains_bounded_and_left_weighted(name):
    rs = build_root_system(name)
    n = rs.rank
    for b in range(1, n + 1):
        for a in range(1, n + 1):
            for chain, first, last in ((build_w_z(rs, b, a), atom(rs, b), atom(rs, a)),
                                       (build_w_r(rs, b, a), atom(rs, b), delta_over(rs, a))):
                assert len(chain) <= MAX_FACTORS
                assert chain[0] == first and chain[-1] == last
                assert all(is_left_weighted(x, y) for x, y in zip(chain, chain[1:]))
                assert is_normal(ArtinElement(rs, 0, chain))


@pytest.mark.parametrize("name", ["A2", "B3", "H3"])
def test_delta_over_times_s_is_delta(name):
    rs = build_root_system(name)
    for s in range(1, rs.rank + 1):
        assert delta_over(rs, s).cox * rs.generator(s) == rs.longest


@pytest.mark.parametrize("name", ["A3", "B3"])
def test_w_p_exhaustive(name):
    rs = build_root_system(name)
    a = choose_atom_for_type(name)
    at = atom(rs, a)
    for w in all_elements(rs):
        fac = build_w_p(rs, w, a)
        x = ArtinElement(rs, 0, fac)
        assert is_normal(x)
        assert fac[0] == at and fac[-1] == at
        assert project_to_W(x) == w


def test_w_p_table_blocks():
    rs = build_root_system("B3")
    assert words(build_w_p(rs, cox_from_word(rs, [1]), 2)) == [[2], [2, 1, 2], [2]]
    rs = build_root_system("A3")
    assert words(build_w_p(rs, cox_from_word(rs, [1]), 1)) == [[1]]
    assert words(build_w_p(rs, rs.identity, 1)) == [[1], [1]]


def test_certify_basics():
    G = ArtinGroup("A2")
    seed = structural_seed("A2", 1, N=2)
    assert not certify(G.element(""), seed)
    assert certify(seed.w_a, seed)
    assert not certify(G.element("1 2"), seed)
    assert not certify(G.element("1 1 1"), seed)
    assert certify(G.element("1 1 1 1"), seed)


def test_seed_checks_and_labels():
    seed = structural_seed("B3", None, N=3)
    assert seed.check() == []
    assert seed.label == "structural"
    assert seed.block == seed.xa.factors * 3
    ref = LoxodromicSeed(seed.ctype, seed.atom, seed.xa, 390, "reference")
    assert ref.label == "certified"
    with pytest.raises(ValueError):
        LoxodromicSeed(seed.ctype, seed.atom, seed.xa, 0)


def test_registry_round_trip(tmp_path):
    reg = SeedRegistry([structural_seed("A3", a, N=4) for a in (1, 2, 3)])
    path = tmp_path / "seeds.jsonl"
    reg.dump(path)
    lines = path.read_text().splitlines()
    assert len(lines) == 3
    assert set(json.loads(lines[0])) == {"type", "atom", "atom_word_of_xa", "N", "provenance"}
    back = SeedRegistry.load(path)
    assert [s.record() for s in back] == [s.record() for s in reg]


def test_registry_rejects_bad_seed(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps({"type": "A2", "atom": 1, "atom_word_of_xa": [1, 2], "N": 2,
                                "provenance": "reference"}) + "\n")
    with pytest.raises(ValueError):
        SeedRegistry.load(path)


def _check(cert):
    assert cert.product_rigid and cert.contains_block and cert.constraint_ok
    # recomputed, not trusted
    again = make_certificate(cert.kind, cert.g, cert.x, cert.seed, cert.constraint)
    assert again.ok


@pytest.mark.parametrize("word", ["", "1 1", "D", "-D", "D D", "2", "-1 2 -1", "1 2 1 2 2"])
def test_pad_plain_a2(word):
    G = ArtinGroup("A2")
    P = Padder("A2", 2)
    cert = P.pad_plain(G.element(word))
    _check(cert)


def test_pad_plain_sigma1_squared_choices():
    G = ArtinGroup("A2")
    cert = Padder("A2", 2).pad_plain(G.element("1 1"))
    assert cert.choices["b"] == 1 and cert.choices["s"] == 2


@pytest.mark.parametrize("name", ["A2", "A3", "B3", "D4", "I2(5)", "H3"])
def test_pad_plain_and_pure_small_types(name):
    G = ArtinGroup(name)
    P = Padder(name, 2)
    for w in ["", "1", "-1", "D", "-D", "1 2 -1", "2 2 -1 1"]:
        g = G.element(w)
        _check(P.pad_plain(g))
    for w in ["", "1 1", "D D", "-2 -2 1 1"]:
        cert = P.pad_pure(G.element(w))
        _check(cert)
        assert project_to_W(cert.x) == G.rs.identity


def test_pad_pure_requires_pure():
    with pytest.raises(ValueError):
        Padder("A3", 2).pad_pure(ArtinGroup("A3").element("1"))


def test_pad_pure_b3_ball_radius_4():
    spec = subgroup_generators("full", "B3")
    P = Padder("B3", 2)
    ball = enumerate_ball(spec, 4)
    pure = [g for g in ball.elements if project_to_W(g) == ball.spec.rs.identity]
    assert len(pure) > 1
    for g in pure:
        _check(P.pad_pure(g))


def test_pad_commutator_a2():
    G = ArtinGroup("A2")
    P = Padder("A2", 2)
    g = G.element("1 -2")
    cert = P.pad_commutator(g)
    _check(cert)
    h, m = cert.choices["h"], cert.choices["m"]
    E = sum(f.length for f in cert.x.factors) - m
    assert m >= 1 and m == 6 * h - E
    assert h == 0 or 6 * (h - 1) - E < 1
    assert cert.x.delta_power == -2 * h
    assert exponent_sum(cert.product) == 0
    assert cert.seed.atom in (1, 2)


def test_pad_commutator_type_gate():
    with pytest.raises(UnsupportedType):
        Padder("B3", 2).pad_commutator(ArtinGroup("B3").element(""))
    assert odd_edges_connected(build_root_system("I2(5)").ctype)
    assert not odd_edges_connected(build_root_system("I2(6)").ctype)
    cert = Padder("I2(6)", 2, allow_commutator=True).pad_commutator(ArtinGroup("I2(6)").element("1 -2"))
    _check(cert)


def test_pad_commutator_requires_zero_exponent():
    with pytest.raises(ValueError):
        Padder("A2", 2).pad_commutator(ArtinGroup("A2").element("1"))


def test_padding_set_is_finite_and_bounded():
    spec = subgroup_generators("full", "A2")
    P = Padder("A2", 2)
    xs = {x.key for x in P.all_paddings("plain")}
    bound = P.padding_bound("plain")
    for g in enumerate_ball(spec, 4).elements:
        cert = P.pad_plain(g)
        assert cert.x.key in xs
        assert cert.x_atoms_length <= bound


def test_large_groups_refuse_search():
    with pytest.raises(UnsupportedType):
        Padder("E7", 2).pad_plain(ArtinGroup("E7").element("1"))


def test_rigid_product_from_odd_infimum():
    G = ArtinGroup("A3")
    cert = Padder("A3", 2).pad_plain(G.element("D 1 2"))
    assert is_rigid(cert.product)
