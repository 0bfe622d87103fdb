import json
from itertools import product

import pytest
from hypothesis import given, strategies as st

from oracles import exhaustive_right_extension, exhaustive_right_lift
from quantcat import FiniteLattice, InputError, LatticeError, Quantaloid, op_quantaloid, validate_quantaloid
from quantcat.builders import chain_quantale, free_parallel_pair, named_base, two_quantale, FRAME, LUKASIEWICZ
from quantcat.propcheck import RECIPES, InstanceSpec, random_quantaloid, relations_quantaloid
from quantcat.quantaloid import OneCell, compose_cells, quantaloid_from_json, quantaloid_to_json, right_lift


def diamond():
    return FiniteLattice(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])


def test_lattice_operations_on_a_diamond():
    lat = diamond()
    assert (lat.bottom, lat.top) == ("0", "1")
    assert lat.join2("a", "b") == "1"
    assert lat.meet2("a", "b") == "0"
    assert lat.join([]) == "0" and lat.meet([]) == "1"
    assert lat.leq("0", "1") and not lat.leq("a", "b")
    assert sorted(lat.cover_pairs()) == [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]
    assert lat.problems() == []


def test_non_lattice_is_reported():
    # two maximal elements and no top
    lat = FiniteLattice(["0", "a", "b"], [("0", "a"), ("0", "b")])
    assert ("top", None) in lat.problems()
    with pytest.raises(LatticeError):
        lat.top
    with pytest.raises(LatticeError):
        lat.join2("a", "b")


def test_unknown_element_in_order_is_an_input_error():
    with pytest.raises(InputError):
        FiniteLattice(["0"], [("0", "x")])


@pytest.mark.parametrize("name", ["2", "chain3", "luk3", "luk5", "free-parallel", "op:free-parallel"])
def test_named_bases_validate(name):
    assert validate_quantaloid(named_base(name)).ok


def test_unknown_base_name():
    with pytest.raises(InputError):
        named_base("nonsense")


def test_lukasiewicz_lifts_match_hand_computation():
    q = chain_quantale(3, LUKASIEWICZ)
    # g . r = max(0, g + r - 1); largest r with that <= h is min(1, 1 - g + h)
    assert q.right_lift("*", "*", "*", "1/2", "1") == "1/2"
    assert q.right_lift("*", "*", "*", "0", "1/2") == "1/2"
    assert q.right_lift("*", "*", "*", "1/2", "1/2") == "1"
    assert q.right_lift("*", "*", "*", "0", "1") == "0"
    assert q.compose("*", "*", "*", "1/2", "1/2") == "0"


def test_frame_chain_lift_is_heyting_implication():
    q = chain_quantale(4, FRAME)
    grades = ["0", "1/3", "2/3", "1"]
    for g, h in product(grades, repeat=2):
        expected = "1" if grades.index(g) <= grades.index(h) else h
        assert q.right_lift("*", "*", "*", h, g) == expected


def test_free_parallel_pair_shapes():
    q = free_parallel_pair()
    assert len(q.hom("0", "1")) == 4
    assert len(q.hom("1", "0")) == 1
    assert q.identity("0") == "{1_0}"
    assert q.compose("0", "1", "1", "{1_1}", "{f,g}") == "{f,g}"


def test_validator_finds_a_broken_composition():
    q = two_quantale()
    table = dict(q.composition[("*", "*", "*")])
    table[("1", "1")] = "0"
    broken = Quantaloid(q.objects, q.homs, {("*", "*", "*"): table}, q.identities)
    assert "unit-left" in validate_quantaloid(broken).axioms()


def test_validator_finds_missing_entries():
    q = two_quantale()
    table = dict(q.composition[("*", "*", "*")])
    del table[("0", "1")]
    broken = Quantaloid(q.objects, q.homs, {("*", "*", "*"): table}, q.identities)
    assert validate_quantaloid(broken).axioms() == {"totality"}


def test_missing_identity_is_an_input_error():
    q = two_quantale()
    with pytest.raises(InputError):
        Quantaloid(q.objects, q.homs, q.composition, {})


def test_double_dual_is_identity_and_cached():
    q = free_parallel_pair()
    assert q.dual.dual is q
    assert op_quantaloid(op_quantaloid(q)) == q
    assert q.dual.hom("1", "0") == q.hom("0", "1")


def test_right_extension_is_the_opposite_lift():
    q = free_parallel_pair()
    d = q.dual
    for h in q.hom("0", "1").elements:
        for f in q.hom("0", "0").elements:
            assert q.right_extension("0", "0", "1", h, f) == d.right_lift("1", "0", "0", h, f)


def test_json_round_trip():
    q = free_parallel_pair()
    again = quantaloid_from_json(json.loads(json.dumps(quantaloid_to_json(q))))
    assert again == q
    assert quantaloid_to_json(again) == quantaloid_to_json(q)


def test_malformed_json_is_an_input_error():
    with pytest.raises(InputError):
        quantaloid_from_json({"objects": ["*"]})


def test_one_cell_helpers():
    q = two_quantale()
    g = OneCell("*", "*", "1")
    f = OneCell("*", "*", "0")
    assert compose_cells(q, g, f).elt == "0"
    assert right_lift(q, f, g).elt == "0"


def test_relations_with_sets_of_size_two_validate():
    spec = InstanceSpec(seed=0, recipe="relations", max_set_size=2, max_hom=16)
    q = random_quantaloid(spec)
    assert validate_quantaloid(q).ok


def test_relations_quantaloid_composes_relations():
    q = relations_quantaloid([1, 2])
    # {0>0} then {0>1} gives {0>1}
    assert q.compose("S0", "S1", "S1", "{0>1}", "{0>0}") == "{0>1}"
    assert q.identity("S1") == "{0>0,1>1}"
    assert validate_quantaloid(q).ok


def galois_failures(q):
    bad = []
    for x, y, z in product(q.objects, repeat=3):
        for g, h in product(q.hom(y, z).elements, q.hom(x, z).elements):
            lift = q.right_lift(x, y, z, h, g)
            if lift != exhaustive_right_lift(q, x, y, z, h, g):
                bad.append(("lift", x, y, z, h, g))
        for f, h in product(q.hom(x, y).elements, q.hom(x, z).elements):
            ext = q.right_extension(x, y, z, h, f)
            if ext != exhaustive_right_extension(q, x, y, z, h, f):
                bad.append(("extension", x, y, z, h, f))
    return bad


@given(st.integers(0, 10**6), st.sampled_from(RECIPES))
def test_generated_quantaloids_are_valid_and_residuated(seed, recipe):
    q = random_quantaloid(InstanceSpec(seed=seed, recipe=recipe))
    assert validate_quantaloid(q).ok
    assert all(len(q.hom(x, y)) <= 6 for x, y in product(q.objects, repeat=2))
    assert galois_failures(q) == []


@given(st.integers(0, 10**6))
def test_generation_is_deterministic(seed):
    spec = InstanceSpec(seed=seed, recipe="free")
    assert random_quantaloid(spec) == random_quantaloid(spec)
