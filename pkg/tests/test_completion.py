import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from conftest import preorder
from oracles import all_copresheaf_rows, all_presheaf_columns, left_adjoint_by_scan
from quantcat import InputError, ResourceCapError
from quantcat.builders import chain_quantale, free_parallel_pair, two_quantale, LUKASIEWICZ
from quantcat.completion import (
    ALL,
    CAUCHY,
    REPRESENTABLES,
    PresheafClass,
    WeightClass,
    cauchy_completion,
    cocompletion,
    colimit_closure,
    completion,
    enumerate_presheaves,
    is_left_adjoint_presheaf,
    left_adjoint_presheaves,
    presheaf_object,
    representables,
)
from quantcat.enriched import Presheaf, VDistributor, star_category
from quantcat.propcheck import InstanceSpec, random_vcategory


def random_category(seed, base):
    return random_vcategory(base, InstanceSpec(max_objects=3), random.Random(seed))


BASES = [two_quantale(), chain_quantale(3, LUKASIEWICZ), free_parallel_pair()]


def count_down_sets(objects, leq):
    n = 0
    for bits in product([0, 1], repeat=len(objects)):
        chosen = {x for x, b in zip(objects, bits) if b}
        if all(y in chosen for x in chosen for y in objects if leq(y, x)):
            n += 1
    return n


def test_discrete_pair_has_four_presheaves(discrete_pair):
    assert len(enumerate_presheaves(discrete_pair)) == 4


def test_chain_has_four_down_sets(chain3):
    cols = {p.col for p in enumerate_presheaves(chain3)}
    assert cols == {("0", "0", "0"), ("1", "0", "0"), ("1", "1", "0"), ("1", "1", "1")}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_discrete_sets_have_powerset_many_presheaves(n):
    a = preorder([f"x{i}" for i in range(n)], set())
    assert len(enumerate_presheaves(a)) == 2 ** n


@given(st.integers(0, 10**6))
def test_presheaf_count_of_random_preorders_is_down_set_count(seed):
    a = random_vcategory(two_quantale(), InstanceSpec(max_objects=4), random.Random(seed))
    expected = count_down_sets(a.objects, lambda y, x: a.hom[(y, x)] == "1")
    assert len(enumerate_presheaves(a)) == expected


@given(st.integers(0, 10**6), st.integers(0, 2))
def test_enumeration_matches_exhaustive_scan(seed, which):
    a = random_category(seed, BASES[which])
    for v in a.base.objects:
        got = sorted(p.col for p in enumerate_presheaves(a, extent=v))
        assert got == sorted(all_presheaf_columns(a, v))


@given(st.integers(0, 10**6), st.integers(0, 2))
def test_left_adjoint_presheaves_match_scan(seed, which):
    a = random_category(seed, BASES[which])
    for p in enumerate_presheaves(a):
        assert (is_left_adjoint_presheaf(p) is not None) == bool(left_adjoint_by_scan(p))


def test_representables_are_left_adjoints(chain3):
    assert {p.key for p in left_adjoint_presheaves(chain3)} == {p.key for p in representables(chain3)}


def test_closure_of_the_top_weight_on_discrete_pair(discrete_pair):
    top = Presheaf(discrete_pair, "*", ("1", "1")).as_weight()
    closure = colimit_closure(discrete_pair, [top])
    assert sorted(p.col for p in closure) == [("0", "1"), ("1", "0"), ("1", "1")]


def test_closure_of_representables_adds_nothing(chain3):
    assert len(colimit_closure(chain3, REPRESENTABLES)) == 3


def test_empty_weight_class_gives_representables(discrete_pair):
    assert len(colimit_closure(discrete_pair, None)) == 2


def test_closure_cap_is_a_resource_error(discrete_pair):
    with pytest.raises(ResourceCapError):
        colimit_closure(discrete_pair, ALL, cap=2)


def test_enumeration_cap_is_a_resource_error():
    a = preorder([f"x{i}" for i in range(5)], set())
    with pytest.raises(ResourceCapError):
        enumerate_presheaves(a, cap=10)


def test_cocompletion_of_discrete_pair(discrete_pair):
    co = cocompletion(discrete_pair, ALL)
    assert len(co.category) == 4
    res, emb = co
    assert emb("a") == "y(a)" and res.member("y(a)").col == ("1", "0")


def test_presheaf_object_homs_are_inclusions(chain3):
    res = presheaf_object(chain3, ALL)
    names = {p.col: n for n, p in res.members.items()}
    empty, top = names[("0", "0", "0")], names[("1", "1", "1")]
    assert res.psh.hom[(empty, top)] == "1"
    assert res.psh.hom[(top, empty)] == "0"


def test_classify_distributor_rejects_non_members(chain3):
    res = presheaf_object(chain3, REPRESENTABLES)
    star = star_category(chain3.base, "*")
    empty = VDistributor(star, chain3, {(x, "*"): "0" for x in chain3.objects})
    with pytest.raises(InputError):
        res.classify_distributor(empty)
    assert res.classify(empty.column("*")) is None


def test_non_presheaf_members_are_rejected(chain3):
    up_set = Presheaf(chain3, "*", ("0", "0", "1"))
    with pytest.raises(InputError):
        presheaf_object(chain3, PresheafClass(chain3, [up_set]))


def test_unknown_family_is_rejected(chain3):
    with pytest.raises(InputError):
        WeightClass.named(chain3, "some")


@given(st.integers(0, 10**6), st.integers(0, 2))
def test_cauchy_of_preorders_is_representable(seed, which):
    a = random_vcategory(two_quantale(), InstanceSpec(max_objects=4), random.Random(seed))
    res = cauchy_completion(a)
    assert {p.key for p in res.members.values()} == {p.key for p in representables(a)}


def test_completion_of_discrete_pair_uses_up_sets(discrete_pair):
    res = completion(discrete_pair, ALL)
    assert len(res.category) == 4
    assert sorted(m.row for m in res.members.values()) == sorted(all_copresheaf_rows(discrete_pair, "*"))


@given(st.integers(0, 10**6), st.integers(0, 2))
def test_completion_is_dual_of_cocompletion(seed, which):
    a = random_category(seed, BASES[which])
    res = completion(a, ALL)
    assert res.category == cocompletion(a.dual, ALL).category.dual
    assert res.embedding.validate() == []
