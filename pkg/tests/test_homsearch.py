import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from oracles import brute_force_homs
from pfq.fpgroups import Presentation
from pfq.homsearch import (TupleBudgetExceeded, count_surjections_raw, enumerate_surjections,
                           kernel_cover_invariants, search_surjections)
from pfq.permgrp import PermGroup, catalog, extend_to_automorphism, generated_subgroup
from pfq.zlinalg import AbelianInvariants

A5 = catalog("A5").group


def surjective_brute(P, Q):
    n = Q.order()
    return [h for h in brute_force_homs(P, Q) if len(generated_subgroup(h, Q.degree)) == n]


def aut_order(Q):
    src = Q.generators
    E = Q.elements()
    return sum(extend_to_automorphism(Q, src, (x, y)) for x in E for y in E)


def conjugate_first_generator(P):
    """Same group, with generator 1 replaced by its conjugate by generator 2."""
    rels = []
    for r in P.relators:
        w = []
        for x in r:
            w.extend((-2, 1, 2) if x == 1 else (-2, -1, 2) if x == -1 else (x,))
        rels.append(tuple(w))
    return Presentation(P.name + "'", P.ngens, tuple(rels))


def test_t05599_one_kernel(t05599):
    res = search_surjections(t05599, A5)
    assert len(res.classes) == 1
    assert res.raw_count == 120
    assert res.tuples <= res.bound


def test_t05599_kernel_homology(t05599):
    assert kernel_cover_invariants(t05599, A5) == [AbelianInvariants(12, (2,))]


def test_free_group_onto_a5(free2):
    res = search_surjections(free2, A5)
    assert len(res.classes) == 19
    assert res.raw_count == 2280 == len(surjective_brute(free2, A5))
    assert res.raw_count == len(res.classes) * aut_order(A5)


def test_cyclic_and_trivial_sources():
    assert enumerate_surjections(Presentation("Z", 1, ()), A5) == []
    assert count_surjections_raw(Presentation.from_letters("1", 1, ["a"]), A5) == 0
    assert kernel_cover_invariants(Presentation("Z", 1, ()), A5) == []


def test_free_group_onto_c2(free2):
    C2 = PermGroup([(1, 0)])
    assert kernel_cover_invariants(free2, C2) == [AbelianInvariants(3, ())] * 3


def test_aut_a5_has_order_120():
    assert aut_order(A5) == 120


@pytest.mark.parametrize("rels", [["aabbb"], ["aa", "bbb"], ["abABab"], ["aBaab"],
                                  ["aaaaa", "bbb", "abababab"], ["aababbb"]])
def test_dedup_soundness_against_brute_force(rels):
    P = Presentation.from_letters("p", 2, rels)
    classes = enumerate_surjections(P, A5)
    reps = [kc.representative.images for kc in classes]
    for i, a in enumerate(reps):
        for b in reps[i + 1:]:
            assert not extend_to_automorphism(A5, a, b)
    brute = surjective_brute(P, A5)
    assert count_surjections_raw(P, A5) == len(brute)
    for h in brute:
        assert sum(extend_to_automorphism(A5, r, h) for r in reps) == 1


word2 = st.lists(st.sampled_from("aAbB"), min_size=1, max_size=9).map("".join)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(word2)
def test_one_relator_agrees_with_brute_force(rel):
    P = Presentation.from_letters("p", 2, [rel])
    res = search_surjections(P, A5)
    assert res.raw_count == len(surjective_brute(P, A5))
    assert res.raw_count == len(res.classes) * 120
    assert res.tuples <= res.bound


def test_elimination_agrees_with_brute_force():
    # c and then b are defined by the relators, leaving a single free generator pair
    P = Presentation.from_letters("p", 3, ["abc", "ccb", "aaaaa"])
    L = catalog("A5").group
    res = search_surjections(P, L)
    assert res.raw_count == len(surjective_brute(P, L))


@pytest.mark.parametrize("name", ["A5", "PSL(2,7)", "A6"])
def test_search_bound_holds(name, t05599, free2, wilkes):
    Q = catalog(name).group
    for P in (t05599, free2, *wilkes, Presentation.from_letters("t", 2, ["aaBBB"])):
        res = search_surjections(P, Q)
        assert res.tuples <= res.bound


@pytest.mark.parametrize("rels", [["aaBBB"], ["abaBAB", "aaaaaaaaaaaaaaaaaaaaBBBBBBBBBBBBBB"],
                                  ["aabbb", "ababababab"]])
@pytest.mark.parametrize("name", ["A5", "PSL(2,7)"])
def test_conjugation_invariance(rels, name):
    Q = catalog(name).group
    P = Presentation.from_letters("p", 2, rels)
    P2 = conjugate_first_generator(P)
    assert len(enumerate_surjections(P, Q)) == len(enumerate_surjections(P2, Q))
    assert kernel_cover_invariants(P, Q) == kernel_cover_invariants(P2, Q)


def test_tuple_budget(free2):
    with pytest.raises(TupleBudgetExceeded):
        search_surjections(free2, catalog("PSL(2,7)").group, max_tuples=10)


def test_deterministic_order(free2):
    a = [kc.representative.images for kc in enumerate_surjections(free2, A5)]
    b = [kc.representative.images for kc in enumerate_surjections(free2, A5)]
    assert a == b == sorted(a)
