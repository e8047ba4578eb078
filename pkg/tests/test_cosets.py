from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_subgroup_tables, dense_smith_diagonal, hall_subgroup_counts
from pfq.cosets import (CosetTable, CosetTableError, SearchBudgetExceeded,
                        abelian_cover_table, abelianized_reidemeister_schreier,
                        cyclic_cover_table, h1, kernel_coset_table, low_index_subgroups,
                        schreier_tree, subgroup_h1)
from pfq.fpgroups import Presentation
from pfq.homsearch import enumerate_surjections
from pfq.permgrp import PermGroup, catalog, compose, from_cycles, generated_subgroup
from pfq.zlinalg import AbelianInvariants

Z = Presentation("Z", 1, ())
TRIVIAL = Presentation.from_letters("1", 1, ["a"])


def counts(tables, max_index):
    c = Counter(T.n for T in tables)
    return tuple(c[n] for n in range(1, max_index + 1))


def test_free_group_index_3(free2):
    tables = low_index_subgroups(free2, 3)
    assert counts(tables, 3) == (1, 3, 13)
    assert len(tables) == 17


def test_infinite_cyclic_and_trivial():
    assert counts(low_index_subgroups(Z, 5), 5) == (1, 1, 1, 1, 1)
    assert [T.n for T in low_index_subgroups(TRIVIAL, 5)] == [1]


def test_hall_recursion_values():
    assert hall_subgroup_counts(2, 5) == [1, 3, 13, 71, 461]
    assert hall_subgroup_counts(3, 3) == [1, 7, 97]


@pytest.mark.parametrize("rank, max_index", [(2, 5), (3, 4)])
def test_free_group_counts_match_hall(rank, max_index):
    P = Presentation(f"F{rank}", rank, ())
    assert list(counts(low_index_subgroups(P, max_index), max_index)) == \
        hall_subgroup_counts(rank, max_index)


def test_free_group_rank3_index5_matches_hall():
    P = Presentation("F3", 3, ())
    assert list(counts(low_index_subgroups(P, 5), 5)) == hall_subgroup_counts(3, 5)


@pytest.mark.parametrize("rels, ngens", [
    ([], 2), (["abAB"], 2), (["aaBBB"], 2), (["aa", "bbb", "abab"], 2), (["abaBAB"], 2),
    (["aaaa", "aaBB", "baBa"], 2), (["aaa"], 1),
])
def test_low_index_matches_brute_force(rels, ngens):
    P = Presentation.from_letters("p", ngens, rels)
    tables = low_index_subgroups(P, 4)
    assert len(set(tables)) == len(tables)
    assert set(tables) == brute_force_subgroup_tables(P, 4)


@pytest.mark.parametrize("rels", [["aaBBB"], ["abAB"], ["aa", "bbb", "ababab"]])
def test_emitted_tables_are_valid_and_standard(rels):
    P = Presentation.from_letters("p", 2, rels)
    tables = low_index_subgroups(P, 5)
    assert tables == sorted(tables, key=lambda T: (T.n, T.actions))
    for T in tables:
        T.validate(P)
        assert T.standardized() == T


def test_node_budget_raises(free2):
    with pytest.raises(SearchBudgetExceeded):
        low_index_subgroups(free2, 5, node_budget=100)


def test_rejects_nonpositive_index(free2):
    with pytest.raises(ValueError):
        low_index_subgroups(free2, 0)


@pytest.mark.parametrize("rank, max_index", [(2, 4), (3, 3)])
def test_nielsen_schreier(rank, max_index):
    P = Presentation(f"F{rank}", rank, ())
    for T in low_index_subgroups(P, max_index):
        assert subgroup_h1(P, T) == AbelianInvariants(T.n * (rank - 1) + 1, ())


def test_rs_index2_of_cyclic6():
    P = Presentation.from_letters("c6", 1, ["aaaaaa"])
    (T,) = [T for T in low_index_subgroups(P, 2) if T.n == 2]
    assert subgroup_h1(P, T) == AbelianInvariants(0, (3,))


def test_rs_matches_dense_oracle_on_kernel(t05599):
    A5 = catalog("A5").group
    (kc,) = enumerate_surjections(t05599, A5)
    T = kernel_coset_table(t05599, kc.representative.images, A5)
    assert T.n == 60
    M = abelianized_reidemeister_schreier(t05599, T)
    diag = dense_smith_diagonal(M.to_dense(), M.cols)
    got = subgroup_h1(t05599, T)
    assert got == AbelianInvariants(M.cols - len(diag), tuple(d for d in diag if d > 1))
    assert got == AbelianInvariants(12, (2,))


def test_schreier_tree_spans():
    P = Presentation.from_letters("p", 2, ["aaBBB"])
    for T in low_index_subgroups(P, 5):
        tree = schreier_tree(T)
        assert len(tree) == T.n - 1


def test_kernel_table_cyclic():
    three = from_cycles(3, [0, 1, 2])
    T = kernel_coset_table(Z, (three,), PermGroup([three]))
    assert T.n == 3
    T.validate(Z)
    assert T.actions[0] in ((1, 2, 0), (2, 0, 1))


def test_kernel_table_is_regular(free2):
    A5 = catalog("A5").group
    E = A5.elements()
    pair = next((a, b) for a in E for b in E if len(generated_subgroup((a, b), 5)) == 60)
    T = kernel_coset_table(free2, pair, A5)
    T.validate(free2)
    assert T.n == 60
    for g, act in zip(pair, T.actions):
        assert all(act[i] == E.index(compose(E[i], g)) for i in range(60))
        assert all(act[i] != i for i in range(60))


def test_kernel_table_errors(free2):
    A5 = catalog("A5").group
    with pytest.raises(CosetTableError):
        kernel_coset_table(free2, (A5.generators[0], A5.identity), A5)
    P = Presentation.from_letters("p", 2, ["aa"])
    with pytest.raises(CosetTableError):
        kernel_coset_table(P, A5.generators, A5)


def test_abelian_cover_examples(free2):
    T = abelian_cover_table(Presentation.from_letters("c5", 1, ["aaaaa"]))
    assert T.n == 5
    assert subgroup_h1(Presentation.from_letters("c5", 1, ["aaaaa"]), T) == AbelianInvariants(0, ())
    assert abelian_cover_table(free2) is None
    K = Presentation.from_letters("klein", 2, ["aa", "bb", "abab"])
    T = abelian_cover_table(K)
    assert T.n == 4
    T.validate(K)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.sampled_from("aAbB"), min_size=1, max_size=6).map("".join),
                min_size=2, max_size=3))
def test_abelian_cover_has_abelian_quotient_of_right_order(rels):
    P = Presentation.from_letters("p", 2, rels)
    ab = h1(P)
    T = abelian_cover_table(P)
    if not ab.is_finite:
        assert T is None
        return
    assert T.n == ab.order
    T.validate(P)
    # the deck group is abelian: generator actions commute
    a, b = T.actions
    assert all(a[b[c]] == b[a[c]] for c in range(T.n))


def test_cyclic_cover_examples(free2):
    T = cyclic_cover_table(Z, 4)
    assert T.n == 4 and T.standardized() == T
    assert T.actions == ((1, 3, 0, 2),)  # x and x^-1 columns both number new cosets
    P = Presentation.from_letters("p", 2, ["abABb"])
    assert cyclic_cover_table(P, 2).n == 2
    with pytest.raises(CosetTableError):
        cyclic_cover_table(free2, 2)
    with pytest.raises(ValueError):
        cyclic_cover_table(Z, 1)


@pytest.mark.parametrize("rels", [["aaBBB"], ["abaBAB"], ["aaaaaaa", "baBa"]])
def test_cyclic_covers_are_among_low_index_subgroups(rels):
    P = Presentation.from_letters("p", 2, rels)
    for n in range(2, 6):
        T = cyclic_cover_table(P, n)
        T.validate(P)
        assert T in low_index_subgroups(P, n)


def test_table_json_round_trip(free2):
    for T in low_index_subgroups(free2, 3):
        assert CosetTable.from_json(T.to_json()) == T


def test_validate_rejects_bad_tables(free2):
    with pytest.raises(CosetTableError):
        CosetTable(2, ((0, 0), (0, 1))).validate(free2)
    with pytest.raises(CosetTableError):
        CosetTable(2, ((0, 1), (0, 1))).validate(free2)
    P = Presentation.from_letters("p", 2, ["aa"])
    with pytest.raises(CosetTableError):
        CosetTable(3, ((1, 2, 0), (0, 1, 2))).validate(P)
