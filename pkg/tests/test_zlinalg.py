import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import cofactor_det, dense_smith_diagonal, smith_from_oracle
from pfq.zlinalg import (AbelianInvariants, IntMatrix, abelian_invariants, hermite_basis,
                         integer_kernel_vector, smith_normal_form, torsion_order_log)


def matrices(max_dim=6, lo=-50, hi=50):
    return st.integers(0, max_dim).flatmap(lambda m: st.integers(0, max_dim).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                           min_size=m, max_size=m).map(lambda rows: (rows, n))))


square = st.integers(1, 6).flatmap(lambda n: st.lists(
    st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=n, max_size=n))


def snf(rows, ncols=None, strategy="sparse"):
    return smith_normal_form(IntMatrix.from_rows(rows, cols=ncols), strategy)


def is_chain(d):
    nz = [x for x in d if x]
    return all(b % a == 0 for a, b in zip(nz, nz[1:])) and d == nz + [0] * (len(d) - len(nz))


@pytest.mark.parametrize("rows, expected", [
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [1, 1, 1]),
    ([[2, 0], [0, 3]], [1, 6]),
    ([[2, 4], [6, 8]], [2, 4]),
    ([[0, 0], [0, 0]], [0, 0]),
    ([[0, 5]], [5]),
])
def test_snf_examples(rows, expected):
    assert snf(rows) == expected
    assert snf(rows, strategy="smallest") == expected


def test_snf_empty():
    assert smith_normal_form(IntMatrix(0, 3)) == []
    assert smith_normal_form(IntMatrix(2, 0)) == []


def test_snf_rejects_unknown_strategy():
    with pytest.raises(ValueError):
        smith_normal_form(IntMatrix.from_rows([[1]]), "magic")


@settings(max_examples=300)
@given(matrices())
def test_snf_matches_elementary_oracle(mat):
    rows, n = mat
    d = snf(rows, n)
    assert is_chain(d)
    assert d == smith_from_oracle(rows, n)
    assert snf(rows, n, "smallest") == d


@settings(max_examples=200)
@given(square)
def test_determinant_preserved(rows):
    assert math.prod(snf(rows)) == abs(cofactor_det(rows))


@settings(max_examples=200)
@given(matrices(5), st.data())
def test_invariant_under_elementary_operations(mat, data):
    rows, n = mat
    if not rows or not n:
        return
    before = snf(rows, n)
    rows = [r[:] for r in rows]
    i, j = data.draw(st.integers(0, len(rows) - 1)), data.draw(st.integers(0, len(rows) - 1))
    rows[i], rows[j] = rows[j], rows[i]
    a, b = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
    for r in rows:
        r[a], r[b] = r[b], r[a]
    rows[i] = [-x for x in rows[i]]
    if i != j:
        k = data.draw(st.integers(-3, 3))
        rows[i] = [x + k * y for x, y in zip(rows[i], rows[j])]
    assert snf(rows, n) == before


def test_big_entries_stay_exact():
    big = 10**40 + 7
    assert snf([[big, 0], [0, big * 3]]) == [big, 3 * big]


def test_abelian_invariants_examples():
    assert abelian_invariants(IntMatrix(0, 2), 2) == AbelianInvariants(2, ())
    t = abelian_invariants(IntMatrix.from_rows([[4, 7, -2], [5, -2, 3]]), 3)
    rows, n = [[4, 7, -2], [5, -2, 3]], 3
    diag = dense_smith_diagonal(rows, n)
    assert t == AbelianInvariants(n - len(diag), tuple(d for d in diag if d > 1))
    assert t == AbelianInvariants(1, ())
    with pytest.raises(ValueError):
        abelian_invariants(IntMatrix(0, 2), 3)


def test_abelian_invariants_string_format():
    A = AbelianInvariants(12, (12,))
    assert str(A) == "Z^12+Z/12"
    assert AbelianInvariants.parse("Z^12+Z/12") == A
    assert str(AbelianInvariants(0, ())) == "Z^0"
    assert AbelianInvariants(0, (2, 4)).order == 8
    assert AbelianInvariants(1, (2,)).order == 0


@pytest.mark.parametrize("torsion", [(1,), (2, 3), (0,), (-2,)])
def test_abelian_invariants_rejects_bad_chains(torsion):
    with pytest.raises(ValueError):
        AbelianInvariants(0, torsion)


def test_torsion_order_log():
    assert torsion_order_log(AbelianInvariants(12, (12,))) == pytest.approx(math.log(12))
    assert torsion_order_log(AbelianInvariants(3, ())) == 0
    assert torsion_order_log(AbelianInvariants(0, (2, 6))) == pytest.approx(math.log(12))


@settings(max_examples=100)
@given(matrices(4, -9, 9))
def test_hermite_basis_spans_same_lattice(mat):
    rows, n = mat
    H = hermite_basis(IntMatrix.from_rows(rows, cols=n))
    # same lattice: same SNF of the stacked and separate bases
    d1 = [x for x in snf(rows, n) if x] if rows and n else []
    d2 = [x for x in snf(H, n) if x] if H else []
    stacked = [x for x in snf(rows + H, n) if x] if rows and n else []
    assert d1 == d2 == stacked
    pivots = [next(j for j, a in enumerate(r) if a) for r in H]
    assert pivots == sorted(set(pivots))
    for k, (r, p) in enumerate(zip(H, pivots)):
        assert r[p] > 0
        assert all(0 <= H[i][p] < r[p] for i in range(k))


def test_integer_kernel_vector():
    v = integer_kernel_vector(IntMatrix.from_rows([[4, 7, -2], [5, -2, 3]]))
    assert [sum(a * b for a, b in zip(r, v)) for r in [[4, 7, -2], [5, -2, 3]]] == [0, 0]
    assert math.gcd(*v) == 1
    assert next(x for x in v if x) > 0


def test_intmatrix_round_trip():
    rnd = random.Random(1)
    rows = [[rnd.randint(-3, 3) for _ in range(5)] for _ in range(4)]
    M = IntMatrix.from_rows(rows)
    assert M.to_dense() == rows
    assert M[1, 2] == rows[1][2]
    assert IntMatrix.from_sparse_rows(M.sparse_rows(), 5) == M
