"""Coset tables of finite-index subgroups and their abelianized relation matrices.

A :class:`CosetTable` records the right action of each generator on the
cosets of a subgroup ``H``; coset 0 is ``H`` itself.  Tables produced by
:func:`low_index_subgroups` are *standardized* (cosets numbered in order of
first appearance when reading the table row by row, columns ordered
``x1, x1^-1, x2, x2^-1, ...``) which makes them canonical per subgroup.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

from .fpgroups import Presentation, exponent_sum_matrix
from .permgrp import Perm, PermGroup, compose, generated_subgroup
from .zlinalg import (AbelianInvariants, IntMatrix, abelian_invariants, hermite_basis,
                      integer_kernel_vector)

DEFAULT_NODE_BUDGET = 10**9


class CosetTableError(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    """The low-index search visited more nodes than allowed."""


@dataclass(frozen=True)
class CosetTable:
    """``actions[i][c]`` is the coset reached from ``c`` by generator ``i+1``."""

    n: int
    actions: Tuple[Tuple[int, ...], ...]

    @cached_property
    def inverse_actions(self) -> Tuple[Tuple[int, ...], ...]:
        out = []
        for act in self.actions:
            inv = [0] * self.n
            for c, d in enumerate(act):
                inv[d] = c
            out.append(tuple(inv))
        return tuple(out)

    @property
    def index(self) -> int:
        return self.n

    def act(self, coset: int, letter: int) -> int:
        if letter > 0:
            return self.actions[letter - 1][coset]
        return self.inverse_actions[-letter - 1][coset]

    def trace(self, coset: int, word: Sequence[int]) -> int:
        for x in word:
            coset = self.act(coset, x)
        return coset

    def validate(self, P: Presentation) -> None:
        if len(self.actions) != P.ngens:
            raise CosetTableError("table has the wrong number of generators")
        for act in self.actions:
            if len(act) != self.n or sorted(act) != list(range(self.n)):
                raise CosetTableError("generator action is not a permutation of the cosets")
        for rel in P.relators:
            for c in range(self.n):
                if self.trace(c, rel) != c:
                    raise CosetTableError("a relator does not act trivially")
        seen = {0}
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for act, inv in zip(self.actions, self.inverse_actions):
                for d in (act[c], inv[c]):
                    if d not in seen:
                        seen.add(d)
                        queue.append(d)
        if len(seen) != self.n:
            raise CosetTableError("action is not transitive")

    def is_valid(self, P: Presentation) -> bool:
        try:
            self.validate(P)
        except CosetTableError:
            return False
        return True

    def standardized(self) -> "CosetTable":
        """Renumber cosets by first appearance in row-major scan order."""
        ngens = len(self.actions)
        order = [0]
        new = {0: 0}
        k = 0
        while k < len(order):
            c = order[k]
            for i in range(ngens):
                for d in (self.actions[i][c], self.inverse_actions[i][c]):
                    if d not in new:
                        new[d] = len(order)
                        order.append(d)
            k += 1
        if len(order) != self.n:
            raise CosetTableError("action is not transitive")
        actions = tuple(tuple(new[self.actions[i][c]] for c in order) for i in range(ngens))
        return CosetTable(self.n, actions)

    def to_json(self) -> list:
        return [list(a) for a in self.actions]

    @classmethod
    def from_json(cls, data: list) -> "CosetTable":
        actions = tuple(tuple(a) for a in data)
        return cls(len(actions[0]) if actions else 1, actions)


# -- low-index enumeration ---------------------------------------------------


def _columns(word: Sequence[int]) -> Tuple[int, ...]:
    """Letters -> table columns: generator i is column 2(i-1), its inverse 2(i-1)+1."""
    return tuple(2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in word)


class _LowIndexSearch:
    def __init__(self, P: Presentation, max_index: int, node_budget: int):
        self.ngens = P.ngens
        self.ncols = 2 * P.ngens
        self.max_index = max_index
        self.node_budget = node_budget
        self.nodes = 0
        # cyclic conjugates of relators and their inverses, bucketed by first column
        by_first: List[List[Tuple[int, ...]]] = [[] for _ in range(self.ncols)]
        seen = set()
        for rel in P.relators:
            for w in (_columns(rel), _columns(tuple(-x for x in reversed(rel)))):
                for s in range(len(w)):
                    cw = w[s:] + w[:s]
                    if cw not in seen:
                        seen.add(cw)
                        by_first[cw[0]].append(cw)
        self.by_first = by_first
        self.table = [-1] * (max_index * self.ncols)
        self.count = 1
        self.trail: List[int] = []
        self.found: List[Tuple[int, Tuple[int, ...]]] = []

    def _set(self, c: int, x: int, d: int) -> None:
        nc = self.ncols
        self.table[c * nc + x] = d
        self.table[d * nc + (x ^ 1)] = c
        self.trail.append(c * nc + x)
        self.trail.append(d * nc + (x ^ 1))

    def _undo(self, mark: int) -> None:
        table, trail = self.table, self.trail
        while len(trail) > mark:
            table[trail.pop()] = -1

    def _propagate(self, queue: List[Tuple[int, int]]) -> bool:
        """Scan relators through every new edge; deduce single gaps.  False on conflict."""
        table, nc, by_first = self.table, self.ncols, self.by_first
        while queue:
            c0, x0 = queue.pop()
            for w in by_first[x0]:
                L = len(w)
                f, i = c0, 0
                while i < L:
                    nxt = table[f * nc + w[i]]
                    if nxt < 0:
                        break
                    f = nxt
                    i += 1
                if i == L:
                    if f != c0:
                        return False
                    continue
                b, j = c0, L - 1
                while j > i:
                    prv = table[b * nc + (w[j] ^ 1)]
                    if prv < 0:
                        break
                    b = prv
                    j -= 1
                if j == i:
                    x = w[i]
                    if table[b * nc + (x ^ 1)] >= 0:
                        return False
                    self._set(f, x, b)
                    queue.append((f, x))
                    queue.append((b, x ^ 1))
        return True

    def _try(self, pos: int, c: int, x: int, d: int) -> None:
        mark = len(self.trail)
        self._set(c, x, d)
        if self._propagate([(c, x), (d, x ^ 1)]):
            self._search(pos + 1)
        self._undo(mark)

    def _search(self, pos: int) -> None:
        table, nc = self.table, self.ncols
        limit = self.count * nc
        while pos < limit and table[pos] >= 0:
            pos += 1
        if pos == limit:
            self._emit()
            return
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise SearchBudgetExceeded(f"low-index search exceeded {self.node_budget} nodes")
        c, x = divmod(pos, nc)
        xi = x ^ 1
        count = self.count
        for d in range(count):
            if table[d * nc + xi] < 0:
                self._try(pos, c, x, d)
        if count < self.max_index:
            self.count = count + 1
            self._try(pos, c, x, count)
            self.count = count

    def _emit(self) -> None:
        n, nc = self.count, self.ncols
        t = self.table
        actions = tuple(tuple(t[c * nc + 2 * i] for c in range(n)) for i in range(self.ngens))
        self.found.append((n, actions))


def low_index_subgroups(P: Presentation, max_index: int,
                        node_budget: int = DEFAULT_NODE_BUDGET) -> List[CosetTable]:
    """Standardized tables of every subgroup of index at most ``max_index``.

    Ordered by index, then by table contents.  Raises
    :class:`SearchBudgetExceeded` rather than returning a partial list.
    """
    if max_index < 1:
        raise ValueError("max_index must be at least 1")
    search = _LowIndexSearch(P, max_index, node_budget)
    search._search(0)
    search.found.sort()
    return [CosetTable(n, actions) for n, actions in search.found]


# -- tables of normal subgroups ----------------------------------------------


def _evaluate(word: Sequence[int], images: Sequence[Perm], inverses: Sequence[Perm],
              identity: Perm) -> Perm:
    g = identity
    for x in word:
        g = compose(g, images[x - 1] if x > 0 else inverses[-x - 1])
    return g


def kernel_coset_table(P: Presentation, images: Sequence[Perm], Q: PermGroup) -> CosetTable:
    """Regular action of ``Q`` through the surjection ``x_i -> images[i]``.

    Cosets of the kernel are the elements of ``Q`` in sorted order and coset
    ``q`` times generator ``i`` is ``q * images[i]``.
    """
    images = [tuple(g) for g in images]
    if len(images) != P.ngens:
        raise CosetTableError("need one image per generator")
    e = Q.identity
    inverses = [tuple(sorted(range(len(g)), key=g.__getitem__)) for g in images]
    for rel in P.relators:
        if _evaluate(rel, images, inverses, e) != e:
            raise CosetTableError("images do not satisfy the relators")
    elts = Q.elements()
    if len(generated_subgroup(images, Q.degree)) != len(elts):
        raise CosetTableError("images do not generate the target group")
    index = {x: i for i, x in enumerate(elts)}
    actions = tuple(tuple(index[compose(q, g)] for q in elts) for g in images)
    return CosetTable(len(elts), actions)


def h1(P: Presentation) -> AbelianInvariants:
    """Abelianization of the presented group."""
    return abelian_invariants(exponent_sum_matrix(P), P.ngens)


def abelian_cover_table(P: Presentation) -> Optional[CosetTable]:
    """Table of ``G -> H_1(G)`` when the abelianization is finite, else ``None``.

    Elements of ``Z^ngens / L`` (``L`` the relation lattice) are reduced
    against a Hermite basis of ``L``, which gives each coset a unique
    representative; cosets are then numbered breadth first from 0.
    """
    if not h1(P).is_finite:
        return None
    basis = hermite_basis(exponent_sum_matrix(P))
    pivots = [next(j for j, a in enumerate(row) if a) for row in basis]
    k = P.ngens

    def reduce(v):
        v = list(v)
        for row, pc in zip(basis, pivots):
            q = v[pc] // row[pc]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    zero = (0,) * k
    number = {zero: 0}
    order = [zero]
    pos = 0
    while pos < len(order):
        v = order[pos]
        for i in range(k):
            for step in (1, -1):
                w = reduce(v[:i] + (v[i] + step,) + v[i + 1:])
                if w not in number:
                    number[w] = len(order)
                    order.append(w)
        pos += 1
    actions = tuple(
        tuple(number[reduce(v[:i] + (v[i] + 1,) + v[i + 1:])] for v in order) for i in range(k)
    )
    return CosetTable(len(order), actions)


def cyclic_cover_table(P: Presentation, n: int) -> CosetTable:
    """Table of the kernel of ``G -> H_1(G) = Z -> Z/n``."""
    if n < 2:
        raise ValueError("cover degree must be at least 2")
    ab = h1(P)
    if ab != AbelianInvariants(1, ()):
        raise CosetTableError(f"abelianization is {ab}, not Z")
    phi = integer_kernel_vector(exponent_sum_matrix(P)) if P.relators else None
    if phi is None:
        phi = [1]  # one generator, no relators
    actions = tuple(tuple((c + a) % n for c in range(n)) for a in phi)
    return CosetTable(n, actions).standardized()


# -- abelianized Reidemeister-Schreier ---------------------------------------


def schreier_tree(T: CosetTable) -> set:
    """Edges ``(coset, generator)`` of the breadth-first spanning tree from coset 0."""
    tree = set()
    seen = {0}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for i in range(len(T.actions)):
            d = T.actions[i][c]
            if d not in seen:
                seen.add(d)
                tree.add((c, i))
                queue.append(d)
            d = T.inverse_actions[i][c]
            if d not in seen:
                seen.add(d)
                tree.add((d, i))
                queue.append(d)
    return tree


def abelianized_reidemeister_schreier(P: Presentation, T: CosetTable,
                                      check: bool = True) -> IntMatrix:
    """Relation matrix whose cokernel is the abelianization of the subgroup at coset 0.

    Columns are the Schreier generators ``(coset, generator)`` off the
    spanning tree, in sorted order; row ``(c, r)`` counts signed traversals
    of each when relator ``r`` is read from coset ``c``.
    """
    if check:
        T.validate(P)
    tree = schreier_tree(T)
    k = P.ngens
    column = {}
    for c in range(T.n):
        for i in range(k):
            if (c, i) not in tree:
                column[(c, i)] = len(column)
    fwd = T.actions
    inv = T.inverse_actions
    nk = k
    colnum = [column.get((c, i), -1) for c in range(T.n) for i in range(k)]
    rows = []
    seen = set()
    for rel in P.relators:
        for c0 in range(T.n):
            row: dict = {}
            c = c0
            for x in rel:
                if x > 0:
                    col = colnum[c * nk + x - 1]
                    c = fwd[x - 1][c]
                    if col >= 0:
                        row[col] = row.get(col, 0) + 1
                else:
                    c = inv[-x - 1][c]
                    col = colnum[c * nk - x - 1]
                    if col >= 0:
                        row[col] = row.get(col, 0) - 1
            key = tuple(sorted((a, b) for a, b in row.items() if b))
            if key and key not in seen:
                seen.add(key)
                rows.append(dict(key))
    return IntMatrix.from_sparse_rows(rows, len(column))


def subgroup_h1(P: Presentation, T: CosetTable, check: bool = True) -> AbelianInvariants:
    M = abelianized_reidemeister_schreier(P, T, check=check)
    return abelian_invariants(M, M.cols)
