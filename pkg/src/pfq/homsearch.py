"""Surjections from a finitely presented group onto a finite permutation group.

The search assigns images to generators in presentation order:

* generator 1 ranges over conjugacy class representatives of ``Q``,
* generator 2 over representatives of the orbits of ``C_Q(x_1)`` acting by
  conjugation,
* later generators over all of ``Q``.

Generators that a relator defines in terms of lower-numbered ones are
first eliminated by substitution, and "generator 1, 2, ..." above refers to
the remaining ones.  Every surjection is conjugate under ``Inn(Q)`` to
exactly one leaf of this search, so weighting leaves by class size times
orbit size recovers the raw count of surjections.  A relator is checked at
the depth of its highest generator; when that generator occurs in it as a single power ``x^e``, the
relator restricts the image to the ``e``-th roots of a known element
instead of pruning afterwards.

Two surjections have the same kernel iff their regular actions on ``Q``
agree after standardizing, which gives a cheap dedup key that quotients
out the remaining outer automorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .cosets import CosetTable, kernel_coset_table, subgroup_h1
from .fpgroups import Presentation, Word, cyclically_reduce, free_reduce, inverse_word
from .permgrp import GroupError, Perm, PermGroup, _mul_fn, generated_subgroup, inverse
from .zlinalg import AbelianInvariants


class TupleBudgetExceeded(GroupError):
    """The search examined more complete image tuples than allowed."""


@dataclass(frozen=True)
class Surjection:
    target: PermGroup = field(repr=False)
    images: Tuple[Perm, ...]


@dataclass(frozen=True)
class KernelClass:
    """Surjections with a common kernel, kept through one representative."""

    representative: Surjection
    table: CosetTable = field(repr=False, compare=False)


@dataclass
class SearchResult:
    classes: List[KernelClass]
    raw_count: int
    tuples: int
    nodes: int
    bound: int


MAX_SUBSTITUTED_LENGTH = 400


@dataclass
class _Plan:
    free: List[int]                    # generators searched over, in presentation order
    defs: List[Tuple[int, Word]]       # eliminated generator -> word in free generators
    checks: List[List[Word]]           # per search depth
    solvers: List[Optional[Tuple[Word, int]]]


def _substitute(word: Word, gen: int, value: Word) -> Word:
    inv = inverse_word(value)
    out: List[int] = []
    for x in word:
        if x == gen:
            out.extend(value)
        elif x == -gen:
            out.extend(inv)
        else:
            out.append(x)
    return free_reduce(out)


def _eliminate(relators: Sequence[Word]) -> Tuple[List[Word], Dict[int, Word]]:
    """Remove generators that some relator defines in terms of lower ones.

    A relator ``u x^{+-1} v`` whose highest generator ``x`` occurs once
    gives ``x = (v u)^{-+1}``; substituting it everywhere leaves an
    equivalent system in fewer unknowns.
    """
    rels = [w for w in (cyclically_reduce(r) for r in relators) if w]
    defs: Dict[int, Word] = {}
    while True:
        for idx in sorted(range(len(rels)), key=lambda j: (len(rels[j]), rels[j])):
            rel = rels[idx]
            top = max(abs(x) for x in rel)
            pos = [i for i, x in enumerate(rel) if abs(x) == top]
            if len(pos) != 1:
                continue
            i = pos[0]
            rest = rel[i + 1:] + rel[:i]
            value = inverse_word(rest) if rel[i] > 0 else free_reduce(rest)
            others = rels[:idx] + rels[idx + 1:]
            new_rels = [cyclically_reduce(_substitute(r, top, value)) for r in others]
            new_defs = {g: _substitute(w, top, value) for g, w in defs.items()}
            if any(len(w) > MAX_SUBSTITUTED_LENGTH for w in new_rels + list(new_defs.values())):
                continue
            rels = [w for w in new_rels if w]
            defs = new_defs
            defs[top] = value
            break
        else:
            return rels, defs


def _power_form(rel: Word, gen: int) -> Optional[Tuple[Word, int]]:
    """Write ``rel`` cyclically as ``x^e w`` with ``w`` free of ``x = gen``, if possible."""
    n = len(rel)
    hits = [i for i, x in enumerate(rel) if abs(x) == gen]
    if not hits or len({rel[i] for i in hits}) != 1:
        return None
    if len(hits) == n:
        return (), n if rel[0] > 0 else -n
    # the letters of x must form one cyclic run
    starts = [i for i in hits if abs(rel[i - 1]) != gen]
    if len(starts) != 1:
        return None
    s = starts[0]
    e = len(hits) if rel[s] > 0 else -len(hits)
    rest = tuple(rel[(s + len(hits) + j) % n] for j in range(n - len(hits)))
    return rest, e


def _plan(P: Presentation) -> _Plan:
    rels, defs = _eliminate(P.relators)
    free = [g for g in range(1, P.ngens + 1) if g not in defs]
    depth_of = {g: i for i, g in enumerate(free)}
    checks: List[List[Word]] = [[] for _ in free]
    solvers: List[Optional[Tuple[Word, int]]] = [None] * len(free)
    for rel in sorted(rels, key=lambda r: (max(abs(x) for x in r), len(r), r)):
        top = max(abs(x) for x in rel)
        depth = depth_of[top]
        checks[depth].append(rel)
        form = _power_form(rel, top)
        if form is not None and (solvers[depth] is None or abs(form[1]) < abs(solvers[depth][1])):
            solvers[depth] = form
    return _Plan(free, sorted(defs.items()), checks, solvers)


def _standard_key(images: Sequence[Perm], degree: int) -> Tuple[Tuple[int, ...], ...]:
    """Standardized table of the right regular action of ``<images>``."""
    mul = _mul_fn(degree)
    e = tuple(range(degree))
    cols = []
    for g in images:
        cols.append(g)
        cols.append(inverse(g))
    number: Dict[Perm, int] = {e: 0}
    order = [e]
    pos = 0
    while pos < len(order):
        y = order[pos]
        for g in cols:
            z = mul(y, g)
            if z not in number:
                number[z] = len(order)
                order.append(z)
        pos += 1
    return tuple(tuple(number[mul(y, g)] for y in order) for g in images)


class _Search:
    def __init__(self, P: Presentation, Q: PermGroup, max_tuples: Optional[int]):
        self.P, self.Q = P, Q
        self.k = P.ngens
        self.degree = Q.degree
        self.mul = _mul_fn(Q.degree)
        self.e = Q.identity
        self.order = Q.order()
        self.elements = Q.elements()
        self.classes = Q.conjugacy_classes()
        self.plan = _plan(P)
        self.max_tuples = max_tuples
        self.images: List[Perm] = [self.e] * self.k
        self.inverses: List[Perm] = [self.e] * self.k
        self.tuples = 0
        self.nodes = 0
        self.raw = 0
        self.found: Dict[tuple, KernelClass] = {}
        self._pair_generates: Dict[Tuple[Perm, Perm], bool] = {}

    def word(self, w: Word) -> Perm:
        g = self.e
        mul = self.mul
        for x in w:
            g = mul(g, self.images[x - 1] if x > 0 else self.inverses[-x - 1])
        return g

    def candidates(self, depth: int) -> List[Tuple[Perm, int]]:
        if depth == 0:
            return self.classes
        if depth == 1:
            return self.Q.centralizer_orbits(self.images[self.plan.free[0] - 1])
        return [(y, 1) for y in self.elements]

    def solve(self, depth: int) -> List[Tuple[Perm, int]]:
        # rel = x^e w, so x^e = w^-1
        rest, e = self.plan.solvers[depth]
        target = inverse(self.word(rest))
        if e == 1:
            roots = [target]
        elif e == -1:
            roots = [inverse(target)]
        else:
            roots = self.Q.power_roots(e).get(target, [])
        if depth >= 2:
            return [(y, 1) for y in roots]
        weights = dict(self.candidates(depth))
        return [(y, weights[y]) for y in roots if y in weights]

    def run(self) -> None:
        if not self.plan.free:
            self.tuples = 1
            self.nodes = 1
            self.leaf(1)
        else:
            self.descend(0, 1)

    def descend(self, depth: int, weight: int) -> None:
        if depth == len(self.plan.free):
            self.leaf(weight)
            return
        if self.plan.solvers[depth] is not None:
            options = self.solve(depth)
        else:
            options = self.candidates(depth)
        checks = self.plan.checks[depth]
        slot = self.plan.free[depth] - 1
        last = depth == len(self.plan.free) - 1
        for y, w in options:
            self.nodes += 1
            if last:
                self.tuples += 1
                if self.max_tuples is not None and self.tuples > self.max_tuples:
                    raise TupleBudgetExceeded(f"more than {self.max_tuples} image tuples")
            self.images[slot] = y
            self.inverses[slot] = inverse(y)
            if all(self.word(r) == self.e for r in checks):
                self.descend(depth + 1, weight * w)

    def generates(self) -> bool:
        n = self.order
        if n == 1:
            return True
        free = [self.images[g - 1] for g in self.plan.free]
        if len(free) >= 2:
            pair = (free[0], free[1])
            hit = self._pair_generates.get(pair)
            if hit is None:
                hit = len(generated_subgroup(pair, self.degree, stop_above=n // 2)) > n // 2
                self._pair_generates[pair] = hit
            if hit:
                return True
        return len(generated_subgroup(free, self.degree, stop_above=n // 2)) > n // 2

    def leaf(self, weight: int) -> None:
        if not self.generates():
            return
        for g, w in self.plan.defs:
            y = self.word(w)
            self.images[g - 1] = y
            self.inverses[g - 1] = inverse(y)
        self.raw += weight
        images = tuple(self.images)
        key = _standard_key(images, self.degree)
        if key not in self.found:
            self.found[key] = KernelClass(Surjection(self.Q, images), CosetTable(self.order, key))


def search_surjections(P: Presentation, Q: PermGroup,
                       max_tuples: Optional[int] = None) -> SearchResult:
    """Run the canonical search and return classes plus counters."""
    s = _Search(P, Q, max_tuples)
    s.run()
    classes = sorted(s.found.values(), key=lambda c: c.representative.images)
    bound = len(s.classes) * s.order ** (P.ngens - 1)
    return SearchResult(classes, s.raw, s.tuples, s.nodes, bound)


def enumerate_surjections(P: Presentation, Q: PermGroup,
                          max_tuples: Optional[int] = None) -> List[KernelClass]:
    """One representative per kernel of a surjection ``G -> Q``."""
    return search_surjections(P, Q, max_tuples).classes


def count_surjections_raw(P: Presentation, Q: PermGroup,
                          max_tuples: Optional[int] = None) -> int:
    """Number of surjective homomorphisms ``G -> Q``, not up to anything."""
    return search_surjections(P, Q, max_tuples).raw_count


def kernel_cover_invariants(P: Presentation, Q: PermGroup,
                            classes: Optional[Sequence[KernelClass]] = None,
                            max_tuples: Optional[int] = None) -> List[AbelianInvariants]:
    """Sorted ``H_1`` of each kernel of a surjection onto ``Q``."""
    if classes is None:
        classes = enumerate_surjections(P, Q, max_tuples)
    out = []
    for kc in classes:
        T = kernel_coset_table(P, kc.representative.images, Q)
        out.append(subgroup_h1(P, T, check=False))
    return sorted(out)
