"""Finite permutation groups by brute-force element enumeration.

Permutations are tuples of images on ``0..degree-1``.  Products are
written left to right: ``compose(p, q)`` applies ``p`` first, so
``compose(p, q)[i] == q[p[i]]``.  This matches the reading order of words
and the right action of generators on cosets.

Every group handled here is small (the largest catalog group has order
6072), so orders, classes and centralizers come from enumerating all
elements rather than from stabilizer chains.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from operator import itemgetter
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Perm = Tuple[int, ...]

DEFAULT_ORDER_BOUND = 10**7
DEFAULT_ENUMERATION_BOUND = 10**5

#: The simple groups used as quotients, in order of increasing order.
CATALOG_NAMES = (
    "A5", "PSL(2,7)", "A6", "PSL(2,8)", "PSL(2,11)", "PSL(2,13)", "PSL(2,17)",
    "A7", "PSL(2,19)", "PSL(2,16)", "PSL(3,3)", "PSU(3,3)", "PSL(2,23)",
)


class GroupError(ValueError):
    pass


class BoundExceeded(GroupError):
    """A group turned out larger than the configured enumeration bound."""


class CatalogError(GroupError):
    pass


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def compose(p: Perm, q: Perm) -> Perm:
    """``p`` then ``q``."""
    if len(p) != len(q):
        raise GroupError(f"degree mismatch: {len(p)} vs {len(q)}")
    if len(p) == 1:
        return (q[p[0]],)
    return itemgetter(*p)(q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def from_cycles(degree: int, *cycles: Sequence[int]) -> Perm:
    img = list(range(degree))
    for cyc in cycles:
        for k, a in enumerate(cyc):
            img[a] = cyc[(k + 1) % len(cyc)]
    return tuple(img)


def perm_order(p: Perm) -> int:
    e = identity(len(p))
    k, q = 1, p
    while q != e:
        q = compose(q, p)
        k += 1
    return k


def _mul_fn(degree: int):
    if degree == 1:
        return lambda p, q: (q[p[0]],)
    return lambda p, q: itemgetter(*p)(q)


def generated_subgroup(gens: Sequence[Perm], degree: int, bound: Optional[int] = None,
                       stop_above: Optional[int] = None) -> set:
    """All elements of ``<gens>``.

    ``bound`` raises :class:`BoundExceeded` past that size; ``stop_above``
    returns early (with a partial set) once the size exceeds it.
    """
    mul = _mul_fn(degree)
    e = identity(degree)
    seen = {e}
    frontier = [e]
    gens = [g for g in dict.fromkeys(gens) if g != e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if bound is not None and len(seen) > bound:
            raise BoundExceeded(f"group order exceeds bound {bound}")
        if stop_above is not None and len(seen) > stop_above:
            return seen
        frontier = nxt
    return seen


class PermGroup:
    """Permutation group given by generators; caches are filled on demand."""

    def __init__(self, generators: Iterable[Sequence[int]], degree: Optional[int] = None, *,
                 order_bound: int = DEFAULT_ORDER_BOUND,
                 enumeration_bound: int = DEFAULT_ENUMERATION_BOUND):
        gens = [tuple(g) for g in generators]
        if degree is None:
            if not gens:
                raise GroupError("need a degree or at least one generator")
            degree = len(gens[0])
        if not gens:
            gens = [identity(degree)]
        for g in gens:
            if len(g) != degree or not is_permutation(g):
                raise GroupError(f"not a permutation of degree {degree}: {g}")
        self.degree = degree
        self.generators: Tuple[Perm, ...] = tuple(gens)
        self.order_bound = order_bound
        self.enumeration_bound = enumeration_bound
        self._lock = threading.RLock()
        self._order: Optional[int] = None
        self._elements: Optional[List[Perm]] = None
        self._index: Optional[Dict[Perm, int]] = None
        self._classes: Optional[List[Tuple[Perm, int]]] = None
        self._class_of: Optional[List[int]] = None
        self._orbit_cache: Dict[Perm, List[Tuple[Perm, int]]] = {}
        self._root_cache: Dict[int, Dict[Perm, List[Perm]]] = {}

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    @property
    def identity(self) -> Perm:
        return identity(self.degree)

    def order(self) -> int:
        with self._lock:
            if self._order is None:
                if self._elements is not None:
                    self._order = len(self._elements)
                else:
                    self._order = len(generated_subgroup(self.generators, self.degree,
                                                         bound=self.order_bound))
            return self._order

    def elements(self) -> List[Perm]:
        with self._lock:
            if self._elements is None:
                elts = generated_subgroup(self.generators, self.degree,
                                          bound=self.enumeration_bound)
                self._elements = sorted(elts)
                self._index = {x: i for i, x in enumerate(self._elements)}
                self._order = len(self._elements)
            return self._elements

    def index(self, x: Perm) -> int:
        """Position of ``x`` in :meth:`elements`; ``KeyError`` if absent."""
        self.elements()
        return self._index[x]

    def __contains__(self, x) -> bool:
        self.elements()
        return tuple(x) in self._index

    def conjugacy_classes(self) -> List[Tuple[Perm, int]]:
        """(representative, size) pairs; the representative is the least element of its class."""
        with self._lock:
            if self._classes is None:
                elts = self.elements()
                index = self._index
                mul = _mul_fn(self.degree)
                conj = [(inverse(g), g) for g in self.generators]
                class_of = [-1] * len(elts)
                classes = []
                for i, x in enumerate(elts):
                    if class_of[i] >= 0:
                        continue
                    cid = len(classes)
                    class_of[i] = cid
                    stack, size = [x], 1
                    while stack:
                        y = stack.pop()
                        for gi, g in conj:
                            z = mul(mul(gi, y), g)
                            j = index[z]
                            if class_of[j] < 0:
                                class_of[j] = cid
                                size += 1
                                stack.append(z)
                    classes.append((x, size))
                self._classes = classes
                self._class_of = class_of
            return self._classes

    def class_index(self, x: Perm) -> int:
        self.conjugacy_classes()
        return self._class_of[self.index(x)]

    def centralizer(self, x: Perm) -> List[Perm]:
        x = tuple(x)
        if x not in self:
            raise GroupError("element is not in the group")
        mul = _mul_fn(self.degree)
        return [g for g in self.elements() if mul(g, x) == mul(x, g)]

    def centralizer_orbits(self, x: Perm) -> List[Tuple[Perm, int]]:
        """Orbits of the centralizer of ``x`` acting on the group by conjugation.

        Returns (least element, orbit size) pairs in increasing order.
        """
        x = tuple(x)
        with self._lock:
            cached = self._orbit_cache.get(x)
            if cached is not None:
                return cached
            if x == self.identity:
                out = list(self.conjugacy_classes())
                self._orbit_cache[x] = out
                return out
            gens: List[Perm] = []
            H = {self.identity}
            for c in self.centralizer(x):
                if c not in H:
                    gens.append(c)
                    H = generated_subgroup(gens, self.degree)
            mul = _mul_fn(self.degree)
            conj = [(inverse(g), g) for g in gens]
            elts = self.elements()
            index = self._index
            done = [False] * len(elts)
            out = []
            for i, y in enumerate(elts):
                if done[i]:
                    continue
                done[i] = True
                stack, size = [y], 1
                while stack:
                    z = stack.pop()
                    for gi, g in conj:
                        w = mul(mul(gi, z), g)
                        j = index[w]
                        if not done[j]:
                            done[j] = True
                            size += 1
                            stack.append(w)
                out.append((y, size))
            self._orbit_cache[x] = out
            return out

    def power_roots(self, e: int) -> Dict[Perm, List[Perm]]:
        """Map each ``g`` to the sorted list of ``y`` with ``y**e == g`` (absent if none)."""
        with self._lock:
            cached = self._root_cache.get(e)
            if cached is not None:
                return cached
            mul = _mul_fn(self.degree)
            roots: Dict[Perm, List[Perm]] = {}
            for y in self.elements():
                base = y if e > 0 else inverse(y)
                g = self.identity
                for _ in range(abs(e)):
                    g = mul(g, base)
                roots.setdefault(g, []).append(y)
            self._root_cache[e] = roots
            return roots

    def normal_closure_order(self, x: Perm) -> int:
        """Order of the smallest normal subgroup containing ``x``."""
        mul = _mul_fn(self.degree)
        conj = [(inverse(g), g) for g in self.generators]
        gens = [tuple(x)]
        H = generated_subgroup(gens, self.degree)
        changed = True
        while changed:
            changed = False
            for h in list(gens):
                for gi, g in conj:
                    y = mul(mul(gi, h), g)
                    if y not in H:
                        gens.append(y)
                        H = generated_subgroup(gens, self.degree)
                        changed = True
        return len(H)

    def is_simple(self) -> bool:
        n = self.order()
        if n == 1:
            return False
        e = self.identity
        return all(self.normal_closure_order(rep) == n
                   for rep, _ in self.conjugacy_classes() if rep != e)

    def orbit(self, point: int) -> List[int]:
        seen = {point}
        stack = [point]
        while stack:
            a = stack.pop()
            for g in self.generators:
                b = g[a]
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return sorted(seen)

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree


def group_order(G: PermGroup) -> int:
    return G.order()


def elements(G: PermGroup) -> List[Perm]:
    return G.elements()


def conjugacy_classes(G: PermGroup) -> List[Tuple[Perm, int]]:
    return G.conjugacy_classes()


def centralizer(G: PermGroup, x: Perm) -> List[Perm]:
    return G.centralizer(x)


def is_simple(G: PermGroup) -> bool:
    return G.is_simple()


def extend_to_automorphism(Q: PermGroup, src: Sequence[Perm], dst: Sequence[Perm]) -> bool:
    """Whether ``src[i] -> dst[i]`` extends to an automorphism of ``Q``.

    The map is pushed along the Cayley graph of ``Q`` with respect to
    ``src``; it is a homomorphism iff no element receives two images, and an
    automorphism iff the images are then all distinct and lie in ``Q``.
    """
    src = [tuple(s) for s in src]
    dst = [tuple(d) for d in dst]
    if len(src) != len(dst):
        raise GroupError("source and target tuples differ in length")
    if not all(d in Q for d in dst):
        return False
    mul = _mul_fn(Q.degree)
    e = Q.identity
    phi = {e: e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            h = phi[g]
            for s, d in zip(src, dst):
                g2 = mul(g, s)
                h2 = mul(h, d)
                got = phi.get(g2)
                if got is None:
                    phi[g2] = h2
                    nxt.append(g2)
                elif got != h2:
                    return False
        frontier = nxt
    n = Q.order()
    if len(phi) != n:
        raise GroupError("source tuple does not generate the group")
    return len(set(phi.values())) == n


# -- catalog -----------------------------------------------------------------


@dataclass(frozen=True)
class SimpleCatalogEntry:
    name: str
    order: int
    min_index: int
    group: PermGroup

    @property
    def degree(self) -> int:
        return self.group.degree

    @property
    def generators(self) -> Tuple[Perm, ...]:
        return self.group.generators


@lru_cache(maxsize=None)
def _catalog_data() -> Dict[str, dict]:
    text = resources.files("pfq").joinpath("data/simple_groups.json").read_text("utf-8")
    return {entry["name"]: entry for entry in json.loads(text)}


def validate_entry(entry: dict) -> SimpleCatalogEntry:
    name = entry["name"]
    G = PermGroup(entry["generators"])
    if G.order() != entry["order"]:
        raise CatalogError(f"{name}: computed order {G.order()} != {entry['order']}")
    if G.degree != entry["min_index"]:
        raise CatalogError(f"{name}: degree {G.degree} != minimal index {entry['min_index']}")
    if not G.is_transitive():
        raise CatalogError(f"{name}: action is not transitive")
    if not G.is_simple():
        raise CatalogError(f"{name}: group is not simple")
    return SimpleCatalogEntry(name, entry["order"], entry["min_index"], G)


@lru_cache(maxsize=None)
def catalog(name: str) -> SimpleCatalogEntry:
    """Validated catalog entry; validation runs once per process."""
    data = _catalog_data()
    if name not in data:
        raise CatalogError(f"unknown simple group {name!r}; known: {', '.join(CATALOG_NAMES)}")
    return validate_entry(data[name])
