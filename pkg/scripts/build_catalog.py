#!/usr/bin/env python3
"""Regenerate src/pfq/data/simple_groups.json.

Each group is built from its classical description in a minimal-degree
action, then two generators are picked (deterministically) that generate
the whole group.  Loading the catalog re-validates order, degree,
transitivity and simplicity, so nothing here is trusted blindly.

    python scripts/build_catalog.py
"""

import itertools
import json
import random
from pathlib import Path

from pfq.permgrp import (CATALOG_NAMES, PermGroup, compose, from_cycles, generated_subgroup,
                         identity, inverse, perm_order)

OUT = Path(__file__).resolve().parents[1] / "src" / "pfq" / "data" / "simple_groups.json"

ORDERS = {
    "A5": 60, "PSL(2,7)": 168, "A6": 360, "PSL(2,8)": 504, "PSL(2,11)": 660,
    "PSL(2,13)": 1092, "PSL(2,17)": 2448, "A7": 2520, "PSL(2,19)": 3420,
    "PSL(2,16)": 4080, "PSL(3,3)": 5616, "PSU(3,3)": 6048, "PSL(2,23)": 6072,
}
MIN_INDEX = {
    "A5": 5, "PSL(2,7)": 7, "A6": 6, "PSL(2,8)": 9, "PSL(2,11)": 11,
    "PSL(2,13)": 14, "PSL(2,17)": 18, "A7": 7, "PSL(2,19)": 20,
    "PSL(2,16)": 17, "PSL(3,3)": 13, "PSU(3,3)": 28, "PSL(2,23)": 24,
}


# -- finite fields -----------------------------------------------------------

class GF:
    """GF(p^k) with elements encoded as ints 0..q-1 (base-p digits)."""

    def __init__(self, p, k=1, modulus=None):
        self.p, self.k, self.q = p, k, p**k
        self.modulus = modulus  # coefficients low to high, monic, length k+1
        self._mul = {}
        for a in range(self.q):
            for b in range(self.q):
                self._mul[a, b] = self._slow_mul(a, b)

    def digits(self, a):
        return [(a // self.p**i) % self.p for i in range(self.k)]

    def from_digits(self, ds):
        return sum(d * self.p**i for i, d in enumerate(ds))

    def add(self, a, b):
        return self.from_digits([(x + y) % self.p for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        return self.from_digits([(-x) % self.p for x in self.digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def _slow_mul(self, a, b):
        if self.k == 1:
            return a * b % self.p
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(self.digits(a)):
            for j, y in enumerate(self.digits(b)):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        for d in range(len(prod) - 1, self.k - 1, -1):
            c = prod[d]
            if c:
                for i in range(self.k + 1):
                    prod[d - self.k + i] = (prod[d - self.k + i] - c * self.modulus[i]) % self.p
        return self.from_digits(prod[:self.k])

    def mul(self, a, b):
        return self._mul[a, b]

    def inv(self, a):
        for b in range(1, self.q):
            if self._mul[a, b] == 1:
                return b
        raise ZeroDivisionError

    def pow(self, a, n):
        r = 1
        for _ in range(n):
            r = self.mul(r, a)
        return r

    def primitive(self):
        for a in range(2, self.q) if self.q > 2 else [1]:
            if len({self.pow(a, n) for n in range(1, self.q)}) == self.q - 1:
                return a
        return 1


def field(q):
    if q == 8:
        return GF(2, 3, [1, 1, 0, 1])      # x^3 + x + 1
    if q == 16:
        return GF(2, 4, [1, 1, 0, 0, 1])   # x^4 + x + 1
    if q == 9:
        return GF(3, 2, [1, 0, 1])         # x^2 + 1
    return GF(q)


# -- constructions -----------------------------------------------------------

def alternating(n):
    three = from_cycles(n, [0, 1, 2])
    if n % 2:
        long = from_cycles(n, list(range(n)))
    else:
        long = from_cycles(n, list(range(1, n)))
    return [three, long]


def psl2(q):
    """PSL(2,q) acting on the projective line; point q is infinity."""
    F = field(q)
    INF = q
    w = F.primitive()

    def mobius(a, b, c, d):
        img = []
        for x in range(q + 1):
            if x == INF:
                num, den = a, c
            else:
                num, den = F.add(F.mul(a, x), b), F.add(F.mul(c, x), d)
            img.append(INF if den == 0 else F.mul(num, F.inv(den)))
        return tuple(img)

    translate = mobius(1, 1, 0, 1)
    scale = mobius(w if q % 2 == 0 else F.mul(w, w), 0, 0, 1)
    flip = mobius(0, F.neg(1), 1, 0)
    return [translate, scale, flip]


def projective_points(F, dim):
    pts = []
    for v in itertools.product(range(F.q), repeat=dim):
        nz = [x for x in v if x]
        if nz and nz[0] == 1:
            pts.append(v)
    return pts


def normalize(F, v):
    lead = next(x for x in v if x)
    inv = F.inv(lead)
    return tuple(F.mul(inv, x) for x in v)


def matrix_action(F, mats, points):
    index = {p: i for i, p in enumerate(points)}
    perms = []
    for m in mats:
        img = []
        for v in points:
            w = tuple(_dot(F, v, [m[i][j] for i in range(len(v))]) for j in range(len(v)))
            img.append(index[normalize(F, w)])
        perms.append(tuple(img))
    return perms


def _dot(F, v, col):
    s = 0
    for a, b in zip(v, col):
        s = F.add(s, F.mul(a, b))
    return s


def elementary(F, n, i, j, a):
    m = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    m[i][j] = a
    return m


def psl3(q):
    """SL(3,q) on projective points (row vectors times matrices)."""
    F = field(q)
    mats = [elementary(F, 3, i, j, 1) for i in range(3) for j in range(3) if i != j]
    return matrix_action(F, mats, projective_points(F, 3))


def gl32_on_vectors():
    """GL(3,2) = PSL(2,7) on the 7 nonzero vectors of F_2^3."""
    F = field(2)
    mats = [elementary(F, 3, i, j, 1) for i in range(3) for j in range(3) if i != j]
    return matrix_action(F, mats, projective_points(F, 3))


def psu33():
    """SU(3,3) on the 28 isotropic points of a hermitian form over GF(9)."""
    F = field(9)

    def conj(x):
        return F.pow(x, 3)

    def herm(x, y):
        return _dot(F, x, [conj(y[2]), conj(y[1]), conj(y[0])])

    points = [v for v in projective_points(F, 3) if herm(v, v) == 0]
    index = {p: i for i, p in enumerate(points)}
    trace_zero = [a for a in range(1, 9) if F.add(a, conj(a)) == 0]
    perms = []
    for v in points:
        for a in trace_zero:
            img = []
            for x in points:
                s = F.mul(a, herm(x, v))
                y = tuple(F.add(xi, F.mul(s, vi)) for xi, vi in zip(x, v))
                img.append(index[normalize(F, y)])
            perms.append(tuple(img))
    assert len(points) == 28
    return perms


def coset_action(gens, subgroup):
    """Action of <gens> on right cosets of ``subgroup`` (a set of perms)."""
    degree = len(gens[0])
    G = sorted(generated_subgroup(gens, degree))
    key = {}
    reps = []
    for g in G:
        if g in key:
            continue
        coset = [compose(h, g) for h in subgroup]
        for x in coset:
            key[x] = len(reps)
        reps.append(g)
    return [tuple(key[compose(r, s)] for r in reps) for s in gens]


def psl2_11_on_11():
    gens = psl2(11)
    G = sorted(generated_subgroup(gens, 12))
    invols = [g for g in G if perm_order(g) == 2]
    threes = [g for g in G if perm_order(g) == 3]
    for s in invols:
        for t in threes:
            if perm_order(compose(s, t)) == 5:
                H = generated_subgroup([s, t], 12)
                if len(H) == 60:
                    return coset_action(gens, H)
    raise RuntimeError("no A5 subgroup found")


def raw_generators(name):
    if name in ("A5", "A6", "A7"):
        return alternating(int(name[1:]))
    if name == "PSL(2,7)":
        return gl32_on_vectors()
    if name == "PSL(2,11)":
        return psl2_11_on_11()
    if name == "PSL(3,3)":
        return psl3(3)
    if name == "PSU(3,3)":
        return psu33()
    q = int(name[len("PSL(2,"):-1])
    return psl2(q)


def two_generators(perms, order):
    """Deterministically pick two elements of <perms> generating the whole group."""
    degree = len(perms[0])
    rng = random.Random(order)
    G = sorted(generated_subgroup(perms, degree))
    assert len(G) == order, (len(G), order)
    while True:
        a, b = rng.choice(G), rng.choice(G)
        if len(generated_subgroup([a, b], degree, stop_above=order // 2)) > order // 2:
            return [list(a), list(b)]


def main():
    entries = []
    for name in CATALOG_NAMES:
        perms = raw_generators(name)
        gens = two_generators(perms, ORDERS[name])
        entries.append({"name": name, "order": ORDERS[name], "min_index": MIN_INDEX[name],
                        "generators": gens})
        print(f"{name}: degree {len(gens[0])}")
    OUT.write_text("[\n" + ",\n".join(json.dumps(e) for e in entries) + "\n]\n")


if __name__ == "__main__":
    main()
