"""Exact integer matrices, Smith normal form and abelian invariants.

Matrices are stored as one ``{column: value}`` dict per row, holding only
nonzero entries, since relation matrices of covers of index in the
thousands are far too large to hold densely but have a few entries per
row.  All arithmetic is on Python ints.
"""

from __future__ import annotations

import heapq
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple


class IntMatrix:
    """Sparse integer matrix with fixed shape."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Optional[List[dict]] = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [{} for _ in range(rows)]
        if len(data) != rows:
            raise ValueError("row count does not match data")
        for r in data:
            for c, v in r.items():
                if not 0 <= c < cols:
                    raise ValueError(f"column {c} out of range")
                if v == 0:
                    raise ValueError("explicit zero stored in sparse row")
        self._data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
            data.append({j: int(v) for j, v in enumerate(r) if v})
        return cls(len(rows), cols, data)

    @classmethod
    def from_sparse_rows(cls, rows: Iterable[dict], cols: int) -> "IntMatrix":
        data = [{c: v for c, v in r.items() if v} for r in rows]
        return cls(len(data), cols, data)

    def sparse_rows(self) -> List[dict]:
        return [dict(r) for r in self._data]

    def to_dense(self) -> List[List[int]]:
        out = []
        for r in self._data:
            row = [0] * self.cols
            for c, v in r.items():
                row[c] = v
            out.append(row)
        return out

    def __getitem__(self, idx: Tuple[int, int]) -> int:
        i, j = idx
        return self._data[i].get(j, 0)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._data) == (other.rows, other.cols, other._data)

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


# -- Smith normal form -------------------------------------------------------


class _Work:
    """Mutable sparse working copy with a column index."""

    def __init__(self, M: IntMatrix):
        self.rows = {i: dict(r) for i, r in enumerate(M._data) if r}
        self.colidx: dict[int, set] = {}
        for i, r in self.rows.items():
            for c in r:
                self.colidx.setdefault(c, set()).add(i)

    def axpy(self, target: int, q: int, source: int) -> None:
        """row[target] -= q * row[source]."""
        trow = self.rows[target]
        colidx = self.colidx
        for c, v in self.rows[source].items():
            nv = trow.get(c, 0) - q * v
            if nv:
                if c not in trow:
                    colidx[c].add(target)
                trow[c] = nv
            elif c in trow:
                del trow[c]
                colidx[c].discard(target)

    def drop(self, r: int, c: int) -> None:
        for cc in self.rows.pop(r):
            self.colidx[cc].discard(r)
        del self.colidx[c]

    def prune_empty(self, candidates: Iterable[int]) -> None:
        for i in candidates:
            if i in self.rows and not self.rows[i]:
                del self.rows[i]


def _nearest_quotient(a: int, b: int) -> int:
    """Integer q minimising |a - q*b|."""
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1
    return q


def _eliminate_units(W: _Work, diagonal: list) -> None:
    """Eliminate with +-1 pivots, shortest row first, sparsest column within it."""
    heap = [(len(r), i) for i, r in W.rows.items()]
    heapq.heapify(heap)
    while heap:
        length, i = heapq.heappop(heap)
        row = W.rows.get(i)
        if row is None or len(row) != length:
            continue  # stale; modified rows are re-pushed
        best = None
        for c, v in row.items():
            if v == 1 or v == -1:
                key = (len(W.colidx[c]), c)
                if best is None or key < best[0]:
                    best = (key, c)
        if best is None:
            continue
        c = best[1]
        p = row[c]
        touched = [s for s in W.colidx[c] if s != i]
        for s in touched:
            W.axpy(s, W.rows[s][c] * p, i)
        W.drop(i, c)
        diagonal.append(1)
        for s in touched:
            rs = W.rows[s]
            if rs:
                heapq.heappush(heap, (len(rs), s))
            else:
                del W.rows[s]


def _eliminate_general(W: _Work, diagonal: list) -> None:
    """Smallest-magnitude pivot, ties broken by lowest row then column."""
    while W.rows:
        best = None
        for i, r in W.rows.items():
            for c, v in r.items():
                key = (abs(v), i, c)
                if best is None or key < best:
                    best = key
        _, i, c = best
        p = W.rows[i][c]
        clean = True
        touched = [s for s in W.colidx[c] if s != i]
        for s in touched:
            q = _nearest_quotient(W.rows[s][c], p)
            if q:
                W.axpy(s, q, i)
            if W.rows[s].get(c):
                clean = False
        W.prune_empty(touched)
        if not clean:
            continue
        row = W.rows[i]
        for t in [t for t in row if t != c]:
            # column op: col t -= q * col c; col c is zero outside row i
            nv = row[t] - _nearest_quotient(row[t], p) * p
            if nv:
                row[t] = nv
            else:
                del row[t]
                W.colidx[t].discard(i)
        if len(row) == 1:
            W.drop(i, c)
            diagonal.append(abs(p))


def _chain(diagonal: Sequence[int]) -> List[int]:
    """Turn nonzero diagonal entries into a divisor chain (gcd/lcm exchange)."""
    ones = sum(1 for d in diagonal if d == 1)
    rest = sorted(d for d in diagonal if d != 1)
    for a in range(len(rest)):
        for b in range(a + 1, len(rest)):
            x, y = rest[a], rest[b]
            if y % x:
                g = math.gcd(x, y)
                rest[a], rest[b] = g, x // g * y
    out = [1] * ones
    out.extend(d for d in rest if d == 1)
    out.extend(d for d in rest if d != 1)
    return out


def smith_normal_form(M: IntMatrix, strategy: str = "sparse") -> List[int]:
    """Diagonal of the Smith normal form of ``M``.

    Returns ``min(rows, cols)`` nonnegative integers ``e_1 | e_2 | ...`` with
    zeros last.  ``strategy="sparse"`` eliminates unit pivots first, choosing
    among them to limit fill-in, then falls back to the smallest-magnitude
    rule; ``strategy="smallest"`` applies the smallest-magnitude rule
    throughout.  Both give the same result.
    """
    W = _Work(M)
    diagonal: list[int] = []
    if strategy == "sparse":
        _eliminate_units(W, diagonal)
    elif strategy != "smallest":
        raise ValueError(f"unknown strategy {strategy!r}")
    _eliminate_general(W, diagonal)
    out = _chain(diagonal)
    out.extend([0] * (min(M.rows, M.cols) - len(out)))
    return out


# -- abelian invariants ------------------------------------------------------


_AB_RE = re.compile(r"^Z\^(\d+)((?:\+Z/\d+)*)$")


@dataclass(frozen=True, order=True)
class AbelianInvariants:
    """``Z^free_rank + Z/d_1 + ... + Z/d_k`` with ``d_i | d_(i+1)``, ``d_i >= 2``."""

    free_rank: int
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for a, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError("torsion coefficients must be at least 2")
            if a and d % self.torsion[a - 1]:
                raise ValueError("torsion coefficients must form a divisor chain")

    def __str__(self) -> str:
        return f"Z^{self.free_rank}" + "".join(f"+Z/{d}" for d in self.torsion)

    @classmethod
    def parse(cls, text: str) -> "AbelianInvariants":
        m = _AB_RE.match(text.strip())
        if not m:
            raise ValueError(f"not an abelian invariants string: {text!r}")
        torsion = tuple(int(t) for t in m.group(2).split("+Z/")[1:])
        return cls(int(m.group(1)), torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        """Group order; 0 stands for infinite."""
        if self.free_rank:
            return 0
        return math.prod(self.torsion)

    @property
    def torsion_order(self) -> int:
        return math.prod(self.torsion)


def abelian_invariants(M: IntMatrix, ngens: int, strategy: str = "sparse") -> AbelianInvariants:
    """Invariants of the cokernel of ``M`` acting on ``Z^ngens`` (rows are relations)."""
    if M.cols != ngens:
        raise ValueError(f"matrix has {M.cols} columns, expected {ngens}")
    divisors = smith_normal_form(M, strategy)
    nonzero = [d for d in divisors if d]
    return AbelianInvariants(ngens - len(nonzero), tuple(d for d in nonzero if d > 1))


def torsion_order_log(A: AbelianInvariants) -> float:
    return sum(math.log(d) for d in A.torsion)


# -- helpers for abelian quotients ------------------------------------------


def hermite_basis(M: IntMatrix) -> List[List[int]]:
    """Row-style Hermite normal form of the row lattice of ``M``.

    Returns the nonzero rows, upper echelon with positive pivots and entries
    above each pivot reduced into ``[0, pivot)``.
    """
    rows = [r for r in M.to_dense() if any(r)]
    basis: List[List[int]] = []
    col = 0
    ncols = M.cols
    while rows and col < ncols:
        nz = [r for r in rows if r[col]]
        zero = [r for r in rows if not r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            others = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    others.append(r)
                elif any(r):
                    zero.append(r)
            nz = [piv] + others
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        basis.append(piv)
        rows = zero
        col += 1
    for k, piv in enumerate(basis):
        pc = next(j for j, a in enumerate(piv) if a)
        for a in range(k):
            q = basis[a][pc] // piv[pc]
            if q:
                basis[a] = [x - q * y for x, y in zip(basis[a], piv)]
    return basis


def integer_kernel_vector(M: IntMatrix) -> List[int]:
    """A primitive integer vector spanning the kernel of ``M`` (which must be rank one)."""
    n = M.cols
    A = [[Fraction(v) for v in r] for r in M.to_dense()]
    pivots = []
    row = 0
    for col in range(n):
        p = next((i for i in range(row, len(A)) if A[i][col]), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        inv = 1 / A[row][col]
        A[row] = [x * inv for x in A[row]]
        for i in range(len(A)):
            if i != row and A[i][col]:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise ValueError(f"kernel has rank {len(free)}, expected 1")
    f = free[0]
    vec = [Fraction(0)] * n
    vec[f] = Fraction(1)
    for i, pc in enumerate(pivots):
        vec[pc] = -A[i][f]
    denom = math.lcm(*(x.denominator for x in vec))
    ints = [int(x * denom) for x in vec]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return ints
