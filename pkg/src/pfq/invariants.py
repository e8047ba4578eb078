"""Invariant descriptors, canonical value strings, fingerprints and entropy.

Values are canonical strings so that two groups agree on an invariant
exactly when their strings are equal:

* ``H1`` and ``ABELIAN_COVER``: ``Z^r+Z/d1+...`` (the cover value is
  prefixed by its degree, ``32:Z^2+Z/2``),
* multisets: ``{k1:A1, k2:A2 x3}`` sorted by key then value, with a
  ``xN`` suffix for repeated entries and ``{}`` when empty.  ``FIA(n)``
  keys are subgroup indices, ``CYCLIC_COVERS(n)`` keys are cover degrees,
  ``SIMPLE_COVERS(Q)`` has no keys (``{Z^12+Z/2}``).
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .cosets import (abelian_cover_table, cyclic_cover_table, h1, low_index_subgroups,
                     subgroup_h1)
from .fpgroups import Presentation
from .homsearch import kernel_cover_invariants, search_surjections
from .permgrp import CATALOG_NAMES, catalog
from .zlinalg import AbelianInvariants, torsion_order_log

KINDS = ("H1", "FIA", "ABELIAN_COVER", "CYCLIC_COVERS", "SIMPLE_COVERS")
_TAKES_ARG = {"FIA": int, "CYCLIC_COVERS": int, "SIMPLE_COVERS": str}

_DESC_RE = re.compile(r"^([A-Z0-9_]+)(?:\((.*)\))?(?:\[(.*)\])?$")

OK = "OK"
FAILED = "FAILED"


class InvariantError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class InvariantDescriptor:
    kind: str
    arg: Optional[object] = None
    tag: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvariantError(f"unknown invariant kind {self.kind!r}")
        want = _TAKES_ARG.get(self.kind)
        if want is None:
            if self.arg is not None:
                raise InvariantError(f"{self.kind} takes no argument")
        elif not isinstance(self.arg, want) or isinstance(self.arg, bool):
            raise InvariantError(f"{self.kind} needs a {want.__name__} argument")
        if self.kind == "FIA" and self.arg < 1:
            raise InvariantError("FIA index must be positive")
        if self.kind == "CYCLIC_COVERS" and self.arg < 2:
            raise InvariantError("CYCLIC_COVERS degree must be at least 2")
        if self.kind == "SIMPLE_COVERS" and self.arg not in CATALOG_NAMES:
            raise InvariantError(f"unknown catalog group {self.arg!r}")

    def __str__(self) -> str:
        s = self.kind
        if self.arg is not None:
            s += f"({self.arg})"
        if self.tag:
            s += f"[{self.tag}]"
        return s

    @classmethod
    def parse(cls, text: str) -> "InvariantDescriptor":
        m = _DESC_RE.match(text.strip())
        if not m:
            raise InvariantError(f"malformed descriptor {text!r}")
        kind, arg, tag = m.groups()
        if kind not in KINDS:
            raise InvariantError(f"unknown invariant kind {kind!r}")
        want = _TAKES_ARG.get(kind)
        if arg is not None and want is int:
            try:
                arg = int(arg)
            except ValueError:
                raise InvariantError(f"{kind} needs an integer argument, got {arg!r}") from None
        return cls(kind, arg, tag or None)


@dataclass(frozen=True)
class InvariantRecord:
    group: str
    descriptor: str
    value: Optional[str]
    cpu_ms: float = 0.0
    status: str = OK
    nodes: Optional[int] = None

    def to_json(self) -> dict:
        obj = {"group": self.group, "descriptor": self.descriptor, "value": self.value,
               "cpu_ms": self.cpu_ms, "status": self.status}
        if self.nodes is not None:
            obj["nodes"] = self.nodes
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "InvariantRecord":
        status = obj["status"]
        if status not in (OK, FAILED):
            raise InvariantError(f"bad record status {status!r}")
        return cls(obj["group"], obj["descriptor"], obj["value"], float(obj["cpu_ms"]), status,
                   obj.get("nodes"))


# -- canonical values --------------------------------------------------------


def format_multiset(items: Iterable[Tuple[Optional[int], AbelianInvariants]]) -> str:
    counts = Counter(items)
    parts = []
    for (key, ab) in sorted(counts, key=lambda kv: (kv[0] or 0, kv[1])):
        s = str(ab) if key is None else f"{key}:{ab}"
        if counts[key, ab] > 1:
            s += f" x{counts[key, ab]}"
        parts.append(s)
    return "{" + ", ".join(parts) + "}"


def parse_multiset(text: str) -> List[Tuple[Optional[int], AbelianInvariants]]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise InvariantError(f"not a multiset string: {text!r}")
    body = text[1:-1].strip()
    out: List[Tuple[Optional[int], AbelianInvariants]] = []
    if not body:
        return out
    for part in body.split(", "):
        count = 1
        if " x" in part:
            part, n = part.rsplit(" x", 1)
            count = int(n)
        key: Optional[int] = None
        if ":" in part:
            k, part = part.split(":", 1)
            key = int(k)
        out.extend([(key, AbelianInvariants.parse(part))] * count)
    return out


def fia_fingerprint(P: Presentation, max_index: int,
                    node_budget: Optional[int] = None) -> str:
    """Multiset of (index, H_1) over all subgroups of index at most ``max_index``."""
    kwargs = {} if node_budget is None else {"node_budget": node_budget}
    tables = low_index_subgroups(P, max_index, **kwargs)
    return format_multiset((T.n, subgroup_h1(P, T, check=False)) for T in tables)


def abelian_cover_value(P: Presentation) -> str:
    T = abelian_cover_table(P)
    if T is None:
        raise InvariantError(f"{P.name}: abelianization is infinite")
    return f"{T.n}:{subgroup_h1(P, T, check=False)}"


def cyclic_covers_value(P: Presentation, max_n: int) -> str:
    return format_multiset((n, subgroup_h1(P, cyclic_cover_table(P, n), check=False))
                           for n in range(2, max_n + 1))


def simple_covers_value(P: Presentation, name: str,
                        max_tuples: Optional[int] = None) -> Tuple[str, int]:
    """Kernel H_1 multiset for surjections onto a catalog group, plus the search node count."""
    Q = catalog(name).group
    res = search_surjections(P, Q, max_tuples)
    covers = kernel_cover_invariants(P, Q, res.classes)
    return format_multiset((None, ab) for ab in covers), res.nodes


def compute_value(P: Presentation, desc: InvariantDescriptor, *,
                  node_budget: Optional[int] = None,
                  max_tuples: Optional[int] = None) -> Tuple[str, Optional[int]]:
    """Canonical value of one invariant and, for searches, a node count."""
    if desc.kind == "H1":
        return str(h1(P)), None
    if desc.kind == "FIA":
        return fia_fingerprint(P, desc.arg, node_budget), None
    if desc.kind == "ABELIAN_COVER":
        return abelian_cover_value(P), None
    if desc.kind == "CYCLIC_COVERS":
        return cyclic_covers_value(P, desc.arg), None
    return simple_covers_value(P, desc.arg, max_tuples)


# -- fingerprints and partitions ---------------------------------------------


def accumulate_fingerprint(records: Sequence[InvariantRecord]) -> str:
    """Join the OK values of one group's records; FAILED records contribute nothing."""
    seen = {}
    for rec in records:
        if rec.status != OK:
            continue
        prev = seen.get(rec.descriptor)
        if prev is not None and prev != rec.value:
            raise InvariantError(
                f"{rec.group}: conflicting values for {rec.descriptor}: {prev!r} vs {rec.value!r}")
        seen[rec.descriptor] = rec.value
    return "|".join(f"{d}={seen[d]}" for d in sorted(seen))


def entropy(block_sizes: Sequence[int]) -> float:
    """Shannon entropy in bits of a partition with the given block sizes."""
    if not block_sizes:
        raise InvariantError("entropy of an empty partition")
    if any(n < 1 for n in block_sizes):
        raise InvariantError("block sizes must be positive")
    total = sum(block_sizes)
    h = -sum(n / total * math.log2(n / total) for n in block_sizes)
    return max(0.0, h)


def partition_by(values: Iterable[Tuple[str, str]]) -> List[List[str]]:
    """Group names by value; blocks in order of first appearance."""
    blocks: dict = {}
    for name, value in values:
        blocks.setdefault(value, []).append(name)
    return list(blocks.values())


def descriptor_entropy(records: Iterable[InvariantRecord], descriptor: str) -> Tuple[int, int, float]:
    """(groups, blocks, entropy) of the partition induced by one descriptor's OK values."""
    pairs = [(r.group, r.value) for r in records if r.descriptor == descriptor and r.status == OK]
    if not pairs:
        raise InvariantError(f"no completed records for {descriptor}")
    blocks = partition_by(pairs)
    return len(pairs), len(blocks), entropy([len(b) for b in blocks])


def avc_ratio(volume: Optional[float], quotient_order: int, torsion_log: float) -> float:
    """``6 pi log|tors H_1(K)| / (|Q| vol)``, the normalized torsion growth of a cover."""
    if volume is None:
        raise InvariantError("volume metadata is required")
    if not volume > 0:
        raise InvariantError("volume must be positive")
    if quotient_order < 1:
        raise InvariantError("quotient order must be positive")
    if torsion_log < 0:
        raise InvariantError("torsion log must be nonnegative")
    return 6 * math.pi * torsion_log / (quotient_order * volume)


def max_avc_ratio(volume: float, quotient_order: int, value: str) -> Optional[float]:
    """Largest ratio over the kernels listed in a SIMPLE_COVERS value; None if empty."""
    covers = parse_multiset(value)
    if not covers:
        return None
    return max(avc_ratio(volume, quotient_order, torsion_order_log(ab)) for _, ab in covers)
