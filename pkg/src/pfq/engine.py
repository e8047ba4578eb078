"""Staged partition refinement over a corpus of presentations.

Groups start in one block.  Each stage computes one invariant for every
group still sharing a block with another group, then splits blocks by
value.  A block containing a group whose computation FAILED is left whole
for that stage, so running out of budget never creates a distinction.

Results are cached as JSON lines in ``records.jsonl`` next to a
``meta.json`` holding the convention tag; rerunning with the same cache
directory skips every record already present, which is how interrupted
runs resume.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .cosets import SearchBudgetExceeded, h1
from .fpgroups import Presentation
from .homsearch import TupleBudgetExceeded
from .invariants import (FAILED, OK, InvariantDescriptor, InvariantError, InvariantRecord,
                         compute_value, entropy, max_avc_ratio)
from .permgrp import CATALOG_NAMES, BoundExceeded, catalog
from .zlinalg import AbelianInvariants

#: Recorded in every cache; a cache written under another convention is refused.
CONVENTION = "pfq-1;fia=all-subgroups+multiset;covers=finite-abelian|Z-cyclic|else-skip"

RECORDS_FILE = "records.jsonl"
META_FILE = "meta.json"

Guard = Callable[[AbelianInvariants], bool]


class EngineError(RuntimeError):
    pass


class CacheError(EngineError):
    pass


def always(ab: AbelianInvariants) -> bool:
    return True


def finite_h1(ab: AbelianInvariants) -> bool:
    return ab.is_finite


def infinite_cyclic_h1(ab: AbelianInvariants) -> bool:
    return ab == AbelianInvariants(1, ())


GUARDS: Dict[str, Guard] = {"ABELIAN_COVER": finite_h1, "CYCLIC_COVERS": infinite_cyclic_h1}


@dataclass(frozen=True)
class Stage:
    """One refinement step.  Each group uses the first alternative whose guard accepts its H_1."""

    label: str
    alternatives: Tuple[Tuple[Guard, InvariantDescriptor], ...]

    @classmethod
    def single(cls, desc: InvariantDescriptor) -> "Stage":
        return cls(str(desc), ((GUARDS.get(desc.kind, always), desc),))

    def descriptor_for(self, ab: AbelianInvariants) -> Optional[InvariantDescriptor]:
        for guard, desc in self.alternatives:
            if guard(ab):
                return desc
        return None


def covers_stage(max_n: int = 10) -> Stage:
    return Stage(f"COVERS({max_n})", (
        (finite_h1, InvariantDescriptor("ABELIAN_COVER")),
        (infinite_cyclic_h1, InvariantDescriptor("CYCLIC_COVERS", max_n)),
    ))


def default_stages() -> List[Stage]:
    stages = [Stage.single(InvariantDescriptor("H1"))]
    stages += [Stage.single(InvariantDescriptor("FIA", n)) for n in range(2, 8)]
    stages.append(covers_stage(10))
    stages += [Stage.single(InvariantDescriptor("SIMPLE_COVERS", name)) for name in CATALOG_NAMES]
    return stages


def parse_stage(text: str) -> Stage:
    text = text.strip()
    if text.startswith("COVERS"):
        inner = text[len("COVERS"):]
        if inner in ("", "()"):
            return covers_stage()
        if inner.startswith("(") and inner.endswith(")") and inner[1:-1].isdigit():
            return covers_stage(int(inner[1:-1]))
        raise InvariantError(f"malformed stage {text!r}")
    return Stage.single(InvariantDescriptor.parse(text))


def parse_stages(text: str) -> List[Stage]:
    """One stage per line; blank lines and ``#`` comments are ignored."""
    stages = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            stages.append(parse_stage(line))
    if not stages:
        raise InvariantError("no stages given")
    return stages


def load_stages(path) -> List[Stage]:
    with open(path, encoding="utf-8") as fh:
        return parse_stages(fh.read())


@dataclass
class StageTally:
    label: str
    distinguished: int
    remaining: int
    entropy_bits: float


@dataclass
class RunState:
    corpus: List[Presentation]
    blocks: List[List[str]]
    records: Dict[str, Dict[str, InvariantRecord]] = field(default_factory=dict)
    tallies: List[StageTally] = field(default_factory=list)
    computed: int = 0

    @property
    def fully_distinguished(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    def residual_blocks(self) -> List[List[str]]:
        return [b for b in self.blocks if len(b) > 1]


# -- cache -------------------------------------------------------------------


class Cache:
    """Append-only record store; the last line may be torn by a crash."""

    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.records: Dict[Tuple[str, str], InvariantRecord] = {}
        meta_path = self.dir / META_FILE
        rec_path = self.dir / RECORDS_FILE
        if meta_path.exists():
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            if meta.get("convention") != CONVENTION:
                raise CacheError(
                    f"cache {self.dir} uses convention {meta.get('convention')!r}, "
                    f"expected {CONVENTION!r}")
        elif rec_path.exists() and rec_path.stat().st_size:
            raise CacheError(f"cache {self.dir} has records but no {META_FILE}")
        else:
            tmp = meta_path.with_suffix(".tmp")
            tmp.write_text(json.dumps({"convention": CONVENTION}) + "\n", encoding="utf-8")
            os.replace(tmp, meta_path)
        self._load(rec_path)
        self._fh = open(rec_path, "a", encoding="utf-8", newline="\n")

    def _load(self, path: Path) -> None:
        if not path.exists():
            return
        data = path.read_bytes()
        good = 0
        for line in data.splitlines(keepends=True):
            if not line.endswith(b"\n"):
                break
            try:
                rec = InvariantRecord.from_json(json.loads(line))
            except (ValueError, KeyError) as exc:
                raise CacheError(f"corrupt cache line in {path}: {exc}") from None
            self.records[rec.group, rec.descriptor] = rec
            good += len(line)
        if good != len(data):
            with open(path, "r+b") as fh:
                fh.truncate(good)

    def get(self, group: str, descriptor: str) -> Optional[InvariantRecord]:
        return self.records.get((group, descriptor))

    def put(self, rec: InvariantRecord) -> None:
        self.records[rec.group, rec.descriptor] = rec
        self._fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def close(self) -> None:
        self._fh.close()


def read_cache_records(directory) -> List[InvariantRecord]:
    """Read a cache without opening it for writing."""
    path = Path(directory) / RECORDS_FILE
    if not path.exists():
        raise CacheError(f"no {RECORDS_FILE} in {directory}")
    out = []
    for line in path.read_text(encoding="utf-8").splitlines(keepends=True):
        if line.endswith("\n"):
            out.append(InvariantRecord.from_json(json.loads(line)))
    return out


# -- tasks -------------------------------------------------------------------


@dataclass(frozen=True)
class Budgets:
    node_budget: Optional[int] = None
    max_tuples: Optional[int] = None


def compute_record(P: Presentation, desc: InvariantDescriptor,
                   budgets: Budgets = Budgets()) -> InvariantRecord:
    start = time.process_time()
    try:
        value, nodes = compute_value(P, desc, node_budget=budgets.node_budget,
                                     max_tuples=budgets.max_tuples)
        status = OK
    except (SearchBudgetExceeded, TupleBudgetExceeded, BoundExceeded):
        value, nodes, status = None, None, FAILED
    cpu_ms = round((time.process_time() - start) * 1000, 3)
    return InvariantRecord(P.name, str(desc), value, cpu_ms, status, nodes)


def _task(args):
    return compute_record(*args)


def _refine(blocks: List[List[str]], values: Dict[str, Optional[InvariantRecord]]
            ) -> List[List[str]]:
    out = []
    for block in blocks:
        if len(block) == 1:
            out.append(block)
            continue
        recs = [values.get(name) for name in block]
        if any(r is not None and r.status != OK for r in recs):
            out.append(block)
            continue
        groups: Dict[Tuple[Optional[str], Optional[str]], List[str]] = {}
        for name, r in zip(block, recs):
            key = (None, None) if r is None else (r.descriptor, r.value)
            groups.setdefault(key, []).append(name)
        out.extend(groups.values())
    return out


def run(corpus: Sequence[Presentation], stages: Optional[Sequence[Stage]] = None,
        jobs: int = 1, cache_dir=None, budgets: Budgets = Budgets(),
        progress: Optional[Callable[[str], None]] = None) -> RunState:
    """Refine the corpus stage by stage; see the module docstring."""
    corpus = list(corpus)
    if not corpus:
        raise EngineError("empty corpus")
    names = [P.name for P in corpus]
    if len(set(names)) != len(names):
        raise EngineError("duplicate group names in corpus")
    if jobs < 1:
        raise EngineError("jobs must be positive")
    stages = default_stages() if stages is None else list(stages)
    for stage in stages:
        for _, desc in stage.alternatives:
            if desc.kind == "SIMPLE_COVERS":
                catalog(desc.arg)
    by_name = {P.name: P for P in corpus}
    h1s = {P.name: h1(P) for P in corpus}
    cache = Cache(cache_dir) if cache_dir is not None else None
    state = RunState(corpus, [names[:]])
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for stage in stages:
            if state.fully_distinguished:
                break
            active = [name for b in state.blocks if len(b) > 1 for name in b]
            todo: List[Tuple[str, InvariantDescriptor]] = []
            done: Dict[str, Optional[InvariantRecord]] = {}
            for name in active:
                desc = stage.descriptor_for(h1s[name])
                if desc is None:
                    done[name] = None
                    continue
                hit = cache.get(name, str(desc)) if cache else None
                if hit is not None:
                    done[name] = hit
                else:
                    todo.append((name, desc))
            args = [(by_name[name], desc, budgets) for name, desc in todo]
            results = pool.map(_task, args) if pool else map(_task, args)
            for rec in results:
                if cache:
                    cache.put(rec)
                done[rec.group] = rec
                state.computed += 1
            for name in active:
                rec = done[name]
                if rec is not None:
                    state.records.setdefault(name, {})[rec.descriptor] = rec
            before = sum(1 for b in state.blocks if len(b) == 1)
            state.blocks = _refine(state.blocks, done)
            singles = sum(1 for b in state.blocks if len(b) == 1)
            remaining = sum(len(b) for b in state.blocks if len(b) > 1)
            state.tallies.append(StageTally(stage.label, singles - before, remaining,
                                            entropy([len(b) for b in state.blocks])))
            if progress:
                progress(f"{stage.label}: {singles - before} distinguished, {remaining} remaining")
    finally:
        if pool:
            pool.shutdown()
        if cache:
            cache.close()
    return state


def resume(cache_dir, corpus: Sequence[Presentation], stages: Optional[Sequence[Stage]] = None,
           jobs: int = 1, budgets: Budgets = Budgets()) -> RunState:
    """Continue a cached run; records already in the cache are reused, not recomputed."""
    return run(corpus, stages, jobs, cache_dir, budgets)


# -- reports -----------------------------------------------------------------


def _fmt(x: float) -> str:
    return str(round(x, 10))


def _csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def stage_table_csv(state: RunState) -> str:
    return _csv(("stage", "distinguished", "remaining", "entropy_bits"),
                ((t.label, t.distinguished, t.remaining, _fmt(t.entropy_bits))
                 for t in state.tallies))


def avc_rows(state: RunState) -> List[Tuple[str, str, float]]:
    rows = []
    for P in state.corpus:
        if P.volume is None:
            continue
        recs = state.records.get(P.name, {})
        for name in CATALOG_NAMES:
            rec = recs.get(str(InvariantDescriptor("SIMPLE_COVERS", name)))
            if rec is None or rec.status != OK:
                continue
            ratio = max_avc_ratio(P.volume, catalog(name).order, rec.value)
            if ratio is not None:
                rows.append((P.name, name, ratio))
    return rows


def avc_table_csv(state: RunState) -> str:
    return _csv(("group", "quotient", "avc_ratio"),
                ((g, q, _fmt(r)) for g, q, r in avc_rows(state)))


def report(state: RunState) -> Dict[str, str]:
    """CSV documents keyed ``stages`` and ``avc``."""
    return {"stages": stage_table_csv(state), "avc": avc_table_csv(state)}


def write_report(state: RunState, prefix) -> List[Path]:
    paths = []
    for key, text in report(state).items():
        path = Path(f"{prefix}_{key}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        paths.append(path)
    return paths
