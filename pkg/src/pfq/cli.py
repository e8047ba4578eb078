"""Command line interface: ``pfq <command> ...``.

Exit codes: 0 success (for ``distinguish``: every group distinguished),
1 residual blocks remain, 2 error.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .cosets import CosetTableError, SearchBudgetExceeded, h1
from .engine import (Budgets, EngineError, load_stages, read_cache_records, run,
                     stage_table_csv, write_report)
from .fpgroups import CorpusError, Presentation, load_corpus, parse_corpus
from .homsearch import TupleBudgetExceeded, kernel_cover_invariants, search_surjections
from .invariants import InvariantDescriptor, InvariantError, descriptor_entropy, fia_fingerprint
from .permgrp import GroupError, catalog

BUNDLED = ("wilkes", "t05599", "synthetic20", "covers_pair")

EXIT_OK, EXIT_RESIDUAL, EXIT_ERROR = 0, 1, 2


def bundled_corpus(name: str) -> List[Presentation]:
    text = resources.files("pfq").joinpath("data", f"{name}.jsonl").read_text(encoding="utf-8")
    return parse_corpus(text)


def read_corpus(arg: str) -> List[Presentation]:
    """A corpus file path, or the name of a bundled corpus."""
    if not Path(arg).exists() and arg in BUNDLED:
        return bundled_corpus(arg)
    return load_corpus(arg)


def _select(corpus: List[Presentation], name: Optional[str]) -> List[Presentation]:
    if name is None:
        return corpus
    hits = [P for P in corpus if P.name == name]
    if not hits:
        raise CorpusError(f"no group named {name!r} in corpus")
    return hits


def cmd_validate(args) -> int:
    corpus = read_corpus(args.corpus)
    for P in corpus:
        print(f"{P.name}\t{P.ngens} generators\t{len(P.relators)} relators")
    print(f"{len(corpus)} presentations OK")
    return EXIT_OK


def cmd_h1(args) -> int:
    for P in _select(read_corpus(args.corpus), args.group):
        print(f"{P.name}\t{h1(P)}")
    return EXIT_OK


def cmd_fia(args) -> int:
    if args.max_index < 1:
        raise InvariantError("--max-index must be positive")
    for P in _select(read_corpus(args.corpus), args.group):
        print(f"{P.name}\t{fia_fingerprint(P, args.max_index)}")
    return EXIT_OK


def cmd_simples(args) -> int:
    Q = catalog(args.target).group
    for P in _select(read_corpus(args.corpus), args.group):
        res = search_surjections(P, Q, args.tuple_budget)
        print(f"{P.name}\t{args.target}\tkernels={len(res.classes)}\tsurjections={res.raw_count}"
              f"\ttuples={res.tuples}\tbound={res.bound}")
        if args.kernels:
            for ab in kernel_cover_invariants(P, Q, res.classes):
                print(f"  {ab}")
    return EXIT_OK


def cmd_distinguish(args) -> int:
    corpus = read_corpus(args.corpus)
    stages = load_stages(args.stages) if args.stages else None
    budgets = Budgets(args.node_budget, args.tuple_budget)
    progress = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    state = run(corpus, stages, args.jobs, args.cache, budgets, progress)
    sys.stdout.write(stage_table_csv(state))
    if args.report:
        write_report(state, args.report)
    residual = state.residual_blocks()
    for block in residual:
        print("residual: " + " ".join(block), file=sys.stderr)
    return EXIT_RESIDUAL if residual else EXIT_OK


def cmd_entropy(args) -> int:
    desc = str(InvariantDescriptor.parse(args.descriptor))
    groups, blocks, h = descriptor_entropy(read_cache_records(args.cache), desc)
    print(f"{desc}\tgroups={groups}\tblocks={blocks}\tentropy_bits={round(h, 10)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pfq", description="Distinguish finitely presented groups "
                                "by invariants of their finite quotients.")
    p.add_argument("--version", action="version", version=f"pfq {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse and validate a corpus")
    s.add_argument("corpus")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("h1", help="abelianizations")
    s.add_argument("corpus")
    s.add_argument("--group")
    s.set_defaults(func=cmd_h1)

    s = sub.add_parser("fia", help="abelianizations of subgroups up to an index")
    s.add_argument("corpus")
    s.add_argument("--max-index", type=int, required=True)
    s.add_argument("--group")
    s.set_defaults(func=cmd_fia)

    s = sub.add_parser("simples", help="surjections onto a catalog simple group")
    s.add_argument("corpus")
    s.add_argument("--target", required=True)
    s.add_argument("--kernels", action="store_true", help="print H_1 of each kernel")
    s.add_argument("--group")
    s.add_argument("--tuple-budget", type=int)
    s.set_defaults(func=cmd_simples)

    s = sub.add_parser("distinguish", help="run the staged refinement")
    s.add_argument("corpus")
    s.add_argument("--stages", help="file with one stage descriptor per line")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--cache", help="cache directory (created if missing; reused to resume)")
    s.add_argument("--report", help="write PREFIX_stages.csv and PREFIX_avc.csv")
    s.add_argument("--node-budget", type=int, help="per-task low-index search node budget")
    s.add_argument("--tuple-budget", type=int, help="per-task surjection search tuple budget")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_distinguish)

    s = sub.add_parser("entropy", help="entropy of one invariant over a cache")
    s.add_argument("--cache", required=True)
    s.add_argument("--descriptor", required=True)
    s.set_defaults(func=cmd_entropy)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (CorpusError, InvariantError, GroupError, EngineError, CosetTableError,
            SearchBudgetExceeded, TupleBudgetExceeded, OSError, ValueError) as exc:
        print(f"pfq: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
