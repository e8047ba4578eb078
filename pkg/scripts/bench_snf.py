#!/usr/bin/env python3
"""Time both SNF pivoting strategies on relation matrices of index-168 kernels.

For each group and each kernel of a surjection onto PSL(2,7), the abelianized
Reidemeister-Schreier matrix of the kernel is reduced with ``sparse`` and
``smallest`` pivoting; the script prints one CSV row per (group, kernel,
strategy) and exits nonzero if the strategies ever disagree.

    python scripts/bench_snf.py [corpus] [--target NAME] [--limit N]
"""

import argparse
import sys
import time

from pfq.cli import read_corpus
from pfq.cosets import abelianized_reidemeister_schreier, kernel_coset_table
from pfq.homsearch import enumerate_surjections
from pfq.permgrp import catalog
from pfq.zlinalg import abelian_invariants

STRATEGIES = ("sparse", "smallest")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("corpus", nargs="?", default="synthetic20")
    p.add_argument("--target", default="PSL(2,7)")
    p.add_argument("--limit", type=int, default=3, help="kernels per group")
    args = p.parse_args(argv)

    Q = catalog(args.target).group
    print("group,kernel,rows,cols,nnz,strategy,seconds,h1")
    mismatch = False
    for P in read_corpus(args.corpus):
        for k, kc in enumerate(enumerate_surjections(P, Q)[:args.limit]):
            T = kernel_coset_table(P, kc.representative.images, Q)
            M = abelianized_reidemeister_schreier(P, T, check=False)
            results = set()
            for strategy in STRATEGIES:
                start = time.perf_counter()
                ab = abelian_invariants(M, M.cols, strategy)
                seconds = time.perf_counter() - start
                results.add(ab)
                print(f"{P.name},{k},{M.rows},{M.cols},{M.nnz},{strategy},{seconds:.4f},{ab}",
                      flush=True)
            mismatch |= len(results) > 1
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
