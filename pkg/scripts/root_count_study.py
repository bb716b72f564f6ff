"""Nonzero-root counts of random DM-irreducible pencils M - lambda E.

For loop-free pencils the numeric count is compared with
gamma_max - gamma_min; for pencils with a self-loop the count is reported.

    python scripts/root_count_study.py --count 1000 --max-n 8
"""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ptsc.dm import dm_decompose
from ptsc.engine import gamma_nz, pencil_graph
from ptsc.matching import EdgeKind
from ptsc.oracle import count_nonzero_roots_numeric, sample_matrix
from ptsc.structured import StructuredMatrix


@dataclass
class RootStudyConfig:
    count: int = 500
    max_n: int = 6
    seed: int = 0


def draw(rng, max_n):
    while True:
        n = int(rng.integers(1, max_n + 1))
        mask = rng.random((n, n)) < rng.uniform(0.2, 0.6)
        m = StructuredMatrix.from_dense(mask.astype(int).tolist())
        perm = rng.permutation(n)
        keep = rng.random(n) < rng.uniform(0.3, 1.0)
        lam = [(i + 1, int(perm[i]) + 1) for i in range(n) if keep[i]]
        g = pencil_graph(m, lam)
        dm = dm_decompose(g)
        if dm.tails_empty and dm.d == 1:
            loop = any(e.kind is EdgeKind.SELF_LOOP for e in g.edges)
            return m, lam, dm, loop


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    cfg = RootStudyConfig(a.count, a.max_n, a.seed)
    rng = np.random.default_rng(cfg.seed)
    mismatches, loop_counts, loop_free = 0, Counter(), 0
    for _ in range(cfg.count):
        m, lam, dm, loop = draw(rng, cfg.max_n)
        n = m.rows
        E = np.zeros((n, n))
        for r, c in lam:
            E[r - 1, c - 1] = 1.0
        count = count_nonzero_roots_numeric(sample_matrix(m, int(rng.integers(1 << 31))), E)
        if loop:
            loop_counts[count] += 1
        else:
            loop_free += 1
            gr = gamma_nz(dm, 1)
            if count != gr.gamma_max - gr.gamma_min:
                mismatches += 1
                print("mismatch:", m.sorted_stars(), lam, gr, count)
    print(f"loop-free pencils: {loop_free}, mismatches: {mismatches}")
    print(f"pencils with a self-loop: {sum(loop_counts.values())}, root-count histogram: {dict(sorted(loop_counts.items()))}")


if __name__ == "__main__":
    main()
