"""Time verify_ptsc on sparse instances of growing size.

    python scripts/scaling_benchmark.py --n 50 100 200 400 --seeds 3
"""

from __future__ import annotations

import argparse
import statistics
import time
from dataclasses import dataclass, field

from ptsc.engine import verify_ptsc
from ptsc.instances import GenConfig, random_instance


@dataclass
class BenchConfig:
    sizes: list[int] = field(default_factory=lambda: [50, 100, 200])
    seeds: int = 3
    f_count: int = 10
    # expected A stars per state; plus the planted chain and ~1 input star,
    # this gives about 5n stars in total
    stars_per_row: float = 4.0


def bench(cfg: BenchConfig):
    rows = []
    for n in cfg.sizes:
        times, stars, ptsc = [], [], 0
        for seed in range(cfg.seeds):
            gen = GenConfig(
                n,
                density_a=min(1.0, cfg.stars_per_row / n),
                density_b=1 / n,
                f_count=cfg.f_count,
                backbone=True,
                require_struct_ctrl=True,
            )
            sys = random_instance(gen, seed)
            stars.append(len(sys.a_bar.stars) + len(sys.b_bar.stars))
            t0 = time.perf_counter()
            ptsc += verify_ptsc(sys).ptsc
            times.append(time.perf_counter() - t0)
        rows.append((n, statistics.mean(stars), statistics.median(times), ptsc))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[50, 100, 200])
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--f-count", type=int, default=10)
    a = ap.parse_args()
    rows = bench(BenchConfig(a.n, a.seeds, a.f_count))
    print(f"{'n':>6} {'stars':>8} {'median s':>10} {'ratio':>7} {'ptsc':>5}")
    prev = None
    for n, stars, t, ptsc in rows:
        ratio = f"{t / prev:7.2f}" if prev else " " * 7
        print(f"{n:>6} {stars:>8.0f} {t:>10.3f} {ratio} {ptsc:>5}")
        prev = t


if __name__ == "__main__":
    main()
