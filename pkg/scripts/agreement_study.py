"""Compare the combinatorial verdict with the numeric oracle on random instances.

    python scripts/agreement_study.py --count 500 --n 3 4 5 --density-a 0.25 0.45
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from ptsc.engine import verify_ptsc
from ptsc.instances import GenConfig, dump_instance, random_instance
from ptsc.oracle import oracle_verdict


@dataclass
class StudyConfig:
    count: int = 200
    sizes: list[int] = field(default_factory=lambda: [3, 4, 5])
    densities_a: list[float] = field(default_factory=lambda: [0.25, 0.35, 0.45])
    density_b: float = 0.4
    f_count: int = 1
    trials: int = 3
    seed: int = 0


def run(cfg: StudyConfig) -> dict:
    t0 = time.perf_counter()
    ptsc = pssc = 0
    disagreements, noted = [], 0
    for k in range(cfg.count):
        n = cfg.sizes[k % len(cfg.sizes)]
        dens = cfg.densities_a[(k // len(cfg.sizes)) % len(cfg.densities_a)]
        gen = GenConfig(n, density_a=dens, density_b=cfg.density_b, f_count=cfg.f_count, require_struct_ctrl=True)
        sys = random_instance(gen, seed=cfg.seed + k)
        v = verify_ptsc(sys)
        o = oracle_verdict(sys, trials=cfg.trials, seed=cfg.seed + k)
        ptsc += v.ptsc
        pssc += v.pssc
        noted += bool(o.notes)
        if v.ptsc != o.ptsc_consistent:
            disagreements.append({"index": k, "instance": dump_instance(sys).strip(), "verifier": v.reason, "oracle_notes": list(o.notes)})
    return {
        "config": asdict(cfg),
        "ptsc": ptsc,
        "pssc": pssc,
        "instances_with_oracle_notes": noted,
        "disagreements": disagreements,
        "seconds": round(time.perf_counter() - t0, 2),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--n", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--density-a", type=float, nargs="+", default=[0.25, 0.35, 0.45])
    ap.add_argument("--density-b", type=float, default=0.4)
    ap.add_argument("--f-count", type=int, default=1)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    cfg = StudyConfig(a.count, a.n, a.density_a, a.density_b, a.f_count, a.trials, a.seed)
    print(json.dumps(run(cfg), indent=2))


if __name__ == "__main__":
    main()
