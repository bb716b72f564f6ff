"""Command-line frontend: ``ptsc verify | oracle | dm | gen``.

Exit codes: 0 PTSC, 1 PSSC, 2 not structurally controllable,
64 usage error, 65 malformed instance file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .engine import EdgeCheckContext, verify_ptsc
from .instances import (
    GenConfig,
    GenerationError,
    InstanceError,
    dump_instance,
    instance_hash,
    load_instance,
    random_instance,
)
from .report import Certificate, render_dm, render_verdict
from .structural import is_structurally_controllable
from .structured import PerturbationEdge

EXIT_PTSC = 0
EXIT_PSSC = 1
EXIT_NOT_SC = 2
EXIT_USAGE = 64
EXIT_DATAERR = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {v}")
    return v


def _unit_float(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {v}")
    return v


def _edge(text: str) -> PerturbationEdge:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected i,j, got {text!r}") from None
    return PerturbationEdge(i, j)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _exit_code(structurally_controllable: bool, ptsc: bool) -> int:
    if not structurally_controllable:
        return EXIT_NOT_SC
    return EXIT_PTSC if ptsc else EXIT_PSSC


def cmd_verify(args) -> int:
    sys_ = load_instance(args.path)
    t0 = time.perf_counter()
    verdict = verify_ptsc(sys_, fail_fast=args.fail_fast)
    elapsed = time.perf_counter() - t0
    if args.text:
        _emit(render_verdict(verdict), args.out)
    else:
        cert = Certificate(
            verdict,
            instance_hash(sys_),
            sys_.name,
            args.fail_fast,
            None if args.no_timing else round(elapsed, 6),
        )
        _emit(cert.dumps(), args.out)
    return _exit_code(verdict.structurally_controllable, verdict.ptsc)


def _oracle_report(sys_, ov, trials, seed) -> dict:
    return {
        "input_hash": instance_hash(sys_),
        "trials": trials,
        "seed": seed,
        "ptsc_consistent": ov.ptsc_consistent,
        "witnesses": [
            {
                "edge": list(e),
                "t": [w.t.real, w.t.imag],
                "mode": [w.mode.real, w.mode.imag],
                "pbh_residual": w.pbh_residual,
                "ctrb_rank": w.ctrb_rank,
            }
            for e, w in sorted(ov.witnesses.items())
        ],
        "notes": list(ov.notes),
    }


def cmd_oracle(args) -> int:
    sys_ = load_instance(args.path)
    sc = is_structurally_controllable(sys_.a_bar, sys_.b_bar)
    if not sc.ok:
        _emit(f"not structurally controllable: {sc.reason}\n", args.out)
        return EXIT_NOT_SC
    from .oracle import oracle_verdict  # numpy is only needed here

    ov = oracle_verdict(sys_, trials=args.trials, seed=args.seed)
    if args.json:
        _emit(json.dumps(_oracle_report(sys_, ov, args.trials, args.seed), indent=2) + "\n", args.out)
    else:
        lines = ["PTSC-consistent: no perturbed entry admits a numeric witness"
                 if ov.ptsc_consistent else "PSSC: numeric witness found"]
        for e, w in sorted(ov.witnesses.items()):
            lines.append(
                f"  entry {e}: t* = {w.t:.6g}, lambda* = {w.mode:.6g}, "
                f"PBH residual = {w.pbh_residual:.2e}, rank C = {w.ctrb_rank}"
            )
        lines.extend(f"  note: {s}" for s in ov.notes)
        _emit("\n".join(lines) + "\n", args.out)
    return _exit_code(True, ov.ptsc_consistent)


def cmd_dm(args) -> int:
    sys_ = load_instance(args.path)
    if args.edge not in sys_.edges:
        raise UsageError(f"entry {tuple(args.edge)} is not a perturbed entry of this instance")
    _emit(render_dm(EdgeCheckContext(sys_, args.edge)), args.out)
    return 0


def cmd_gen(args) -> int:
    cfg = GenConfig(
        n=args.n,
        density_a=args.density_a,
        density_b=args.density_b,
        density_f=args.density_f,
        require_struct_ctrl=args.require_struct_ctrl,
        f_count=args.f_count,
        backbone=args.backbone,
    )
    try:
        sys_ = random_instance(cfg, args.seed)
    except (GenerationError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    _emit(dump_instance(sys_, args.seed), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ptsc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log warnings and progress")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="decide PTSC/PSSC and write a certificate")
    v.add_argument("path")
    v.add_argument("--fail-fast", action="store_true", help="stop at the first failing entry")
    fmt = v.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON certificate (default)")
    fmt.add_argument("--text", action="store_true", help="human-readable summary")
    v.add_argument("--out", help="write to this file instead of stdout")
    v.add_argument("--no-timing", action="store_true", help="write timing_seconds = null")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="numeric cross-check on sampled realizations")
    o.add_argument("path")
    o.add_argument("--trials", type=_positive_int, default=3)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--json", action="store_true")
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    d = sub.add_parser("dm", help="block-triangular dump for one perturbed entry")
    d.add_argument("path")
    d.add_argument("--edge", type=_edge, required=True, metavar="I,J")
    d.add_argument("--out")
    d.set_defaults(func=cmd_dm)

    g = sub.add_parser("gen", help="random instance on stdout")
    g.add_argument("--n", type=_positive_int, required=True)
    g.add_argument("--density-a", type=_unit_float, default=0.3)
    g.add_argument("--density-b", type=_unit_float, default=None, help="defaults to --density-a")
    g.add_argument("--density-f", type=_unit_float, default=0.1)
    g.add_argument("--f-count", type=int, default=None, help="exact number of perturbed entries")
    g.add_argument("--backbone", action="store_true", help="plant an input-rooted chain")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--require-struct-ctrl", action="store_true")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ptsc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InstanceError as exc:
        print(f"ptsc {args.command}: {args.path}: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    except OSError as exc:
        print(f"ptsc {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
