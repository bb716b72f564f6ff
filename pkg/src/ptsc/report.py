"""Certificates (JSON) and text renderings of verdicts and DM block forms."""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import __version__
from .engine import (
    EdgeCheckContext,
    EdgeReport,
    GammaResult,
    NonzeroModeResult,
    PtscVerdict,
    ZeroModeResult,
    compute_I_star_j,
    nonzero_mode_safe,
    zero_mode_safe,
)
from .matching import EdgeKind
from .structural import ControllabilityCheck
from .structured import PerturbationEdge

SCHEMA = "ptsc-certificate"
SCHEMA_VERSION = 1


def _gamma_to_dict(g: GammaResult) -> dict:
    return {
        "k": g.k,
        "size": g.size,
        "gamma_min": g.gamma_min,
        "gamma_max": g.gamma_max,
        "self_loop": g.self_loop,
        "nz": g.nz,
    }


def _edge_to_dict(r: EdgeReport) -> dict:
    z = r.zero_mode
    d = {
        "edge": list(r.edge),
        "passed": r.passed,
        "failed_condition": r.failed_condition,
        "zero_mode": {
            "ok": z.ok,
            "rank_without_col": z.rank_without_col,
            "rank_without_row_col": z.rank_without_row_col,
        },
        "nonzero_mode": None,
    }
    nz = r.nonzero_mode
    if nz is not None:
        sizes = {g.k: g.size for g in nz.gammas}
        d["nonzero_mode"] = {
            "ok": nz.ok,
            "i_star": nz.i_star,
            "omega": list(nz.omega),
            "component_sizes": list(nz.component_sizes),
            "gammas": [_gamma_to_dict(g) for g in nz.gammas],
            "min_weights": [
                {"k": k, "weight": w, "target": sizes[k]} for k, w in sorted(nz.min_weights.items())
            ],
            "violating": list(nz.violating),
        }
    return d


def verdict_to_dict(v: PtscVerdict) -> dict:
    c = v.controllability
    return {
        "n": v.n,
        "structurally_controllable": v.structurally_controllable,
        "ptsc": v.ptsc,
        "pssc": v.pssc,
        "reason": v.reason,
        "complete": v.complete,
        "controllability": {
            "ok": c.ok,
            "reason": c.reason,
            "unreachable": list(c.unreachable),
            "rank": c.rank,
        },
        "edges": [_edge_to_dict(r) for r in v.edge_reports],
    }


def _edge_from_dict(d: dict, n: int) -> EdgeReport:
    z = d["zero_mode"]
    zero = ZeroModeResult(z["ok"], z["rank_without_col"], z["rank_without_row_col"], n)
    nz = None
    if d["nonzero_mode"] is not None:
        m = d["nonzero_mode"]
        gammas = tuple(
            GammaResult(g["k"], g["size"], g["gamma_min"], g["gamma_max"], g["self_loop"])
            for g in m["gammas"]
        )
        nz = NonzeroModeResult(
            m["ok"],
            m["i_star"],
            tuple(m["omega"]),
            gammas,
            {w["k"]: w["weight"] for w in m["min_weights"]},
            tuple(m["violating"]),
            tuple(m["component_sizes"]),
        )
    return EdgeReport(PerturbationEdge(*d["edge"]), zero, nz)


def verdict_from_dict(d: dict) -> PtscVerdict:
    c = d["controllability"]
    sc = ControllabilityCheck(c["ok"], c["reason"], tuple(c["unreachable"]), c["rank"])
    reports = tuple(_edge_from_dict(e, d["n"]) for e in d["edges"])
    return PtscVerdict(d["n"], sc, reports, d["complete"])


@dataclass(frozen=True)
class Certificate:
    verdict: PtscVerdict
    input_hash: str
    name: str | None = None
    fail_fast: bool = False
    timing_seconds: float | None = None
    tool_version: str = __version__

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "schema_version": SCHEMA_VERSION,
            "tool_version": self.tool_version,
            "input_hash": self.input_hash,
            "name": self.name,
            "fail_fast": self.fail_fast,
            "timing_seconds": self.timing_seconds,
            "verdict": verdict_to_dict(self.verdict),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> Certificate:
        if d.get("schema") != SCHEMA:
            raise ValueError(f"not a {SCHEMA} document")
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {d.get('schema_version')!r}")
        return cls(
            verdict_from_dict(d["verdict"]),
            d["input_hash"],
            d["name"],
            d["fail_fast"],
            d["timing_seconds"],
            d["tool_version"],
        )

    @classmethod
    def loads(cls, text: str) -> Certificate:
        return cls.from_dict(json.loads(text))


def render_verdict(v: PtscVerdict) -> str:
    lines = [v.reason]
    for r in v.edge_reports:
        z = r.zero_mode
        status = "pass" if r.passed else f"FAIL ({r.failed_condition})"
        line = (
            f"  entry {tuple(r.edge)}: {status}; "
            f"grank without col = {z.rank_without_col}, without row+col = {z.rank_without_row_col}"
        )
        if r.nonzero_mode is not None:
            m = r.nonzero_mode
            om = "{" + ", ".join(map(str, m.omega)) + "}"
            line += f"; i* = {m.i_star}, omega = {om}"
            if m.violating:
                line += f", violating k = {list(m.violating)}"
        lines.append(line)
    return "\n".join(lines) + "\n"


_SYMBOL = {EdgeKind.GENERIC: "*", EdgeKind.LAMBDA: "-L", EdgeKind.SELF_LOOP: "*-L"}


def _fmt_set(xs) -> str:
    return "{" + ", ".join(map(str, xs)) + "}" if xs else "{}"


def render_dm(ctx: EdgeCheckContext) -> str:
    """Block-triangular dump of H_lambda with column j split off.

    Symbols: ``*`` generic entry, ``-L`` lambda-edge, ``*-L`` self-loop,
    ``P`` the perturbed entry, ``.`` fixed zero.
    """
    dm, g = ctx.dm, ctx.graph
    i, j = ctx.edge
    n = ctx.n
    w = 5
    rows = list(dm.row_perm)
    cols = list(dm.col_perm)
    row_block = dm.left_component
    col_block = dm.right_component
    emap = g.edge_map

    def cell(u, v):
        e = emap.get((u, v))
        return _SYMBOL[e.kind] if e else "."

    def jcell(u):
        r = g.left[u]
        s = ""
        if (r, j) in ctx.h_bar.stars:
            s = "*"
        if j <= n and r == j:
            s += "-L"
        if r == i:
            s = (s + "+P") if s else "P"
        return s or "."

    out = [f"entry ({i},{j}): row x{i}, column {j} split off", ""]
    header = " " * 6 + "".join(f"v{g.right[v]}".rjust(w) for v in cols) + " ||" + f"v{j}".rjust(w)
    out.append(header)
    prev_block = None
    for u in rows:
        if prev_block is not None and row_block[u] != prev_block:
            out.append(" " * 6 + "-" * (w * len(cols)) + " ||")
        prev_block = row_block[u]
        line = f"x{g.left[u]}".ljust(6)
        for p, v in enumerate(cols):
            sep = "|" if p > 0 and col_block[v] != col_block[cols[p - 1]] else " "
            line += sep + cell(u, v).rjust(w - 1)
        line += " ||" + jcell(u).rjust(w)
        out.append(line)
    out.append("")

    nzr = nonzero_mode_safe(ctx) if dm.tails_empty else None
    gam = {gr.k: gr for gr in ctx.gammas} if dm.tails_empty else {}
    out.append(f"components: d = {dm.d}, sizes = {[len(c.left) for c in dm.consistent]}")
    for k in range(0, dm.d + 2):
        c = dm.components[k]
        tag = "horizontal tail" if k == 0 else "vertical tail" if k == dm.d + 1 else f"block {k}"
        if k in (0, dm.d + 1) and c.is_empty:
            continue
        line = (
            f"  {tag}: rows {_fmt_set(g.left[u] for u in c.left)}, "
            f"cols {_fmt_set(g.right[v] for v in c.right)}"
        )
        if k in gam:
            gr = gam[k]
            line += (
                f", gamma_min = {gr.gamma_min}, gamma_max = {gr.gamma_max}, "
                f"self_loop = {str(gr.self_loop).lower()}, gamma_nz = {int(gr.nz)}"
            )
        out.append(line)
    zr = zero_mode_safe(ctx)
    istar = compute_I_star_j(ctx.h_bar, j)
    out.append("")
    out.append(
        f"zero mode: grank(H[:, -{j}]) = {zr.rank_without_col}, "
        f"grank(H[-{i}, -{j}]) = {zr.rank_without_row_col}, "
        f"I*_j = {_fmt_set(sorted(istar))} -> {'ok' if zr.ok else 'FAIL'}"
    )
    if nzr is None:
        out.append("nonzero mode: DM tails nonempty (base pair not structurally controllable)")
    else:
        mw = ", ".join(f"k={k}: {wt}/{gam[k].size}" for k, wt in sorted(nzr.min_weights.items()))
        out.append(f"i* = {nzr.i_star}")
        out.append(f"Omega_j = {_fmt_set(nzr.omega)}")
        out.append(
            f"nonzero mode: min-weight matchings [{mw}] -> {'ok' if nzr.ok else 'FAIL'}"
        )
    return "\n".join(out) + "\n"
