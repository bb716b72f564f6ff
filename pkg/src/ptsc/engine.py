"""Perturbation-tolerance decision procedure for single-input structured systems.

For every perturbed entry e = (i, j) the other perturbed entries are folded
into the generic pattern, and two independent obstructions are ruled out:

* a zero uncontrollable mode, by two generic-rank computations on H with
  column j removed;
* a nonzero uncontrollable mode, via the DM decomposition of the pencil
  graph B([A - lambda I, b]) with column j removed and min-weight maximum
  matchings on the components at or before the one holding row i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .dm import DMDecomposition, dm_decompose
from .matching import (
    BipartiteGraph,
    Edge,
    EdgeKind,
    max_weight_max_matching,
    min_weight_max_matching,
)
from .structural import ControllabilityCheck, is_structurally_controllable
from .structured import (
    PerturbationEdge,
    PerturbedStructuredSystem,
    StructuredMatrix,
    generic_rank,
    submatrix,
)

__all__ = [
    "build_pencil_graph",
    "pencil_graph",
    "EdgeCheckContext",
    "ZeroModeResult",
    "GammaResult",
    "NonzeroModeResult",
    "EdgeReport",
    "PtscVerdict",
    "zero_mode_safe",
    "compute_I_star_j",
    "gamma_nz",
    "build_G_ki_star",
    "nonzero_mode_safe",
    "verify_ptsc",
    "scrp_feasible",
]


def build_pencil_graph(h_bar: StructuredMatrix, j: int) -> BipartiteGraph:
    """B(H_lambda) minus column vertex v_j, for H = [A, b] of size n x (n+1).

    Left labels are rows 1..n, right labels the surviving column numbers.
    """
    n = h_bar.rows
    if h_bar.cols != n + 1:
        raise ValueError("expected an n x (n+1) pattern")
    if not 1 <= j <= n + 1:
        raise ValueError(f"column {j} out of range 1..{n + 1}")
    right = tuple(c for c in range(1, n + 2) if c != j)
    rpos = {c: p for p, c in enumerate(right)}
    kinds: dict[tuple[int, int], EdgeKind] = {}
    for r, c in h_bar.stars:
        if c != j:
            kinds[(r - 1, rpos[c])] = EdgeKind.SELF_LOOP if r == c else EdgeKind.GENERIC
    for k in range(1, n + 1):
        if k != j and (k - 1, rpos[k]) not in kinds:
            kinds[(k - 1, rpos[k])] = EdgeKind.LAMBDA
    edges = tuple(Edge(u, v, kind) for (u, v), kind in kinds.items())
    return BipartiteGraph(tuple(range(1, n + 1)), right, edges)


def pencil_graph(m_bar: StructuredMatrix, lambda_positions) -> BipartiteGraph:
    """B(M - lambda E) for a square pattern M and the 1-positions of E.

    E may hold at most one 1 per row and per column; positions are 1-based.
    """
    n = m_bar.rows
    if m_bar.cols != n:
        raise ValueError("pencil pattern must be square")
    lam = {(int(r), int(c)) for r, c in lambda_positions}
    if len({r for r, _ in lam}) != len(lam) or len({c for _, c in lam}) != len(lam):
        raise ValueError("E must have at most one 1 per row and per column")
    edges = []
    for r, c in m_bar.stars | lam:
        if not (1 <= r <= n and 1 <= c <= n):
            raise ValueError(f"position {(r, c)} out of range")
        kind = (
            EdgeKind.SELF_LOOP
            if (r, c) in lam and (r, c) in m_bar.stars
            else EdgeKind.LAMBDA if (r, c) in lam else EdgeKind.GENERIC
        )
        edges.append(Edge(r - 1, c - 1, kind))
    return BipartiteGraph(tuple(range(1, n + 1)), tuple(range(1, n + 1)), tuple(edges))


def _lambda_weight(e: Edge) -> int:
    return 1 if e.kind.is_lambda else 0


@dataclass(frozen=True)
class GammaResult:
    k: int
    size: int
    gamma_min: int
    gamma_max: int
    self_loop: bool

    @property
    def nz(self) -> bool:
        return self.gamma_max > self.gamma_min or self.self_loop


def gamma_nz(dm: DMDecomposition, k: int) -> GammaResult:
    """Whether the det of consistent block k generically has a nonzero root.

    gamma_min/max are the least/greatest number of lambda-edges over the
    perfect matchings of the block.
    """
    if not 1 <= k <= dm.d:
        raise ValueError(f"{k} is not a consistent component index")
    g = dm.component_graph(k)
    lo = min_weight_max_matching(g, _lambda_weight)
    hi = max_weight_max_matching(g, _lambda_weight)
    loop = any(e.kind is EdgeKind.SELF_LOOP for e in g.edges)
    return GammaResult(k, len(g.left), lo.weight, hi.weight, loop)


@dataclass(frozen=True)
class EdgeCheckContext:
    """Everything derived from one perturbed entry of F."""

    base: PerturbedStructuredSystem
    edge: PerturbationEdge

    @cached_property
    def system(self) -> PerturbedStructuredSystem:
        return self.base.fold(self.edge)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def h_bar(self) -> StructuredMatrix:
        return self.system.h_bar

    @cached_property
    def graph(self) -> BipartiteGraph:
        return build_pencil_graph(self.h_bar, self.edge.j)

    @cached_property
    def dm(self) -> DMDecomposition:
        return dm_decompose(self.graph)

    @property
    def row_position(self) -> int:
        return self.edge.i - 1

    @cached_property
    def i_star(self) -> int:
        return self.dm.left_component[self.row_position]

    @cached_property
    def gammas(self) -> tuple[GammaResult, ...]:
        return tuple(gamma_nz(self.dm, k) for k in range(1, self.i_star + 1))

    @cached_property
    def omega(self) -> tuple[int, ...]:
        return tuple(gr.k for gr in self.gammas if gr.nz)


@dataclass(frozen=True)
class ZeroModeResult:
    ok: bool
    rank_without_col: int
    rank_without_row_col: int
    n: int

    @property
    def full_rank_branch(self) -> bool:
        return self.rank_without_col == self.n

    @property
    def deficient_branch(self) -> bool:
        return self.rank_without_row_col == self.n - 2


def zero_mode_safe(ctx: EdgeCheckContext) -> ZeroModeResult:
    """No structured value of entry (i, j) creates an uncontrollable mode at 0."""
    n, (i, j) = ctx.n, ctx.edge
    cols = [c for c in range(1, n + 2) if c != j]
    r_full = generic_rank(submatrix(ctx.h_bar, range(1, n + 1), cols))
    r_del = generic_rank(submatrix(ctx.h_bar, [r for r in range(1, n + 1) if r != i], cols))
    return ZeroModeResult(r_full == n or r_del == n - 2, r_full, r_del, n)


def compute_I_star_j(h_bar: StructuredMatrix, j: int) -> frozenset[int]:
    """Rows lying outside some maximum-rank row subset of H[:, columns != j].

    i belongs to the set exactly when deleting row i keeps the generic rank.
    Empty when that rank is n. Diagnostic only; costs n + 1 matchings.
    """
    n = h_bar.rows
    cols = [c for c in range(1, h_bar.cols + 1) if c != j]
    r_j = generic_rank(submatrix(h_bar, range(1, n + 1), cols))
    return frozenset(
        i
        for i in range(1, n + 1)
        if generic_rank(submatrix(h_bar, [r for r in range(1, n + 1) if r != i], cols)) == r_j
    )


@dataclass(frozen=True)
class WeightedSubgraph:
    graph: BipartiteGraph
    weights: dict[tuple[int, int], int]
    target: int  # |V+_k|


def build_G_ki_star(dm: DMDecomposition, k: int, i_star: int, row: int) -> WeightedSubgraph:
    """Subgraph on blocks k..i_star minus row vertex ``row``; weight 1 on block-k edges."""
    if not 1 <= k <= i_star <= dm.d:
        raise ValueError(f"need 1 <= k <= i_star <= d, got k={k}, i_star={i_star}, d={dm.d}")
    if row not in dm.components[i_star].left:
        raise AssertionError(f"row vertex {row} is not in component {i_star}")
    blocks = dm.components[k : i_star + 1]
    left = sorted(u for c in blocks for u in c.left if u != row)
    right = sorted(v for c in blocks for v in c.right)
    sub = dm.graph.induced(left, right)
    k_left = set(dm.components[k].left)
    k_right = set(dm.components[k].right)
    weights = {
        (e.u, e.v): int(left[e.u] in k_left and right[e.v] in k_right) for e in sub.edges
    }
    return WeightedSubgraph(sub, weights, len(k_left))


@dataclass(frozen=True)
class NonzeroModeResult:
    ok: bool
    i_star: int
    omega: tuple[int, ...]
    gammas: tuple[GammaResult, ...]
    min_weights: dict[int, int] = field(default_factory=dict)
    violating: tuple[int, ...] = ()
    component_sizes: tuple[int, ...] = ()


def nonzero_mode_safe(ctx: EdgeCheckContext, fail_fast: bool = False) -> NonzeroModeResult:
    """No structured value of entry (i, j) creates a nonzero uncontrollable mode.

    Holds iff every flagged block k <= i_star keeps weight |V+_k| in the
    min-weight maximum matching of its G_{k,i*} subgraph.
    """
    dm = ctx.dm
    if not dm.tails_empty:
        raise AssertionError("pencil graph has nonempty DM tails; base system not structurally controllable")
    min_weights: dict[int, int] = {}
    violating: list[int] = []
    for k in ctx.omega:
        sub = build_G_ki_star(dm, k, ctx.i_star, ctx.row_position)
        w = min_weight_max_matching(sub.graph, sub.weights).weight
        min_weights[k] = w
        if w < sub.target:
            violating.append(k)
            if fail_fast:
                break
    return NonzeroModeResult(
        not violating,
        ctx.i_star,
        ctx.omega,
        ctx.gammas,
        min_weights,
        tuple(violating),
        tuple(len(c.left) for c in dm.consistent),
    )


@dataclass(frozen=True)
class EdgeReport:
    edge: PerturbationEdge
    zero_mode: ZeroModeResult
    nonzero_mode: NonzeroModeResult | None

    @property
    def passed(self) -> bool:
        return self.zero_mode.ok and self.nonzero_mode is not None and self.nonzero_mode.ok

    @property
    def failed_condition(self) -> str | None:
        if not self.zero_mode.ok:
            return "zero_mode"
        if self.nonzero_mode is not None and not self.nonzero_mode.ok:
            return "nonzero_mode"
        return None


@dataclass(frozen=True)
class PtscVerdict:
    n: int
    controllability: ControllabilityCheck
    edge_reports: tuple[EdgeReport, ...] = ()
    complete: bool = True

    @property
    def structurally_controllable(self) -> bool:
        return self.controllability.ok

    @property
    def ptsc(self) -> bool:
        return self.structurally_controllable and all(r.passed for r in self.edge_reports)

    @property
    def pssc(self) -> bool:
        return self.structurally_controllable and not self.ptsc

    @property
    def violations(self) -> list[EdgeReport]:
        return [r for r in self.edge_reports if not r.passed]

    @property
    def reason(self) -> str:
        if not self.structurally_controllable:
            return f"not structurally controllable: {self.controllability.reason}"
        if self.ptsc:
            return "PTSC: every perturbed entry passes both mode tests"
        r = self.violations[0]
        return f"PSSC: entry {tuple(r.edge)} fails the {r.failed_condition.replace('_', '-')} test"


def check_edge(sys: PerturbedStructuredSystem, edge: PerturbationEdge, fail_fast: bool = False) -> EdgeReport:
    ctx = EdgeCheckContext(sys, edge)
    if __debug__:
        folded = ctx.system
        assert is_structurally_controllable(folded.a_bar, folded.b_bar).ok
    zero = zero_mode_safe(ctx)
    if not zero.ok:
        return EdgeReport(edge, zero, None)
    return EdgeReport(edge, zero, nonzero_mode_safe(ctx, fail_fast=fail_fast))


def verify_ptsc(sys: PerturbedStructuredSystem, fail_fast: bool = False) -> PtscVerdict:
    """Decide PTSC of (A, b) w.r.t. F, with one report per perturbed entry.

    All entries are checked unless ``fail_fast``, which stops at the first
    failing entry.
    """
    sc = is_structurally_controllable(sys.a_bar, sys.b_bar)
    if not sc.ok:
        return PtscVerdict(sys.n, sc, (), complete=True)
    reports = []
    for edge in sys.edges:
        rep = check_edge(sys, edge, fail_fast=fail_fast)
        reports.append(rep)
        if fail_fast and not rep.passed:
            return PtscVerdict(sys.n, sc, tuple(reports), complete=len(reports) == len(sys.edges))
    return PtscVerdict(sys.n, sc, tuple(reports))


def scrp_feasible(sys: PerturbedStructuredSystem) -> bool:
    """A structured perturbation destroying controllability generically exists."""
    return verify_ptsc(sys, fail_fast=True).pssc
