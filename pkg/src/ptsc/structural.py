"""Structural controllability of a single-input pair via the system digraph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .structured import StructuredMatrix, generic_rank

__all__ = [
    "SystemGraph",
    "ControllabilityCheck",
    "input_reachable_set",
    "is_structurally_controllable",
]


@dataclass(frozen=True)
class SystemGraph:
    """Digraph on x_1..x_n plus the input vertex x_{n+1}.

    A star at A[j, i] gives the arc x_i -> x_j; a star at b[i] gives
    x_{n+1} -> x_i.
    """

    n: int
    arcs: frozenset[tuple[int, int]]

    @classmethod
    def from_pattern(cls, a_bar: StructuredMatrix, b_bar: StructuredMatrix) -> SystemGraph:
        n = a_bar.rows
        arcs = {(c, r) for r, c in a_bar.stars} | {(n + 1, r) for r, _ in b_bar.stars}
        return cls(n, frozenset(arcs))

    @property
    def input_vertex(self) -> int:
        return self.n + 1

    def successors(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in range(1, self.n + 2)}
        for s, t in sorted(self.arcs):
            out[s].append(t)
        return out


def input_reachable_set(g: SystemGraph) -> frozenset[int]:
    """States reachable from the input vertex by a directed path (BFS)."""
    succ = g.successors()
    seen = {g.input_vertex}
    queue = deque([g.input_vertex])
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    seen.discard(g.input_vertex)
    return frozenset(seen)


@dataclass(frozen=True)
class ControllabilityCheck:
    ok: bool
    reason: str
    unreachable: tuple[int, ...] = ()
    rank: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_structurally_controllable(a_bar: StructuredMatrix, b_bar: StructuredMatrix) -> ControllabilityCheck:
    """Every state input-reachable and grank([A, b]) = n.

    Reachability is checked first; when it fails the reported witness is the
    list of unreachable states and the rank is not computed.
    """
    n = a_bar.rows
    reach = input_reachable_set(SystemGraph.from_pattern(a_bar, b_bar))
    missing = tuple(x for x in range(1, n + 1) if x not in reach)
    if missing:
        return ControllabilityCheck(False, f"state x{missing[0]} is not input-reachable", missing)
    rank = generic_rank(a_bar.hstack(b_bar))
    if rank < n:
        return ControllabilityCheck(False, f"grank([A, b]) = {rank} < n = {n}", (), rank)
    return ControllabilityCheck(True, "structurally controllable", (), rank)
