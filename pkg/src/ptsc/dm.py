"""Dulmage-Mendelsohn decomposition and strongly connected components."""

from __future__ import annotations

import heapq
from collections import deque
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import cached_property

from .matching import BipartiteGraph, Matching, max_matching

__all__ = ["scc_condensation", "DMComponent", "DMDecomposition", "dm_decompose"]


def _tarjan(n: int, succ: Sequence[Sequence[int]]) -> list[list[int]]:
    # iterative Tarjan; emits components sinks-first
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                p = work[-1][0]
                low[p] = min(low[p], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def scc_condensation(
    n: int,
    succ: Sequence[Sequence[int]],
    key: Callable[[int], object] | None = None,
) -> list[list[int]]:
    """Strongly connected components of a digraph on ``0..n-1``, in topological order.

    Among components with no ordering constraint between them, the one whose
    smallest ``key`` is least comes first, so the output is deterministic.
    """
    comps = _tarjan(n, succ)
    key = key or (lambda v: v)
    comp_of = [0] * n
    for c, members in enumerate(comps):
        for v in members:
            comp_of[v] = c
    out_arcs: list[set[int]] = [set() for _ in comps]
    indeg = [0] * len(comps)
    for v in range(n):
        for w in succ[v]:
            a, b = comp_of[v], comp_of[w]
            if a != b and b not in out_arcs[a]:
                out_arcs[a].add(b)
                indeg[b] += 1
    rank = [min(key(v) for v in members) for members in comps]
    heap = [(rank[c], c) for c in range(len(comps)) if indeg[c] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, c = heapq.heappop(heap)
        order.append(comps[c])
        for b in out_arcs[c]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, (rank[b], b))
    return order


@dataclass(frozen=True)
class DMComponent:
    """Vertex positions of one DM component (left = rows, right = columns)."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    @property
    def is_empty(self) -> bool:
        return not self.left and not self.right


@dataclass(frozen=True)
class DMDecomposition:
    """DM components in block order.

    ``components[0]`` is the horizontal tail, ``components[1..d]`` the
    consistent components and ``components[d + 1]`` the vertical tail.
    ``row_perm``/``col_perm`` list original vertex positions in block order,
    so ``M[row_perm][:, col_perm]`` is block upper triangular.
    """

    graph: BipartiteGraph
    components: tuple[DMComponent, ...]
    matching: Matching
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.components) - 2

    @property
    def horizontal_tail(self) -> DMComponent:
        return self.components[0]

    @property
    def vertical_tail(self) -> DMComponent:
        return self.components[-1]

    @property
    def consistent(self) -> tuple[DMComponent, ...]:
        return self.components[1:-1]

    @property
    def tails_empty(self) -> bool:
        return self.horizontal_tail.is_empty and self.vertical_tail.is_empty

    @cached_property
    def left_component(self) -> tuple[int, ...]:
        out = [0] * len(self.graph.left)
        for k, c in enumerate(self.components):
            for u in c.left:
                out[u] = k
        return tuple(out)

    @cached_property
    def right_component(self) -> tuple[int, ...]:
        out = [0] * len(self.graph.right)
        for k, c in enumerate(self.components):
            for v in c.right:
                out[v] = k
        return tuple(out)

    def component_graph(self, k: int) -> BipartiteGraph:
        c = self.components[k]
        return self.graph.induced(c.left, c.right)


def dm_decompose(g: BipartiteGraph) -> DMDecomposition:
    """Finest block-upper-triangular decomposition of ``g`` w.r.t. maximum matchings."""
    nl, nr = len(g.left), len(g.right)
    m = max_matching(g)
    mate_l, mate_r = m.match_left, m.match_right
    adj = g.adj
    radj: list[list[int]] = [[] for _ in range(nr)]
    for e in g.edges:
        radj[e.v].append(e.u)

    # horizontal tail: column -> row along any edge, row -> its mate
    h_rows, h_cols = set(), {v for v in range(nr) if mate_r[v] < 0}
    queue = deque(h_cols)
    while queue:
        v = queue.popleft()
        for u in radj[v]:
            if u not in h_rows:
                h_rows.add(u)
                w = mate_l[u]
                if w >= 0 and w not in h_cols:
                    h_cols.add(w)
                    queue.append(w)

    # vertical tail: row -> column along any edge, column -> its mate
    v_rows, v_cols = {u for u in range(nl) if mate_l[u] < 0}, set()
    queue = deque(v_rows)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in v_cols:
                v_cols.add(v)
                w = mate_r[v]
                if w >= 0 and w not in v_rows:
                    v_rows.add(w)
                    queue.append(w)

    assert not (h_rows & v_rows) and not (h_cols & v_cols), "matching is not maximum"

    # square part: digraph on matched rows, u -> mate_r[v] for each edge (u, v)
    square = [u for u in range(nl) if u not in h_rows and u not in v_rows]
    pos = {u: p for p, u in enumerate(square)}
    succ = [[] for _ in square]
    for p, u in enumerate(square):
        for v in adj[u]:
            w = mate_r[v]
            if w >= 0 and w != u and w in pos:
                succ[p].append(pos[w])
    blocks = scc_condensation(len(square), succ, key=lambda p: square[p])

    components = [DMComponent(tuple(sorted(h_rows)), tuple(sorted(h_cols)))]
    for block in blocks:
        rows = sorted(square[p] for p in block)
        components.append(DMComponent(tuple(rows), tuple(sorted(mate_l[u] for u in rows))))
    components.append(DMComponent(tuple(sorted(v_rows)), tuple(sorted(v_cols))))

    # display order: columns ascending within a block, rows follow their mates
    row_perm: list[int] = []
    col_perm: list[int] = []
    for c in components:
        col_perm.extend(c.right)
        matched = [mate_r[v] for v in c.right if mate_r[v] >= 0 and mate_r[v] in c.left]
        row_perm.extend(matched)
        row_perm.extend(u for u in c.left if u not in set(matched))
    return DMDecomposition(g, tuple(components), m, tuple(row_perm), tuple(col_perm))
