"""Bipartite graphs and the matching algorithms used throughout the verifier.

Vertices are addressed by 0-based position in ``left``/``right``; the labels
themselves are opaque (the pencil graphs use the original 1-based row and
column numbers as labels).
"""

from __future__ import annotations

import enum
import heapq
from collections import deque
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "EdgeKind",
    "Edge",
    "BipartiteGraph",
    "Matching",
    "max_matching",
    "min_weight_max_matching",
    "max_weight_max_matching",
]


class EdgeKind(str, enum.Enum):
    GENERIC = "generic"
    LAMBDA = "lambda"
    SELF_LOOP = "self_loop"

    @property
    def is_lambda(self) -> bool:
        # a self-loop carries the -lambda term as well
        return self is not EdgeKind.GENERIC


@dataclass(frozen=True, order=True)
class Edge:
    u: int
    v: int
    kind: EdgeKind = EdgeKind.GENERIC


Weights = Callable[[Edge], int] | Mapping[tuple[int, int], int] | None


@dataclass(frozen=True)
class BipartiteGraph:
    left: tuple
    right: tuple
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        seen = set()
        for e in self.edges:
            if not (0 <= e.u < len(self.left) and 0 <= e.v < len(self.right)):
                raise ValueError(f"edge {e} out of range")
            if (e.u, e.v) in seen:
                raise ValueError(f"parallel edge at {(e.u, e.v)}")
            seen.add((e.u, e.v))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @classmethod
    def from_pairs(cls, n_left: int, n_right: int, pairs: Iterable[tuple[int, int]]):
        return cls(range(n_left), range(n_right), tuple(Edge(u, v) for u, v in set(pairs)))

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.left]
        for e in self.edges:
            out[e.u].append(e.v)
        return tuple(tuple(a) for a in out)

    @cached_property
    def edge_map(self) -> dict[tuple[int, int], Edge]:
        return {(e.u, e.v): e for e in self.edges}

    def induced(self, left_keep: Iterable[int], right_keep: Iterable[int]) -> BipartiteGraph:
        """Subgraph on the given vertex positions, reindexed order-preservingly."""
        lk = sorted(set(left_keep))
        rk = sorted(set(right_keep))
        lpos = {u: p for p, u in enumerate(lk)}
        rpos = {v: p for p, v in enumerate(rk)}
        edges = tuple(
            Edge(lpos[e.u], rpos[e.v], e.kind)
            for e in self.edges
            if e.u in lpos and e.v in rpos
        )
        return BipartiteGraph(
            tuple(self.left[u] for u in lk), tuple(self.right[v] for v in rk), edges
        )

    def relabel(self, left_perm, right_perm) -> BipartiteGraph:
        """Graph with left vertex u moved to position left_perm[u] (same for right)."""
        left = [None] * len(self.left)
        right = [None] * len(self.right)
        for u, p in enumerate(left_perm):
            left[p] = self.left[u]
        for v, p in enumerate(right_perm):
            right[p] = self.right[v]
        edges = tuple(Edge(left_perm[e.u], right_perm[e.v], e.kind) for e in self.edges)
        return BipartiteGraph(tuple(left), tuple(right), edges)


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    weight: int = 0
    match_left: tuple[int, ...] = field(default=(), repr=False, compare=False)
    match_right: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def _make_matching(g: BipartiteGraph, mate_l: list[int], mate_r: list[int], weigh=None):
    pairs = tuple((u, v) for u, v in enumerate(mate_l) if v >= 0)
    w = sum(weigh(g.edge_map[p]) for p in pairs) if weigh else 0
    return Matching(pairs, w, tuple(mate_l), tuple(mate_r))


def max_matching(g: BipartiteGraph) -> Matching:
    """Maximum-cardinality matching by Hopcroft-Karp (layered BFS + DFS phases)."""
    nl, nr = len(g.left), len(g.right)
    adj = g.adj
    mate_l = [-1] * nl
    mate_r = [-1] * nr
    inf = nl + 1

    # greedy start halves the number of phases on sparse inputs
    for u in range(nl):
        for v in adj[u]:
            if mate_r[v] < 0:
                mate_l[u], mate_r[v] = v, u
                break

    while True:
        dist = [inf] * nl
        queue = deque()
        for u in range(nl):
            if mate_l[u] < 0:
                dist[u] = 0
                queue.append(u)
        found = inf
        while queue:
            u = queue.popleft()
            if dist[u] >= found:
                continue
            for v in adj[u]:
                w = mate_r[v]
                if w < 0:
                    found = min(found, dist[u] + 1)
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if found == inf:
            break

        # iterative DFS along the layers
        it = [0] * nl
        for root in range(nl):
            if mate_l[root] >= 0:
                continue
            stack = [root]
            path_v: list[int] = []
            while stack:
                u = stack[-1]
                advanced = False
                while it[u] < len(adj[u]):
                    v = adj[u][it[u]]
                    it[u] += 1
                    w = mate_r[v]
                    if w < 0:
                        if dist[u] + 1 == found:
                            path_v.append(v)
                            # augment along stack/path_v
                            for uu, vv in zip(stack, path_v):
                                mate_l[uu] = vv
                                mate_r[vv] = uu
                            stack = []
                            advanced = True
                            break
                    elif dist[w] == dist[u] + 1:
                        path_v.append(v)
                        stack.append(w)
                        advanced = True
                        break
                if not stack:
                    break
                if not advanced:
                    dist[u] = inf
                    stack.pop()
                    if path_v:
                        path_v.pop()
    return _make_matching(g, mate_l, mate_r)


def _weigher(weights: Weights) -> Callable[[Edge], int]:
    if weights is None:
        return lambda e: 0
    if callable(weights):
        return weights
    return lambda e: weights.get((e.u, e.v), 0)


def _min_cost_max_matching(g: BipartiteGraph, cost: Callable[[Edge], int]):
    """Successive shortest augmenting paths with vertex potentials.

    Network: s -> left (cap 1), left -> right (cap 1, cost), right -> t.
    Each augmentation yields a min-cost matching of its cardinality, so the
    last one is min-cost among maximum matchings. Costs must be >= 0.
    """
    nl, nr = len(g.left), len(g.right)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nl)]
    for e in g.edges:
        c = cost(e)
        if c < 0:
            raise ValueError("costs must be nonnegative")
        adj[e.u].append((e.v, c))
    mate_l = [-1] * nl
    mate_r = [-1] * nr
    cmate = [0] * nl
    # node ids: left u -> u, right v -> nl + v, sink -> T; the source is
    # implicit with potential 0, and free left vertices keep potential 0
    T = nl + nr
    pot = [0] * (T + 1)
    INF = float("inf")

    while True:
        dist = [INF] * (T + 1)
        prev = [-1] * (T + 1)
        heap = []
        for u in range(nl):
            if mate_l[u] < 0:
                dist[u] = 0
                heap.append((0, u))
        done = [False] * (T + 1)
        while heap:
            d, x = heapq.heappop(heap)
            if done[x]:
                continue
            done[x] = True
            if x == T:
                break
            if x < nl:
                px = pot[x]
                mx = mate_l[x]
                for v, c in adj[x]:
                    if v == mx:
                        continue
                    y = nl + v
                    nd = d + c + px - pot[y]
                    if nd < dist[y]:
                        dist[y] = nd
                        prev[y] = x
                        heapq.heappush(heap, (nd, y))
            else:
                w = mate_r[x - nl]
                if w < 0:
                    y, nd = T, d + pot[x] - pot[T]
                else:
                    y, nd = w, d - cmate[w] + pot[x] - pot[w]
                if nd < dist[y]:
                    dist[y] = nd
                    prev[y] = x
                    heapq.heappush(heap, (nd, y))
        if dist[T] == INF:
            break
        dt = dist[T]
        for x in range(T + 1):
            pot[x] += min(dist[x], dt)
        y = prev[T]
        while y >= 0:
            u = prev[y]
            nxt = prev[u]
            v = y - nl
            mate_l[u] = v
            mate_r[v] = u
            cmate[u] = next(c for vv, c in adj[u] if vv == v)
            y = nxt
    return mate_l, mate_r


def min_weight_max_matching(g: BipartiteGraph, weights: Weights = None) -> Matching:
    """Maximum-cardinality matching of least total weight (weights >= 0)."""
    weigh = _weigher(weights)
    mate_l, mate_r = _min_cost_max_matching(g, weigh)
    return _make_matching(g, mate_l, mate_r, weigh)


def max_weight_max_matching(g: BipartiteGraph, weights: Weights = None) -> Matching:
    """Maximum-cardinality matching of greatest total weight, weights in {0, 1}.

    Among matchings of a fixed size s, sum(1 - w) = s - sum(w), so the
    complemented costs stay nonnegative and integral.
    """
    weigh = _weigher(weights)
    for e in g.edges:
        if weigh(e) not in (0, 1):
            raise ValueError("max_weight_max_matching expects 0/1 weights")
    mate_l, mate_r = _min_cost_max_matching(g, lambda e: 1 - weigh(e))
    return _make_matching(g, mate_l, mate_r, weigh)
