"""Structured {0, *} matrices and single-input perturbed systems.

All positions in the public API are 1-based, matching the usual matrix
notation; conversion to 0-based vertex positions happens only at the
boundary with :mod:`ptsc.matching`.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from .matching import BipartiteGraph, Edge, max_matching

__all__ = [
    "StructuredMatrix",
    "PerturbationEdge",
    "PerturbedStructuredSystem",
    "vee",
    "submatrix",
    "generic_rank",
]


@dataclass(frozen=True)
class StructuredMatrix:
    rows: int
    cols: int
    stars: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("dimensions must be nonnegative")
        stars = frozenset((int(r), int(c)) for r, c in self.stars)
        for r, c in stars:
            if not (1 <= r <= self.rows and 1 <= c <= self.cols):
                raise ValueError(f"star {(r, c)} outside {self.rows}x{self.cols}")
        object.__setattr__(self, "stars", stars)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> StructuredMatrix:
        return cls(rows, cols, frozenset())

    @classmethod
    def from_dense(cls, rows: Iterable[Iterable]) -> StructuredMatrix:
        """Build from nested rows; any truthy entry (or ``'*'``) is a star."""
        grid = [list(r) for r in rows]
        ncols = len(grid[0]) if grid else 0
        stars = {
            (i + 1, j + 1)
            for i, r in enumerate(grid)
            for j, x in enumerate(r)
            if x not in (0, "0", None, False, "")
        }
        return cls(len(grid), ncols, frozenset(stars))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def sorted_stars(self) -> list[tuple[int, int]]:
        return sorted(self.stars)

    def __contains__(self, pos) -> bool:
        return tuple(pos) in self.stars

    def __or__(self, other: StructuredMatrix) -> StructuredMatrix:
        return vee(self, other)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c in self.stars:
            out[r - 1][c - 1] = 1
        return out

    def __str__(self) -> str:
        return "\n".join(
            " ".join("*" if x else "0" for x in row) for row in self.to_dense()
        )

    def hstack(self, other: StructuredMatrix) -> StructuredMatrix:
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        stars = self.stars | {(r, c + self.cols) for r, c in other.stars}
        return StructuredMatrix(self.rows, self.cols + other.cols, stars)

    def with_stars(self, extra: Iterable[tuple[int, int]]) -> StructuredMatrix:
        return StructuredMatrix(self.rows, self.cols, self.stars | frozenset(extra))

    def without_stars(self, drop: Iterable[tuple[int, int]]) -> StructuredMatrix:
        return StructuredMatrix(self.rows, self.cols, self.stars - frozenset(drop))

    def bipartite(self) -> BipartiteGraph:
        """B(M): rows on the left, columns on the right, one edge per star."""
        edges = tuple(Edge(r - 1, c - 1) for r, c in self.stars)
        return BipartiteGraph(
            tuple(range(1, self.rows + 1)), tuple(range(1, self.cols + 1)), edges
        )


def vee(m1: StructuredMatrix, m2: StructuredMatrix) -> StructuredMatrix:
    """Entry-wise OR of two equally sized patterns."""
    if m1.shape != m2.shape:
        raise ValueError(f"dimension mismatch: {m1.shape} vs {m2.shape}")
    return StructuredMatrix(m1.rows, m1.cols, m1.stars | m2.stars)


def submatrix(
    m: StructuredMatrix, row_keep: Iterable[int], col_keep: Iterable[int]
) -> StructuredMatrix:
    """M[rows, cols] with both index sets 1-based; result is reindexed in order."""
    rk = sorted(set(row_keep))
    ck = sorted(set(col_keep))
    for r in rk:
        if not 1 <= r <= m.rows:
            raise IndexError(f"row {r} out of range 1..{m.rows}")
    for c in ck:
        if not 1 <= c <= m.cols:
            raise IndexError(f"column {c} out of range 1..{m.cols}")
    rpos = {r: p + 1 for p, r in enumerate(rk)}
    cpos = {c: p + 1 for p, c in enumerate(ck)}
    stars = {(rpos[r], cpos[c]) for r, c in m.stars if r in rpos and c in cpos}
    return StructuredMatrix(len(rk), len(ck), frozenset(stars))


def generic_rank(m: StructuredMatrix) -> int:
    """Maximum rank over all realizations, i.e. the maximum matching size of B(M)."""
    if not m.stars:
        return 0
    return max_matching(m.bipartite()).size


class PerturbationEdge(NamedTuple):
    """Entry (i, j) of F: row i, column j (j = n + 1 is the input column).

    In the system digraph this is the arc x_j -> x_i.
    """

    i: int
    j: int


@dataclass(frozen=True)
class PerturbedStructuredSystem:
    n: int
    a_bar: StructuredMatrix
    b_bar: StructuredMatrix
    f_bar: StructuredMatrix
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise ValueError("state dimension must be positive")
        if self.a_bar.shape != (n, n):
            raise ValueError(f"A must be {n}x{n}, got {self.a_bar.shape}")
        if self.b_bar.shape != (n, 1):
            raise ValueError(f"b must be {n}x1, got {self.b_bar.shape}")
        if self.f_bar.shape != (n, n + 1):
            raise ValueError(f"F must be {n}x{n + 1}, got {self.f_bar.shape}")

    @classmethod
    def from_stars(cls, n: int, a_stars, b_stars, f_stars, name=None):
        """Convenience constructor; ``b_stars`` holds row indices."""
        return cls(
            n,
            StructuredMatrix(n, n, frozenset(map(tuple, a_stars))),
            StructuredMatrix(n, 1, frozenset((int(i), 1) for i in b_stars)),
            StructuredMatrix(n, n + 1, frozenset(map(tuple, f_stars))),
            name,
        )

    @cached_property
    def h_bar(self) -> StructuredMatrix:
        return self.a_bar.hstack(self.b_bar)

    @property
    def edges(self) -> list[PerturbationEdge]:
        """E_F in row-major order."""
        return [PerturbationEdge(i, j) for i, j in self.f_bar.sorted_stars()]

    def fold(self, edge: PerturbationEdge) -> PerturbedStructuredSystem:
        """[A^e, b^e] = [A, b] v F^{e}, with F reduced to the single entry ``edge``."""
        if tuple(edge) not in self.f_bar.stars:
            raise KeyError(f"{tuple(edge)} is not a star of F")
        n = self.n
        h = vee(self.h_bar, self.f_bar.without_stars([tuple(edge)]))
        return PerturbedStructuredSystem(
            n,
            submatrix(h, range(1, n + 1), range(1, n + 1)),
            submatrix(h, range(1, n + 1), [n + 1]),
            StructuredMatrix(n, n + 1, frozenset([tuple(edge)])),
            self.name,
        )
