"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from ptsc.matching import BipartiteGraph
from ptsc.structured import PerturbedStructuredSystem, StructuredMatrix


@st.composite
def patterns(draw, max_rows=6, max_cols=6, min_rows=0, min_cols=0, square=False):
    rows = draw(st.integers(min_rows, max_rows))
    cols = rows if square else draw(st.integers(min_cols, max_cols))
    cells = [(r, c) for r in range(1, rows + 1) for c in range(1, cols + 1)]
    stars = draw(st.sets(st.sampled_from(cells))) if cells else set()
    return StructuredMatrix(rows, cols, frozenset(stars))


@st.composite
def bipartite_graphs(draw, max_left=6, max_right=6):
    m = draw(patterns(max_left, max_right))
    return m.bipartite()


@st.composite
def systems(draw, min_n=1, max_n=5, max_f=3):
    n = draw(st.integers(min_n, max_n))
    a = draw(st.sets(st.tuples(st.integers(1, n), st.integers(1, n))))
    b = draw(st.sets(st.integers(1, n), min_size=1))
    f = draw(st.sets(st.tuples(st.integers(1, n), st.integers(1, n + 1)), max_size=max_f))
    return PerturbedStructuredSystem.from_stars(n, sorted(a), sorted(b), sorted(f))


def empty_graph(nl, nr):
    return BipartiteGraph(tuple(range(nl)), tuple(range(nr)), ())
