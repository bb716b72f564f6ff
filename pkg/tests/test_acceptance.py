"""Acceptance suite: one test per criterion, each at its stated tolerance."""

import time

import numpy as np
import pytest

from ptsc.cli import main
from ptsc.dm import dm_decompose
from ptsc.engine import (
    EdgeCheckContext,
    compute_I_star_j,
    gamma_nz,
    pencil_graph,
    verify_ptsc,
    zero_mode_safe,
)
from ptsc.instances import GenConfig, load_instance, random_instance
from ptsc.matching import EdgeKind
from ptsc.oracle import (
    controllability_matrix,
    count_nonzero_roots_numeric,
    interpolate_on_circle,
    numeric_rank,
    oracle_verdict,
    sample_matrix,
)
from ptsc.structured import PerturbationEdge, StructuredMatrix, generic_rank

from .dm_props import (
    all_consistent_irreducible,
    is_block_upper_triangular,
    is_partition,
    relabel_invariant,
)


def _example_matrices(a, c, f, d, e, h):
    A = np.zeros((4, 4))
    A[1, 0], A[2, 1], A[3, 0], A[3, 1], A[3, 3] = a, c, f, d, e
    b = np.array([h, 0.0, 0.0, 0.0])
    return A, b


@pytest.mark.acceptance(1, "verify exits 0 on F1 and 1 on F2 naming a failing entry, < 50 ms each")
def test_criterion_1_golden_verdicts(f1_path, f2_path, capsys):
    import json

    timings = []
    for path, expected in ((f1_path, 0), (f2_path, 1)):
        # in-process from file read to certificate output; interpreter start-up excluded
        t0 = time.perf_counter()
        code = main(["verify", str(path)])
        timings.append(time.perf_counter() - t0)
        cert = json.loads(capsys.readouterr().out)
        assert code == expected
        if expected == 1:
            failing = [tuple(e["edge"]) for e in cert["verdict"]["edges"] if not e["passed"]]
            assert (4, 5) in failing
            assert cert["verdict"]["reason"].startswith("PSSC")
    assert max(timings) < 0.050, timings


@pytest.mark.acceptance(2, "dm internals: F2 (4,5) i*=2 Omega={1,2}; F1 (1,4) i*=1 Omega={} with I*_j={2,3,4}")
def test_criterion_2_golden_internals(f1_path, f2_path, capsys):
    assert main(["dm", str(f2_path), "--edge", "4,5"]) == 0
    out = capsys.readouterr().out
    assert "i* = 2\n" in out and "Omega_j = {1, 2}\n" in out
    ctx = EdgeCheckContext(load_instance(f2_path), PerturbationEdge(4, 5))
    assert ctx.i_star == 2 and ctx.omega == (1, 2)

    assert main(["dm", str(f1_path), "--edge", "1,4"]) == 0
    out = capsys.readouterr().out
    assert "i* = 1\n" in out and "Omega_j = {}\n" in out
    ctx = EdgeCheckContext(load_instance(f1_path), PerturbationEdge(1, 4))
    assert ctx.i_star == 1 and ctx.omega == ()
    istar = compute_I_star_j(ctx.h_bar, 4)
    assert istar == {2, 3, 4}
    zero = zero_mode_safe(ctx)
    assert zero.ok == (1 not in istar) and zero.ok


@pytest.mark.acceptance(3, "closed-form det C: value 2 at all-ones (1e-9); F2 degree 1 in r, 5 points (1e-8)")
def test_criterion_3_closed_form():
    A, b = _example_matrices(1, 1, 1, 1, 1, 1)
    det = np.linalg.det(controllability_matrix(A, b))
    closed = 1**2 * 1 * 1**4 * (1 * 1**2 + 1 * 1 * 1)
    assert closed == 2
    assert abs(det - closed) <= 1e-9 * abs(closed)

    rng = np.random.default_rng(2024)
    a, c, f, d, e, h, s = rng.uniform(0.5, 2.0, size=7) * rng.choice([-1, 1], size=7)
    A, b = _example_matrices(a, c, f, d, e, h)
    A[2, 2] = s

    def q(r):
        b2 = b.astype(complex)
        b2[3] = r
        return np.linalg.det(controllability_matrix(A.astype(complex), b2))

    poly = interpolate_on_circle(q, 4 * 5 // 2)
    assert poly.trimmed(1e-8).degree == 1

    def closed_form(r):
        return a**2 * c * h**3 * (
            e**3 * r - e**2 * r * s + e**2 * f * h - e * f * h * s + a * d * e * h - a * d * h * s
        )

    for r in rng.uniform(-3, 3, size=5):
        want = closed_form(r)
        assert abs(poly(r) - want) <= 1e-8 * abs(want)


@pytest.mark.acceptance(4, "verify_ptsc and oracle agree on 200 random single-entry instances, < 60 s")
def test_criterion_4_oracle_agreement():
    t0 = time.perf_counter()
    counts = {True: 0, False: 0}
    disagreements = []
    for k in range(200):
        n = (3, 4, 5)[k % 3]
        density = (0.25, 0.35, 0.45)[(k // 3) % 3]
        cfg = GenConfig(n, density_a=density, density_b=0.4, f_count=1, require_struct_ctrl=True)
        sys = random_instance(cfg, seed=1000 + k)
        v = verify_ptsc(sys)
        o = oracle_verdict(sys, trials=3, seed=k)
        counts[v.ptsc] += 1
        if v.ptsc != o.ptsc_consistent:
            disagreements.append((k, v.reason, o.notes))
    elapsed = time.perf_counter() - t0
    assert not disagreements, disagreements
    assert counts[True] and counts[False]
    assert elapsed < 60.0, elapsed


def _draw_pencil(rng, want_loop):
    while True:
        n = int(rng.integers(1, 7))
        mask = rng.random((n, n)) < rng.uniform(0.2, 0.6)
        m = StructuredMatrix.from_dense(mask.astype(int).tolist())
        perm = rng.permutation(n)
        keep = rng.random(n) < rng.uniform(0.3, 1.0)
        lam = [(i + 1, int(perm[i]) + 1) for i in range(n) if keep[i]]
        g = pencil_graph(m, lam)
        dm = dm_decompose(g)
        if not (dm.tails_empty and dm.d == 1):
            continue
        if any(e.kind is EdgeKind.SELF_LOOP for e in g.edges) == want_loop:
            return m, lam, dm


@pytest.mark.acceptance(5, "pencil root counts: gamma_max - gamma_min on 100 loop-free, >= 1 on 50 with a self-loop")
def test_criterion_5_root_counts():
    rng = np.random.default_rng(555)
    for want_loop, trials in ((False, 100), (True, 50)):
        for _ in range(trials):
            m, lam, dm = _draw_pencil(rng, want_loop)
            gr = gamma_nz(dm, 1)
            n = m.rows
            E = np.zeros((n, n))
            for r, c in lam:
                E[r - 1, c - 1] = 1.0
            count = count_nonzero_roots_numeric(sample_matrix(m, int(rng.integers(1 << 31))), E)
            if want_loop:
                assert count >= 1, (m.sorted_stars(), lam)
            else:
                assert count == gr.gamma_max - gr.gamma_min, (m.sorted_stars(), lam, gr)


@pytest.mark.acceptance(6, "DM on 300 square patterns: triangular, partition, irreducible blocks, relabel-invariant")
def test_criterion_6_dm_properties():
    rng = np.random.default_rng(666)
    for _ in range(300):
        n = int(rng.integers(1, 11))
        mask = rng.random((n, n)) < rng.uniform(0.05, 0.6)
        g = StructuredMatrix.from_dense(mask.astype(int).tolist()).bipartite()
        dm = dm_decompose(g)
        assert is_block_upper_triangular(dm)
        assert is_partition(dm)
        assert all_consistent_irreducible(dm)
        assert relabel_invariant(g, list(rng.permutation(n)), list(rng.permutation(n)))


def _scaling_time(n, seeds):
    total = 0.0
    for seed in seeds:
        cfg = GenConfig(n, density_a=4 / n, density_b=1 / n, f_count=10, backbone=True, require_struct_ctrl=True)
        sys = random_instance(cfg, seed)
        stars = len(sys.a_bar.stars) + len(sys.b_bar.stars)
        assert 4 * n <= stars <= 6 * n
        t0 = time.perf_counter()
        v = verify_ptsc(sys)
        total += time.perf_counter() - t0
        assert len(v.edge_reports) == 10
    return total / len(seeds)


@pytest.mark.acceptance(7, "scaling: n=100, 10 entries, ~5n stars under 10 s; n=200 costs < 32x more")
def test_criterion_7_scaling():
    seeds = (1, 2)
    t100 = _scaling_time(100, seeds)
    t200 = _scaling_time(200, seeds)
    assert t100 < 10.0, t100
    assert t200 / t100 < 32.0, (t100, t200)


@pytest.mark.acceptance(8, "generic rank equals the numeric rank of a sampled realization on 200 patterns")
def test_criterion_8_generic_rank():
    rng = np.random.default_rng(888)
    for _ in range(200):
        r, c = (int(x) for x in rng.integers(1, 9, size=2))
        mask = rng.random((r, c)) < rng.uniform(0.05, 0.7)
        m = StructuredMatrix.from_dense(mask.astype(int).tolist())
        M = sample_matrix(m, int(rng.integers(1 << 31)))
        assert numeric_rank(M) == generic_rank(m), m.sorted_stars()
