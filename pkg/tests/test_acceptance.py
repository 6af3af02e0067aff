"""Acceptance gate: one recorded pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are
printed in the "acceptance criteria" section at the end of the session.
"""

import io
import math
import subprocess
import sys
import time
from importlib import resources

import numpy as np
import pytest
import scipy.sparse as sp

from graphsim import (
    DirectedGraph,
    IterationConfig,
    bowtie_graph,
    build_dictionary_graph,
    central_scores,
    cycle_graph,
    dense_projection_oracle,
    even_iterate_limit,
    frobenius_norm,
    hub_authority_graph,
    kronecker_operator,
    neighborhood_graph,
    one_norm,
    path_graph,
    rank_synonyms,
    self_similarity,
    similarity_matrix,
    support_pattern,
)
from graphsim.cli import main as cli_main
from graphsim.similarity import similarity_operator

from conftest import ACCEPTANCE_LINES, random_circulant, random_graph, random_symmetric_graph

GENERIC = IterationConfig(use_fast_paths=False)
FIXTURES = ("geometry.tsv", "motion.tsv", "food.tsv")


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def bowtie(m, n):
    """Bow-tie whose center receives from n vertices and points to m."""
    return bowtie_graph(left=n, right=m)


# ---------------------------------------------------------------------------


def test_criterion_01_bowtie_closed_form():
    worst, elapsed = 0.0, 0.0
    for m, n in [(3, 2), (2, 3), (5, 5)]:
        gb = bowtie(m, n)
        expected = np.zeros((1 + m + n, 3))
        expected[0, 1] = math.sqrt(n + m)
        expected[1 : 1 + n, 0] = 1.0
        expected[1 + n :, 2] = 1.0
        expected /= math.sqrt(2 * (n + m))
        t0 = time.perf_counter()
        s = similarity_matrix(path_graph(3), gb).scores
        elapsed = max(elapsed, time.perf_counter() - t0)
        worst = max(worst, np.abs(s - expected).max())
    record(1, worst <= 1e-8 and elapsed < 1.0, f"bow-tie vs 3-path: max entry error {worst:.3e}, slowest {elapsed:.3f}s")


def test_criterion_02_hub_authority_swap_and_central():
    ha = hub_authority_graph()
    # m > n: center is the hub, the m sinks are authorities
    m, n = 3, 2
    expected_gt = np.zeros((1 + m + n, 2))
    expected_gt[0, 0] = 1.0
    expected_gt[1 + n :, 1] = 1.0
    expected_gt /= math.sqrt(m + 1)
    err_gt = np.abs(similarity_matrix(ha, bowtie(m, n)).scores - expected_gt).max()
    # m < n: center is the authority, the n sources are hubs
    m, n = 2, 3
    expected_lt = np.zeros((1 + m + n, 2))
    expected_lt[0, 1] = 1.0
    expected_lt[1 : 1 + n, 0] = 1.0
    expected_lt /= math.sqrt(n + 1)
    err_lt = np.abs(similarity_matrix(ha, bowtie(m, n)).scores - expected_lt).max()
    centers = [central_scores(bowtie(*mn)).values[0] for mn in [(3, 2), (2, 3)]]
    err_c = max(abs(c - 1 / math.sqrt(2)) for c in centers)
    ok = max(err_gt, err_lt) <= 1e-8 and err_c <= 1e-8
    record(
        2,
        ok,
        f"hub/authority swap errors {err_gt:.2e}, {err_lt:.2e}; "
        f"central center scores {centers[0]:.6f}, {centers[1]:.6f} (target {1 / math.sqrt(2):.6f})",
    )


def test_criterion_03_path_self_similarity():
    s3 = self_similarity(path_graph(3)).scores
    target = np.diag([0.408248, 0.816497, 0.408248])
    err3 = np.abs(s3 - target).max()
    off = max(
        np.abs(s - np.diag(np.diag(s))).max()
        for s in (self_similarity(path_graph(k)).scores for k in range(2, 9))
    )
    record(3, err3 <= 5e-7 and off < 1e-8, f"3-path diagonal {np.round(np.diag(s3), 6).tolist()} (error {err3:.2e}); off-diagonal mass {off:.2e}")


def test_criterion_04_cycle_self_similarity():
    err4 = np.abs(self_similarity(cycle_graph(4)).scores - 0.25).max()
    errs = max(np.abs(self_similarity(cycle_graph(n)).scores - 1 / n).max() for n in range(3, 11))
    record(4, err4 <= 1e-8 and errs <= 1e-8, f"4-cycle error {err4:.2e}; cycles 3..10 error {errs:.2e}")


def test_criterion_05_oracle_equivalence():
    rng = np.random.default_rng(5)
    worst = 0.0
    t0 = time.perf_counter()
    for _ in range(200):
        n_a = int(rng.integers(1, 9))
        n_b = int(rng.integers(1, 64 // n_a + 1))
        ga = random_graph(rng, n_a, rng.uniform(0.2, 0.7), weighted=True)
        gb = random_graph(rng, n_b, rng.uniform(0.2, 0.7), weighted=True)
        s = similarity_matrix(ga, gb, GENERIC)
        ref = dense_projection_oracle(kronecker_operator(ga, gb), np.ones((n_b, n_a)))
        worst = max(worst, frobenius_norm(s.scores - ref))
    elapsed = time.perf_counter() - t0
    record(5, worst < 1e-7 and elapsed < 30, f"200 pairs, max Frobenius distance {worst:.2e}, {elapsed:.1f}s")


def test_criterion_06_transpose_duality():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(100):
        ga = random_graph(rng, int(rng.integers(1, 10)), weighted=True)
        gb = random_graph(rng, int(rng.integers(1, 10)), weighted=True)
        d = frobenius_norm(similarity_matrix(ga, gb, GENERIC).scores - similarity_matrix(gb, ga, GENERIC).scores.T)
        worst = max(worst, d)
    record(6, worst < 1e-8, f"100 pairs, max ||S(A,B) - S(B,A)^T||_F = {worst:.2e}")


def test_criterion_07_rank_one():
    rng = np.random.default_rng(7)
    worst_sv, worst_gap = 0.0, 0.0
    for k in range(50):
        special = random_circulant(rng, int(rng.integers(2, 8))) if k % 2 else random_symmetric_graph(rng, int(rng.integers(2, 8)))
        other = random_graph(rng, int(rng.integers(2, 8)), weighted=True)
        ga, gb = (special, other) if k % 4 < 2 else (other, special)
        fast = similarity_matrix(ga, gb)
        generic = similarity_matrix(ga, gb, GENERIC)
        assert fast.method == "rank_one"
        sv = np.linalg.svd(generic.scores, compute_uv=False)
        worst_sv = max(worst_sv, sv[1] if sv.size > 1 else 0.0)
        worst_gap = max(worst_gap, frobenius_norm(fast.scores - generic.scores))
    record(7, worst_sv < 1e-6 and worst_gap < 1e-7, f"50 cases, max second singular value {worst_sv:.2e}, max fast/generic gap {worst_gap:.2e}")


def test_criterion_08_self_similarity_psd():
    rng = np.random.default_rng(8)
    min_eig, diag_ok = np.inf, True
    for _ in range(100):
        g = random_graph(rng, int(rng.integers(2, 12)), rng.uniform(0.15, 0.6), weighted=True)
        s = self_similarity(g, GENERIC).scores
        min_eig = min(min_eig, np.linalg.eigvalsh(s).min())
        diag_ok &= bool(np.diag(s).max() >= s.max())
    record(8, min_eig >= -1e-9 and diag_ok, f"100 graphs, min eigenvalue {min_eig:.2e}, max on diagonal: {diag_ok}")


def test_criterion_09_extremal_one_norm():
    rng = np.random.default_rng(9)
    worst = -np.inf
    for _ in range(20):
        ga = random_graph(rng, int(rng.integers(2, 6)), weighted=True)
        gb = random_graph(rng, int(rng.integers(2, 7)), weighted=True)
        op = similarity_operator(ga, gb)
        ref = one_norm(similarity_matrix(ga, gb, GENERIC).scores)
        for _ in range(20):
            z, rep = even_iterate_limit(op, rng.uniform(0.01, 1.0, (gb.n, ga.n)))
            assert rep.converged
            worst = max(worst, one_norm(z) - ref)
    record(9, worst <= 1e-9, f"400 starts, max excess 1-norm over the ones start {worst:.2e}")


def test_criterion_10_support_pattern():
    rng = np.random.default_rng(10)
    mismatches = 0
    for _ in range(100):
        ga = random_graph(rng, int(rng.integers(1, 7)), rng.uniform(0.15, 0.5))
        gb = random_graph(rng, int(rng.integers(1, 10)), rng.uniform(0.15, 0.5))
        s = similarity_matrix(ga, gb, GENERIC).scores
        mismatches += int(not np.array_equal(support_pattern(ga, gb), s > 1e-8))
    record(10, mismatches == 0, f"100 pairs, {mismatches} pattern mismatches")


def test_criterion_11_synonym_pipeline():
    failures, checked, sizes = [], 0, []
    deterministic = True
    slowest = 0.0
    for name in FIXTURES:
        text = resources.files("graphsim").joinpath("data", name).read_text(encoding="utf-8")
        path = str(resources.files("graphsim").joinpath("data", name))
        d = build_dictionary_graph(text)
        d2 = build_dictionary_graph(text)
        sizes.append(len(d))
        for w in d.words:
            if neighborhood_graph(d, w).graph.edge_count == 0:
                continue
            r = rank_synonyms(d, w)
            checked += 1
            if not r.query_is_top:
                failures.append(f"{name}:{w}")
            deterministic &= rank_synonyms(d2, w) == r
            t0 = time.perf_counter()
            code = cli_main(["synonyms", "--dict", path, "--word", w], stdout=io.StringIO(), stderr=io.StringIO())
            slowest = max(slowest, time.perf_counter() - t0)
            assert code == 0
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "graphsim.cli", "synonyms", "--dict", path, "--word", d.words[0]],
        capture_output=True, check=False,
    )
    process_time = time.perf_counter() - t0
    ok = (
        min(sizes) >= 50 and not failures and deterministic and slowest < 1.0
        and process_time < 1.0 and proc.returncode == 0
    )
    record(
        11,
        ok,
        f"{checked} queries over dictionaries of {sizes} headwords, query-first failures {failures or 0}, "
        f"deterministic {deterministic}, slowest in-process query {slowest:.3f}s, fresh process {process_time:.2f}s",
    )


def _sparse_graph(rng, n, degree):
    m = n * degree
    adj = sp.coo_array((np.ones(m), (rng.integers(0, n, m), rng.integers(0, n, m))), shape=(n, n))
    return DirectedGraph(adj)


@pytest.mark.slow
def test_criterion_12_per_iteration_scaling():
    rng = np.random.default_rng(12)
    ga = path_graph(3)
    sizes = [12_500, 25_000, 50_000, 100_000]
    per_step = []
    for n_b in sizes:
        op = similarity_operator(ga, _sparse_graph(rng, n_b, 8))
        x = rng.random((n_b, 3))
        op(x)
        times = []
        for _ in range(7):
            t0 = time.perf_counter()
            for _ in range(5):
                op(x)
            times.append((time.perf_counter() - t0) / 5)
        per_step.append(float(np.median(times)))
    ratios = [b / a for a, b in zip(per_step, per_step[1:])]
    record(
        12,
        max(ratios) <= 3.0,
        "per-application seconds " + ", ".join(f"{n}:{t:.2e}" for n, t in zip(sizes, per_step))
        + "; doubling ratios " + ", ".join(f"{r:.2f}" for r in ratios),
    )
