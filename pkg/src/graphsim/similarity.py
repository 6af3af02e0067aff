"""Similarity scores between the vertices of two directed graphs.

The similarity matrix of ``G_A`` (structure graph, ``n_a`` vertices) and
``G_B`` (``n_b`` vertices) is the ``n_b x n_a`` limit of the even iterates of

    Z <- (B Z A^T + B^T Z A) / ||B Z A^T + B^T Z A||_F,    Z_0 = ones,

where ``A`` and ``B`` are the adjacency matrices.  Entry ``(i, j)`` scores
how much vertex ``j`` of ``G_A`` resembles vertex ``i`` of ``G_B``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import (
    DirectedGraph,
    is_normal,
    is_regular,
    product_graph,
    symmetrize,
    weakly_connected_components,
)
from .linalg import (
    ORACLE_MAX_DIM,
    ConvergenceReport,
    StopReason,
    ZeroOperatorError,
    even_iterate_limit,
    frobenius_norm,
    spectral_radius,
    spmm,
    unvec,
)

__all__ = [
    "FastPathMismatch",
    "IterationConfig",
    "ScoreKind",
    "ScoreVector",
    "SimilarityMatrix",
    "central_scores",
    "hub_authority_scores",
    "rank_one_similarity",
    "self_similarity",
    "similarity_matrix",
    "similarity_operator",
    "support_pattern",
]

SUPPORT_TIE_RTOL = 1e-9


class FastPathMismatch(RuntimeError):
    """A closed-form shortcut disagreed with the generic iteration."""


@dataclass(frozen=True)
class IterationConfig:
    """Stopping rule and shortcut policy for every iterative solve.

    ``verify_fast_paths`` reruns the generic iteration whenever a closed
    form is used and raises :class:`FastPathMismatch` on disagreement.
    """

    tolerance: float = 1e-10
    max_operator_applications: int = 200_000
    use_fast_paths: bool = True
    verify_fast_paths: bool = False

    def __post_init__(self):
        if not 0 < self.tolerance < 1:
            raise ValueError(f"tolerance must lie in (0, 1), got {self.tolerance}")
        if self.max_operator_applications < 2:
            raise ValueError("max_operator_applications must be at least 2")


DEFAULT_CONFIG = IterationConfig()


class ScoreKind(str, enum.Enum):
    HUB = "hub"
    AUTHORITY = "authority"
    CENTRAL = "central"


@dataclass(frozen=True)
class ScoreVector:
    values: np.ndarray
    kind: ScoreKind
    report: ConvergenceReport


@dataclass(frozen=True)
class SimilarityMatrix:
    """Scores of shape ``(n_b, n_a)`` with unit Frobenius norm."""

    scores: np.ndarray
    report: ConvergenceReport
    method: str = "iteration"
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.scores.shape

    @property
    def T(self) -> "SimilarityMatrix":
        return SimilarityMatrix(
            np.ascontiguousarray(self.scores.T), self.report, self.method, self.extra
        )


def _require_edges(*graphs: DirectedGraph) -> None:
    for g in graphs:
        if g.n == 0:
            raise ValueError("graph has no vertices")
        if g.edge_count == 0:
            raise ZeroOperatorError("graph has no edges")


def _merge_reports(*reports: ConvergenceReport) -> ConvergenceReport:
    worst = StopReason.CONVERGED
    for r in reports:
        if r.stop_reason is StopReason.ZERO_OPERATOR:
            worst = r.stop_reason
        elif r.stop_reason is StopReason.MAX_ITERATIONS and worst is StopReason.CONVERGED:
            worst = r.stop_reason
    return ConvergenceReport(
        sum(r.iterations for r in reports), max(r.residual for r in reports), worst
    )


def _check_zero(report: ConvergenceReport) -> None:
    if report.stop_reason is StopReason.ZERO_OPERATOR:
        raise ZeroOperatorError("operator annihilates the start vector")


def similarity_operator(ga: DirectedGraph, gb: DirectedGraph):
    """The linear map ``X -> B X A^T + B^T X A`` on ``n_b x n_a`` arrays."""
    n_a, n_b = ga.n, gb.n

    def apply(x: np.ndarray) -> np.ndarray:
        if x.shape != (n_b, n_a):
            raise ValueError(f"expected shape {(n_b, n_a)}, got {x.shape}")
        xt = np.ascontiguousarray(x.T)
        x_at = np.ascontiguousarray(spmm(ga, xt).T)  # X A^T
        x_a = np.ascontiguousarray(spmm(ga, xt, transpose=True).T)  # X A
        return spmm(gb, x_at) + spmm(gb, x_a, transpose=True)

    return apply


def _iterate(ga: DirectedGraph, gb: DirectedGraph, cfg: IterationConfig) -> SimilarityMatrix:
    z, report = even_iterate_limit(
        similarity_operator(ga, gb),
        np.ones((gb.n, ga.n)),
        tol=cfg.tolerance,
        max_iters=cfg.max_operator_applications,
    )
    _check_zero(report)
    return SimilarityMatrix(z, report)


def _symmetrized_limit(g: DirectedGraph, cfg: IterationConfig) -> tuple[np.ndarray, ConvergenceReport]:
    """Normalized projection of ones on the dominant subspace of ``(B + B^T)^2``."""

    def apply(x):
        return spmm(g, x) + spmm(g, x, transpose=True)

    v, report = even_iterate_limit(
        apply, np.ones(g.n), tol=cfg.tolerance, max_iters=cfg.max_operator_applications
    )
    _check_zero(report)
    return v, report


def _rank_one_ok(g: DirectedGraph) -> bool:
    return is_regular(g) or is_normal(g)


def rank_one_similarity(
    ga: DirectedGraph, gb: DirectedGraph, cfg: IterationConfig = DEFAULT_CONFIG
) -> SimilarityMatrix:
    """Closed-form similarity matrix when ``G_A`` is regular or normal.

    The result is ``v u^T`` with ``v`` the normalized projection of ones on
    the dominant invariant subspace of ``(B + B^T)^2``.  For regular ``G_A``
    the row factor ``u`` is uniform; for a normal adjacency it is the same
    projection computed from ``A + A^T``, since a normal ``A`` shares its
    real eigenvectors with ``A^T``.
    """
    _require_edges(ga, gb)
    v, rep_b = _symmetrized_limit(gb, cfg)
    if is_regular(ga):
        u = np.full(ga.n, 1.0 / math.sqrt(ga.n))
        report = rep_b
    elif is_normal(ga):
        u, rep_a = _symmetrized_limit(ga, cfg)
        report = _merge_reports(rep_a, rep_b)
    else:
        raise ValueError("G_A is neither regular nor normal; no rank-one closed form")
    s = np.outer(v, u)
    s /= frobenius_norm(s)
    return SimilarityMatrix(s, report, method="rank_one")


def similarity_matrix(
    ga: DirectedGraph, gb: DirectedGraph, cfg: IterationConfig = DEFAULT_CONFIG
) -> SimilarityMatrix:
    """Similarity matrix between ``ga`` (columns) and ``gb`` (rows).

    Parameters
    ----------
    ga, gb : DirectedGraph
        Both must have at least one edge.
    cfg : IterationConfig
        With ``use_fast_paths`` the rank-one closed form is used whenever
        either graph is regular or has a normal adjacency matrix.

    Returns
    -------
    SimilarityMatrix
        Non-negative ``(gb.n, ga.n)`` scores of unit Frobenius norm.  A
        non-converged run still returns its last iterate; check
        ``result.report``.

    Raises
    ------
    ZeroOperatorError
        If either graph has no edges.
    """
    _require_edges(ga, gb)
    fast = None
    if cfg.use_fast_paths:
        if _rank_one_ok(ga):
            fast = rank_one_similarity(ga, gb, cfg)
        elif _rank_one_ok(gb):
            fast = rank_one_similarity(gb, ga, cfg).T
    if fast is None:
        return _iterate(ga, gb, cfg)
    if cfg.verify_fast_paths:
        generic = _iterate(ga, gb, cfg)
        gap = frobenius_norm(generic.scores - fast.scores)
        if gap > max(1e-7, 100 * cfg.tolerance):
            raise FastPathMismatch(f"rank-one shortcut off by {gap:.3e}")
        fast.extra["verified_gap"] = gap
    return fast


def self_similarity(g: DirectedGraph, cfg: IterationConfig = DEFAULT_CONFIG) -> SimilarityMatrix:
    """Similarity of ``g`` with itself: square, symmetric, positive semi-definite."""
    res = similarity_matrix(g, g, cfg)
    s = 0.5 * (res.scores + res.scores.T)
    return SimilarityMatrix(s, res.report, res.method, res.extra)


def _score(g: DirectedGraph, apply, kind: ScoreKind, cfg: IterationConfig) -> ScoreVector:
    z, report = even_iterate_limit(
        apply, np.ones(g.n), tol=cfg.tolerance, max_iters=cfg.max_operator_applications
    )
    _check_zero(report)
    return ScoreVector(z, kind, report)


def hub_authority_scores(
    g: DirectedGraph, cfg: IterationConfig = DEFAULT_CONFIG
) -> tuple[ScoreVector, ScoreVector]:
    """Hub and authority scores of every vertex of ``g``.

    Each is the normalized projection of the all-ones vector on the dominant
    invariant subspace of ``B B^T`` (hubs) or ``B^T B`` (authorities).
    """
    _require_edges(g)
    hub = _score(g, lambda x: spmm(g, spmm(g, x, transpose=True)), ScoreKind.HUB, cfg)
    auth = _score(g, lambda x: spmm(g, spmm(g, x), transpose=True), ScoreKind.AUTHORITY, cfg)
    return hub, auth


def central_scores(g: DirectedGraph, cfg: IterationConfig = DEFAULT_CONFIG) -> ScoreVector:
    """Similarity of each vertex to the middle of the path ``1 -> 2 -> 3``.

    Computed from ``B^T B + B B^T`` directly rather than from the full
    three-column similarity matrix.
    """
    _require_edges(g)

    def apply(x):
        return spmm(g, spmm(g, x), transpose=True) + spmm(g, spmm(g, x, transpose=True))

    return _score(g, apply, ScoreKind.CENTRAL, cfg)


def _component_radius(sub) -> float:
    n = sub.shape[0]
    if sub.nnz == 0:
        return 0.0
    if n <= ORACLE_MAX_DIM:
        return spectral_radius(sub.toarray())
    z, report = even_iterate_limit(lambda x: sub @ x, np.ones(n), tol=1e-13)
    return math.sqrt(frobenius_norm(sub @ (sub @ z)))


def support_pattern(ga: DirectedGraph, gb: DirectedGraph) -> np.ndarray:
    """Predict which similarity scores are non-zero, without iterating.

    A score is non-zero exactly when its product vertex lies in a component
    of the symmetrized product graph whose spectral radius is maximal
    (ties within a relative ``1e-9``).

    Returns a boolean array of shape ``(gb.n, ga.n)``.  If the product has
    no edges every entry is False.
    """
    sym = symmetrize(product_graph(ga, gb).graph)
    m = sym.adjacency
    diag = m.diagonal()
    comps = weakly_connected_components(sym)
    radii = np.empty(len(comps))
    for c, idx in enumerate(comps):
        if idx.size == 1:
            radii[c] = abs(diag[idx[0]])
        else:
            radii[c] = _component_radius(m[idx][:, idx])
    mask = np.zeros(ga.n * gb.n, dtype=bool)
    top = radii.max() if radii.size else 0.0
    if top > 0:
        for c, idx in enumerate(comps):
            if radii[c] >= (1 - SUPPORT_TIE_RTOL) * top:
                mask[idx] = True
    return unvec(mask, gb.n, ga.n)
