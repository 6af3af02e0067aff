"""Matrix kernels and the even-iterate limit of symmetric non-negative maps.

Dense matrices are plain 2-D ``float64`` numpy arrays.  Score matrices are
vectorized column by column (Fortran order), so ``vec(B X A^T)`` equals
``kron(A, B) @ vec(X)``.

The dense eigen-solver here (round-robin cyclic Jacobi) exists to build
test oracles; production paths never call it on large inputs.
"""

from __future__ import annotations

import enum
import io
import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .graph import DirectedGraph

__all__ = [
    "ConvergenceReport",
    "StopReason",
    "ZeroOperatorError",
    "dense_projection_oracle",
    "even_iterate_limit",
    "frobenius_norm",
    "jacobi_eigh",
    "kronecker_operator",
    "matrix_from_json",
    "matrix_to_csv",
    "matrix_to_json",
    "one_norm",
    "spectral_radius",
    "spmm",
    "unvec",
    "vec",
]

ORACLE_MAX_DIM = 400
UNDERFLOW = 1e-300


class ZeroOperatorError(ValueError):
    """The operator annihilates the start vector (spectral radius zero)."""


class StopReason(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    ZERO_OPERATOR = "zero_operator"


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of an iterative solve.

    ``iterations`` counts operator applications; ``residual`` is the
    Frobenius distance between the last two compared even iterates.
    """

    iterations: int
    residual: float
    stop_reason: StopReason

    @property
    def converged(self) -> bool:
        return self.stop_reason is StopReason.CONVERGED

    def __str__(self):
        return (
            f"stop={self.stop_reason.value} iterations={self.iterations} "
            f"residual={self.residual:.3e}"
        )


def frobenius_norm(m) -> float:
    """Square root of the sum of squared entries."""
    return float(np.sqrt(np.sum(np.square(m))))


def one_norm(m) -> float:
    """Sum of the magnitudes of all entries (not the induced 1-norm)."""
    return float(np.sum(np.abs(m)))


def vec(x: np.ndarray) -> np.ndarray:
    return np.asarray(x).ravel(order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(v).reshape((rows, cols), order="F"))


def spmm(g: DirectedGraph, x: np.ndarray, transpose: bool = False) -> np.ndarray:
    """Return ``B @ x`` (or ``B.T @ x``) for the adjacency ``B`` of ``g``.

    Rows are accumulated in ascending stored-entry order, so repeated calls
    on equal inputs give bit-identical results.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != g.n:
        raise ValueError(
            f"dimension mismatch: graph has {g.n} vertices, operand has {x.shape[0]} rows"
        )
    a = g.adjacency_t if transpose else g.adjacency
    return a @ x


def even_iterate_limit(
    apply: Callable[[np.ndarray], np.ndarray],
    z0: np.ndarray,
    tol: float = 1e-10,
    max_iters: int = 200_000,
) -> tuple[np.ndarray, ConvergenceReport]:
    """Limit of the even subsequence of ``z -> apply(z) / ||apply(z)||``.

    ``apply`` must be linear, symmetric and preserve non-negativity.  For
    such maps the even iterates converge even when ``-rho`` is an
    eigenvalue, to ``P z0 / ||P z0||`` where ``P`` projects on the
    eigenspaces of ``rho`` and ``-rho``.

    Each step applies the operator twice and normalizes once.  Iteration
    stops when two successive normalized iterates are within ``tol`` in
    Frobenius norm, or after ``max_iters`` applications.

    Returns
    -------
    z : ndarray
        The last normalized even iterate (same shape as ``z0``), or zeros
        when the operator annihilates ``z0``.
    report : ConvergenceReport
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    z = np.array(z0, dtype=np.float64)
    nrm = frobenius_norm(z)
    if not nrm > 0:
        raise ValueError("start vector must be non-zero")
    z /= nrm

    applications = 0
    residual = np.inf
    while applications + 2 <= max_iters:
        y = apply(apply(z))
        applications += 2
        nrm = frobenius_norm(y)
        if nrm < UNDERFLOW:
            return np.zeros_like(z), ConvergenceReport(
                applications, float(residual), StopReason.ZERO_OPERATOR
            )
        y /= nrm
        residual = frobenius_norm(y - z)
        z = y
        if residual <= tol:
            return z, ConvergenceReport(applications, residual, StopReason.CONVERGED)
    return z, ConvergenceReport(applications, float(residual), StopReason.MAX_ITERATIONS)


# ---------------------------------------------------------------------------
# dense oracle


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings covering every (p, q), p < q, once, in disjoint rounds."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            p, q = players[k], players[m - 1 - k]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _check_symmetric(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if frobenius_norm(m - m.T) > 1e-12 * frobenius_norm(m):
        raise ValueError("matrix is not symmetric")


def _rotate_rows(x: np.ndarray, p, q, c, s) -> None:
    xp = x[p]
    xq = x[q]
    x[p] = c[:, None] * xp - s[:, None] * xq
    x[q] = s[:, None] * xp + c[:, None] * xq


def jacobi_eigh(m, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Rotations are scheduled in round-robin order so that every round
    annihilates ``n // 2`` disjoint off-diagonal pairs at once.  Sweeps stop
    when the off-diagonal Frobenius mass drops below ``1e-14 * ||m||_F``.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvectors as columns.
    """
    a = np.array(m, dtype=np.float64)
    _check_symmetric(a)
    n = a.shape[0]
    a = 0.5 * (a + a.T)
    vt = np.eye(n)
    thresh = 1e-14 * frobenius_norm(a)
    rounds = _round_robin(n)

    for _ in range(max_sweeps):
        off = a.copy()
        np.fill_diagonal(off, 0.0)
        if frobenius_norm(off) <= thresh:
            break
        for p, q in rounds:
            apq = a[p, q]
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where((apq != 0.0) & np.isfinite(t), t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # a <- R^T a R, done as two row passes since (R^T a)^T = a R
            _rotate_rows(a, p, q, c, s)
            a = np.ascontiguousarray(a.T)
            _rotate_rows(a, p, q, c, s)
            _rotate_rows(vt, p, q, c, s)

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], vt[order].T


def spectral_radius(m) -> float:
    """Largest eigenvalue magnitude of a symmetric matrix (dense)."""
    m = np.asarray(m, dtype=np.float64)
    _check_symmetric(m)
    if m.size == 0:
        return 0.0
    w, _ = jacobi_eigh(m)
    return float(np.max(np.abs(w)))


def dense_projection_oracle(m, z0) -> np.ndarray:
    """Normalized projection of ``z0`` on the ``+-rho`` eigenspaces of ``m``.

    ``z0`` may be a vector or a matrix; matrices are vectorized column by
    column and the result is returned in the same shape.
    """
    m = np.asarray(m, dtype=np.float64)
    _check_symmetric(m)
    if m.shape[0] > ORACLE_MAX_DIM:
        raise ValueError(f"oracle limited to dimension {ORACLE_MAX_DIM}")
    if m.size and m.min() < 0:
        raise ValueError("matrix must be non-negative")
    z0 = np.asarray(z0, dtype=np.float64)
    shape = z0.shape
    z = vec(z0)
    if z.size != m.shape[0]:
        raise ValueError("start vector does not match matrix dimension")

    w, vecs = jacobi_eigh(m)
    rho = float(np.max(np.abs(w))) if w.size else 0.0
    if rho == 0.0:
        raise ZeroOperatorError("zero matrix has no dominant eigenspace")
    basis = vecs[:, np.abs(w) >= (1 - 1e-9) * rho]
    p = basis @ (basis.T @ z)
    p /= frobenius_norm(p)
    if len(shape) == 2:
        return unvec(p, *shape)
    return p.reshape(shape)


def kronecker_operator(ga: DirectedGraph, gb: DirectedGraph) -> np.ndarray:
    """Dense ``kron(A, B) + kron(A^T, B^T)`` (column-major vec convention)."""
    size = ga.n * gb.n
    if size > ORACLE_MAX_DIM:
        raise OverflowError(
            f"Kronecker operator of size {size} exceeds the dense limit {ORACLE_MAX_DIM}"
        )
    a = ga.to_dense()
    b = gb.to_dense()
    return np.kron(a, b) + np.kron(a.T, b.T)


# ---------------------------------------------------------------------------
# serialization


def matrix_to_csv(m) -> str:
    m = np.atleast_2d(np.asarray(m, dtype=np.float64))
    out = io.StringIO()
    for row in m:
        out.write(",".join(f"{x:.17g}" for x in row))
        out.write("\n")
    return out.getvalue()


def matrix_to_json(m) -> str:
    m = np.atleast_2d(np.asarray(m, dtype=np.float64))
    rows, cols = m.shape
    return json.dumps({"rows": rows, "cols": cols, "data": m.ravel().tolist()})


def matrix_from_json(text: str) -> np.ndarray:
    obj = json.loads(text)
    rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    if len(data) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
    m = np.asarray(data, dtype=np.float64).reshape(rows, cols)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m
