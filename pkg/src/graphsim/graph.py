"""Sparse directed multigraphs with non-negative edge weights.

A :class:`DirectedGraph` wraps a canonical CSR adjacency matrix (sorted
indices, no duplicates, no explicit zeros) together with its transpose, so
that both ``B @ X`` and ``B.T @ X`` run as row-ordered sparse products.
Graphs are immutable once built.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

__all__ = [
    "DirectedGraph",
    "GraphFormatError",
    "ProductGraph",
    "degrees",
    "from_edge_list",
    "is_normal",
    "is_regular",
    "product_graph",
    "symmetrize",
    "to_edge_list",
    "weakly_connected_components",
]


class GraphFormatError(ValueError):
    """Raised for malformed edge-list or dictionary input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _canonical(mat, n: int) -> sp.csr_array:
    mat = sp.csr_array(mat, shape=(n, n), dtype=np.float64, copy=True)
    mat.sum_duplicates()
    mat.eliminate_zeros()
    mat.sort_indices()
    mat.data.flags.writeable = False
    mat.indices.flags.writeable = False
    mat.indptr.flags.writeable = False
    return mat


class DirectedGraph:
    """Directed multigraph on vertices ``0 .. n-1`` with weighted edges.

    Parameters
    ----------
    adjacency : array-like or sparse matrix, shape (n, n)
        Entry ``(i, j)`` is the total weight of edges ``i -> j``.
    labels : sequence of str, optional
        Unique vertex names, one per vertex.
    """

    __slots__ = ("_adj", "_adj_t", "_labels", "_index")

    def __init__(self, adjacency, labels: Sequence[str] | None = None):
        if sp.issparse(adjacency):
            n = adjacency.shape[0]
        else:
            adjacency = np.asarray(adjacency, dtype=np.float64)
            if adjacency.ndim != 2:
                raise ValueError("adjacency must be a square matrix")
            n = adjacency.shape[0]
        if adjacency.shape != (n, n):
            raise ValueError(f"adjacency must be square, got shape {adjacency.shape}")
        adj = _canonical(adjacency, n)
        if adj.nnz and not np.all(np.isfinite(adj.data)):
            raise ValueError("edge weights must be finite")
        if adj.nnz and adj.data.min() < 0:
            raise ValueError("edge weights must be non-negative")
        self._adj = adj
        self._adj_t = _canonical(adj.T, n)
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != n:
                raise ValueError(f"expected {n} labels, got {len(labels)}")
            index = {s: k for k, s in enumerate(labels)}
            if len(index) != n:
                raise ValueError("vertex labels must be unique")
            self._index = index
        else:
            self._index = None
        self._labels = labels

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int] | tuple[int, int, float]],
        labels: Sequence[str] | None = None,
    ) -> "DirectedGraph":
        """Build a graph from ``(src, dst)`` or ``(src, dst, weight)`` tuples.

        Repeated pairs accumulate their weights.
        """
        rows, cols, vals = [], [], []
        for e in edges:
            i, j = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for {n} vertices")
            rows.append(i)
            cols.append(j)
            vals.append(w)
        mat = sp.coo_array((vals, (rows, cols)), shape=(n, n), dtype=np.float64)
        return cls(mat, labels=labels)

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    vertex_count = n

    @property
    def adjacency(self) -> sp.csr_array:
        """Read-only CSR adjacency matrix."""
        return self._adj

    @property
    def adjacency_t(self) -> sp.csr_array:
        """Read-only CSR matrix of the transposed adjacency."""
        return self._adj_t

    @property
    def labels(self) -> tuple[str, ...] | None:
        return self._labels

    @property
    def edge_count(self) -> int:
        """Number of stored (src, dst) pairs, ignoring multiplicity."""
        return self._adj.nnz

    @property
    def total_weight(self) -> float:
        return float(self._adj.data.sum())

    def label(self, k: int) -> str:
        return self._labels[k] if self._labels is not None else str(k)

    def index(self, label: str) -> int:
        if self._index is None:
            k = int(label)
            if not 0 <= k < self.n:
                raise KeyError(label)
            return k
        return self._index[label]

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Yield ``(src, dst, weight)`` sorted by ``(src, dst)``."""
        a = self._adj
        for i in range(self.n):
            for k in range(a.indptr[i], a.indptr[i + 1]):
                yield i, int(a.indices[k]), float(a.data[k])

    def weight(self, i: int, j: int) -> float:
        a = self._adj
        lo, hi = a.indptr[i], a.indptr[i + 1]
        k = lo + np.searchsorted(a.indices[lo:hi], j)
        if k < hi and a.indices[k] == j:
            return float(a.data[k])
        return 0.0

    def transpose(self) -> "DirectedGraph":
        return DirectedGraph(self._adj_t, labels=self._labels)

    def scaled(self, factor: float) -> "DirectedGraph":
        if not factor >= 0:
            raise ValueError("scale factor must be non-negative")
        return DirectedGraph(self._adj * factor, labels=self._labels)

    def subgraph(self, vertices: Sequence[int]) -> "DirectedGraph":
        """Induced subgraph on ``vertices``, kept in the given order."""
        idx = np.asarray(vertices, dtype=np.intp)
        sub = self._adj[idx][:, idx]
        labels = [self.label(k) for k in idx] if self._labels is not None else None
        return DirectedGraph(sub, labels=labels)

    def to_dense(self) -> np.ndarray:
        return self._adj.toarray()

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self._labels == other._labels
            and (self._adj != other._adj).nnz == 0
        )

    __hash__ = None

    def __repr__(self):
        return f"DirectedGraph(n={self.n}, edges={self.edge_count})"


# ---------------------------------------------------------------------------
# edge-list text format


def _read_text(source: str | TextIO) -> Iterator[str]:
    if isinstance(source, str):
        return iter(io.StringIO(source))
    return iter(source)


def from_edge_list(source: str | TextIO) -> DirectedGraph:
    """Parse ``src dst [weight]`` lines into a graph.

    Lines starting with ``#`` and blank lines are skipped.  If every vertex
    token is a non-negative integer the vertices are ``0 .. max``; otherwise
    tokens are names, numbered in order of first appearance.  Repeated
    ``(src, dst)`` lines accumulate weight.
    """
    raw: list[tuple[str, str, float]] = []
    for lineno, line in enumerate(_read_text(source), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(
                f"expected 'src dst [weight]', got {len(parts)} fields", lineno
            )
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise GraphFormatError(f"bad weight {parts[2]!r}", lineno) from None
            if not math.isfinite(w):
                raise GraphFormatError(f"non-finite weight {parts[2]!r}", lineno)
            if w < 0:
                raise GraphFormatError(f"negative weight {parts[2]!r}", lineno)
        else:
            w = 1.0
        raw.append((parts[0], parts[1], w))

    tokens = [t for s, d, _ in raw for t in (s, d)]
    if all(t.isascii() and t.isdigit() for t in tokens):
        n = max((int(t) for t in tokens), default=-1) + 1
        edges = [(int(s), int(d), w) for s, d, w in raw]
        return DirectedGraph.from_edges(n, edges)

    index: dict[str, int] = {}
    for t in tokens:
        index.setdefault(t, len(index))
    edges = [(index[s], index[d], w) for s, d, w in raw]
    return DirectedGraph.from_edges(len(index), edges, labels=list(index))


def to_edge_list(g: DirectedGraph) -> str:
    """Serialize as one ``src dst weight`` line per stored entry."""
    out = io.StringIO()
    for i, j, w in g.edges():
        out.write(f"{g.label(i)} {g.label(j)} {w:.17g}\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# inspection


def degrees(g: DirectedGraph) -> tuple[np.ndarray, np.ndarray]:
    """Weighted ``(in_degrees, out_degrees)``."""
    a = g.adjacency
    return np.asarray(a.sum(axis=0)).ravel(), np.asarray(a.sum(axis=1)).ravel()


def _all_equal(x: np.ndarray, exact: bool) -> bool:
    if x.size == 0:
        return True
    if exact:
        return bool(np.all(x == x[0]))
    scale = float(np.max(np.abs(x)))
    return bool(np.max(x) - np.min(x) <= 1e-12 * scale)


def is_regular(g: DirectedGraph) -> bool:
    """True iff all in-degrees are equal and all out-degrees are equal."""
    if g.n < 1:
        raise ValueError("regularity is undefined for an empty vertex set")
    d_in, d_out = degrees(g)
    data = g.adjacency.data
    exact = bool(np.all(data == np.round(data)))
    return _all_equal(d_in, exact) and _all_equal(d_out, exact)


def is_normal(g: DirectedGraph) -> bool:
    """True iff the adjacency matrix commutes with its transpose."""
    a, at = g.adjacency, g.adjacency_t
    diff = (a @ at - at @ a).tocoo()
    resid = float(np.sqrt(np.sum(diff.data**2)))
    fro2 = float(np.sum(a.data**2))
    return resid <= 1e-12 * max(1.0, fro2)


# ---------------------------------------------------------------------------
# combination


@dataclass(frozen=True)
class ProductGraph:
    """Product of ``G_A`` and ``G_B``.

    Product vertex ``k = j * n_b + i`` stands for the pair (``i`` in G_B,
    ``j`` in G_A), i.e. entry ``k`` of the column-stacked ``n_b x n_a``
    score matrix.
    """

    graph: DirectedGraph
    n_a: int
    n_b: int

    def index(self, i: int, j: int) -> int:
        if not (0 <= i < self.n_b and 0 <= j < self.n_a):
            raise IndexError((i, j))
        return j * self.n_b + i

    def pair(self, k: int) -> tuple[int, int]:
        if not 0 <= k < self.n_a * self.n_b:
            raise IndexError(k)
        return k % self.n_b, k // self.n_b


def _check_product_size(n_a: int, n_b: int) -> None:
    if n_a * n_b > np.iinfo(np.intp).max:
        raise OverflowError(f"product of {n_a} and {n_b} vertices is too large")


def product_graph(ga: DirectedGraph, gb: DirectedGraph) -> ProductGraph:
    """Edge ``(i1,j1) -> (i2,j2)`` iff ``j1 -> j2`` in G_A and ``i1 -> i2`` in G_B."""
    if ga.n == 0 or gb.n == 0:
        raise ValueError("product graph needs non-empty graphs")
    _check_product_size(ga.n, gb.n)
    # kron(A, B)[j1*n_b + i1, j2*n_b + i2] = A[j1, j2] * B[i1, i2]
    adj = sp.kron(ga.adjacency, gb.adjacency, format="csr")
    return ProductGraph(DirectedGraph(adj), ga.n, gb.n)


def symmetrize(g: DirectedGraph) -> DirectedGraph:
    """Graph with weight ``w(i,j) + w(j,i)`` on every ordered pair."""
    return DirectedGraph(g.adjacency + g.adjacency_t, labels=g.labels)


def weakly_connected_components(g: DirectedGraph) -> list[np.ndarray]:
    """Components of the underlying undirected graph.

    Each component is a sorted index array; components are ordered by their
    smallest member.
    """
    if g.n == 0:
        return []
    ncomp, lab = connected_components(g.adjacency, directed=True, connection="weak")
    # relabel by first appearance so component c has the c-th smallest minimum
    _, first = np.unique(lab, return_index=True)
    remap = np.empty(ncomp, dtype=np.intp)
    remap[np.argsort(first)] = np.arange(ncomp)
    lab = remap[lab]
    order = np.argsort(lab, kind="stable")
    bounds = np.cumsum(np.bincount(lab, minlength=ncomp))[:-1]
    return np.split(order, bounds)
