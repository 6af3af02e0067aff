"""Synonym candidates from a dictionary graph via central scores.

Each headword is a vertex, and ``u -> v`` is an edge when ``v`` occurs in
the definition of ``u``.  For a query word we take the subgraph induced by
the word, the words it uses and the words that use it, score every vertex
by its similarity to the middle of ``1 -> 2 -> 3``, and rank.

Input is pre-tokenized, one entry per line::

    headword<TAB>token token token ...
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .graph import DirectedGraph, GraphFormatError
from .linalg import ConvergenceReport
from .similarity import DEFAULT_CONFIG, IterationConfig, central_scores

__all__ = [
    "DictionaryGraph",
    "NeighborhoodGraph",
    "SynonymRanking",
    "UnknownWordError",
    "build_dictionary_graph",
    "neighborhood_graph",
    "rank_synonyms",
]

log = logging.getLogger(__name__)


class UnknownWordError(LookupError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"unknown word {word!r}")

    def __str__(self):
        return self.args[0]


@dataclass(frozen=True)
class DictionaryGraph:
    graph: DirectedGraph

    @property
    def words(self) -> tuple[str, ...]:
        return self.graph.labels

    def index(self, word: str) -> int:
        try:
            return self.graph.index(word)
        except KeyError:
            raise UnknownWordError(word) from None

    def __contains__(self, word: str) -> bool:
        try:
            self.graph.index(word)
        except KeyError:
            return False
        return True

    def __len__(self):
        return self.graph.n


@dataclass(frozen=True)
class NeighborhoodGraph:
    graph: DirectedGraph
    query_vertex: int

    @property
    def words(self) -> tuple[str, ...]:
        return self.graph.labels


@dataclass(frozen=True)
class SynonymRanking:
    """Candidates sorted by decreasing central score, ties by word.

    The query word itself is not among ``entries``; its score is kept in
    ``query_score``.
    """

    query: str
    query_score: float
    entries: tuple[tuple[str, float], ...]
    report: ConvergenceReport

    @property
    def query_is_top(self) -> bool:
        if not self.entries:
            return True
        return self.query_score >= self.entries[0][1] * (1 - 1e-12)

    def top(self, k: int | None) -> tuple[tuple[str, float], ...]:
        return self.entries if k is None else self.entries[:k]

    def to_tsv(self, k: int | None = None) -> str:
        out = io.StringIO()
        for rank, (word, score) in enumerate(self.top(k), start=1):
            out.write(f"{rank}\t{word}\t{score:.6f}\n")
        return out.getvalue()


def build_dictionary_graph(source: str | TextIO) -> DictionaryGraph:
    """Parse a tab-separated dictionary into its dictionary graph.

    Repeated headwords merge their definitions.  Definition tokens that are
    not headwords are dropped; each distinct token gives one unit-weight edge.
    """
    lines = io.StringIO(source) if isinstance(source, str) else source
    definitions: dict[str, dict[str, None]] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if "\t" not in line:
            raise GraphFormatError("expected 'headword<TAB>definition'", lineno)
        head, body = line.split("\t", 1)
        head = head.strip()
        if not head:
            raise GraphFormatError("empty headword", lineno)
        tokens = definitions.setdefault(head, {})
        for tok in body.split():
            tokens.setdefault(tok, None)
    if not definitions:
        raise GraphFormatError("empty dictionary")

    index = {w: k for k, w in enumerate(definitions)}
    edges = [
        (index[u], index[v])
        for u, toks in definitions.items()
        for v in toks
        if v in index
    ]
    return DictionaryGraph(DirectedGraph.from_edges(len(index), edges, labels=list(index)))


def neighborhood_graph(d: DictionaryGraph, word: str) -> NeighborhoodGraph:
    """Subgraph induced by ``word``, its definition words and its definers."""
    w = d.index(word)
    succ = d.graph.adjacency.indices[d.graph.adjacency.indptr[w] : d.graph.adjacency.indptr[w + 1]]
    at = d.graph.adjacency_t
    pred = at.indices[at.indptr[w] : at.indptr[w + 1]]
    vertices = np.union1d(np.union1d(succ, pred), [w]).astype(np.intp)
    sub = d.graph.subgraph(vertices)
    return NeighborhoodGraph(sub, int(np.searchsorted(vertices, w)))


def rank_synonyms(
    d: DictionaryGraph, word: str, cfg: IterationConfig = DEFAULT_CONFIG
) -> SynonymRanking:
    """Rank the neighbors of ``word`` by central score in its neighborhood graph.

    Raises
    ------
    UnknownWordError
        If ``word`` is not a headword.
    ZeroOperatorError
        If the neighborhood graph has no edges.
    """
    nb = neighborhood_graph(d, word)
    scores = central_scores(nb.graph, cfg)
    values = scores.values
    entries = sorted(
        ((nb.words[k], float(values[k])) for k in range(nb.graph.n) if k != nb.query_vertex),
        key=lambda e: (-e[1], e[0]),
    )
    ranking = SynonymRanking(word, float(values[nb.query_vertex]), tuple(entries), scores.report)
    if not ranking.query_is_top:
        log.warning("query word %r is not the top-scoring vertex of its neighborhood", word)
    return ranking
