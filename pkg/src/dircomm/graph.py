"""Directed and weighted-undirected graph containers plus SNAP edge-list I/O.

Both graph types are immutable CSR structures with sorted neighbor lists.
Node ids are dense ``0..n-1``; the original SNAP labels are kept in
``DirectedGraph.labels`` so files can be written back with either id space.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np
import scipy.sparse as sp

log = logging.getLogger(__name__)


class GraphParseError(ValueError):
    """Malformed input file; ``lineno`` is 1-based (0 when not line-specific)."""

    def __init__(self, msg: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno else msg)


def _csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst.astype(np.int64)


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """Simple directed graph (no self-loops, no multi-edges) in CSR form.

    Directed edge ids follow the out-CSR order, i.e. edges sorted by
    ``(source, target)``; ``reciprocal[e]`` is True iff the reverse of edge
    ``e`` is present too.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    labels: np.ndarray = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "DirectedGraph":
        """Build from dense-id pairs. Self-loops and duplicates are dropped."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError(f"edge endpoint out of range for n={n}")
        arr = arr[arr[:, 0] != arr[:, 1]]
        arr = np.unique(arr, axis=0)
        indptr, indices = _csr(n, arr[:, 0], arr[:, 1])
        if labels is None:
            labels = np.arange(n, dtype=np.int64)
        return cls(n, indptr, indices, np.asarray(labels, dtype=np.int64))

    @property
    def m(self) -> int:
        return int(self.indices.size)

    @cached_property
    def sources(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))

    @property
    def targets(self) -> np.ndarray:
        return self.indices

    def edges(self) -> Iterator[tuple[int, int]]:
        return zip(self.sources.tolist(), self.indices.tolist())

    @cached_property
    def _in_csr(self) -> tuple[np.ndarray, np.ndarray]:
        return _csr(self.n, self.indices, self.sources)

    @property
    def in_indptr(self) -> np.ndarray:
        return self._in_csr[0]

    @property
    def in_indices(self) -> np.ndarray:
        return self._in_csr[1]

    def out_neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def in_neighbors(self, u: int) -> np.ndarray:
        return self.in_indices[self.in_indptr[u]:self.in_indptr[u + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_id(u, v) >= 0

    def edge_id(self, u: int, v: int) -> int:
        """Position of edge (u, v) in the out-CSR, or -1 if absent."""
        lo, hi = self.indptr[u], self.indptr[u + 1]
        i = lo + int(np.searchsorted(self.indices[lo:hi], v))
        return int(i) if i < hi and self.indices[i] == v else -1

    @cached_property
    def reciprocal(self) -> np.ndarray:
        if self.m == 0:
            return np.zeros(0, dtype=bool)
        # keys are sorted because edges are in (source, target) order
        keys = self.sources * self.n + self.indices
        rev = self.indices * self.n + self.sources
        pos = np.minimum(np.searchsorted(keys, rev), self.m - 1)
        return keys[pos] == rev

    @cached_property
    def out_sets(self) -> list[frozenset]:
        return [frozenset(self.out_neighbors(u).tolist()) for u in range(self.n)]

    @cached_property
    def in_sets(self) -> list[frozenset]:
        return [frozenset(self.in_neighbors(u).tolist()) for u in range(self.n)]

    def to_scipy(self) -> sp.csr_matrix:
        data = np.ones(self.m, dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def relabel(self, perm) -> "DirectedGraph":
        """Graph with node ``u`` renamed to ``perm[u]``."""
        perm = np.asarray(perm, dtype=np.int64)
        edges = np.column_stack([perm[self.sources], perm[self.indices]])
        labels = np.empty_like(self.labels)
        labels[perm] = self.labels
        return DirectedGraph.from_edges(self.n, edges, labels)

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class UndirectedWeightedGraph:
    """Symmetric CSR graph with positive integer edge weights and node weights."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    vweights: np.ndarray = None

    def __post_init__(self):
        if self.vweights is None:
            object.__setattr__(self, "vweights", np.ones(self.n, dtype=np.int64))

    @classmethod
    def from_edges(cls, n: int, edges, weights=None, vweights=None) -> "UndirectedWeightedGraph":
        """Build from unordered pairs; a pair listed twice keeps the larger weight."""
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        w = (np.ones(len(arr), dtype=np.int64) if weights is None
             else np.asarray(weights, dtype=np.int64))
        if np.any(arr[:, 0] == arr[:, 1]):
            raise ValueError("self-loops are not allowed")
        if w.size and w.min() < 1:
            raise ValueError("edge weights must be positive integers")
        keys = np.minimum(arr[:, 0], arr[:, 1]) * n + np.maximum(arr[:, 0], arr[:, 1])
        order = np.lexsort((-w, keys))
        keys, w = keys[order], w[order]
        first = np.ones(keys.size, dtype=bool)
        first[1:] = keys[1:] != keys[:-1]
        keys, w = keys[first], w[first]
        return cls.from_upper(n, keys // n, keys % n, w, vweights)

    @classmethod
    def from_upper(cls, n, lo, hi, w, vweights=None) -> "UndirectedWeightedGraph":
        src = np.concatenate([lo, hi]).astype(np.int64)
        dst = np.concatenate([hi, lo]).astype(np.int64)
        ww = np.concatenate([w, w]).astype(np.int64)
        order = np.lexsort((dst, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        vw = None if vweights is None else np.asarray(vweights, dtype=np.int64)
        return cls(n, indptr, dst[order], ww[order], vw)

    @classmethod
    def from_scipy(cls, mat: sp.spmatrix, vweights=None) -> "UndirectedWeightedGraph":
        """From a symmetric sparse matrix; the diagonal is ignored."""
        up = sp.triu(mat, k=1).tocoo()
        keep = up.data != 0
        return cls.from_upper(mat.shape[0], up.row[keep], up.col[keep],
                              np.rint(up.data[keep]).astype(np.int64), vweights)

    @property
    def num_edges(self) -> int:
        return int(self.indices.size // 2)

    @property
    def total_vweight(self) -> int:
        return int(self.vweights.sum())

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def neighbor_weights(self, u: int) -> np.ndarray:
        return self.weights[self.indptr[u]:self.indptr[u + 1]]

    def edge_list(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Upper-triangle (u < v) edges as arrays ``(u, v, w)``, sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        keep = src < self.indices
        return src[keep], self.indices[keep], self.weights[keep]

    def edge_weight(self, u: int, v: int) -> int:
        nb = self.neighbors(u)
        i = int(np.searchsorted(nb, v))
        return int(self.neighbor_weights(u)[i]) if i < nb.size and nb[i] == v else 0

    def to_scipy(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.weights.astype(np.float64), self.indices, self.indptr),
                             shape=(self.n, self.n))

    def __eq__(self, other):
        if not isinstance(other, UndirectedWeightedGraph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.weights, other.weights)
                and np.array_equal(self.vweights, other.vweights))

    __hash__ = None


@dataclass(frozen=True)
class DegreeTable:
    """Per-node degrees; ``d_in``/``d_out`` count one-way edges only."""

    d_in: np.ndarray
    d_out: np.ndarray
    d_rec: np.ndarray

    @property
    def d_total(self) -> np.ndarray:
        return self.d_in + self.d_out + self.d_rec


def parse_snap_edge_list(text: str | Iterable[str]) -> DirectedGraph:
    """Parse SNAP edge-list text into a DirectedGraph.

    Comment lines start with ``#``; blank lines are skipped; columns after the
    second (weights, timestamps) are ignored.  Labels are remapped to dense ids
    in increasing label order.  Self-loops and duplicate edges are dropped and
    counted in a log warning; a node that only occurs in self-loops is dropped
    with them.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    src, dst = [], []
    for lineno, line in enumerate(lines, 1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        parts = s.split()
        if len(parts) < 2:
            raise GraphParseError(f"expected 'u v', got {s!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"non-integer node id in {s!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphParseError(f"negative node id in {s!r}", lineno)
        src.append(u)
        dst.append(v)

    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    loops = src == dst
    n_loops = int(loops.sum())
    src, dst = src[~loops], dst[~loops]
    labels, inv = np.unique(np.concatenate([src, dst]), return_inverse=True)
    edges = inv.reshape(2, -1).T
    g = DirectedGraph.from_edges(labels.size, edges, labels)
    n_dups = len(src) - g.m
    if n_loops or n_dups:
        log.warning("dropped %d self-loops and %d duplicate edges", n_loops, n_dups)
    return g


def read_snap(path) -> DirectedGraph:
    with open(path) as f:
        return parse_snap_edge_list(f)


def serialize_edge_list(g: DirectedGraph, original_labels: bool = False) -> str:
    """Canonical edge list: sorted ``u v`` lines, no comments."""
    src, dst = g.sources, g.indices
    if original_labels:
        src, dst = g.labels[src], g.labels[dst]
    return "".join(f"{u} {v}\n" for u, v in zip(src.tolist(), dst.tolist()))


def write_edge_list(g: DirectedGraph, path, original_labels: bool = False) -> None:
    Path(path).write_text(serialize_edge_list(g, original_labels))


def degrees(g: DirectedGraph) -> DegreeTable:
    rec = g.reciprocal
    d_rec = np.bincount(g.sources[rec], minlength=g.n)
    d_out = np.bincount(g.sources[~rec], minlength=g.n)
    d_in = np.bincount(g.indices[~rec], minlength=g.n)
    return DegreeTable(d_in, d_out, d_rec)


def reciprocity(g: DirectedGraph) -> float:
    """Fraction of directed edges whose reverse edge also exists."""
    if g.m == 0:
        raise ValueError("reciprocity is undefined for a graph with no edges")
    return float(g.reciprocal.sum()) / g.m


def collapse_to_undirected(g: DirectedGraph) -> UndirectedWeightedGraph:
    """Drop edge directions; every connected pair gets weight 1."""
    src, dst = g.sources, g.indices
    lo, hi = np.minimum(src, dst), np.maximum(src, dst)
    keys = np.unique(lo * g.n + hi)
    return UndirectedWeightedGraph.from_upper(g.n, keys // g.n, keys % g.n,
                                              np.ones(keys.size, dtype=np.int64))
