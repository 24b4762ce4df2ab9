"""Directed graph -> weighted undirected graph conversions."""
from __future__ import annotations

import enum

import numpy as np

from .census import EdgeCycleFlags, edge_cycle_flags
from .graph import DirectedGraph, UndirectedWeightedGraph, collapse_to_undirected


class WeightingScheme(str, enum.Enum):
    UNWEIGHTED = "unweighted"
    RECIPROCAL = "reciprocal"
    THREE_CYCLE = "three_cycle"

    @classmethod
    def parse(cls, name: str) -> "WeightingScheme":
        key = name.strip().lower().replace("-", "_")
        aliases = {"3_cycle": "three_cycle", "3cycle": "three_cycle", "recip": "reciprocal"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            choices = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown weighting scheme {name!r} (choose from {choices})") from None


# weight earned by an edge in a cyclic triangle with 0, 1, 2, 3 reciprocal pairs
CYCLE_WEIGHTS = np.array([2, 3, 3, 4], dtype=np.int64)


def three_cycle_edge_weights(flags: EdgeCycleFlags) -> np.ndarray:
    """Per directed edge: max(4*r3, 3*r2, 3*r1, 2*r0, 1)."""
    w = np.where(flags.flags, CYCLE_WEIGHTS, 0).max(axis=1, initial=0)
    return np.maximum(w, 1)


def _symmetrize_max(g: DirectedGraph, w: np.ndarray) -> UndirectedWeightedGraph:
    return UndirectedWeightedGraph.from_edges(
        g.n, np.column_stack([g.sources, g.indices]), w)


def apply_scheme(g: DirectedGraph, scheme: WeightingScheme | str,
                 flags: EdgeCycleFlags | None = None) -> UndirectedWeightedGraph:
    """Weighted undirected version of ``g``.

    Every scheme keeps the same edge set as the plain collapse; only the
    weights differ.  For ``three_cycle`` the weight of {u, v} is the larger
    of the two directed weights (a missing direction counts as 0).  ``flags``
    may be passed to reuse an existing census.
    """
    scheme = WeightingScheme.parse(scheme) if isinstance(scheme, str) else scheme
    if scheme is WeightingScheme.UNWEIGHTED:
        return collapse_to_undirected(g)
    if scheme is WeightingScheme.RECIPROCAL:
        return _symmetrize_max(g, np.where(g.reciprocal, 2, 1))
    if flags is None:
        flags = edge_cycle_flags(g)
    return _symmetrize_max(g, three_cycle_edge_weights(flags))


def weight_histogram(ug: UndirectedWeightedGraph) -> dict[int, int]:
    _, _, w = ug.edge_list()
    vals, counts = np.unique(w, return_counts=True)
    return dict(zip(vals.tolist(), counts.tolist()))
