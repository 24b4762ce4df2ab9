"""Multilevel k-way edge-cut partitioner.

Coarsen by heavy-edge matching, grow k regions greedily on the coarsest
graph, then project back level by level with a rebalancing step and
boundary refinement at each level.  Everything is integer-weighted and
driven by one seeded generator, so a (graph, config) pair always yields
the same partition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .graph import UndirectedWeightedGraph


@dataclass(frozen=True, eq=False)
class Partition:
    """Community id in ``0..k-1`` for every node."""

    assignment: np.ndarray
    k: int

    @classmethod
    def from_assignment(cls, assignment) -> "Partition":
        """Compact arbitrary ids to ``0..k-1``, preserving their order."""
        uniq, inv = np.unique(np.asarray(assignment, dtype=np.int64), return_inverse=True)
        return cls(inv.astype(np.int64), int(uniq.size))

    @classmethod
    def single(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=np.int64), 1)

    @property
    def n(self) -> int:
        return int(self.assignment.size)

    def sizes(self, vweights=None) -> np.ndarray:
        return np.bincount(self.assignment, weights=vweights, minlength=self.k).astype(np.int64)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.assignment, other.assignment)

    __hash__ = None


@dataclass
class PartitionConfig:
    k: int
    imbalance: float = 1.03
    seed: int = 0
    refinement_passes: int = 10
    coarsen_stop: int | None = None
    init_trials: int = 8

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.imbalance < 1.0:
            raise ValueError(f"imbalance must be >= 1.0, got {self.imbalance}")
        if self.coarsen_stop is None:
            self.coarsen_stop = max(4 * self.k, 200)

    def max_part_weight(self, total: int) -> int:
        """Largest admissible community weight: imbalance * ceil(total / k)."""
        return int(math.floor(self.imbalance * math.ceil(total / self.k) + 1e-9))


@dataclass
class CoarseningLevel:
    graph: UndirectedWeightedGraph
    mapping: np.ndarray  # fine node -> coarse node
    matches: list = field(default_factory=list)


def weighted_cut(g: UndirectedWeightedGraph, assignment) -> int:
    assignment = np.asarray(assignment)
    u, v, w = g.edge_list()
    return int(w[assignment[u] != assignment[v]].sum())


def max_imbalance(g: UndirectedWeightedGraph, p: Partition) -> float:
    """Largest community weight divided by ceil(total / k)."""
    return p.sizes(g.vweights).max() / math.ceil(g.total_vweight / p.k)


def coarsen(g: UndirectedWeightedGraph, seed=0, max_vweight: int | None = None,
            order=None) -> CoarseningLevel:
    """One level of heavy-edge matching.

    Nodes are visited in ``order`` (a seeded shuffle by default); an
    unmatched node pairs with its unmatched neighbor of largest edge weight,
    ties going to the lowest id.  Pairs whose combined node weight would
    exceed ``max_vweight`` are not formed.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if order is None:
        order = rng.permutation(g.n)
    match = np.full(g.n, -1, dtype=np.int64)
    vw = g.vweights
    limit = np.iinfo(np.int64).max if max_vweight is None else max_vweight
    matches = []
    for u in np.asarray(order).tolist():
        if match[u] >= 0:
            continue
        nb, w = g.neighbors(u), g.neighbor_weights(u)
        ok = (match[nb] < 0) & (vw[nb] + vw[u] <= limit)
        if ok.any():
            cand = np.flatnonzero(ok)
            v = int(nb[cand[np.argmax(w[cand])]])
            match[u], match[v] = v, u
            matches.append((min(u, v), max(u, v)))
        else:
            match[u] = u

    mapping = np.full(g.n, -1, dtype=np.int64)
    nc = 0
    for u in range(g.n):
        if mapping[u] < 0:
            mapping[u] = mapping[match[u]] = nc
            nc += 1
    P = sp.csr_matrix((np.ones(g.n), (np.arange(g.n), mapping)), shape=(g.n, nc))
    A = (P.T @ g.to_scipy() @ P).tocsr()
    cvw = np.bincount(mapping, weights=vw, minlength=nc).astype(np.int64)
    return CoarseningLevel(UndirectedWeightedGraph.from_scipy(A, cvw), mapping, sorted(matches))


def _connectivity(g, assignment, u):
    """(parts, summed edge weight) of u's neighbors, by part."""
    nb = g.neighbors(u)
    if nb.size == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    parts, inv = np.unique(assignment[nb], return_inverse=True)
    return parts, np.bincount(inv, weights=g.neighbor_weights(u)).astype(np.int64)


def _spread_seeds(g: UndirectedWeightedGraph, k: int, rng) -> np.ndarray:
    """A random first seed, then repeatedly the node farthest (in hops) from
    all chosen seeds; unreachable nodes count as infinitely far."""
    if k == g.n:
        return rng.permutation(g.n)
    adj = sp.csr_matrix((np.ones(g.indices.size), g.indices, g.indptr), shape=(g.n, g.n))
    seeds = [int(rng.integers(g.n))]
    dist = np.full(g.n, np.inf)
    for _ in range(k - 1):
        d = csgraph.shortest_path(adj, unweighted=True, indices=seeds[-1])
        dist = np.minimum(dist, d)
        dist[seeds] = -1
        seeds.append(int(np.argmax(dist)))
    return np.asarray(seeds, dtype=np.int64)


def initial_partition(g: UndirectedWeightedGraph, cfg: PartitionConfig, rng=None) -> Partition:
    """Greedy graph growing from k spread-out seed nodes.

    The lightest region repeatedly absorbs the unassigned boundary node it is
    most strongly connected to (ties: lowest id).  A region with no boundary
    left takes the next unassigned node from a seeded order, which covers
    disconnected inputs.
    """
    if cfg.k > g.n:
        raise ValueError(f"cannot split {g.n} nodes into k={cfg.k} communities")
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    k, vw = cfg.k, g.vweights
    assign = np.full(g.n, -1, dtype=np.int64)
    seeds = _spread_seeds(g, k, rng)
    pw = np.zeros(k, dtype=np.int64)
    boundary = [dict() for _ in range(k)]
    fallback = iter(rng.permutation(g.n).tolist())

    def absorb(u, p):
        assign[u] = p
        pw[p] += vw[u]
        bnd = boundary[p]
        for v, w in zip(g.neighbors(u).tolist(), g.neighbor_weights(u).tolist()):
            if assign[v] < 0:
                bnd[v] = bnd.get(v, 0) + w

    for p, s in enumerate(seeds.tolist()):
        absorb(s, p)
    remaining = g.n - k
    while remaining:
        p = int(np.argmin(pw))
        bnd = boundary[p]
        for v in [v for v in bnd if assign[v] >= 0]:
            del bnd[v]
        if bnd:
            u = min(bnd, key=lambda v: (-bnd[v], v))
            del bnd[u]
        else:
            u = next(v for v in fallback if assign[v] < 0)
        absorb(u, p)
        remaining -= 1
    return Partition(assign, k)


def rebalance(g: UndirectedWeightedGraph, p: Partition, cfg: PartitionConfig) -> Partition:
    """Move nodes out of overweight communities at the least cut cost.

    Best effort: stops when no admissible move exists (possible on coarse
    graphs with heavy nodes).
    """
    assign = p.assignment.copy()
    vw = g.vweights
    maxpw = cfg.max_part_weight(g.total_vweight)
    pw = np.bincount(assign, weights=vw, minlength=p.k).astype(np.int64)
    while pw.max() > maxpw:
        src = int(np.argmax(pw))
        best = None
        for u in np.flatnonzero(assign == src).tolist():
            parts, conn = _connectivity(g, assign, u)
            own = int(conn[parts == src].sum())
            room = np.flatnonzero(pw + vw[u] <= maxpw)
            if room.size == 0:
                continue
            gain = np.zeros(p.k, dtype=np.int64)
            gain[parts] = conn
            gain = gain[room] - own
            i = int(np.argmax(gain))
            key = (int(gain[i]), -u)
            if best is None or key > best[0]:
                best = (key, u, int(room[i]))
        if best is None:
            break
        _, u, dst = best
        assign[u] = dst
        pw[src] -= vw[u]
        pw[dst] += vw[u]
    return Partition(assign, p.k)


def refine(g: UndirectedWeightedGraph, p: Partition, cfg: PartitionConfig, rng=None,
           history: list | None = None) -> Partition:
    """Greedy boundary refinement.

    Each pass visits boundary nodes (seeded order) and moves a node to the
    adjacent community with the largest strictly positive cut gain, provided
    the target stays within the weight bound and the source keeps at least
    one node.  Stops after ``cfg.refinement_passes`` passes or a pass with no
    moves.  The cut after every pass is appended to ``history`` if given.
    """
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    assign = p.assignment.copy()
    vw = g.vweights
    maxpw = cfg.max_part_weight(g.total_vweight)
    pw = np.bincount(assign, weights=vw, minlength=p.k).astype(np.int64)
    count = np.bincount(assign, minlength=p.k)
    cut = weighted_cut(g, assign)
    if history is not None:
        history.append(cut)

    src_of_edge = np.repeat(np.arange(g.n), np.diff(g.indptr))
    for _ in range(cfg.refinement_passes):
        crossing = assign[src_of_edge] != assign[g.indices]
        bnd = np.unique(src_of_edge[crossing])
        moved = 0
        for u in rng.permutation(bnd).tolist():
            a = assign[u]
            if count[a] == 1:
                continue
            parts, conn = _connectivity(g, assign, u)
            own = int(conn[parts == a].sum())
            ok = (parts != a) & (pw[parts] + vw[u] <= maxpw)
            if not ok.any():
                continue
            cand, cconn = parts[ok], conn[ok]
            i = int(np.argmax(cconn))  # parts are sorted, so ties keep the lowest id
            gain = int(cconn[i]) - own
            if gain > 0:
                dst = int(cand[i])
                assign[u] = dst
                pw[a] -= vw[u]
                pw[dst] += vw[u]
                count[a] -= 1
                count[dst] += 1
                cut -= gain
                moved += 1
        if history is not None:
            history.append(cut)
        if not moved:
            break
    return Partition(assign, p.k)


def _refine_traced(g, p, cfg, rng, history):
    trace = None if history is None else []
    p = refine(g, p, cfg, rng, trace)
    if history is not None:
        history.append(trace)
    return p


def _best_initial(g, cfg, rng, history=None) -> Partition:
    maxpw = cfg.max_part_weight(g.total_vweight)
    best, best_key = None, None
    for _ in range(cfg.init_trials):
        p = initial_partition(g, cfg, rng)
        p = _refine_traced(g, rebalance(g, p, cfg), cfg, rng, history)
        over = max(0, int(p.sizes(g.vweights).max()) - maxpw)
        key = (over, weighted_cut(g, p.assignment))
        if best_key is None or key < best_key:
            best, best_key = p, key
    return best


def _multilevel(g: UndirectedWeightedGraph, cfg: PartitionConfig, rng, history=None) -> Partition:
    graphs, levels = [g], []
    max_vw = max(1, math.ceil(1.5 * g.total_vweight / cfg.coarsen_stop))
    while graphs[-1].n > cfg.coarsen_stop and graphs[-1].num_edges > 0:
        lvl = coarsen(graphs[-1], rng, max_vw)
        if lvl.graph.n > 0.95 * graphs[-1].n or lvl.graph.n < cfg.k:
            break
        levels.append(lvl)
        graphs.append(lvl.graph)

    p = _best_initial(graphs[-1], cfg, rng, history)
    for lvl, fine in zip(reversed(levels), reversed(graphs[:-1])):
        p = Partition(p.assignment[lvl.mapping], p.k)
        p = _refine_traced(fine, rebalance(fine, p, cfg), cfg, rng, history)
    return p


def partition(g: UndirectedWeightedGraph, cfg: PartitionConfig,
              history: list | None = None) -> Partition:
    """Balanced k-way partition minimizing weighted edge cut.

    Nodes without edges are set aside, and each is appended to the currently
    lightest community at the end.  If ``history`` is given, the per-pass cut
    trace of every refine call is appended to it.
    """
    if cfg.k > g.n:
        raise ValueError(f"cannot split {g.n} nodes into k={cfg.k} communities")
    if cfg.k == g.n:
        return Partition(np.arange(g.n, dtype=np.int64), g.n)
    rng = np.random.default_rng(cfg.seed)

    deg = np.diff(g.indptr)
    core = np.flatnonzero(deg > 0)
    if core.size < cfg.k:
        core = np.arange(g.n)
    isolated = np.setdiff1d(np.arange(g.n), core)

    if isolated.size:
        sub = _induced(g, core)
        p_core = _multilevel(sub, cfg, rng, history)
        assign = np.empty(g.n, dtype=np.int64)
        assign[core] = p_core.assignment
        pw = np.bincount(p_core.assignment, weights=sub.vweights, minlength=cfg.k).astype(np.int64)
        for u in isolated.tolist():
            c = int(np.argmin(pw))
            assign[u] = c
            pw[c] += g.vweights[u]
        return Partition(assign, cfg.k)
    return _multilevel(g, cfg, rng, history)


def _induced(g: UndirectedWeightedGraph, nodes: np.ndarray) -> UndirectedWeightedGraph:
    A = g.to_scipy()[nodes][:, nodes]
    return UndirectedWeightedGraph.from_scipy(A, g.vweights[nodes])
