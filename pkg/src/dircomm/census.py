"""Directed triangle census and per-edge 3-cycle participation flags.

A triangle is an unordered node triple with an edge (in some direction) on
each of its three pairs.  Up to isomorphism there are seven of them; four
contain a directed 3-cycle and are keyed by how many of the three pairs are
reciprocated.  Counts are over unordered triples.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

import numpy as np

from .graph import DirectedGraph


class TriangleType(enum.Enum):
    # non-cyclic: transitive, and the two ways to hang a one-way node off a reciprocal pair
    FEED_FORWARD = "feed-forward"
    ONE_RECIP_OUT = "1-recip-out"
    ONE_RECIP_IN = "1-recip-in"
    # cyclic, by number of reciprocal pairs
    CYCLE = "3-cycle"
    CYCLE_1RECIP = "1-recip"
    CYCLE_2RECIP = "2-recip"
    CYCLE_3RECIP = "3-recip"

    @property
    def is_cyclic(self) -> bool:
        return self in CYCLIC_TYPES

    @property
    def n_reciprocal(self) -> int:
        return _N_RECIP[self]


CYCLIC_TYPES = (TriangleType.CYCLE, TriangleType.CYCLE_1RECIP,
                TriangleType.CYCLE_2RECIP, TriangleType.CYCLE_3RECIP)
NONCYCLIC_TYPES = (TriangleType.FEED_FORWARD, TriangleType.ONE_RECIP_OUT,
                   TriangleType.ONE_RECIP_IN)
_N_RECIP = {TriangleType.FEED_FORWARD: 0, TriangleType.ONE_RECIP_OUT: 1,
            TriangleType.ONE_RECIP_IN: 1, **{t: i for i, t in enumerate(CYCLIC_TYPES)}}


@dataclass
class TriangleCensus:
    counts: dict = field(default_factory=lambda: {t: 0 for t in TriangleType})

    def __getitem__(self, t: TriangleType) -> int:
        return self.counts[t]

    @property
    def cyclic(self) -> tuple[int, int, int, int]:
        """Counts of cyclic triples with 0, 1, 2, 3 reciprocal pairs."""
        return tuple(self.counts[t] for t in CYCLIC_TYPES)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["type", "count"])
        for t in CYCLIC_TYPES + NONCYCLIC_TYPES:
            w.writerow([t.value, self.counts[t]])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TriangleCensus":
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls({TriangleType(r["type"]): int(r["count"]) for r in rows})


@dataclass(frozen=True)
class EdgeCycleFlags:
    """``flags[e, k]`` is set when directed edge ``e`` lies in a cyclic
    triangle with ``k`` reciprocal pairs; edge ids follow the graph's CSR order."""

    flags: np.ndarray

    @property
    def r0(self):
        return self.flags[:, 0]

    @property
    def r1(self):
        return self.flags[:, 1]

    @property
    def r2(self):
        return self.flags[:, 2]

    @property
    def r3(self):
        return self.flags[:, 3]

    @property
    def any(self) -> np.ndarray:
        return self.flags.any(axis=1)

    def __eq__(self, other):
        return isinstance(other, EdgeCycleFlags) and np.array_equal(self.flags, other.flags)

    __hash__ = None


def classify_triple(g: DirectedGraph, u: int, v: int, w: int) -> TriangleType | None:
    """Type of the triangle on {u, v, w}, or None if some pair is unconnected."""
    if len({u, v, w}) < 3:
        raise ValueError(f"triple must have distinct nodes, got {(u, v, w)}")
    e = g.has_edge
    pairs = [(u, v), (v, w), (w, u)]
    fwd = [e(a, b) for a, b in pairs]
    bwd = [e(b, a) for a, b in pairs]
    if not all(f or b for f, b in zip(fwd, bwd)):
        return None
    n_rec = sum(f and b for f, b in zip(fwd, bwd))
    if all(fwd) or all(bwd):
        return CYCLIC_TYPES[n_rec]
    if n_rec == 0:
        return TriangleType.FEED_FORWARD
    # one reciprocal pair, the third node x has both one-way edges pointing the same way
    i = next(k for k in range(3) if fwd[k] and bwd[k])
    x = (u, v, w)[(i + 2) % 3]
    a = pairs[i][0]
    return TriangleType.ONE_RECIP_OUT if e(x, a) else TriangleType.ONE_RECIP_IN


def _cyclic_triples(g: DirectedGraph) -> Iterator[tuple[int, int, int, int]]:
    """Yield ``(s, t, w, n_rec)`` once per cyclic triple, with s -> t -> w -> s.

    Walks each directed edge (s, t) and intersects out(t) with in(s).  A
    directed cycle is reported from its smallest node only, and when both
    orientations of the triple are cycles, only the one with t < w.
    """
    outs, ins = g.out_sets, g.in_sets
    for s, t in g.edges():
        if t < s:
            continue
        out_s, in_s = outs[s], ins[s]
        out_t = outs[t]
        for w in out_t & in_s:
            if w < s:
                continue
            # reverse orientation s -> w -> t -> s
            if w < t and w in out_s and t in outs[w] and s in out_t:
                continue
            n_rec = (s in out_t) + (t in outs[w]) + (w in out_s)
            yield s, t, w, n_rec


def census(g: DirectedGraph, include_noncyclic: bool = True) -> TriangleCensus:
    """Count triangles of every type.

    The cyclic counts come from the implicit cycle walk.  The three
    non-cyclic counts need a pass over all undirected triangles and can be
    skipped with ``include_noncyclic=False`` (they are then left at 0).
    """
    res = TriangleCensus()
    cyc = [0, 0, 0, 0]
    for _, _, _, n_rec in _cyclic_triples(g):
        cyc[n_rec] += 1
    for t, c in zip(CYCLIC_TYPES, cyc):
        res.counts[t] = c
    if include_noncyclic:
        res.counts.update(_noncyclic_counts(g, cyc))
    return res


def _noncyclic_counts(g: DirectedGraph, cyc) -> dict:
    outs, ins = g.out_sets, g.in_sets
    rec = [o & i for o, i in zip(outs, ins)]
    oneway_out = [o - r for o, r in zip(outs, rec)]
    oneway_in = [i - r for i, r in zip(ins, rec)]

    # triangles with no reciprocal pair, cyclic or not
    plain = [o | i for o, i in zip(oneway_out, oneway_in)]
    t0 = 0
    for u in range(g.n):
        for v in plain[u]:
            if v > u:
                t0 += sum(1 for w in plain[u] & plain[v] if w > v)

    # triangles with exactly one reciprocal pair {a, b}, third node x
    rec_out = rec_in = 0
    for a in range(g.n):
        for b in rec[a]:
            if b <= a:
                continue
            rec_out += len(oneway_in[a] & oneway_in[b])   # x -> a, x -> b
            rec_in += len(oneway_out[a] & oneway_out[b])  # a -> x, b -> x
    return {TriangleType.FEED_FORWARD: t0 - cyc[0],
            TriangleType.ONE_RECIP_OUT: rec_out,
            TriangleType.ONE_RECIP_IN: rec_in}


def _edge_lookup(g: DirectedGraph) -> dict:
    return {e: i for i, e in enumerate(g.edges())}


def edge_cycle_flags(g: DirectedGraph) -> EdgeCycleFlags:
    """Per-edge indicators r0..r3 from the implicit cycle walk.

    For a cyclic triple with k reciprocal pairs, ``rk`` is set on every
    directed edge among its three pairs (both directions of a reciprocal
    pair).
    """
    flags = np.zeros((g.m, 4), dtype=bool)
    eid = _edge_lookup(g)
    for s, t, w, k in _cyclic_triples(g):
        for a, b in ((s, t), (t, w), (w, s)):
            flags[eid[a, b], k] = True
            j = eid.get((b, a))
            if j is not None:
                flags[j, k] = True
    return EdgeCycleFlags(flags)


BRUTE_FORCE_MAX_N = 2000


def _brute_force_scan(g: DirectedGraph, max_n: int):
    if g.n > max_n:
        raise ValueError(f"brute-force scan capped at n <= {max_n}, graph has n = {g.n}")
    A = np.zeros((g.n, g.n), dtype=bool)
    A[g.sources, g.indices] = True
    for i, j in combinations(range(g.n), 2):
        if not (A[i, j] or A[j, i]):
            continue
        ks = np.arange(j + 1, g.n)
        ik, ki, jk, kj = A[i, ks], A[ks, i], A[j, ks], A[ks, j]
        conn = (ik | ki) & (jk | kj)
        if not conn.any():
            continue
        ks, ik, ki, jk, kj = ks[conn], ik[conn], ki[conn], jk[conn], kj[conn]
        ij, ji = A[i, j], A[j, i]
        cyc = (ij & jk & ki) | (ji & ik & kj)
        n_rec = int(ij & ji) + (ik & ki).astype(int) + (jk & kj).astype(int)
        yield i, j, ks, cyc, n_rec, (ik, ki, jk, kj)


def brute_force_census(g: DirectedGraph, max_n: int = BRUTE_FORCE_MAX_N) -> TriangleCensus:
    """Reference census from a scan of all unordered triples (O(n^3))."""
    res = TriangleCensus()
    A = None
    for i, j, ks, cyc, n_rec, (ik, ki, jk, kj) in _brute_force_scan(g, max_n):
        for r in range(4):
            res.counts[CYCLIC_TYPES[r]] += int(np.sum(cyc & (n_rec == r)))
        nc = ~cyc
        res.counts[TriangleType.FEED_FORWARD] += int(np.sum(nc & (n_rec == 0)))
        one = nc & (n_rec == 1)
        if one.any():
            if A is None:
                A = np.zeros((g.n, g.n), dtype=bool)
                A[g.sources, g.indices] = True
            # the node outside the reciprocal pair; "out" if it sends both edges
            ij_rec = A[i, j] & A[j, i]
            ik_rec = ik & ki
            src_out = np.where(ij_rec, ki & kj, np.where(ik_rec, A[j, i] & A[j, ks], A[i, j] & A[i, ks]))
            res.counts[TriangleType.ONE_RECIP_OUT] += int(np.sum(one & src_out))
            res.counts[TriangleType.ONE_RECIP_IN] += int(np.sum(one & ~src_out))
    return res


def brute_force_edge_cycle_flags(g: DirectedGraph, max_n: int = BRUTE_FORCE_MAX_N) -> EdgeCycleFlags:
    flags = np.zeros((g.m, 4), dtype=bool)
    eid = _edge_lookup(g)
    for i, j, ks, cyc, n_rec, _ in _brute_force_scan(g, max_n):
        for k, r in zip(ks[cyc].tolist(), n_rec[cyc].tolist()):
            for a, b in ((i, j), (j, i), (i, k), (k, i), (j, k), (k, j)):
                e = eid.get((a, b))
                if e is not None:
                    flags[e, r] = True
    return EdgeCycleFlags(flags)
