"""Partition quality measures for directed graphs."""
from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, fields

import numpy as np

from .census import EdgeCycleFlags, edge_cycle_flags
from .graph import (DirectedGraph, GraphParseError, UndirectedWeightedGraph,
                    collapse_to_undirected, degrees)
from .partitioner import Partition


class ConvergenceError(RuntimeError):
    pass


def _check(n: int, p: Partition):
    if p.n != n:
        raise ValueError(f"partition covers {p.n} nodes, graph has {n}")


def modularity(g: UndirectedWeightedGraph, p: Partition) -> float:
    """Newman modularity of ``p`` on the 0/1 adjacency of ``g``.

    Edge weights are ignored: any edge counts as 1.
    """
    _check(g.n, p)
    m = g.num_edges
    if m == 0:
        raise ValueError("modularity is undefined for a graph with no edges")
    c = p.assignment
    u, v, _ = g.edge_list()
    internal = np.bincount(c[u][c[u] == c[v]], minlength=p.k)
    deg = np.bincount(c, weights=np.diff(g.indptr), minlength=p.k)
    return float(np.sum(internal / m - (deg / (2 * m)) ** 2))


def directed_modularity(g: DirectedGraph, p: Partition) -> float:
    """Directed modularity with (out + rec) x (in + rec) null model."""
    _check(g.n, p)
    m = g.m
    if m == 0:
        raise ValueError("directed modularity is undefined for a graph with no edges")
    d = degrees(g)
    c = p.assignment
    same = c[g.sources] == c[g.indices]
    internal = np.bincount(c[g.sources][same], minlength=p.k)
    kout = np.bincount(c, weights=d.d_out + d.d_rec, minlength=p.k)
    kin = np.bincount(c, weights=d.d_in + d.d_rec, minlength=p.k)
    return float(np.sum(internal - kout * kin / m) / m)


@dataclass(frozen=True, eq=False)
class PageRankVector:
    pi: np.ndarray
    alpha: float
    tolerance: float
    iterations: int


def pagerank(g: DirectedGraph, alpha: float = 0.85, tolerance: float = 1e-12,
             max_iter: int = 100_000) -> PageRankVector:
    """Stationary vector of alpha * P + (1 - alpha) / n * 11^T by power iteration.

    P is the row-stochastic transition matrix; rows of nodes without
    out-edges are uniform.  Stops once the L1 change drops below
    ``tolerance``.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    n = g.n
    outdeg = np.diff(g.indptr).astype(np.float64)
    dangling = outdeg == 0
    inv = np.where(dangling, 0.0, 1.0 / np.maximum(outdeg, 1))
    PT = g.to_scipy().T.tocsr()  # pi @ P computed as P^T @ pi
    pi = np.full(n, 1.0 / n)
    for it in range(1, max_iter + 1):
        nxt = alpha * (PT @ (pi * inv))
        nxt += (alpha * pi[dangling].sum() + (1 - alpha)) / n
        nxt /= nxt.sum()
        delta = np.abs(nxt - pi).sum()
        pi = nxt
        if delta < tolerance:
            return PageRankVector(pi, alpha, tolerance, it)
    raise ConvergenceError(f"PageRank did not converge within {max_iter} iterations "
                           f"(last L1 change {delta:.3e})")


def linkrank(g: DirectedGraph, p: Partition, alpha: float = 0.85,
             pr: PageRankVector | None = None) -> float:
    """LinkRank modularity, evaluated without forming the dense Google matrix."""
    _check(g.n, p)
    if pr is None:
        pr = pagerank(g, alpha)
    alpha, pi, n, c = pr.alpha, pr.pi, g.n, p.assignment
    outdeg = np.diff(g.indptr)
    size = np.bincount(c, minlength=p.k)
    # share of i's out-edges that stay in i's community
    same = (c[g.sources] == c[g.indices]).astype(np.float64)
    stay_edges = np.bincount(g.sources, weights=same, minlength=n)
    stay = np.where(outdeg > 0, stay_edges / np.maximum(outdeg, 1), size[c] / n)
    inside = np.sum(pi * (alpha * stay + (1 - alpha) * size[c] / n))
    expected = np.sum(np.bincount(c, weights=pi, minlength=p.k) ** 2)
    return float(inside - expected)


def k_cycle_cut_counts(g: DirectedGraph, p: Partition, k: int,
                       flags: EdgeCycleFlags | None = None) -> tuple[int, int]:
    """(cut, total) directed k-cycle edges; k = 2: reciprocal, k = 3: any rk flag set."""
    _check(g.n, p)
    if k == 2:
        member = g.reciprocal
    elif k == 3:
        member = (flags if flags is not None else edge_cycle_flags(g)).any
    else:
        raise ValueError(f"k-cycle cut ratio is implemented for k in (2, 3), got {k}")
    c = p.assignment
    cut = c[g.sources] != c[g.indices]
    return int((cut & member).sum()), int(member.sum())


def k_cycle_cut_ratio(g: DirectedGraph, p: Partition, k: int,
                      flags: EdgeCycleFlags | None = None) -> float:
    """Fraction of k-cycle edges whose endpoints lie in different communities;
    0 if there are none."""
    cut, total = k_cycle_cut_counts(g, p, k, flags)
    return cut / total if total else 0.0


def cut_edges(g: DirectedGraph, p: Partition) -> int:
    c = p.assignment
    return int((c[g.sources] != c[g.indices]).sum())


@dataclass
class MetricsReport:
    Q: float
    Q_d: float
    Q_LR: float
    recip_preserved: float
    cycle3_preserved: float
    cut_edges: int

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def evaluate(g: DirectedGraph, p: Partition, alpha: float = 0.85,
             flags: EdgeCycleFlags | None = None, pr: PageRankVector | None = None,
             ud: UndirectedWeightedGraph | None = None) -> MetricsReport:
    if flags is None:
        flags = edge_cycle_flags(g)
    if ud is None:
        ud = collapse_to_undirected(g)
    return MetricsReport(
        Q=modularity(ud, p),
        Q_d=directed_modularity(g, p),
        Q_LR=linkrank(g, p, alpha, pr),
        recip_preserved=_preserved(*k_cycle_cut_counts(g, p, 2)),
        cycle3_preserved=_preserved(*k_cycle_cut_counts(g, p, 3, flags)),
        cut_edges=cut_edges(g, p),
    )


def _preserved(cut: int, total: int) -> float:
    return (total - cut) / total if total else 1.0


def reports_to_csv(rows: list[dict]) -> str:
    """CSV with one row per dict; column order follows the first row."""
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def report_row(report: MetricsReport, **keys) -> dict:
    return {**keys, **asdict(report)}


# --- ground-truth categories -------------------------------------------------

@dataclass(frozen=True, eq=False)
class CategoryLabels:
    """Dense category id per node, -1 for unlabeled nodes."""

    labels: np.ndarray

    @property
    def n_categories(self) -> int:
        return int(self.labels.max()) + 1 if (self.labels >= 0).any() else 0


def parse_category_labels(text: str, g: DirectedGraph) -> CategoryLabels:
    """Read ``node_id category_id`` lines; node ids are the graph's original labels."""
    index = {int(lab): i for i, lab in enumerate(g.labels.tolist())}
    raw = np.full(g.n, -1, dtype=np.int64)
    seen = {}
    for lineno, ln in enumerate(text.splitlines(), 1):
        s = ln.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) < 2:
            raise GraphParseError(f"expected 'node_id category_id', got {s!r}", lineno)
        try:
            node, cat = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"non-integer token in {s!r}", lineno) from None
        if node not in index:
            continue
        if seen.get(node, cat) != cat:
            raise GraphParseError(f"node {node} has more than one category", lineno)
        seen[node] = cat
        raw[index[node]] = cat
    labeled = raw >= 0
    out = np.full(g.n, -1, dtype=np.int64)
    if labeled.any():
        out[labeled] = np.unique(raw[labeled], return_inverse=True)[1]
    return CategoryLabels(out)


@dataclass
class CategoryCutStats:
    cut_edges: int
    within_cuts: int
    ratio: float
    defined: bool  # False when nothing is cut and ratio is reported as 0


def ground_truth_cut_stats(g: DirectedGraph, p: Partition,
                           labels: CategoryLabels) -> CategoryCutStats:
    """Cut edges, how many of them join two nodes of the same category, and that share."""
    _check(g.n, p)
    if not (labels.labels >= 0).any():
        raise ValueError("category labels cover no node of the graph")
    c, lab = p.assignment, labels.labels
    s, t = g.sources, g.indices
    cut = c[s] != c[t]
    within = cut & (lab[s] >= 0) & (lab[s] == lab[t])
    n_cut, n_within = int(cut.sum()), int(within.sum())
    if n_cut == 0:
        return CategoryCutStats(0, 0, 0.0, False)
    return CategoryCutStats(n_cut, n_within, n_within / n_cut, True)
