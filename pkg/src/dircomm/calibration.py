"""Bridge-node toy network and a calibration report against reference values.

Three bidirected cliques {1..5}, {6..10}, {11..13} and a bridge node 15 that
is reciprocally linked to every member of the first clique, points to every
member of the second and is pointed to by every member of the third.
Partition A puts the bridge with the first clique, partition B with the
second.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import DirectedGraph, collapse_to_undirected
from .metrics import directed_modularity, linkrank, modularity, reports_to_csv
from .partitioner import Partition

CLIQUES = ((1, 2, 3, 4, 5), (6, 7, 8, 9, 10), (11, 12, 13))
BRIDGE = 15
ALPHAS = (0.85, 0.9, 0.99)


def bridge_network() -> DirectedGraph:
    edges = []
    for cl in CLIQUES:
        edges += itertools.permutations(cl, 2)
    edges += [(BRIDGE, a) for a in CLIQUES[0]] + [(a, BRIDGE) for a in CLIQUES[0]]
    edges += [(BRIDGE, a) for a in CLIQUES[1]]
    edges += [(a, BRIDGE) for a in CLIQUES[2]]
    labels = sorted({x for e in edges for x in e})
    index = {lab: i for i, lab in enumerate(labels)}
    return DirectedGraph.from_edges(len(labels), [(index[a], index[b]) for a, b in edges],
                                    labels)


def bridge_partition(g: DirectedGraph, bridge_side: int) -> Partition:
    """Communities = cliques; the bridge joins clique ``bridge_side``."""
    lab = g.labels.tolist()
    comm = [next(i for i, cl in enumerate(CLIQUES) if x in cl) if x != BRIDGE else bridge_side
            for x in lab]
    return Partition(np.asarray(comm, dtype=np.int64), len(CLIQUES))


@dataclass
class CalibrationRow:
    partition: str
    metric: str
    alpha: float | None
    computed: float
    reference: float | None
    matched: bool | None


def calibrate(reference: dict, tolerance: float = 1e-3) -> list[CalibrationRow]:
    """Compare the toy network's metrics with ``reference``.

    ``reference`` maps (partition name, metric) to a value or a tuple of
    acceptable values; LinkRank is matched if any alpha in ``ALPHAS`` lands
    within ``tolerance`` of one of them.
    """
    def row(name, metric, alpha, val, refs):
        if refs is None:
            return CalibrationRow(name, metric, alpha, val, None, None)
        refs = refs if isinstance(refs, tuple) else (refs,)
        r = min(refs, key=lambda x: abs(val - x))
        return CalibrationRow(name, metric, alpha, val, r, abs(val - r) <= tolerance)

    g = bridge_network()
    ud = collapse_to_undirected(g)
    rows = []
    for name, side in (("A", 0), ("B", 1)):
        p = bridge_partition(g, side)
        ref = {m: reference.get((name, m)) for m in ("Q", "Q_d", "Q_LR")}
        rows.append(row(name, "Q", None, modularity(ud, p), ref["Q"]))
        rows.append(row(name, "Q_d", None, directed_modularity(g, p), ref["Q_d"]))
        rows += [row(name, "Q_LR", a, linkrank(g, p, a), ref["Q_LR"]) for a in ALPHAS]
    return rows


def all_matched(rows: list[CalibrationRow]) -> bool:
    """Q and Q_d match, and Q_LR matches at some alpha, for every referenced partition."""
    ok = True
    for name in dict.fromkeys(r.partition for r in rows):
        mine = [r for r in rows if r.partition == name and r.reference is not None]
        fixed = [r.matched for r in mine if r.metric != "Q_LR"]
        lr = [r.matched for r in mine if r.metric == "Q_LR"]
        ok &= all(fixed) and (not lr or any(lr))
    return ok


def write_report(rows: list[CalibrationRow], path) -> str:
    """CSV of every comparison plus a one-line verdict comment at the top."""
    verdict = "all reference values matched" if all_matched(rows) else \
        "discrepancy: the reconstruction does not reproduce the reference values"
    body = reports_to_csv([{**vars(r), "delta": "" if r.reference is None
                            else r.computed - r.reference} for r in rows])
    text = f"# {verdict}\n{body}"
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)
    return text
