"""Weighting-scheme comparison sweep: weight -> partition -> evaluate.

Every (scheme, k, seed) run lands in ``runs.csv``.  ``summary.csv`` holds
per-(k, scheme) medians and, when the unweighted scheme is part of the
sweep, the relative change of the 3-cycle cut ratio against it at matched
seeds.  ``best_k.csv`` reports that change at the k with the highest
LinkRank.
"""
from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .census import edge_cycle_flags
from .graph import collapse_to_undirected, read_snap
from .metrics import (evaluate, k_cycle_cut_counts, k_cycle_cut_ratio, pagerank, report_row,
                      reports_to_csv)
from .partitioner import PartitionConfig, partition, weighted_cut
from .weighting import WeightingScheme, apply_scheme

log = logging.getLogger(__name__)

DEFAULT_COMMUNITY_COUNTS = (5, 10, 25, 50, 100)


@dataclass
class ExperimentSpec:
    input: Path
    schemes: list = field(default_factory=lambda: list(WeightingScheme))
    community_counts: list = field(default_factory=lambda: list(DEFAULT_COMMUNITY_COUNTS))
    seeds: list = field(default_factory=lambda: [0])
    alpha: float = 0.85
    imbalance: float = 1.03
    out_dir: Path = Path("results")
    best_k_rule: str = "unweighted"  # or "per_scheme"
    name: str | None = None

    def __post_init__(self):
        self.input = Path(self.input)
        self.out_dir = Path(self.out_dir)
        self.schemes = [WeightingScheme.parse(s) if isinstance(s, str) else s for s in self.schemes]
        if not self.schemes:
            raise ValueError("at least one weighting scheme is required")
        if not self.community_counts:
            raise ValueError("at least one community count is required")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if self.best_k_rule not in ("unweighted", "per_scheme"):
            raise ValueError(f"unknown best-k rule {self.best_k_rule!r}")
        if self.name is None:
            self.name = self.input.stem


RUN_COLUMNS = ["network", "scheme", "k", "seed", "Q", "Q_d", "Q_LR", "recip_preserved",
               "cycle3_preserved", "cut_edges", "cut2_ratio", "cut3_ratio",
               "cut2_edges", "cycle2_edges", "cut3_edges", "cycle3_edges", "weighted_cut", "max_part", "seconds", "status", "error"]


def run_sweep(spec: ExperimentSpec) -> list[dict]:
    g = read_snap(spec.input)
    flags = edge_cycle_flags(g)
    pr = pagerank(g, spec.alpha)
    ud = collapse_to_undirected(g)
    rows = []
    for scheme in spec.schemes:
        wg = apply_scheme(g, scheme, flags)
        for k in spec.community_counts:
            for seed in spec.seeds:
                row = dict.fromkeys(RUN_COLUMNS, "")
                row.update(network=spec.name, scheme=scheme.value, k=k, seed=seed)
                t0 = time.perf_counter()
                try:
                    cfg = PartitionConfig(k=k, seed=seed, imbalance=spec.imbalance)
                    p = partition(wg, cfg)
                    rep = evaluate(g, p, spec.alpha, flags=flags, pr=pr, ud=ud)
                    row.update(report_row(rep))
                    c2, t2 = k_cycle_cut_counts(g, p, 2)
                    c3, t3 = k_cycle_cut_counts(g, p, 3, flags)
                    row.update(cut2_ratio=k_cycle_cut_ratio(g, p, 2),
                               cut3_ratio=k_cycle_cut_ratio(g, p, 3, flags),
                               cut2_edges=c2, cycle2_edges=t2, cut3_edges=c3, cycle3_edges=t3,
                               weighted_cut=weighted_cut(wg, p.assignment),
                               max_part=int(p.sizes().max()), status="ok")
                except Exception as exc:  # recorded per run, reported by the caller
                    log.error("run %s k=%s seed=%s failed: %s", scheme.value, k, seed, exc)
                    row.update(status="error", error=str(exc))
                row["seconds"] = round(time.perf_counter() - t0, 4)
                rows.append(row)
    return rows


def _median(vals):
    vals = [v for v in vals if not math.isnan(v)]
    return float(np.median(vals)) if vals else float("nan")


def summarize(rows: list[dict]) -> list[dict]:
    ok = [r for r in rows if r["status"] == "ok"]
    schemes = list(dict.fromkeys(r["scheme"] for r in ok))
    ks = sorted({int(r["k"]) for r in ok})
    base = {(int(r["k"]), int(r["seed"])): float(r["cut3_ratio"])
            for r in ok if r["scheme"] == WeightingScheme.UNWEIGHTED.value}
    relative = bool(base) and len(schemes) > 1
    out = []
    for k in ks:
        for s in schemes:
            runs = [r for r in ok if int(r["k"]) == k and r["scheme"] == s]
            if not runs:
                continue
            row = {"network": runs[0]["network"], "k": k, "scheme": s, "runs": len(runs)}
            for col in ("Q", "Q_d", "Q_LR", "recip_preserved", "cycle3_preserved", "cut3_ratio"):
                row[col] = _median([float(r[col]) for r in runs])
            if relative:
                rel = []
                for r in runs:
                    b = base.get((k, int(r["seed"])))
                    rel.append(float(r["cut3_ratio"]) / b if b else float("nan"))
                row["relative_cut3_ratio"] = _median(rel)
                row["relative_reduction"] = _median([1.0 - x for x in rel])
            out.append(row)
    return out


def best_k_table(summary: list[dict], rule: str = "unweighted") -> list[dict]:
    """Percentage decrease of the 3-cycle cut ratio at the best-LinkRank k."""
    if not summary or "relative_reduction" not in summary[0]:
        return []
    unw = WeightingScheme.UNWEIGHTED.value
    out = []
    for s in dict.fromkeys(r["scheme"] for r in summary):
        if s == unw:
            continue
        ref = unw if rule == "unweighted" else s
        cands = [r for r in summary if r["scheme"] == ref and not math.isnan(r["Q_LR"])]
        if not cands:
            continue
        k = max(cands, key=lambda r: (r["Q_LR"], -r["k"]))["k"]
        row = next(r for r in summary if r["scheme"] == s and r["k"] == k)
        out.append({"network": row["network"], "scheme": s, "k": k,
                    "pct_decrease": 100.0 * row["relative_reduction"]})
    return out


def run_experiment(spec: ExperimentSpec) -> tuple[list[dict], list[dict], list[dict]]:
    rows = run_sweep(spec)
    summary = summarize(rows)
    table = best_k_table(summary, spec.best_k_rule)
    spec.out_dir.mkdir(parents=True, exist_ok=True)
    prefix = spec.out_dir / spec.name
    Path(f"{prefix}_runs.csv").write_text(reports_to_csv(rows))
    Path(f"{prefix}_summary.csv").write_text(reports_to_csv(summary))
    Path(f"{prefix}_best_k.csv").write_text(reports_to_csv(table))
    return rows, summary, table


def read_csv(path) -> list[dict]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))
