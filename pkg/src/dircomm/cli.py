"""Command-line front end.

    dircomm census     --input g.txt
    dircomm weight     --input g.txt --scheme three_cycle --out g.metis
    dircomm partition  --input g.txt --scheme three_cycle --k 5 --seed 0 --out g.part
    dircomm evaluate   --input g.txt --partition g.part [--labels cats.txt]
    dircomm experiment --input g.txt --k 5 10 --seeds 0 1 2 --out results/

Exit codes: 0 success, 2 usage, 3 malformed input, 4 runtime failure, 5 I/O.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .census import census
from .experiment import ExperimentSpec, run_experiment
from .graph import GraphParseError, degrees, read_snap, reciprocity
from .metis import (format_metis, format_partition, read_partition, write_metis,
                    write_partition)
from .metrics import (evaluate, ground_truth_cut_stats, parse_category_labels,
                      reports_to_csv)
from .partitioner import PartitionConfig, max_imbalance, partition, weighted_cut
from .weighting import WeightingScheme, apply_scheme, weight_histogram

log = logging.getLogger("dircomm")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_RUNTIME, EXIT_IO = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _scheme(name: str) -> WeightingScheme:
    try:
        return WeightingScheme.parse(name)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(path):
    g = read_snap(path)
    if g.m == 0:
        raise GraphParseError(f"{path}: no edges found")
    return g


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_census(args) -> int:
    g = _load(args.input)
    c = census(g)
    rec = int(degrees(g).d_rec.sum())
    row = {"network": args.name or Path(args.input).stem, "n": g.n, "m": g.m,
           "recip": rec, "r": round(reciprocity(g), 6)}
    row.update(zip(["3-cycle", "1-recip", "2-recip", "3-recip"], c.cyclic))
    sys.stdout.write(reports_to_csv([row]))
    if args.out:
        Path(args.out).write_text(c.to_csv())
    return EXIT_OK


def cmd_weight(args) -> int:
    g = _load(args.input)
    wg = apply_scheme(g, args.scheme)
    hist = weight_histogram(wg)
    log.info("%s weights: %s", args.scheme.value,
             ", ".join(f"{w}: {c}" for w, c in sorted(hist.items())))
    if args.out:
        write_metis(wg, args.out)
    else:
        sys.stdout.write(format_metis(wg))
    return EXIT_OK


def cmd_partition(args) -> int:
    g = _load(args.input)
    wg = apply_scheme(g, args.scheme)
    if args.external_partition:
        p = read_partition(args.external_partition, g.n)
    else:
        if args.k is None:
            raise UsageError("--k is required unless --external-partition is given")
        if args.k < 2:
            raise UsageError(f"--k must be at least 2, got {args.k}")
        if args.k > g.n:
            raise UsageError(f"--k {args.k} exceeds the number of nodes ({g.n})")
        cfg = PartitionConfig(k=args.k, seed=args.seed, imbalance=args.imbalance)
        p = partition(wg, cfg)
    log.info("k=%d weighted cut=%d imbalance=%.4f", p.k, weighted_cut(wg, p.assignment),
             max_imbalance(wg, p))
    if args.out:
        write_partition(p, args.out)
    else:
        sys.stdout.write(format_partition(p))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    g = _load(args.input)
    p = read_partition(args.partition, g.n)
    row = dict(vars(evaluate(g, p, args.alpha)))
    if args.labels:
        labels = parse_category_labels(Path(args.labels).read_text(), g)
        st = ground_truth_cut_stats(g, p, labels)
        row.update(category_cut_edges=st.cut_edges, within_cuts=st.within_cuts,
                   within_ratio=st.ratio, within_ratio_defined=st.defined)
    _emit(reports_to_csv([row]), args.out)
    return EXIT_OK


def cmd_experiment(args) -> int:
    status = EXIT_OK
    for path in args.input:
        if not Path(path).exists():
            raise FileNotFoundError(path)
    for path in args.input:
        spec = ExperimentSpec(input=path, schemes=args.schemes, community_counts=args.k,
                              seeds=args.seeds, alpha=args.alpha, imbalance=args.imbalance,
                              out_dir=args.out or "results", best_k_rule=args.best_k_rule)
        rows, summary, table = run_experiment(spec)
        failed = [r for r in rows if r["status"] != "ok"]
        sys.stdout.write(reports_to_csv(table) if table else reports_to_csv(summary))
        if failed:
            log.error("%d of %d runs failed for %s", len(failed), len(rows), path)
            status = EXIT_RUNTIME
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dircomm", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, scheme=False):
        p.add_argument("--input", required=True, help="SNAP edge list")
        if scheme:
            p.add_argument("--scheme", type=_scheme, default=WeightingScheme.THREE_CYCLE,
                           help="unweighted | reciprocal | three_cycle")
        return p

    p = common(sub.add_parser("census", help="network size, reciprocity and cyclic triangle counts"))
    p.add_argument("--name")
    p.add_argument("--out", help="write the full type,count census CSV here")
    p.set_defaults(func=cmd_census)

    p = common(sub.add_parser("weight", help="write the weighted undirected graph in METIS format"),
               scheme=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_weight)

    p = common(sub.add_parser("partition", help="partition with the built-in multilevel partitioner"),
               scheme=True)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--imbalance", type=float, default=1.03)
    p.add_argument("--external-partition", help="use this METIS-style partition file instead")
    p.add_argument("--out")
    p.set_defaults(func=cmd_partition)

    p = common(sub.add_parser("evaluate", help="quality metrics of a partition"))
    p.add_argument("--partition", required=True)
    p.add_argument("--alpha", type=float, default=0.85)
    p.add_argument("--labels", help="'node_id category_id' lines")
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("experiment", help="weighting-scheme sweep over k and seeds")
    p.add_argument("--input", required=True, nargs="+")
    p.add_argument("--schemes", "--scheme", type=_scheme, nargs="+", default=list(WeightingScheme))
    p.add_argument("--k", type=int, nargs="+", default=[5, 10, 25, 50, 100])
    p.add_argument("--seeds", "--seed", type=int, nargs="+", default=[0])
    p.add_argument("--alpha", type=float, default=0.85)
    p.add_argument("--imbalance", type=float, default=1.03)
    p.add_argument("--best-k-rule", choices=["unweighted", "per_scheme"], default="unweighted")
    p.add_argument("--out", help="output directory (default: results)")
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"dircomm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphParseError as exc:
        print(f"dircomm: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"dircomm: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, RuntimeError) as exc:
        print(f"dircomm: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
