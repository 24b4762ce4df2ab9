"""METIS graph and partition file formats.

Graph files: a header ``n m fmt`` followed by one line per vertex listing
1-based neighbor ids, each followed by its edge weight when ``fmt`` ends in
1 (and prefixed by the vertex weight when its middle digit is 1).  Lines
starting with ``%`` are comments.  Partition files hold one community id per
line, in vertex order.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .graph import GraphParseError, UndirectedWeightedGraph
from .partitioner import Partition


class MetisFormatError(GraphParseError):
    pass


def format_metis(g: UndirectedWeightedGraph) -> str:
    vertex_weights = bool(np.any(g.vweights != 1))
    lines = [f"{g.n} {g.num_edges} {'011' if vertex_weights else '001'}"]
    for u in range(g.n):
        toks = [str(int(g.vweights[u]))] if vertex_weights else []
        for v, w in zip(g.neighbors(u).tolist(), g.neighbor_weights(u).tolist()):
            toks += [str(v + 1), str(w)]
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def write_metis(g: UndirectedWeightedGraph, path) -> None:
    Path(path).write_text(format_metis(g))


def parse_metis(text: str) -> UndirectedWeightedGraph:
    lines = [(i, ln) for i, ln in enumerate(text.splitlines(), 1) if not ln.startswith("%")]
    if not lines or not lines[0][1].strip():
        raise MetisFormatError("missing header line", 1)
    hno, header = lines[0]
    try:
        hdr = [int(x) for x in header.split()]
    except ValueError:
        raise MetisFormatError(f"bad header {header!r}", hno) from None
    if len(hdr) < 2:
        raise MetisFormatError(f"header needs at least 'n m', got {header!r}", hno)
    n, m = hdr[0], hdr[1]
    fmt = header.split()[2].zfill(3) if len(hdr) > 2 else "000"
    ncon = hdr[3] if len(hdr) > 3 else 1
    if fmt[0] == "1" or ncon != 1:
        raise MetisFormatError("vertex sizes and multi-constraint weights are not supported", hno)
    has_vw, has_ew = fmt[1] == "1", fmt[2] == "1"

    body = lines[1:]
    if len(body) < n or any(ln.strip() for _, ln in body[n:]):
        raise MetisFormatError(f"header says {n} vertices, found {len(body)} vertex lines", hno)
    vweights = np.ones(n, dtype=np.int64)
    src, dst, wts = [], [], []
    for u, (lineno, ln) in enumerate(body[:n]):
        try:
            toks = [int(x) for x in ln.split()]
        except ValueError:
            raise MetisFormatError(f"non-integer token in {ln!r}", lineno) from None
        if has_vw:
            if not toks:
                raise MetisFormatError("missing vertex weight", lineno)
            vweights[u], toks = toks[0], toks[1:]
        step = 2 if has_ew else 1
        if len(toks) % step:
            raise MetisFormatError("odd number of tokens in neighbor/weight list", lineno)
        for j in range(0, len(toks), step):
            v = toks[j] - 1
            if not 0 <= v < n or v == u:
                raise MetisFormatError(f"invalid neighbor id {toks[j]}", lineno)
            w = toks[j + 1] if has_ew else 1
            if w < 1:
                raise MetisFormatError(f"non-positive edge weight {w}", lineno)
            src.append(u)
            dst.append(v)
            wts.append(w)

    if len(src) != 2 * m:
        raise MetisFormatError(f"header says {m} edges, adjacency lists hold {len(src)} entries")
    src, dst, wts = (np.asarray(a, dtype=np.int64) for a in (src, dst, wts))
    fwd = dict(zip(zip(src.tolist(), dst.tolist()), wts.tolist()))
    if len(fwd) != len(src):
        raise MetisFormatError("duplicate neighbor entry")
    for (u, v), w in fwd.items():
        if fwd.get((v, u)) != w:
            raise MetisFormatError(f"adjacency not symmetric at vertices {u + 1}, {v + 1}")
    keep = src < dst
    return UndirectedWeightedGraph.from_upper(n, src[keep], dst[keep], wts[keep], vweights)


def read_metis(path) -> UndirectedWeightedGraph:
    return parse_metis(Path(path).read_text())


def format_partition(p: Partition) -> str:
    return "".join(f"{c}\n" for c in p.assignment.tolist())


def write_partition(p: Partition, path) -> None:
    Path(path).write_text(format_partition(p))


def parse_partition(text: str, n: int) -> Partition:
    vals = []
    for lineno, ln in enumerate(text.splitlines(), 1):
        s = ln.strip()
        if not s:
            continue
        try:
            vals.append(int(s))
        except ValueError:
            raise MetisFormatError(f"non-integer community id {s!r}", lineno) from None
    if len(vals) != n:
        raise MetisFormatError(f"partition has {len(vals)} entries, graph has {n} vertices")
    if vals and min(vals) < 0:
        raise MetisFormatError("negative community id")
    return Partition.from_assignment(vals)


def read_partition(path, n: int) -> Partition:
    return parse_partition(Path(path).read_text(), n)
