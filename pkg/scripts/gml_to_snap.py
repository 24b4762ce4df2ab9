"""Convert a directed GML network to a SNAP-style edge list.

Used to build ``data/celegans.txt`` from Newman's ``celegansneural.gml``
(a copy ships with the igraph source distribution under
``vendor/source/igraph/examples/simple/``).  Node labels are written as
the SNAP ids; edge values and duplicate edges are written through and left
for the SNAP reader to drop.

    python scripts/gml_to_snap.py celegansneural.gml data/celegans.txt
"""
import argparse
import re

NODE_RE = re.compile(r'node\s*\[\s*id\s+(\d+)\s+label\s+"([^"]*)"')
EDGE_RE = re.compile(r"edge\s*\[\s*source\s+(\d+)\s+target\s+(\d+)")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("gml")
    ap.add_argument("out")
    ap.add_argument("--name", default="C. elegans neural network")
    args = ap.parse_args()

    with open(args.gml) as f:
        text = f.read()
    labels = {int(i): lab for i, lab in NODE_RE.findall(text)}
    if not all(lab.isdigit() for lab in labels.values()):
        # non-numeric labels: fall back to GML ids
        labels = {i: str(i) for i in labels}
    edges = [(labels[int(s)], labels[int(t)]) for s, t in EDGE_RE.findall(text)]

    with open(args.out, "w") as f:
        f.write(f"# Directed graph: {args.name}\n")
        f.write(f"# Converted from {args.gml.rsplit('/', 1)[-1]} (edge values dropped)\n")
        f.write(f"# Nodes: {len(labels)} Edges: {len(edges)}\n")
        f.write("# FromNodeId\tToNodeId\n")
        for u, v in edges:
            f.write(f"{u}\t{v}\n")
    print(f"wrote {len(edges)} edge lines to {args.out}")


if __name__ == "__main__":
    main()
