#!/usr/bin/env python3
"""Rebuild the worked examples (the dart, the 25-vertex three-level graph and
the F_i family) and print thresholds and tree metadata for each.

With --out DIR the trees are also written as .tree, .dot and .nwk files.
"""
import argparse
import os

from leafroot.construct import optimal_leaf_root
from leafroot.gen import gen_dart, gen_example25, gen_family_f
from leafroot.verify import is_k_leaf_root
from leafroot.wtree import compute_meta, to_dot, to_newick, write_tree

DART_NAMES = ["u0", "u1", "v0", "v1", "v2"]
EX25_NAMES = [f"u{i}" for i in range(10)] + [f"v{i}" for i in range(15)]


def show(name, g, names, out):
    for mode in ("odd", "even"):
        r = optimal_leaf_root(g, mode)
        m = compute_meta(r.tree.copy())
        ok = is_k_leaf_root(r.tree, g, r.k).ok
        print(f"{name:8} {mode:4} n={g.n:5} k={r.k:4} diam={m.diameter:4} rad={m.radius:4} dmin={m.dmin} verified={ok}")
        if out:
            base = os.path.join(out, f"{name}_{mode}")
            with open(base + ".tree", "w") as fh:
                fh.write(write_tree(r.tree, r.k))
            with open(base + ".dot", "w") as fh:
                fh.write(to_dot(r.tree, names))
            with open(base + ".nwk", "w") as fh:
                fh.write(to_newick(r.tree, names) + "\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="directory for tree files")
    ap.add_argument("--max-i", type=int, default=5)
    args = ap.parse_args()
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    show("dart", gen_dart(), DART_NAMES, args.out)
    show("ex25", gen_example25(), EX25_NAMES, args.out)
    for i in range(1, args.max_i + 1):
        show(f"F{i}", gen_family_f(i), None, args.out)


if __name__ == "__main__":
    main()
