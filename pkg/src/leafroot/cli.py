"""Command-line interface.

Exit codes:
  0  success / yes
  1  I/O, parse or usage error; verify found violations
  2  input graph is not trivially perfect (construct, recognize)
  3  recognize: not a k-leaf power; oracle: disagreement
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from .construct import PARITY_MODES, optimal_leaf_root
from .cotree import build_cotree, cotree_to_graph, dump_cotree
from .gen import (
    ENUM_MAX_N,
    dart_cotree,
    enumerate_small_tpgs,
    example25_cotree,
    family_f_cotree,
    gen_star,
    random_tpg_cotree,
)
from .graph import GraphFormatError, NotTPGError, parse_graph, remove_true_twins, write_graph
from .verify import LeafSetMismatch, is_k_leaf_root, oracle_sweep, rows_to_csv
from .wtree import TreeError, parse_tree, to_dot, to_newick, write_tree

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_TPG = 2
EXIT_NO = 3

FORMATS = ("edges", "dot", "newick", "cotree")
GEN_KINDS = ("star", "family_f", "random", "enumerate", "dart", "example25")


@dataclass
class CliConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    parity: str = "best"
    k: Optional[int] = None
    tree: Optional[str] = None
    format: str = "edges"
    seed: int = 0
    max_n: int = 6
    sizes: list[int] = field(default_factory=list)
    kind: str = "random"
    n: int = 20
    i: int = 1
    t: int = 2
    branching: int = 3
    depth: int = 8
    repeat: int = 1


def _read(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _load_graph(cfg: CliConfig):
    try:
        return parse_graph(_read(cfg.input))
    except OSError as exc:
        _err(str(exc))
    except GraphFormatError as exc:
        _err(f"bad graph: {exc}")
    return None


def _not_tpg(exc: NotTPGError) -> int:
    print(f"not trivially perfect: induced {exc.kind} on {' '.join(map(str, exc.witness))}")
    return EXIT_NOT_TPG


def cmd_construct(cfg: CliConfig) -> int:
    g = _load_graph(cfg)
    if g is None:
        return EXIT_ERROR
    try:
        r = optimal_leaf_root(g, cfg.parity)
    except NotTPGError as exc:
        return _not_tpg(exc)
    m = r.meta
    summary = f"k={r.k} parity={r.parity} n={g.n} diam={m.diameter} rad={m.radius} dmin={m.dmin}"
    if cfg.format == "cotree":
        reduced, _ = remove_true_twins(g)
        if reduced.n < 2:
            _err("cotree output needs at least two vertices after twin removal")
            return EXIT_ERROR
        doc = dump_cotree(build_cotree(reduced))
    elif cfg.format == "dot":
        doc = to_dot(r.tree)
    elif cfg.format == "newick":
        doc = to_newick(r.tree) + "\n"
    else:
        doc = write_tree(r.tree, r.k)
    try:
        _write(cfg.output, doc)
    except OSError as exc:
        _err(str(exc))
        return EXIT_ERROR
    # keep stdout parseable: with the tree on stdout the summary goes to stderr
    print(summary, file=sys.stderr if cfg.output in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_recognize(cfg: CliConfig) -> int:
    if cfg.k is None or cfg.k < 2:
        _err("recognize needs -k >= 2")
        return EXIT_ERROR
    g = _load_graph(cfg)
    if g is None:
        return EXIT_ERROR
    try:
        r = optimal_leaf_root(g, "odd" if cfg.k & 1 else "even")
    except NotTPGError as exc:
        return _not_tpg(exc)
    yes = r.k <= cfg.k
    print(f"{'yes' if yes else 'no'} k={cfg.k} kappa={r.k}")
    return EXIT_OK if yes else EXIT_NO


def cmd_verify(cfg: CliConfig) -> int:
    if cfg.tree is None:
        _err("verify needs --tree")
        return EXIT_ERROR
    g = _load_graph(cfg)
    if g is None:
        return EXIT_ERROR
    try:
        t, k_file = parse_tree(_read(cfg.tree))
    except (OSError, TreeError) as exc:
        _err(str(exc))
        return EXIT_ERROR
    k = cfg.k if cfg.k is not None else k_file
    try:
        rep = is_k_leaf_root(t, g, k)
    except LeafSetMismatch as exc:
        _err(str(exc))
        return EXIT_ERROR
    print(rep.render())
    return EXIT_OK if rep.ok else EXIT_ERROR


def cmd_oracle(cfg: CliConfig) -> int:
    if cfg.max_n > ENUM_MAX_N:
        _err(f"--max-n {cfg.max_n} exceeds the limit {ENUM_MAX_N}")
        return EXIT_ERROR
    if cfg.max_n > 6:
        print(f"warning: the oracle is exhaustive; n={cfg.max_n} may take hours", file=sys.stderr)
    rows = list(oracle_sweep(enumerate_small_tpgs(cfg.max_n)))
    _write(cfg.output, rows_to_csv(rows))
    bad = sum(1 for r in rows if not r["agree"])
    print(f"rows={len(rows)} disagreements={bad}", file=sys.stderr)
    return EXIT_NO if bad else EXIT_OK


def _gen_cotree(cfg: CliConfig):
    if cfg.kind == "family_f":
        return family_f_cotree(cfg.i)
    if cfg.kind == "dart":
        return dart_cotree()
    if cfg.kind == "example25":
        return example25_cotree()
    if cfg.kind == "random":
        return random_tpg_cotree(cfg.n, cfg.seed, cfg.branching, cfg.depth)
    return None


def cmd_gen(cfg: CliConfig) -> int:
    try:
        if cfg.kind == "enumerate":
            docs = [write_graph(g) for g in enumerate_small_tpgs(cfg.max_n)]
            _write(cfg.output, "".join(f"# graph {j}\n{d}" for j, d in enumerate(docs)))
            return EXIT_OK
        if cfg.kind == "star":
            g = gen_star(cfg.t)
            doc = dump_cotree(build_cotree(g)) if cfg.format == "cotree" else write_graph(g)
        else:
            ct = _gen_cotree(cfg)
            doc = dump_cotree(ct) if cfg.format == "cotree" else write_graph(cotree_to_graph(ct))
        _write(cfg.output, doc)
    except (ValueError, OSError) as exc:
        _err(str(exc))
        return EXIT_ERROR
    return EXIT_OK


def cmd_bench(cfg: CliConfig) -> int:
    if not cfg.sizes:
        _err("bench needs a non-empty --sizes list")
        return EXIT_ERROR
    print("n m parse_s construct_s ratio k")
    prev = None
    for n in cfg.sizes:
        g0 = cotree_to_graph(random_tpg_cotree(n, cfg.seed, cfg.branching, cfg.depth))
        text = write_graph(g0)
        t0 = time.perf_counter()
        g = parse_graph(text)
        t1 = time.perf_counter()
        best = None
        for _ in range(max(1, cfg.repeat)):
            s = time.perf_counter()
            r = optimal_leaf_root(g, cfg.parity)
            el = time.perf_counter() - s
            best = el if best is None else min(best, el)
        ratio = "-" if prev is None else f"{best / prev:.2f}"
        print(f"{g.n} {g.m} {t1 - t0:.3f} {best:.3f} {ratio} {r.k}", flush=True)
        prev = best
    return EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "recognize": cmd_recognize,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def _sizes(text: str) -> list[int]:
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leafroot", description="Optimal leaf roots of trivially perfect graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def io(p, output=True):
        p.add_argument("--input", "-i", help="edge-list file (default stdin)")
        if output:
            p.add_argument("--output", "-o", help="output file (default stdout)")

    p = sub.add_parser("construct", help="optimal leaf root of a TPG")
    io(p)
    p.add_argument("--parity", choices=PARITY_MODES, default="best")
    p.add_argument("--format", choices=FORMATS, default="edges")

    p = sub.add_parser("recognize", help="is the graph a k-leaf power")
    io(p, output=False)
    p.add_argument("-k", type=int, required=True)

    p = sub.add_parser("verify", help="check a tree file against a graph")
    io(p, output=False)
    p.add_argument("--tree", required=True, help="tree file written by construct")
    p.add_argument("-k", type=int, help="threshold (default: the one in the tree header)")

    p = sub.add_parser("oracle", help="cross-check construction against brute force")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--output", "-o")

    p = sub.add_parser("gen", help="generate instances")
    p.add_argument("kind", choices=GEN_KINDS)
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=("edges", "cotree"), default="edges")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-n", type=int, default=20)
    p.add_argument("-i", type=int, default=1, help="family index")
    p.add_argument("-t", type=int, default=2, help="star leaves")
    p.add_argument("--branching", type=int, default=3)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--max-n", type=int, default=5)

    p = sub.add_parser("bench", help="time construction on random TPGs")
    p.add_argument("--sizes", type=_sizes, default=[10**4, 10**5, 10**6])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--parity", choices=PARITY_MODES, default="best")
    p.add_argument("--branching", type=int, default=64)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--repeat", type=int, default=1)
    return ap


def parse_config(argv=None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    known = CliConfig.__dataclass_fields__
    return CliConfig(**{k: v for k, v in vars(ns).items() if k in known})


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    return COMMANDS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
