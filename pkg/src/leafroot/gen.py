"""Instance generators: stars, the F_i family, random twin-free TPGs and
exhaustive enumeration of small TPGs by canonical cotree shape."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import count
from typing import Iterator, Optional

from .cotree import JOIN, LEAF, UNION, Cotree, cotree_to_graph, join_of, leaf, union_of
from .graph import Graph, gc_paused

FAMILY_MAX_I = 12
ENUM_MAX_N = 8


@dataclass
class GenSpec:
    kind: str  # star | family_f | random | enumerate
    params: dict = field(default_factory=dict)


def generate(spec: GenSpec):
    """Graph (or iterator of graphs for ``enumerate``) described by ``spec``."""
    p = spec.params
    if spec.kind == "star":
        return gen_star(p["t"])
    if spec.kind == "family_f":
        return gen_family_f(p["i"])
    if spec.kind == "random":
        return gen_random_tpg(p["n"], p.get("seed", 0), p.get("branching", 3), p.get("depth", 8))
    if spec.kind == "enumerate":
        return enumerate_small_tpgs(p["max_n"], p.get("twin_free", True))
    raise ValueError(f"unknown generator kind {spec.kind!r}")


def hub_join(u: int, *parts: Cotree) -> Cotree:
    """``u ⊗ (parts[0] ⊕ parts[1] ⊕ ...)``."""
    return join_of(leaf(u), union_of(*parts))


def gen_star(t: int) -> Graph:
    if t < 2:
        raise ValueError("a star needs at least 2 leaves")
    return Graph.from_edges(t + 1, [(0, i) for i in range(1, t + 1)])


def family_f_cotree(i: int) -> Cotree:
    if i < 0:
        raise ValueError("i must be >= 0")
    if i > FAMILY_MAX_I:
        raise ValueError(f"i={i} exceeds the size guard {FAMILY_MAX_I}")
    ids = count()

    def build(level):
        if level == 0:
            return hub_join(next(ids), leaf(next(ids)), leaf(next(ids)))
        top = next(ids)
        arms = []
        for _ in range(3):
            hub = next(ids)
            arms.append(hub_join(hub, build(level - 1), leaf(next(ids))))
        return hub_join(top, *arms)

    return build(i)


def gen_family_f(i: int) -> Graph:
    return cotree_to_graph(family_f_cotree(i))


def family_f_size(i: int) -> int:
    n = 3
    for _ in range(i):
        n = 3 * n + 7
    return n


def dart_cotree() -> Cotree:
    """Vertices: u0=0, u1=1, v0=2, v1=3, v2=4."""
    return hub_join(0, leaf(2), hub_join(1, leaf(3), leaf(4)))


def gen_dart() -> Graph:
    return cotree_to_graph(dart_cotree())


def example25_cotree() -> Cotree:
    """Three-level 25-vertex example: u0..u9 are 0..9, v0..v14 are 10..24."""
    u = list(range(10))
    v = [10 + j for j in range(15)]
    L = leaf
    g9 = hub_join(u[9], L(v[13]), L(v[14]))
    g3 = hub_join(u[3], L(v[1]), g9)
    g4 = hub_join(u[4], L(v[2]), L(v[3]), L(v[4]))
    g5 = hub_join(u[5], L(v[5]), L(v[6]))
    g6 = hub_join(u[6], L(v[7]), L(v[8]))
    g7 = hub_join(u[7], L(v[9]), L(v[10]))
    g8 = hub_join(u[8], L(v[11]), L(v[12]))
    g1 = hub_join(u[1], g3, g4, g5)
    g2 = hub_join(u[2], g6, g7, g8)
    return hub_join(u[0], L(v[0]), g1, g2)


def gen_example25() -> Graph:
    return cotree_to_graph(example25_cotree())


# ---------------------------------------------------------------------------
# random twin-free TPGs


class _RandomCotree:
    def __init__(self, n: int, rng: random.Random, branching: int):
        self.rng = rng
        self.branching = branching
        self.kind: list[str] = []
        self.children: list[list[int]] = []
        self.vertex: list[int] = []
        perm = list(range(n))
        rng.shuffle(perm)
        self.perm = perm
        self.next_leaf = 0

    def node(self, kind):
        self.kind.append(kind)
        self.children.append([])
        self.vertex.append(-1)
        return len(self.kind) - 1

    def leaf(self):
        x = self.node(LEAF)
        self.vertex[x] = self.perm[self.next_leaf]
        self.next_leaf += 1
        return x

    def split(self, m: int, depth: int, min_children: int) -> tuple[int, list[int]]:
        """Split ``m`` vertices into isolated leaves and connected pieces (>= 3 each).

        Returns the number of isolated leaves and the piece sizes; the two
        together give at least ``min_children`` children.
        """
        rng = self.rng
        if depth <= 0 or m < 3:
            return m, []
        j = rng.randint(1, min(self.branching, m // 3))
        r = max(rng.randint(0, self.branching), min_children - j)
        if r > m - 3 * j:
            j -= 1
            r = max(r, min_children - j)
        if j == 0:
            return m, []
        r = min(r, m - 3 * j)
        rest = m - 3 * j - r
        cuts = sorted(rng.randint(0, rest) for _ in range(j - 1))
        sizes = [3 + b - a for a, b in zip([0] + cuts, cuts + [rest])]
        return r, sizes

    def connected(self, size: int, depth: int) -> int:
        # explicit stack: (node size, remaining depth, parent union or -1)
        root = -1
        stack = [(size, depth, -1)]
        while stack:
            sz, d, par = stack.pop()
            x = self.node(JOIN)
            if par >= 0:
                self.children[par].append(x)
            else:
                root = x
            self.children[x].append(self.leaf())
            y = self.node(UNION)
            self.children[x].append(y)
            r, sizes = self.split(sz - 1, d - 1, 2)
            for _ in range(r):
                self.children[y].append(self.leaf())
            for s in sizes:
                stack.append((s, d - 1, y))
        return root


@gc_paused()
def random_tpg_cotree(n: int, seed=0, branching: int = 3, depth: int = 8, connected: Optional[bool] = None) -> Cotree:
    """Random cotree with ``n`` leaves in which every join is (leaf, union).

    ``depth`` bounds the nesting of joins (so edges <= depth * n);
    ``branching`` bounds the number of non-trivial components per union.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if branching < 1 or depth < 1:
        raise ValueError("branching and depth must be >= 1")
    rng = random.Random(seed)
    b = _RandomCotree(n, rng, branching)
    if n == 1:
        b.leaf()
        return Cotree(b.kind, b.children, b.vertex, 0)
    if connected is None:
        connected = n >= 3 and rng.random() < 0.7
    if connected and n < 3:
        raise ValueError("no twin-free connected graph on 2 vertices")
    if connected:
        root = b.connected(n, depth)
    else:
        root = b.node(UNION)
        r, sizes = b.split(n, depth, 2)
        for _ in range(r):
            b.children[root].append(b.leaf())
        for s in sizes:
            b.children[root].append(b.connected(s, depth))
    return Cotree(b.kind, b.children, b.vertex, root)


def gen_random_tpg(n: int, seed=0, branching: int = 3, depth: int = 8, connected: Optional[bool] = None) -> Graph:
    return cotree_to_graph(random_tpg_cotree(n, seed, branching, depth, connected))


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _multisets(items: list[tuple[int, tuple]], total: int, min_parts: int, start: int = 0) -> Iterator[list[tuple]]:
    """Non-decreasing selections (with repetition) from ``items`` summing to ``total``."""
    if total == 0:
        if min_parts <= 0:
            yield []
        return
    for i in range(start, len(items)):
        size, key = items[i]
        if size > total:
            break
        for rest in _multisets(items, total - size, min_parts - 1, i):
            yield [key] + rest


def _shapes(max_n: int, twin_free: bool) -> dict[int, list[tuple]]:
    """Canonical keys of connected cotrees per size, and of all cotrees."""
    leaf_key = (0, 1, ())
    conn: dict[int, list[tuple]] = {1: [leaf_key]}
    every: dict[int, list[tuple]] = {1: [leaf_key]}
    for n in range(2, max_n + 1):
        comps = sorted((s, k) for s in range(1, n) for k in conn[s])
        unions = {}
        for parts in _multisets(comps, n, 2):
            kids = tuple(sorted(parts))
            unions.setdefault(kids, (1, n, kids))
        out = []
        if twin_free:
            if n >= 3:
                sub = sorted((s, k) for s in range(1, n - 1) for k in conn[s])
                for parts in _multisets(sub, n - 1, 2):
                    union = (1, n - 1, tuple(sorted(parts)))
                    out.append((2, n, tuple(sorted((leaf_key, union)))))
        else:
            out.append((2, n, tuple([leaf_key] * n)))
            for c in range(1, n - 1):
                sub = sorted((s, k) for s in range(1, n - c) for k in conn[s])
                for parts in _multisets(sub, n - c, 2):
                    union = (1, n - c, tuple(sorted(parts)))
                    out.append((2, n, tuple(sorted([leaf_key] * c + [union]))))
        conn[n] = sorted(set(out))
        every[n] = sorted(set(out) | set(unions.values()))
    return every


def cotree_from_key(key: tuple) -> Cotree:
    kinds = {0: LEAF, 1: UNION, 2: JOIN}
    kind, children, vertex = [], [], []
    ids = count()
    stack = [(key, -1)]
    while stack:
        k, par = stack.pop()
        x = len(kind)
        kind.append(kinds[k[0]])
        children.append([])
        vertex.append(next(ids) if k[0] == 0 else -1)
        if par >= 0:
            children[par].append(x)
        for c in reversed(k[2]):
            stack.append((c, x))
    return Cotree(kind, children, vertex, 0)


def enumerate_small_tpgs(max_n: int, twin_free: bool = True) -> Iterator[Graph]:
    """One graph per isomorphism class of TPGs on 1..max_n vertices.

    With ``twin_free`` only graphs without true twins are produced.
    """
    if max_n > ENUM_MAX_N:
        raise ValueError(f"max_n={max_n} exceeds the enumeration limit {ENUM_MAX_N}")
    every = _shapes(max(max_n, 1), twin_free)
    for n in range(1, max_n + 1):
        for key in every[n]:
            yield cotree_to_graph(cotree_from_key(key))
