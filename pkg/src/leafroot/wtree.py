"""Compressed weighted trees: paths of degree-2 vertices are stored as single
integer-weighted edges. Leaves carry graph-vertex labels.

``compute_meta`` is the from-scratch computation of diameter, radius, center
and min-max center; the construction code maintains the same metadata
incrementally and the tests compare the two.
"""
from __future__ import annotations

from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np

MAX_WEIGHT = 1 << 62


class TreeError(ValueError):
    pass


class CompressedTree:
    """Mutable tree over dense vertex ids with positive integer edge weights.

    ``label[v]`` is the graph vertex of a leaf, or -1 for internal vertices.
    ``inc[v]`` is the most recently attached edge at ``v``; for a leaf it is
    its pendant edge.
    """

    __slots__ = ("label", "eu", "ev", "ew", "deg", "inc")

    def __init__(self):
        self.label: list[int] = []
        self.eu: list[int] = []
        self.ev: list[int] = []
        self.ew: list[int] = []
        self.deg: list[int] = []
        self.inc: list[int] = []

    @property
    def num_vertices(self) -> int:
        return len(self.label)

    @property
    def num_edges(self) -> int:
        return len(self.ew)

    def __repr__(self):
        return f"CompressedTree(vertices={self.num_vertices}, edges={self.num_edges})"

    def copy(self) -> "CompressedTree":
        t = CompressedTree()
        t.label = self.label[:]
        t.eu = self.eu[:]
        t.ev = self.ev[:]
        t.ew = self.ew[:]
        t.deg = self.deg[:]
        t.inc = self.inc[:]
        return t

    def add_vertex(self, label: Optional[int] = None) -> int:
        self.label.append(-1 if label is None else label)
        self.deg.append(0)
        self.inc.append(-1)
        return len(self.label) - 1

    def add_edge(self, a: int, b: int, w: int) -> int:
        if w < 1:
            raise TreeError(f"edge weight must be >= 1, got {w}")
        if w > MAX_WEIGHT:
            raise TreeError(f"edge weight {w} exceeds 2^62")
        e = len(self.ew)
        self.eu.append(a)
        self.ev.append(b)
        self.ew.append(w)
        self.deg[a] += 1
        self.deg[b] += 1
        self.inc[a] = e
        self.inc[b] = e
        return e

    def edge(self, e: int) -> tuple[int, int, int]:
        return self.eu[e], self.ev[e], self.ew[e]

    def is_leaf(self, v: int) -> bool:
        return self.label[v] >= 0

    def leaf_edge(self, v: int) -> int:
        if self.deg[v] != 1:
            raise TreeError(f"vertex {v} is not a leaf")
        return self.inc[v]

    def attach_path(self, frm: int, length: int, leaf_label: Optional[int] = None) -> int:
        """Hang a new vertex below ``frm`` by one edge of weight ``length``."""
        if length < 1:
            raise TreeError("path length must be >= 1; identify vertices instead")
        if self.label[frm] >= 0:
            raise TreeError(f"cannot attach at leaf {frm}: it would become a degree-2 labelled vertex")
        v = self.add_vertex(leaf_label)
        self.add_edge(frm, v, length)
        return v

    def split_edge(self, e: int, frm: int, offset: int) -> int:
        """Insert a vertex on edge ``e`` at distance ``offset`` from ``frm``."""
        a, b, w = self.eu[e], self.ev[e], self.ew[e]
        if frm not in (a, b):
            raise TreeError(f"vertex {frm} is not an endpoint of edge {e}")
        if not 0 < offset < w:
            raise TreeError(f"offset {offset} not strictly inside edge of weight {w}")
        other = b if frm == a else a
        x = self.add_vertex()
        # edge e keeps frm; the new edge takes the far endpoint
        self.eu[e], self.ev[e], self.ew[e] = frm, x, offset
        self.deg[x] += 1
        self.deg[other] -= 1
        self.inc[x] = e
        e2 = self.add_edge(x, other, w - offset)
        if self.inc[frm] == e2:
            self.inc[frm] = e
        return x

    def adjacency(self) -> list[list[tuple[int, int, int]]]:
        """Per-vertex lists of ``(neighbour, weight, edge id)``."""
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(len(self.label))]
        for e, (a, b, w) in enumerate(zip(self.eu, self.ev, self.ew)):
            adj[a].append((b, w, e))
            adj[b].append((a, w, e))
        return adj

    def leaves(self) -> list[int]:
        return [v for v, lab in enumerate(self.label) if lab >= 0]

    def leaf_map(self) -> dict[int, int]:
        """graph vertex -> tree vertex."""
        return {lab: v for v, lab in enumerate(self.label) if lab >= 0}

    def check(self) -> list[str]:
        """Structural invariant violations (empty list when valid)."""
        problems = []
        N = self.num_vertices
        if N == 0:
            return ["empty tree"]
        if self.num_edges != N - 1:
            problems.append(f"{self.num_edges} edges for {N} vertices")
        if any(w < 1 for w in self.ew):
            problems.append("non-positive weight")
        seen = {}
        for v, lab in enumerate(self.label):
            if lab >= 0:
                if lab in seen:
                    problems.append(f"graph vertex {lab} labels two tree vertices")
                seen[lab] = v
                if N > 1 and self.deg[v] != 1:
                    problems.append(f"labelled vertex {v} has degree {self.deg[v]}")
            elif self.deg[v] <= 1:
                problems.append(f"unlabelled vertex {v} has degree {self.deg[v]}")
        if not problems:
            dist = _distances_from(self.adjacency(), 0)
            if any(d < 0 for d in dist):
                problems.append("tree is disconnected")
        return problems


class TreeMeta(NamedTuple):
    diameter: int
    radius: int
    parity: int
    center: tuple
    center_leaf_dist: tuple
    minmax_center: int
    dmin: int

    def extended(self, delta: int) -> "TreeMeta":
        """Metadata after lengthening every pendant edge by ``delta``."""
        if delta == 0:
            return self
        return TreeMeta(
            self.diameter + 2 * delta,
            self.radius + delta,
            self.parity,
            self.center,
            tuple(d + delta for d in self.center_leaf_dist),
            self.minmax_center,
            self.dmin + delta,
        )

    def remap(self, mapping) -> "TreeMeta":
        return self._replace(
            center=tuple(int(mapping[z]) for z in self.center),
            minmax_center=int(mapping[self.minmax_center]),
        )

    def check(self) -> list[str]:
        problems = []
        if self.diameter != 2 * self.radius - self.parity:
            problems.append("diameter != 2*radius - parity")
        if self.parity != self.diameter % 2:
            problems.append("parity does not match diameter")
        if (len(self.center) == 1) != (self.parity == 0):
            problems.append("center size does not match parity")
        if self.minmax_center not in self.center:
            problems.append("min-max center outside center")
        elif self.dmin != max(self.center_leaf_dist):
            problems.append("dmin is not the largest center leaf distance")
        return problems


def _distances_from(adj, src: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[src] = 0
    stack = [src]
    while stack:
        v = stack.pop()
        dv = dist[v]
        for w, wt, _ in adj[v]:
            if dist[w] < 0:
                dist[w] = dv + wt
                stack.append(w)
    return dist


def dist(t: CompressedTree, a: int, b: int) -> int:
    N = t.num_vertices
    if not (0 <= a < N and 0 <= b < N):
        raise TreeError(f"unknown vertex in ({a}, {b})")
    if a == b:
        return 0
    return _distances_from(t.adjacency(), a)[b]


def _nearest_leaf(t: CompressedTree, adj, src: int) -> int:
    if t.label[src] >= 0:
        return 0
    dist = _distances_from(adj, src)
    return min(d for v, d in enumerate(dist) if t.label[v] >= 0)


def compute_meta(t: CompressedTree) -> TreeMeta:
    """Exact metadata by two eccentricity sweeps.

    Center vertices that fall strictly inside a weighted edge are materialised
    by splitting that edge, so ``t`` may gain up to two vertices.
    """
    N = t.num_vertices
    if N == 0:
        raise TreeError("empty tree")
    if N == 1:
        return TreeMeta(0, 0, 0, (0,), (0,), 0, 0)
    adj = t.adjacency()
    d0 = _distances_from(adj, 0)
    a = max(range(N), key=lambda v: (d0[v], -v))
    # second sweep with parents
    dist = [-1] * N
    par = [(-1, -1)] * N
    dist[a] = 0
    stack = [a]
    while stack:
        v = stack.pop()
        for w, wt, e in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + wt
                par[w] = (v, e)
                stack.append(w)
    b = max(range(N), key=lambda v: (dist[v], -v))
    D = dist[b]
    path = [b]
    while path[-1] != a:
        path.append(par[path[-1]][0])
    path.reverse()  # a ... b

    lo, hi = D // 2, D - D // 2
    centers = []
    i = 0
    for target in (lo, hi) if lo != hi else (lo,):
        while i + 1 < len(path) and dist[path[i + 1]] < target:
            i += 1
        x = path[i]
        if dist[x] == target:
            centers.append(x)
            continue
        y = path[i + 1]
        if dist[y] == target:
            centers.append(y)
            continue
        e = par[y][1]
        z = t.split_edge(e, x, target - dist[x])
        dist.append(target)
        par.append((x, e))
        path.insert(i + 1, z)
        par[y] = (z, t.num_edges - 1)
        i += 1
        centers.append(z)
    adj = t.adjacency()
    ld = tuple(_nearest_leaf(t, adj, z) for z in centers)
    best = max(range(len(centers)), key=lambda j: (ld[j], -centers[j]))
    return TreeMeta(D, hi, D % 2, tuple(centers), ld, centers[best], ld[best])


def leaf_distance_blocks(t: CompressedTree, block: int = 512) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield ``(row_labels, col_labels, distances)`` blocks covering all leaf pairs.

    Distances come from Dijkstra over the weighted tree; exact while path
    lengths stay below 2^53.
    """
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra

    N = t.num_vertices
    leaves = np.array(t.leaves(), dtype=np.int64)
    labels = np.array([t.label[v] for v in leaves], dtype=np.int64)
    if N == 1:
        yield labels, labels, np.zeros((1, 1), dtype=np.int64)
        return
    rows = np.array(t.eu + t.ev, dtype=np.int64)
    cols = np.array(t.ev + t.eu, dtype=np.int64)
    data = np.array(t.ew + t.ew, dtype=np.float64)
    mat = csr_matrix((data, (rows, cols)), shape=(N, N))
    for s in range(0, len(leaves), block):
        idx = leaves[s:s + block]
        d = dijkstra(mat, directed=False, indices=idx)
        yield labels[s:s + block], labels, np.rint(d[:, leaves]).astype(np.int64)


def all_leaf_distances(t: CompressedTree) -> dict[tuple[int, int], int]:
    """Pairwise leaf distances keyed by ``(x, y)`` graph labels with ``x < y``."""
    out = {}
    for rl, cl, d in leaf_distance_blocks(t):
        for i, x in enumerate(rl.tolist()):
            row = d[i].tolist()
            for j, y in enumerate(cl.tolist()):
                if x < y:
                    out[(x, y)] = row[j]
    return out


def expand(t: CompressedTree) -> CompressedTree:
    """Unit-weight tree; vertex ids of ``t`` are kept, subdivision vertices follow."""
    u = CompressedTree()
    for lab in t.label:
        u.add_vertex(None if lab < 0 else lab)
    for a, b, w in zip(t.eu, t.ev, t.ew):
        prev = a
        for _ in range(w - 1):
            x = u.add_vertex()
            u.add_edge(prev, x, 1)
            prev = x
        u.add_edge(prev, b, 1)
    return u


def recanonicalize(t: CompressedTree, keep: Sequence[int] = ()) -> tuple[CompressedTree, list[int]]:
    """Contract unlabelled degree-2 vertices not listed in ``keep``.

    Returns the new tree and a list mapping old vertex ids to new ones
    (-1 for contracted vertices).
    """
    N = t.num_vertices
    label = np.array(t.label, dtype=np.int64)
    deg = np.array(t.deg, dtype=np.int64)
    removable = (label < 0) & (deg == 2)
    if keep:
        removable[list(keep)] = False
    if not removable.any():
        return t.copy(), list(range(N))

    eu = np.array(t.eu, dtype=np.int64)
    ev = np.array(t.ev, dtype=np.int64)
    ew = list(t.ew)
    eu_l, ev_l = t.eu[:], t.ev[:]
    incident: dict[int, list[int]] = {int(v): [] for v in np.flatnonzero(removable)}
    for e in np.flatnonzero(removable[eu] | removable[ev]).tolist():
        for x in (eu_l[e], ev_l[e]):
            if x in incident:
                incident[x].append(e)
    alive = np.ones(len(ew), dtype=bool)

    def walk(start, e):
        # follow the chain from ``start`` through edge ``e`` to a kept vertex
        total, prev, used = 0, start, []
        while True:
            used.append(e)
            total += ew[e]
            x = eu_l[e] + ev_l[e] - prev
            if x not in incident:
                return x, total, used
            e1, e2 = incident.pop(x)
            e = e2 if e1 == e else e1
            prev = x

    while incident:
        r, (e1, e2) = incident.popitem()
        a, wa, ua = walk(r, e1)
        b, wb, ub = walk(r, e2)
        alive[ua] = False
        alive[ub] = False
        e = ua[0]
        alive[e] = True
        eu_l[e], ev_l[e], ew[e] = a, b, wa + wb
    eu = np.array(eu_l, dtype=np.int64)[alive]
    ev = np.array(ev_l, dtype=np.int64)[alive]
    w = np.array(ew, dtype=np.int64)[alive]
    survive = ~removable
    newid = np.cumsum(survive) - 1
    newid[removable] = -1
    out = CompressedTree()
    M = int(survive.sum())
    out.label = label[survive].tolist()
    out.eu = newid[eu].tolist()
    out.ev = newid[ev].tolist()
    out.ew = w.tolist()
    out.deg = deg[survive].tolist()
    inc = np.full(M, -1, dtype=np.int64)
    idx = np.arange(len(out.ew), dtype=np.int64)
    inc[newid[eu]] = idx
    inc[newid[ev]] = idx
    out.inc = inc.tolist()
    return out, newid.tolist()


# ---------------------------------------------------------------------------
# text formats


def write_tree(t: CompressedTree, k: int) -> str:
    lines = [f"T {t.num_vertices} {t.num_edges} {k}"]
    lines.extend(f"{a} {b} {w}" for a, b, w in zip(t.eu, t.ev, t.ew))
    lines.extend(f"L {v} {lab}" for v, lab in enumerate(t.label) if lab >= 0)
    return "\n".join(lines) + "\n"


def parse_tree(text: str) -> tuple[CompressedTree, int]:
    t = CompressedTree()
    header = None
    edges = []
    leaves = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if header is None:
                if parts[0] != "T" or len(parts) != 4:
                    raise TreeError(f"line {lineno}: expected header 'T <vertices> <edges> <k>'")
                header = tuple(int(x) for x in parts[1:])
            elif parts[0] == "L":
                leaves.append((int(parts[1]), int(parts[2])))
            else:
                a, b, w = (int(x) for x in parts)
                edges.append((a, b, w))
        except ValueError:
            raise TreeError(f"line {lineno}: malformed line {line!r}") from None
    if header is None:
        raise TreeError("missing tree header")
    N, E, k = header
    if len(edges) != E:
        raise TreeError(f"header declares {E} edges, found {len(edges)}")
    for _ in range(N):
        t.add_vertex()
    for v, lab in leaves:
        if not 0 <= v < N:
            raise TreeError(f"leaf line refers to unknown vertex {v}")
        t.label[v] = lab
    for a, b, w in edges:
        if not (0 <= a < N and 0 <= b < N):
            raise TreeError(f"edge ({a}, {b}) refers to unknown vertex")
        t.add_edge(a, b, w)
    problems = t.check()
    if problems:
        raise TreeError("invalid tree: " + "; ".join(problems))
    return t, k


def to_dot(t: CompressedTree, names=None) -> str:
    def name(v):
        lab = t.label[v]
        if lab < 0:
            return f'n{v} [shape=point, label=""];'
        text = names[lab] if names is not None else str(lab)
        return f'n{v} [label="{text}"];'

    lines = ["graph leafroot {"]
    lines.extend("  " + name(v) for v in range(t.num_vertices))
    lines.extend(f'  n{a} -- n{b} [label="{w}"];' for a, b, w in zip(t.eu, t.ev, t.ew))
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_newick(t: CompressedTree, names=None, root: Optional[int] = None) -> str:
    """Newick string with integer branch lengths; internal nodes unnamed."""
    N = t.num_vertices

    def leaf_name(v):
        lab = t.label[v]
        return names[lab] if names is not None else str(lab)

    if N == 1:
        return leaf_name(0) + ";"
    if root is None:
        root = next((v for v in range(N) if t.label[v] < 0), 0)
    adj = t.adjacency()
    out: dict[int, str] = {}
    stack = [(root, -1, 0, False)]
    while stack:
        v, parent, w, done = stack.pop()
        if not done:
            stack.append((v, parent, w, True))
            for x, xw, _ in adj[v]:
                if x != parent:
                    stack.append((x, v, xw, False))
            continue
        kids = [out.pop(x) for x, _, _ in reversed(adj[v]) if x != parent]
        kids.reverse()
        body = f"({','.join(kids)})" if kids else ""
        label = leaf_name(v) if t.label[v] >= 0 else ""
        out[v] = body + label + (f":{w}" if parent >= 0 else "")
    return out[root] + ";"
