"""Undirected simple graphs, edge-list I/O and the preprocessing used before
leaf-root construction: components, universal vertices, true-twin removal,
trivially-perfect recognition and twin reinsertion.
"""
from __future__ import annotations

import dataclasses
import gc
from bisect import bisect_left
from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import chain, combinations
from typing import Iterable, NamedTuple, Optional

import numpy as np


@contextmanager
def gc_paused():
    """Suspend the cyclic collector while building large acyclic structures."""
    was = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was:
            gc.enable()


class GraphFormatError(ValueError):
    """Malformed edge-list document; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class NotTPGError(ValueError):
    """Input contains an induced P4 or C4."""

    def __init__(self, witness: tuple[int, int, int, int], kind: str):
        self.witness = witness
        self.kind = kind
        super().__init__(f"graph is not trivially perfect: induced {kind} on {list(witness)}")


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    adj: list[list[int]]
    labels: Optional[list[str]] = None
    _csr: Optional[tuple] = field(default=None, repr=False, compare=False)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def has_edge(self, u: int, v: int) -> bool:
        a, b = (u, v) if len(self.adj[u]) <= len(self.adj[v]) else (v, u)
        return b in self.adj[a]

    def edges(self) -> Iterable[tuple[int, int]]:
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    yield u, v

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, indices)`` arrays of the adjacency, cached."""
        if self._csr is None:
            deg = np.fromiter(map(len, self.adj), dtype=np.int64, count=self.n)
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(deg, out=indptr[1:])
            indices = np.fromiter(chain.from_iterable(self.adj), dtype=np.int64, count=int(indptr[-1]))
            object.__setattr__(self, "_csr", (indptr, indices))
        return self._csr

    @classmethod
    def from_csr(cls, n: int, indptr: np.ndarray, indices: np.ndarray, labels=None) -> "Graph":
        """Graph from sorted CSR arrays (not validated)."""
        flat = indices.tolist()
        ip = indptr.tolist()
        adj = [flat[ip[i]:ip[i + 1]] for i in range(n)]
        return cls(n, adj, labels, (indptr, indices))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None, check: bool = True) -> "Graph":
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if check:
                if not (0 <= u < n and 0 <= v < n):
                    raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
                if u == v:
                    raise ValueError(f"self-loop at {u}")
            adj[u].append(v)
            adj[v].append(u)
        for a in adj:
            a.sort()
        if check:
            for u, a in enumerate(adj):
                for i in range(1, len(a)):
                    if a[i] == a[i - 1]:
                        raise ValueError(f"duplicate edge ({u}, {a[i]})")
        return cls(n, adj, labels)

    def subgraph(self, keep: list[int]) -> "Graph":
        """Induced subgraph on ``keep`` (renumbered 0..len(keep)-1 in that order)."""
        index = {v: i for i, v in enumerate(keep)}
        adj = []
        for v in keep:
            adj.append(sorted(index[w] for w in self.adj[v] if w in index))
        labels = [self.label(v) for v in keep] if self.labels is not None else None
        return Graph(len(keep), adj, labels)


@gc_paused()
def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: header ``n m`` then ``m`` lines ``u v``.

    ``#`` starts a comment; blank lines are ignored.
    """
    header = None
    n = m = 0
    adj: list[set[int]] = []
    count = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"expected two integers, got {line!r}", lineno) from None
        if header is None:
            if a < 0 or b < 0:
                raise GraphFormatError("negative size in header", lineno)
            header = (a, b)
            n, m = a, b
            adj = [set() for _ in range(n)]
            continue
        if not (0 <= a < n and 0 <= b < n):
            raise GraphFormatError(f"vertex id out of range [0, {n})", lineno)
        if a == b:
            raise GraphFormatError(f"self-loop at {a}", lineno)
        if b in adj[a]:
            raise GraphFormatError(f"duplicate edge {a} {b}", lineno)
        adj[a].add(b)
        adj[b].add(a)
        count += 1
        if count > m:
            raise GraphFormatError(f"more than the declared {m} edges", lineno)
    if header is None:
        raise GraphFormatError("missing header line 'n m'")
    if count != m:
        raise GraphFormatError(f"header declares {m} edges, found {count}")
    return Graph(n, [sorted(a) for a in adj])


def write_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


class Component(NamedTuple):
    vertices: list[int]
    trivial: bool


def connected_components(g: Graph) -> list[Component]:
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in g.adj[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        comp.sort()
        out.append(Component(comp, len(comp) == 1))
    return out


def universal_vertex(g: Graph) -> Optional[int]:
    for v in range(g.n):
        if len(g.adj[v]) == g.n - 1:
            return v
    return None


# ---------------------------------------------------------------------------
# true twins


@dataclass
class TwinMap:
    representative: dict[int, int] = field(default_factory=dict)
    order: list[int] = field(default_factory=list)
    kept: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.order)

    def find(self, v: int) -> int:
        while v in self.representative:
            v = self.representative[v]
        return v


def true_twin_classes(g: Graph) -> list[list[int]]:
    """Groups of >= 2 vertices with identical closed neighbourhoods."""
    groups: dict[tuple, list[int]] = {}
    for v in range(g.n):
        a = g.adj[v]
        i = bisect_left(a, v)
        key = (*a[:i], v, *a[i:])
        groups.setdefault(key, []).append(v)
    return [grp for grp in groups.values() if len(grp) > 1]


def remove_true_twins(g: Graph) -> tuple[Graph, TwinMap]:
    classes = true_twin_classes(g)
    tm = TwinMap()
    if not classes:
        tm.kept = list(range(g.n))
        return g, tm
    removed = [False] * g.n
    for grp in sorted(classes):
        rep = grp[0]
        for x in grp[1:]:
            tm.representative[x] = rep
            tm.order.append(x)
            removed[x] = True
    tm.kept = [v for v in range(g.n) if not removed[v]]
    return g.subgraph(tm.kept), tm


def reinsert_twins(result, tm: TwinMap):
    """Hang every removed twin next to its representative's leaf.

    ``result.tree`` must already carry original vertex ids as leaf labels.
    The representative's pendant edge is split one unit above the leaf, so the
    twin and the representative sit at the same distance from the rest of the
    tree and at distance 2 from each other.
    """
    if not tm.order:
        return result
    from .wtree import compute_meta

    t = result.tree.copy()
    lm = t.leaf_map()
    for x in tm.order:
        if x in lm:
            raise ValueError(f"twin {x} already present in the leaf root")
    missing = {tm.representative[x] for x in tm.order} - set(lm)
    if missing:
        raise ValueError(f"representatives {sorted(missing)} are not leaves of the leaf root")
    single = t.num_vertices == 1
    if single:
        (r,) = lm.values()
        hub = t.add_vertex()
        t.add_edge(hub, r, 1)
    for x in tm.order:
        r = lm[tm.representative[x]]
        e = t.leaf_edge(r)
        a, b, w = t.edge(e)
        q = a if b == r else b
        if w > 1:
            q = t.split_edge(e, q, w - 1)
        leaf = t.add_vertex(x)
        t.add_edge(q, leaf, 1)
        lm[x] = leaf
    meta = compute_meta(t) if single else result.meta
    return dataclasses.replace(result, tree=t, meta=meta, reinserted=True)


# ---------------------------------------------------------------------------
# trivially perfect recognition


class Recognition(NamedTuple):
    is_tpg: bool
    witness: Optional[tuple[int, int, int, int]]
    kind: Optional[str] = None


class _Forest(NamedTuple):
    order: list[int]
    parent: list[int]
    children: list[list[int]]
    roots: list[int]


def _quad_kind(g: Graph, q) -> Optional[str]:
    """'P4' or 'C4' if the four vertices induce one, else None."""
    deg = [0, 0, 0, 0]
    edges = 0
    for i, j in combinations(range(4), 2):
        if g.has_edge(q[i], q[j]):
            deg[i] += 1
            deg[j] += 1
            edges += 1
    if edges == 4 and deg == [2, 2, 2, 2]:
        return "C4"
    if edges == 3 and sorted(deg) == [1, 1, 2, 2]:
        return "P4"
    return None


def _order_p4(g: Graph, q) -> tuple[int, int, int, int]:
    """Order a P4/C4 vertex set along the path/cycle."""
    q = list(q)
    deg = {v: sum(g.has_edge(v, w) for w in q if w != v) for v in q}
    start = min((v for v in q if deg[v] == 1), default=min(q))
    path = [start]
    while len(path) < 4:
        nxt = [w for w in q if w not in path and g.has_edge(path[-1], w)]
        path.append(min(nxt))
    return tuple(path)


def brute_force_obstruction(g: Graph, candidates=None):
    """Scan all quadruples for an induced P4 or C4; O(n^4)."""
    verts = range(g.n) if candidates is None else sorted(candidates)
    for q in combinations(verts, 4):
        kind = _quad_kind(g, q)
        if kind:
            return _order_p4(g, q), kind
    return None


def _degree_forest(g: Graph):
    """Universal-vertex forest of a TPG, or a failure point.

    Vertices are taken in non-increasing degree order (ties by id); each
    vertex hangs below its latest earlier neighbour. The graph is trivially
    perfect iff every vertex is adjacent exactly to its ancestors and
    descendants in that forest. Forest roots are the universal vertices of
    the components, their children the universal vertices of the components
    left after removing them, and so on.

    Returns ``(forest, None)`` or ``(None, (v, w, reason))``.
    """
    n = g.n
    if n == 0:
        return _Forest([], [], [], []), None
    indptr, dst = g.csr()
    deg = np.diff(indptr)
    order = np.argsort(-deg, kind="stable")
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    total = int(indptr[-1])
    src = np.repeat(np.arange(n), deg)
    pd = pos[dst]
    earlier = pd < pos[src]
    cnt = np.bincount(src[earlier], minlength=n)
    # latest earlier neighbour
    ppos = np.full(n, -1, dtype=np.int64)
    if total:
        vals = np.where(earlier, pd, -1)
        nz = deg > 0
        ppos[nz] = np.maximum.reduceat(vals, indptr[:-1][nz])
    parent = np.where(ppos >= 0, order[np.maximum(ppos, 0)], -1)
    depth = _forest_depths(parent)
    bad = np.flatnonzero(cnt != depth)
    if bad.size:
        v = int(bad[np.argmin(pos[bad])])
        return None, (v, int(parent[v]), "count")

    # with the counts matching, every vertex sees exactly its ancestors as
    # earlier neighbours iff each earlier neighbour other than the parent is
    # also a neighbour of the parent (induction along the order)
    es, ed = src[earlier], dst[earlier]
    ep = parent[es]
    other = ed != ep
    es, ed, ep = es[other], ed[other], ep[other]
    if es.size:
        keys = src * n + dst
        if np.any(keys[1:] < keys[:-1]):
            keys = np.sort(keys)
        q = ep * n + ed
        qo = np.argsort(q, kind="stable")
        qs = q[qo]
        # sorted queries keep the binary searches cache friendly
        idx = np.minimum(np.searchsorted(keys, qs), total - 1)
        missing = keys[idx] != qs
        if missing.any():
            e = int(qo[np.flatnonzero(missing)].min())
            return None, (int(es[e]), int(ed[e]), "ancestor")

    order_l = order.tolist()
    parent_l = parent.tolist()
    children: list[list[int]] = [[] for _ in range(n)]
    roots = []
    for v in order_l:
        q = parent_l[v]
        if q < 0:
            roots.append(v)
        else:
            children[q].append(v)
    return _Forest(order_l, parent_l, children, roots), None


def _forest_depths(parent: np.ndarray) -> np.ndarray:
    """Depth of every vertex of a forest given by parent pointers (pointer doubling)."""
    jump = parent.copy()
    dist = (parent >= 0).astype(np.int64)
    live = np.flatnonzero(jump >= 0)
    while live.size:
        j = jump[live]
        dist[live] += dist[j]
        jump[live] = jump[j]
        live = live[jump[live] >= 0]
    return dist


def _edge_witness(g: Graph, a: int, b: int) -> Optional[tuple]:
    """P4/C4 through edge ``ab`` when N[a] and N[b] are incomparable."""
    na, nb = set(g.adj[a]), set(g.adj[b])
    xs = [x for x in g.adj[a] if x != b and x not in nb]
    if not xs:
        return None
    ys = [y for y in g.adj[b] if y != a and y not in na]
    if not ys:
        return None
    x, y = xs[0], ys[0]
    if g.has_edge(x, y):
        return (x, a, b, y), "C4"
    return (x, a, b, y), "P4"


def _extract_witness(g: Graph, failure) -> tuple:
    # a graph is trivially perfect iff adjacent vertices have nested closed
    # neighbourhoods; look for a non-nested edge near the failure first
    v, w, _ = failure
    near = [v] if w < 0 else [v, w]
    for a in near:
        for b in g.adj[a]:
            found = _edge_witness(g, a, b)
            if found:
                return found
    for a, b in g.edges():
        found = _edge_witness(g, a, b)
        if found:
            return found
    raise AssertionError("recognition failed but no obstruction exists")


def is_trivially_perfect(g: Graph) -> Recognition:
    forest, failure = _degree_forest(g)
    if forest is not None:
        return Recognition(True, None)
    witness, kind = _extract_witness(g, failure)
    return Recognition(False, witness, kind)
