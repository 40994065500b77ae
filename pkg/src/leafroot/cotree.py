"""Cotrees of trivially perfect graphs.

For a twin-free TPG every join node has exactly two children, a leaf (the
universal vertex of that part) and a union node, so the cotree can be read
straight off the universal-vertex forest built during recognition.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .graph import Graph, NotTPGError, gc_paused, _degree_forest, _extract_witness

LEAF = "leaf"
UNION = "union"
JOIN = "join"


class TwinError(ValueError):
    """Input still contains true twins."""

    def __init__(self, a: int, b: int):
        self.pair = (a, b)
        super().__init__(f"vertices {a} and {b} are true twins")


@dataclass(eq=False)
class Cotree:
    kind: list[str]
    children: list[list[int]]
    vertex: list[int]  # graph vertex for leaves, -1 otherwise
    root: int

    @property
    def num_nodes(self) -> int:
        return len(self.kind)

    @property
    def num_leaves(self) -> int:
        return sum(1 for k in self.kind if k == LEAF)

    def parents(self) -> list[int]:
        par = [-1] * len(self.kind)
        for x, kids in enumerate(self.children):
            for c in kids:
                par[c] = x
        return par

    def preorder(self) -> Iterator[int]:
        stack = [self.root]
        while stack:
            x = stack.pop()
            yield x
            stack.extend(reversed(self.children[x]))

    def postorder(self) -> list[int]:
        out = list(self.preorder())
        # reversed preorder visits every node after all of its descendants
        out.reverse()
        return out

    def shape_key(self, node: Optional[int] = None, labelled: bool = False):
        """Canonical nested-tuple key; equal keys mean isomorphic cotrees.

        With ``labelled`` the leaf vertex ids are part of the key.
        """
        node = self.root if node is None else node
        keys: dict[int, tuple] = {}
        for x in self.postorder() if node == self.root else _post(self, node):
            k = self.kind[x]
            if k == LEAF:
                keys[x] = (0, 1, self.vertex[x]) if labelled else (0, 1, ())
            else:
                kids = sorted(keys.pop(c) for c in self.children[x])
                keys[x] = (1 if k == UNION else 2, sum(c[1] for c in kids), tuple(kids))
        return keys[node]


def _post(ct: Cotree, node: int) -> list[int]:
    out = []
    stack = [node]
    while stack:
        x = stack.pop()
        out.append(x)
        stack.extend(ct.children[x])
    out.reverse()
    return out


def build_cotree(g: Graph, forest=None) -> Cotree:
    """Cotree of a twin-free TPG.

    Join children are ordered (leaf, union); union children by their smallest
    graph vertex. Raises NotTPGError or TwinError.
    """
    if g.n == 0:
        raise ValueError("empty graph has no cotree")
    if forest is None:
        forest, failure = _degree_forest(g)
        if forest is None:
            raise NotTPGError(*_extract_witness(g, failure))
    fkids = forest.children
    for v in forest.order:
        if len(fkids[v]) == 1:
            raise TwinError(*sorted((v, fkids[v][0])))

    minid = list(range(g.n))
    for v in reversed(forest.order):
        p = forest.parent[v]
        if p >= 0 and minid[v] < minid[p]:
            minid[p] = minid[v]

    kind: list[str] = []
    children: list[list[int]] = []
    vertex: list[int] = []

    def new(k, v=-1):
        kind.append(k)
        children.append([])
        vertex.append(v)
        return len(kind) - 1

    roots = sorted(forest.roots, key=minid.__getitem__)
    root = -1
    stack: list[tuple[int, int]] = []
    if len(roots) > 1:
        root = new(UNION)
        stack.extend((r, root) for r in reversed(roots))
    else:
        stack.append((roots[0], -1))
    while stack:
        v, par = stack.pop()
        kids = fkids[v]
        if kids:
            x = new(JOIN)
            new(LEAF, v)
            u = new(UNION)
            children[x] = [x + 1, u]
            stack.extend((c, u) for c in sorted(kids, key=minid.__getitem__, reverse=True))
        else:
            x = new(LEAF, v)
        if par >= 0:
            children[par].append(x)
        else:
            root = x
    return Cotree(kind, children, vertex, root)


def leaf_ranges(ct: Cotree) -> tuple[list[int], list[int], list[int]]:
    """Preorder leaf sequence and, per node, the start and size of its leaf range."""
    pre = list(ct.preorder())
    size = [0] * ct.num_nodes
    for x in reversed(pre):
        kids = ct.children[x]
        size[x] = sum(size[c] for c in kids) if kids else 1
    start = [0] * ct.num_nodes
    seq = [0] * size[ct.root]
    for x in pre:
        kids = ct.children[x]
        if not kids:
            seq[start[x]] = ct.vertex[x]
            continue
        off = start[x]
        for c in kids:
            start[c] = off
            off += size[c]
    return seq, start, size


@gc_paused()
def cotree_to_graph(ct: Cotree) -> Graph:
    """Graph whose edges join leaves with a join node as lowest common ancestor."""
    seq_l, start, size = leaf_ranges(ct)
    n = len(seq_l)
    seq = np.array(seq_l, dtype=np.int64)
    one_u, one_lo, one_sz = [], [], []  # single vertex joined to a leaf range
    src_parts, dst_parts = [], []
    for x in range(ct.num_nodes):
        if ct.kind[x] != JOIN:
            continue
        kids = ct.children[x]
        for i in range(len(kids)):
            a = kids[i]
            for b in kids[i + 1:]:
                if size[a] > 1 and size[b] == 1:
                    a, b = b, a
                if size[a] == 1:
                    one_u.append(seq_l[start[a]])
                    one_lo.append(start[b])
                    one_sz.append(size[b])
                else:
                    A = seq[start[a]:start[a] + size[a]]
                    B = seq[start[b]:start[b] + size[b]]
                    src_parts.append(np.repeat(A, size[b]))
                    dst_parts.append(np.tile(B, size[a]))
    if one_u:
        sz = np.array(one_sz, dtype=np.int64)
        offs = np.cumsum(sz) - sz
        idx = np.arange(int(sz.sum()), dtype=np.int64) - np.repeat(offs - np.array(one_lo, dtype=np.int64), sz)
        src_parts.append(np.repeat(np.array(one_u, dtype=np.int64), sz))
        dst_parts.append(seq[idx])
    if src_parts:
        src = np.concatenate(src_parts)
        dst = np.concatenate(dst_parts)
        S = np.concatenate([src, dst])
        D = np.concatenate([dst, src])
    else:
        S = D = np.zeros(0, dtype=np.int64)
    order = np.lexsort((D, S))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(S, minlength=n), out=indptr[1:])
    return Graph.from_csr(n, indptr, D[order])


def validate_cotree(ct: Cotree, twin_free: bool = True) -> list[str]:
    problems = []
    N = ct.num_nodes
    if not 0 <= ct.root < N:
        return [f"root {ct.root} out of range"]
    seen = [False] * N
    stack = [ct.root]
    while stack:
        x = stack.pop()
        if seen[x]:
            problems.append(f"node {x} reached twice (not a tree)")
            continue
        seen[x] = True
        stack.extend(ct.children[x])
    if not all(seen):
        problems.append("unreachable nodes")
    par = ct.parents()
    verts = []
    for x in range(N):
        k = ct.kind[x]
        kids = ct.children[x]
        if k == LEAF:
            if kids:
                problems.append(f"leaf {x} has children")
            verts.append(ct.vertex[x])
            continue
        if k not in (UNION, JOIN):
            problems.append(f"node {x} has unknown kind {k!r}")
            continue
        if len(kids) < 2:
            problems.append(f"{k} node {x} has {len(kids)} child(ren); at least 2 required")
        if par[x] >= 0 and ct.kind[par[x]] == k:
            problems.append(f"{k} node {x} has a parent with the same label")
        if twin_free and k == JOIN:
            kinds = sorted(ct.kind[c] for c in kids)
            if kinds != [LEAF, UNION]:
                problems.append(f"join node {x} does not have exactly one leaf and one union child (true twins)")
    n = len(verts)
    if sorted(verts) != list(range(n)):
        problems.append("leaves do not biject with vertices 0..n-1")
    if n and N > 2 * n - 1:
        problems.append(f"{N} nodes exceeds 2n-1 = {2 * n - 1}")
    return problems


def dump_cotree(ct: Cotree) -> str:
    """One line per node in preorder: ``id kind parent [vertex]``."""
    par = ct.parents()
    lines = []
    for x in ct.preorder():
        line = f"{x} {ct.kind[x]} {par[x]}"
        if ct.kind[x] == LEAF:
            line += f" {ct.vertex[x]}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def join_of(*parts: Cotree) -> Cotree:
    return _combine(JOIN, parts)


def union_of(*parts: Cotree) -> Cotree:
    return _combine(UNION, parts)


def leaf(v: int) -> Cotree:
    return Cotree([LEAF], [[]], [v], 0)


def _combine(kind: str, parts) -> Cotree:
    """Combine cotrees under a new ``kind`` node, flattening same-kind roots."""
    out = Cotree([kind], [[]], [-1], 0)
    for p in parts:
        off = out.num_nodes
        out.kind.extend(p.kind)
        out.vertex.extend(p.vertex)
        out.children.extend([c + off for c in kids] for kids in p.children)
        if p.kind[p.root] == kind:
            out.children[0].extend(out.children[p.root + off])
            out.children[p.root + off] = []
            out.kind[p.root + off] = "dead"
        else:
            out.children[0].append(p.root + off)
    if "dead" in out.kind:
        out = _compact(out)
    return out


def _compact(ct: Cotree) -> Cotree:
    order = list(ct.preorder())
    idx = {x: i for i, x in enumerate(order)}
    return Cotree(
        [ct.kind[x] for x in order],
        [[idx[c] for c in ct.children[x]] for x in order],
        [ct.vertex[x] for x in order],
        0,
    )
