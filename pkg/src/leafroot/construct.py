"""Optimal parity-aware leaf roots of trivially perfect graphs.

The construction walks the cotree bottom-up. Every join node ``u ⊗ Y`` gets
a leaf root built from the roots of the join nodes below ``Y`` (extended to a
common threshold, merged around a fresh hub, then ``u`` hung at a center).
All subtrees live in one shared arena so extending a subtree costs one pass
over its own leaves, and metadata is maintained incrementally.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .cotree import JOIN, LEAF, UNION, Cotree
from .graph import Graph, NotTPGError, TwinMap, _degree_forest, _extract_witness, gc_paused, reinsert_twins
from .wtree import CompressedTree, TreeMeta, compute_meta, recanonicalize

PARITY_MODES = ("odd", "even", "best")


class ConstructionError(AssertionError):
    """An internal invariant of the construction failed."""


@dataclass(frozen=True)
class LeafRootResult:
    tree: CompressedTree
    meta: TreeMeta
    k: int
    parity: int
    reinserted: bool = False


class _Part(NamedTuple):
    lo: int  # slice of the arena's leaf sequence owned by this subtree
    hi: int
    meta: TreeMeta
    k: int


class _Arena:
    __slots__ = ("tree", "leaf_seq")

    def __init__(self):
        self.tree = CompressedTree()
        self.leaf_seq: list[int] = []

    def leaf(self, frm: int, w: int, label: int) -> int:
        t = self.tree
        v = t.add_vertex(label)
        t.add_edge(frm, v, w)
        self.leaf_seq.append(v)
        return v

    def leaves(self, frm: int, w: int, labels: Sequence[int]) -> None:
        """Hang one leaf per label below ``frm``, all at weight ``w``."""
        cnt = len(labels)
        if not cnt:
            return
        if w < 1:
            raise ConstructionError(f"pendant weight {w} < 1")
        t = self.tree
        n0, e0 = len(t.label), len(t.ew)
        t.label.extend(labels)
        t.deg.extend([1] * cnt)
        t.inc.extend(range(e0, e0 + cnt))
        t.eu.extend([frm] * cnt)
        t.ev.extend(range(n0, n0 + cnt))
        t.ew.extend([w] * cnt)
        t.deg[frm] += cnt
        t.inc[frm] = e0 + cnt - 1
        self.leaf_seq.extend(range(n0, n0 + cnt))

    def extend(self, part: _Part, delta: int) -> _Part:
        if delta < 0:
            raise ConstructionError(f"negative extension {delta}")
        if delta == 0:
            return part
        ew = self.tree.ew
        inc = self.tree.inc
        for v in self.leaf_seq[part.lo:part.hi]:
            ew[inc[v]] += delta
        return _Part(part.lo, part.hi, part.meta.extended(delta), part.k + 2 * delta)


def _place(t: CompressedTree, c: int, z: int, edge: int, length: int, offsets: Sequence[int]) -> list[int]:
    """Vertices at the given distances from ``c`` along the c–z edge.

    ``offsets`` is non-increasing and consecutive; interior points are
    materialised by splitting the edge.
    """
    out = []
    frm, e, base = c, edge, 0
    for off in sorted(offsets):
        if off == base:
            out.append(frm)
        elif off == length:
            out.append(z)
        else:
            frm = t.split_edge(e, frm, off - base)
            e = t.num_edges - 1
            base = off
            out.append(frm)
    return out[::-1] if len(offsets) == 2 and offsets[0] > offsets[1] else out


def _merge(arena: _Arena, k: int, parts: Sequence[_Part], isolated: Sequence[int]) -> _Part:
    """Join k-leaf roots and isolated vertices around a new hub ``c``.

    Returns the merged part with metadata computed from the parts' metadata
    only; the first center in ``meta.center`` is the one nearest the hub
    side of the diametral path.
    """
    s, t_count = len(parts), len(isolated)
    if s + t_count < 2:
        raise ConstructionError("merge needs at least two components")
    tree = arena.tree
    o = k & 1
    base = (k - o) // 2 + 1
    for P in parts:
        if 2 * P.meta.dmin > k:
            raise ConstructionError(f"leaf distance {P.meta.dmin} exceeds k/2 for k={k}")

    # branch records: (length from c, radius, dmin, attachment vertex, edge, meta or None)
    branches = []
    if s:
        m = min(range(s), key=lambda i: (parts[i].meta.dmin, i))
        crit = (k + o) // 2 - parts[m].meta.dmin
        c = parts[m].meta.minmax_center if crit == 0 else tree.add_vertex()
        for i, P in enumerate(parts):
            pm = P.meta
            z = pm.minmax_center
            length = crit if i == m else base - pm.dmin
            if i != m and length < 1:
                raise ConstructionError("non-critical attachment length below 1")
            e = tree.add_edge(c, z, length) if length > 0 else -1
            branches.append((length, pm.radius, pm.dmin, z, e, pm))
        lo = min(P.lo for P in parts)
    else:
        c = tree.add_vertex()
        lo = len(arena.leaf_seq)
    first_iso = tree.num_vertices
    arena.leaves(c, base, isolated)
    # isolated leaves are interchangeable branches; two of them suffice below
    for v in range(first_iso, first_iso + min(t_count, 2)):
        branches.append((base, 0, 0, v, tree.inc[v], None))
    hi = len(arena.leaf_seq)
    if s and hi - lo != sum(P.hi - P.lo for P in parts) + t_count:
        raise ConstructionError("subtree leaf ranges are not contiguous")

    # two longest branches from c
    d = [b[0] + b[1] for b in branches]
    i1 = max(range(len(d)), key=lambda i: (d[i], -i))
    i2 = max((i for i in range(len(d)) if i != i1), key=lambda i: (d[i], -i))
    through_c = d[i1] + d[i2]
    inner = max((b[5].diameter for b in branches if b[5] is not None), default=0)
    D = max(through_c, inner)

    # nearest leaf reached through c while avoiding branch i
    reach = [b[0] + b[2] for b in branches]
    best1 = min(range(len(reach)), key=reach.__getitem__)
    second = min((reach[i] for i in range(len(reach)) if i != best1), default=None)

    def via_c_excluding(i):
        return second if i == best1 else reach[best1]

    if through_c >= inner:
        length, rad1, dmin1, z1, e1, m1 = branches[i1]
        gap = d[i1] - d[i2]
        offs = [(gap + 1) // 2, gap // 2] if gap & 1 else [gap // 2]
        other = via_c_excluding(i1)
        centers, ld = [], []
        inside = [x for x in offs if x <= length]
        beyond = [x for x in offs if x > length]
        if beyond:
            # the midpoint passes z1: it is the other center of that subtree
            if beyond != [length + 1] or m1 is None or m1.parity != 1:
                raise ConstructionError("diameter midpoint left the hub edge unexpectedly")
        if inside:
            if length == 0:
                verts = [c]
            else:
                verts = _place(tree, c, z1, e1, length, inside)
            for x, vtx in zip(inside, verts):
                centers.append(vtx)
                ld.append(min(x + other, length - x + dmin1))
        if beyond:
            j = 1 if m1.center[0] == m1.minmax_center else 0
            zc = m1.center[j]
            centers.insert(0, zc)
            ld.insert(0, min(m1.center_leaf_dist[j], 1 + length + other))
    else:
        a = next(i for i, b in enumerate(branches) if b[5] is not None and b[5].diameter == inner)
        length, _, _, za, _, ma = branches[a]
        other = via_c_excluding(a)
        centers = list(ma.center)
        ld = [
            min(ma.center_leaf_dist[j], (0 if zz == za else 1) + length + other)
            for j, zz in enumerate(ma.center)
        ]
    if len(centers) != (1 if D % 2 == 0 else 2):
        raise ConstructionError("center count does not match diameter parity")
    best = max(range(len(centers)), key=lambda j: (ld[j], -j))
    meta = TreeMeta(D, (D + 1) // 2, D & 1, tuple(centers), tuple(ld), centers[best], ld[best])
    return _Part(lo, hi, meta, k)


def _star(arena: _Arena, u: int, leaves: Sequence[int], p: int) -> _Part:
    tree = arena.tree
    lo = len(arena.leaf_seq)
    if p == 1:
        h = tree.add_vertex()
        arena.leaves(h, 2, leaves)
        arena.leaf(h, 1, u)
        meta = TreeMeta(4, 2, 0, (h,), (1,), h, 1)
        return _Part(lo, len(arena.leaf_seq), meta, 3)
    if len(leaves) == 2:
        v = tree.add_vertex()
        x = tree.add_vertex()
        tree.add_edge(v, x, 1)
        arena.leaf(v, 1, u)
        arena.leaf(v, 2, leaves[0])
        arena.leaf(x, 2, leaves[1])
        meta = TreeMeta(5, 3, 1, (v, x), (1, 2), x, 2)
        return _Part(lo, len(arena.leaf_seq), meta, 4)
    h = tree.add_vertex()
    arena.leaves(h, 3, leaves)
    arena.leaf(h, 1, u)
    meta = TreeMeta(6, 3, 0, (h,), (1,), h, 1)
    return _Part(lo, len(arena.leaf_seq), meta, 4)


def _join_threshold(parts: Sequence[_Part], p: int) -> int:
    """Optimal threshold for ``u ⊗ (...)`` given the children's optima.

    ``parts`` must be sorted by non-increasing diameter.
    """
    a = parts[0]
    ka, oa = a.k, a.meta.parity
    if len(parts) == 1:
        return ka + 2 * (1 - oa)
    b = parts[1]
    kb, ob = b.k, b.meta.parity
    if p == 1:
        return ka + kb - 1 - 2 * oa * ob
    if len(parts) == 2 or ka - oa > parts[2].k - parts[2].meta.parity:
        return ka + kb - 2 * (oa + ob - oa * ob)
    return ka + kb - 2 * oa * ob


def _check_order(parts: Sequence[_Part]) -> None:
    for x, y in zip(parts, parts[1:]):
        mx, my = x.meta, y.meta
        if mx.radius < my.radius or mx.radius - mx.parity < my.radius - my.parity:
            raise ConstructionError("children sorted by diameter do not have non-increasing radii")


def _connected(arena: _Arena, u: int, parts: list[_Part], isolated: list[int], p: int) -> _Part:
    parts.sort(key=lambda P: (-P.k, -P.meta.diameter))
    _check_order(parts)
    k = _join_threshold(parts, p)
    leveled = []
    for P in parts:
        diff = k - P.k
        if diff < 0 or diff & 1:
            raise ConstructionError(f"cannot extend a {P.k}-leaf root to k={k}")
        leveled.append(arena.extend(P, diff // 2))
    merged = _merge(arena, k, leveled, isolated)
    mm = merged.meta
    z1 = mm.center[0]
    arena.leaf(z1, 1, u)
    if mm.parity:
        z2 = mm.center[1]
        ld2 = min(mm.center_leaf_dist[1], 2)
        meta = TreeMeta(mm.diameter, mm.radius, 1, mm.center, (1, ld2), z2, ld2)
    else:
        meta = TreeMeta(mm.diameter, mm.radius, 0, mm.center, (1,), z1, 1)
    if meta.radius != k - 1:
        raise ConstructionError(f"radius {meta.radius} != k-1 = {k - 1}")
    if meta.dmin != 1 + meta.parity:
        raise ConstructionError(f"leaf distance {meta.dmin} != 1 + parity")
    return _Part(merged.lo, len(arena.leaf_seq), meta, k)


def _disconnected(arena: _Arena, parts: list[_Part], isolated: list[int], p: int) -> _Part:
    k = max([P.k for P in parts] + [p + 2])
    leveled = [arena.extend(P, (k - P.k) // 2) for P in parts]
    return _merge(arena, k, leveled, isolated)


def _rho_forest(kids: list[list[int]], roots: list[int], p: int) -> LeafRootResult:
    """Leaf root from the universal-vertex forest of a twin-free TPG.

    ``kids[v]`` lists the forest children of vertex ``v``; a vertex with
    children is the universal vertex of its part (a join node of the cotree),
    a childless one is a leaf of the cotree.
    """
    if p not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    pre = []
    todo = [r for r in roots if kids[r]]
    while todo:
        v = todo.pop()
        pre.append(v)
        todo.extend(c for c in kids[v] if kids[c])
    arena = _Arena()
    stack: list[_Part] = []
    # reversed preorder: children (in list order) before their parent
    for u in reversed(pre):
        ch = kids[u]
        if len(ch) < 2:
            raise ValueError(f"vertex {u} has a true twin; remove twins first")
        isolated = [c for c in ch if not kids[c]]
        s = len(ch) - len(isolated)
        if s == 0:
            stack.append(_star(arena, u, isolated, p))
        else:
            parts = stack[-s:]
            del stack[-s:]
            stack.append(_connected(arena, u, parts, isolated, p))
    if len(roots) > 1:
        isolated = [r for r in roots if not kids[r]]
        final = _disconnected(arena, stack, isolated, p)
    elif stack:
        (final,) = stack
    else:
        raise ValueError("single-vertex graphs are handled by optimal_leaf_root")
    if final.k & 1 != p:
        raise ConstructionError(f"threshold {final.k} has the wrong parity")
    return LeafRootResult(arena.tree, final.meta, final.k, p)


def _cotree_forest(ct: Cotree) -> tuple[list[list[int]], list[int]]:
    """Universal-vertex forest encoded by a twin-free cotree."""
    kind, children, vertex = ct.kind, ct.children, ct.vertex
    kids: list[list[int]] = [[] for _ in range(max(vertex) + 1)]

    def head(x):
        if kind[x] == LEAF:
            return vertex[x]
        if kind[x] == JOIN:
            return vertex[next(c for c in children[x] if kind[c] == LEAF)]
        raise ValueError(f"union node {x} directly below a union node")

    for x in range(ct.num_nodes):
        if kind[x] != JOIN:
            continue
        ch = children[x]
        if len(ch) != 2 or sorted(kind[c] for c in ch) != [LEAF, UNION]:
            raise ValueError(f"join node {x} is not (leaf, union); cotree has twins or is malformed")
        leaf_c = ch[0] if kind[ch[0]] == LEAF else ch[1]
        union_c = ch[1] if leaf_c == ch[0] else ch[0]
        kids[vertex[leaf_c]] = [head(c) for c in children[union_c]]
    if kind[ct.root] == UNION:
        roots = [head(c) for c in children[ct.root]]
    else:
        roots = [head(ct.root)]
    return kids, roots


def rho(ct: Cotree, p: int) -> LeafRootResult:
    """Parity-``p`` optimal leaf root of the twin-free TPG with cotree ``ct``.

    Leaves are labelled with the cotree's vertex ids. The tree is returned in
    arena form (no recanonicalisation).
    """
    if ct.kind[ct.root] == LEAF:
        raise ValueError("single-vertex graphs are handled by optimal_leaf_root")
    kids, roots = _cotree_forest(ct)
    return _rho_forest(kids, roots, p)


# ---------------------------------------------------------------------------
# standalone operations on finished trees


def eta(t: CompressedTree, meta: TreeMeta, delta: int) -> tuple[CompressedTree, TreeMeta]:
    """Lengthen every pendant edge by ``delta``; returns new tree and meta."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if delta == 0:
        return t, meta
    out = t.copy()
    if out.num_vertices <= 2:
        for e in range(out.num_edges):
            out.ew[e] += delta * (2 if out.num_vertices == 2 else 1)
        return out, compute_meta(out)
    for v in out.leaves():
        out.ew[out.inc[v]] += delta
    return out, meta.extended(delta)


def mu(k: int, roots: Sequence[tuple[CompressedTree, TreeMeta]], isolated: Sequence[int]) -> tuple[CompressedTree, TreeMeta]:
    """Merge k-leaf roots of components and isolated vertices into one k-leaf root."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if len(roots) + len(isolated) < 2:
        raise ValueError("mu needs at least two components")
    arena = _Arena()
    parts = []
    for t, m in roots:
        off = arena.tree.num_vertices
        lo = len(arena.leaf_seq)
        for lab in t.label:
            v = arena.tree.add_vertex(None if lab < 0 else lab)
            if lab >= 0:
                arena.leaf_seq.append(v)
        for a, b, w in zip(t.eu, t.ev, t.ew):
            arena.tree.add_edge(a + off, b + off, w)
        parts.append(_Part(lo, len(arena.leaf_seq), m.remap({z: z + off for z in m.center}), k))
    merged = _merge(arena, k, parts, list(isolated))
    return arena.tree, merged.meta


# ---------------------------------------------------------------------------
# public pipeline


def _finish(r: LeafRootResult) -> LeafRootResult:
    keep = r.meta.center
    tree, mapping = recanonicalize(r.tree, keep)
    return dataclasses.replace(r, tree=tree, meta=r.meta.remap(mapping))


def _single(label: int, p: int) -> LeafRootResult:
    t = CompressedTree()
    t.add_vertex(label)
    return LeafRootResult(t, TreeMeta(0, 0, 0, (0,), (0,), 0, 0), p + 2, p)


def _collapse_twins(forest, n: int) -> tuple[list[list[int]], list[int], TwinMap]:
    """Twin-free forest plus the removed twins.

    In the forest of a TPG, true twins are exactly the chains of vertices
    with a single child; each chain keeps its smallest id.
    """
    kids = forest.children
    tm = TwinMap()
    if not any(len(c) == 1 for c in kids):
        tm.kept = list(range(n))
        return kids, forest.roots, tm
    parent = forest.parent
    top = list(range(n))
    members: dict[int, list[int]] = {}
    for v in forest.order:
        q = parent[v]
        if q >= 0 and len(kids[q]) == 1:
            top[v] = top[q]
        members.setdefault(top[v], []).append(v)
    rep = {t: min(m) for t, m in members.items()}
    new_kids: list[list[int]] = [[] for _ in range(n)]
    for t, m in members.items():
        r = rep[t]
        new_kids[r] = [rep[c] for c in kids[m[-1]]]
        for x in sorted(m):
            if x != r:
                tm.representative[x] = r
                tm.order.append(x)
    tm.kept = sorted(rep.values())
    return new_kids, [rep[r] for r in forest.roots], tm


def _parity_root(g: Graph, kids, roots, tm: TwinMap, p: int) -> LeafRootResult:
    if len(roots) == 1 and not kids[roots[0]]:
        r = _single(roots[0], p)
    else:
        r = _rho_forest(kids, roots, p)
    r = _finish(reinsert_twins(r, tm))
    if r.k & 1 != p:
        raise ConstructionError("threshold parity mismatch")
    if r.k > g.n + 1 and g.n > 1:
        raise ConstructionError(f"threshold {r.k} exceeds n+1")
    return r


@gc_paused()
def optimal_leaf_root(g: Graph, mode: str = "best") -> LeafRootResult:
    """Minimum-k leaf root of a TPG for the given parity mode.

    ``mode`` is ``"odd"``, ``"even"`` or ``"best"``. Raises NotTPGError with
    an induced P4/C4 when ``g`` is not trivially perfect.
    """
    if mode not in PARITY_MODES:
        raise ValueError(f"mode must be one of {PARITY_MODES}")
    if g.n == 0:
        raise ValueError("empty graph")
    forest, failure = _degree_forest(g)
    if forest is None:
        raise NotTPGError(*_extract_witness(g, failure))
    kids, roots, tm = _collapse_twins(forest, g.n)
    parities = {"odd": (1,), "even": (0,), "best": (0, 1)}[mode]
    results = [_parity_root(g, kids, roots, tm, p) for p in parities]
    return min(results, key=lambda r: r.k)


def recognize_k_leaf_power(g: Graph, k: int) -> bool:
    """Whether the TPG ``g`` is a k-leaf power.

    Only the optimum of the same parity as ``k`` matters: a k'-leaf root is
    also a (k'+2)-leaf root after extending every pendant edge by one.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return optimal_leaf_root(g, "odd" if k & 1 else "even").k <= k
