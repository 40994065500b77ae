import itertools
import os
import random

import pytest
from hypothesis import given, strategies as st

from leafroot.construct import optimal_leaf_root
from leafroot.gen import enumerate_small_tpgs, gen_star
from leafroot.graph import Graph
from leafroot.verify import (
    CSV_FIELDS,
    LeafSetMismatch,
    OracleLimitError,
    OracleLimits,
    brute_force_is_k_leaf_power,
    brute_force_min_diameter,
    brute_force_optimal,
    check_structural_theorems,
    is_k_leaf_root,
    labelled_topologies,
    min_k_for_tree,
    oracle_sweep,
    rows_to_csv,
    worker_count,
)
from leafroot.wtree import CompressedTree, all_leaf_distances

from conftest import U0, U1, V1, dart_tree_4, dart_tree_5, random_tree, star_tree


def complete(n):
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def test_drawn_roots_verify(dart):
    assert is_k_leaf_root(dart_tree_5(), dart, 5).ok
    assert is_k_leaf_root(dart_tree_4(), dart, 4).ok


def test_drawn_5_root_fails_at_4(dart):
    rep = is_k_leaf_root(dart_tree_5(), dart, 4)
    assert not rep.ok
    assert rep.checked_pairs == 10
    # u1 sits at distance 5 from both v1 and v2, and so does v0 from u0
    bad = {(x, y) for x, y, d, rel in rep.violations}
    assert all(rel == "edge" and d == 5 for _, _, d, rel in rep.violations)
    assert (U1, V1) in bad and (U0, 2) in bad
    assert "ok=false" in rep.render()


def test_single_edge():
    t = CompressedTree()
    t.add_vertex(0)
    t.add_vertex(1)
    t.add_edge(0, 1, 2)
    assert is_k_leaf_root(t, complete(2), 2).ok


def test_leaf_mismatch(dart):
    with pytest.raises(LeafSetMismatch):
        is_k_leaf_root(star_tree({0: 1, 1: 1, 2: 1}), dart, 4)
    with pytest.raises(LeafSetMismatch):
        min_k_for_tree(star_tree({0: 1, 1: 1, 2: 1}), dart)


def test_min_k_for_tree(dart):
    assert min_k_for_tree(dart_tree_5(), dart) == 5
    assert min_k_for_tree(dart_tree_4(), dart) == 4
    t = star_tree({0: 1, 1: 2, 2: 3})
    assert min_k_for_tree(t, complete(3)) == 5
    # no threshold separates a path's edges from its non-edge here
    assert min_k_for_tree(star_tree({0: 1, 1: 1, 2: 1}), Graph.from_edges(3, [(0, 1)])) is None


def test_topology_counts():
    assert [sum(1 for _ in labelled_topologies(n)) for n in range(1, 7)] == [1, 1, 1, 4, 26, 236]


def test_topologies_are_valid_and_distinct():
    seen = set()
    for edges in labelled_topologies(5):
        t = CompressedTree()
        N = max(max(e) for e in edges) + 1
        for v in range(N):
            t.add_vertex(v if v < 5 else None)
        for a, b in edges:
            t.add_edge(a, b, 1)
        assert t.check() == []
        assert all(t.deg[v] >= 3 for v in range(5, N))
        # leaf-pair distances determine the unit tree's shape up to relabelling internals
        seen.add(tuple(sorted(all_leaf_distances(t).items())))
    assert len(seen) == 26


def test_oracle_examples(dart):
    p3 = gen_star(2)
    assert brute_force_optimal(p3, 1)[0] == 3
    assert brute_force_optimal(p3, 0)[0] == 4
    k, t = brute_force_optimal(dart, 1)
    assert k == 5 and is_k_leaf_root(t, dart, 5).ok
    assert brute_force_optimal(dart, 0)[0] == 4
    assert not brute_force_is_k_leaf_power(dart, 3)
    assert brute_force_is_k_leaf_power(dart, 4)
    assert brute_force_is_k_leaf_power(Graph(2, [[], []]), 2)


def test_oracle_limits():
    g = Graph(7, [[]] * 7)
    with pytest.raises(OracleLimitError):
        brute_force_optimal(g, 1)
    with pytest.raises(OracleLimitError):
        brute_force_is_k_leaf_power(g, 3, OracleLimits(max_n=5))


def test_min_diameter_dart(dart):
    # the constructed even root of the dart has the smallest possible diameter
    assert brute_force_min_diameter(dart, 4) == optimal_leaf_root(dart, "even").meta.diameter == 6


@given(st.integers(2, 9), st.integers(2, 8), st.integers(0, 10**6))
def test_weight_cap_is_sound(leaves, k, seed):
    # capping weights above k+1 never changes which pairs are within distance k
    t = random_tree(random.Random(seed), leaves, max_w=3 * k)
    capped = t.copy()
    capped.ew = [min(w, k + 1) for w in t.ew]
    a, b = all_leaf_distances(t), all_leaf_distances(capped)
    assert {p: d <= k for p, d in a.items()} == {p: d <= k for p, d in b.items()}


def test_oracle_agrees_small():
    for g in enumerate_small_tpgs(5, twin_free=False):
        for p in (0, 1):
            assert brute_force_optimal(g, p)[0] == optimal_leaf_root(g, "even" if p == 0 else "odd").k


def test_structural_report_examples(ex25):
    r = optimal_leaf_root(ex25, "odd")
    rep = check_structural_theorems(r, ex25)
    assert rep.ok and r.meta.radius == 10 and r.meta.dmin == 2 and r.meta.diameter == 19
    k5 = complete(5)
    rep = check_structural_theorems(optimal_leaf_root(k5, "even"), k5)
    assert rep.ok
    assert rep.checks["radius_is_k_minus_1"] is None and rep.checks["k_bound"]
    for t in (2, 3, 6):
        g = gen_star(t)
        r = optimal_leaf_root(g, "odd")
        assert (r.meta.radius, r.meta.dmin) == (2, 1) and check_structural_theorems(r, g).ok


def test_structural_report_flags_bad_tree(dart):
    r = optimal_leaf_root(dart, "odd")
    broken = type(r)(dart_tree_5(), r.meta, 4, 0)
    rep = check_structural_theorems(broken, dart)
    assert not rep.ok and "verifies" in rep.failures()


def test_sweep_rows():
    rows = list(oracle_sweep(enumerate_small_tpgs(4), workers=1))
    assert all(r["agree"] for r in rows)
    assert len(rows) == 2 * sum(1 for _ in enumerate_small_tpgs(4))
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == ",".join(CSV_FIELDS)


def test_worker_count(monkeypatch):
    monkeypatch.setenv("LEAFROOT_THREADS", "3")
    assert worker_count() == min(3, os.cpu_count() or 1)
    monkeypatch.setenv("LEAFROOT_THREADS", "0")
    assert worker_count() >= 1
