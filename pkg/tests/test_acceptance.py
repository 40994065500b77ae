"""Acceptance criteria, one test per criterion.

Each test records a single ``criterion N: PASS|FAIL ...`` line that is
printed in the terminal summary (and directly when run as a script).
"""
import gc
import itertools
import random
import sys
import time

import pytest

from leafroot.construct import optimal_leaf_root, recognize_k_leaf_power
from leafroot.gen import enumerate_small_tpgs, gen_dart, gen_example25, gen_family_f, gen_random_tpg
from leafroot.graph import Graph, connected_components, reinsert_twins, remove_true_twins
from leafroot.verify import (
    brute_force_is_k_leaf_power,
    brute_force_min_diameter,
    check_structural_theorems,
    is_k_leaf_root,
    oracle_sweep,
)
from leafroot.wtree import compute_meta

from conftest import ACCEPTANCE_LINES

# tolerances
DART_LIMIT_S = 0.010
F5_LIMIT_S = 1.0
ORACLE_LIMIT_S = 30 * 60
LINEAR_STEP_FACTOR = 15.0
LINEAR_MAX_S = 10.0
LINEAR_SIZES = (10**4, 10**5, 10**6)
# bench instances: m is about 3.5 n
LINEAR_BRANCHING, LINEAR_DEPTH = 64, 4


def report(num, ok, detail):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    if __name__ == "__main__":
        print(line, flush=True)
    return ok


def timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t


def test_c1_dart():
    g = gen_dart()
    odd, even, best = (optimal_leaf_root(g, m) for m in ("odd", "even", "best"))
    times = []
    for _ in range(5):
        times.append(timed(optimal_leaf_root, g, "best")[1])
    ok_k = (odd.k, even.k, best.k) == (5, 4, 4)
    ok_v = is_k_leaf_root(odd.tree, g, 5).ok and is_k_leaf_root(even.tree, g, 4).ok
    t = min(times)
    ok = report(1, ok_k and ok_v and t < DART_LIMIT_S,
                f"dart odd={odd.k} even={even.k} best={best.k} verified={ok_v} time={t * 1e3:.2f}ms (< {DART_LIMIT_S * 1e3:.0f}ms)")
    assert ok


def test_c2_example25():
    g = gen_example25()
    odd, even = optimal_leaf_root(g, "odd"), optimal_leaf_root(g, "even")
    m = compute_meta(odd.tree.copy())
    got = (odd.k, m.diameter, m.radius, m.dmin, even.k)
    ok = report(2, got == (11, 19, 10, 2, 12),
                f"25-vertex example odd k={odd.k} diam={m.diameter} rad={m.radius} dmin={m.dmin} even k={even.k} (want 11/19/10/2, 12)")
    assert ok


def test_c3_family():
    rows = []
    ok = True
    f5_time = 0.0
    for i in range(1, 6):
        g = gen_family_f(i)
        (odd, t1) = timed(optimal_leaf_root, g, "odd")
        (even, t2) = timed(optimal_leaf_root, g, "even")
        want_odd = 2 ** (i + 2) - 1
        want_even = want_odd + 2**i - 1
        ok &= odd.k == want_odd and even.k == want_even
        rows.append(f"F{i}:{odd.k}/{even.k}")
        if i == 5:
            ok &= g.n == 1576
            f5_time = max(t1, t2)
    ok &= f5_time < F5_LIMIT_S
    assert report(3, ok, f"{' '.join(rows)} |F5|={gen_family_f(5).n} F5 time={f5_time:.3f}s (< {F5_LIMIT_S}s)")


def test_c4_oracle_equivalence():
    t = time.perf_counter()
    rows = list(oracle_sweep(enumerate_small_tpgs(6)))
    el = time.perf_counter() - t
    bad = [r for r in rows if not r["agree"]]
    ok = report(4, not bad and el <= ORACLE_LIMIT_S,
                f"{len(rows)} (graph, parity) rows n<=6, disagreements={len(bad)}, time={el:.1f}s (<= {ORACLE_LIMIT_S}s)")
    assert ok


def test_c5_recognition_equivalence():
    bad = 0
    total = 0
    for g in enumerate_small_tpgs(5, twin_free=False):
        for k in range(2, 9):
            total += 1
            bad += recognize_k_leaf_power(g, k) != brute_force_is_k_leaf_power(g, k)
    assert report(5, bad == 0, f"{total} (graph, k) pairs over all TPGs n<=5, k in [2,8], disagreements={bad}")


def test_c6_structural_suite():
    failures = 0
    count = 0
    for n in (20, 50, 200):
        for seed in range(1000):
            g = gen_random_tpg(n, seed=seed, branching=1 + seed % 5, depth=2 + seed % 7)
            connected = len(connected_components(g)) == 1
            for mode, p in (("odd", 1), ("even", 0)):
                count += 1
                r = optimal_leaf_root(g, mode)
                rep = check_structural_theorems(r, g)
                ok = rep.ok and r.k % 2 == p and r.k <= n + 1
                if connected:
                    m = compute_meta(r.tree.copy())
                    ok &= m.radius == r.k - 1 and m.dmin == 1 + m.parity
                failures += not ok
    assert report(6, failures == 0, f"{count} random constructions (n in 20/50/200, both parities), failures={failures}")


def test_c7_linearity():
    times = []
    best_times = []
    ms = []
    for n in LINEAR_SIZES:
        g = gen_random_tpg(n, seed=7, branching=LINEAR_BRANCHING, depth=LINEAR_DEPTH)
        ms.append(g.m)
        gc.collect()
        times.append(timed(optimal_leaf_root, g, "odd")[1])
        best_times.append(timed(optimal_leaf_root, g, "best")[1])
        del g
    ratios = [b / a for a, b in zip(times, times[1:])]
    ok = all(r <= LINEAR_STEP_FACTOR for r in ratios) and times[-1] <= LINEAR_MAX_S
    detail = " ".join(f"n={n} m={m} t={t:.2f}s" for n, m, t in zip(LINEAR_SIZES, ms, times))
    detail += f" ratios={','.join(f'{r:.1f}' for r in ratios)} (<= {LINEAR_STEP_FACTOR}, last <= {LINEAR_MAX_S}s)"
    detail += f" [best-of-both-parities: {','.join(f'{t:.2f}s' for t in best_times)}]"
    assert report(7, ok, detail)


def _t3_violations(graphs):
    bad = []
    for g in graphs:
        for mode in ("odd", "even"):
            r = optimal_leaf_root(g, mode)
            for kp in range(r.k, g.n + 4, 2):
                d = brute_force_min_diameter(g, kp)
                if d is not None and d < r.meta.diameter + kp - r.k:
                    bad.append((g, mode, kp))
    return bad


def _is_complete(g):
    return g.m == g.n * (g.n - 1) // 2


@pytest.mark.xfail(strict=True, reason="diameter optimality cannot hold for complete or disconnected inputs")
def test_c8_diameter_all_tpgs():
    graphs = [g for g in enumerate_small_tpgs(5, twin_free=False) if g.n >= 2]
    bad = _t3_violations(graphs)
    outside = sum(1 for g, _, _ in bad if _is_complete(g) or len(connected_components(g)) > 1)
    report(8, not bad, f"all TPGs n<=5: {len(bad)} violations, {outside} of them on complete or disconnected graphs")
    assert not bad


def test_c8_diameter_connected():
    graphs = [
        g for g in enumerate_small_tpgs(5, twin_free=False)
        if g.n >= 2 and not _is_complete(g) and len(connected_components(g)) == 1
    ]
    bad = _t3_violations(graphs)
    report("8b", not bad, f"connected non-complete TPGs n<=5 ({len(graphs)} graphs): {len(bad)} violations")
    assert not bad


def _with_twins(g, rng):
    adj = [set(a) for a in g.adj]
    for _ in range(rng.randint(1, 5)):
        rep = rng.randrange(len(adj))
        x = len(adj)
        adj.append(set(adj[rep]) | {rep})
        for w in adj[x]:
            adj[w].add(x)
    return Graph(len(adj), [sorted(a) for a in adj])


def test_c9_twins_and_complete():
    ok = True
    for t in range(1, 9):
        g = Graph.from_edges(t, itertools.combinations(range(t), 2))
        even, odd = optimal_leaf_root(g, "even"), optimal_leaf_root(g, "odd")
        ok &= even.k == 2 and odd.k == 3
        ok &= is_k_leaf_root(even.tree, g, 2).ok and is_k_leaf_root(odd.tree, g, 3).ok
    rng = random.Random(2024)
    round_trip_fail = 0
    for i in range(500):
        g = _with_twins(gen_random_tpg(rng.randint(1, 40), seed=i), rng)
        reduced, tm = remove_true_twins(g)
        r = optimal_leaf_root(reduced, "odd" if i % 2 else "even")
        t = r.tree.copy()
        t.label = [tm.kept[lab] if lab >= 0 else -1 for lab in t.label]
        out = reinsert_twins(type(r)(t, r.meta, r.k, r.parity), tm)
        round_trip_fail += not is_k_leaf_root(out.tree, g, r.k).ok
    ok &= round_trip_fail == 0
    assert report(9, ok, f"K1..K8 even=2 odd=3 verified; twin round trip failures={round_trip_fail}/500")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
