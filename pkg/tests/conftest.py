import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from leafroot.gen import gen_dart, gen_example25, gen_random_tpg
from leafroot.graph import Graph
from leafroot.wtree import CompressedTree

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# dart vertex ids
U0, U1, V0, V1, V2 = range(5)


def star_tree(lengths: dict) -> CompressedTree:
    """Hub with one pendant per graph vertex at the given lengths."""
    t = CompressedTree()
    hub = t.add_vertex()
    for lab, w in lengths.items():
        t.attach_path(hub, w, lab)
    return t


def dart_tree_5() -> CompressedTree:
    """The drawn 5-leaf root of the dart: a single hub."""
    return star_tree({U0: 1, U1: 2, V1: 3, V2: 3, V0: 4})


def dart_tree_4() -> CompressedTree:
    """The drawn 4-leaf root of the dart: two hubs a (near v1, u1) and b (near u0, v2, v0)."""
    t = CompressedTree()
    a = t.add_vertex()
    b = t.add_vertex()
    t.add_edge(a, b, 1)
    t.attach_path(a, 2, V1)
    t.attach_path(a, 1, U1)
    t.attach_path(b, 1, U0)
    t.attach_path(b, 2, V2)
    t.attach_path(b, 3, V0)
    return t


def random_tree(rng: random.Random, leaves: int, max_w: int = 5) -> CompressedTree:
    """Random tree whose internal vertices have degree >= 3."""
    t = CompressedTree()
    if leaves == 1:
        t.add_vertex(0)
        return t
    if leaves == 2:
        t.add_vertex(0)
        t.add_vertex(1)
        t.add_edge(0, 1, rng.randint(1, max_w))
        return t
    hub = t.add_vertex()
    internal = [hub]
    for lab in range(leaves):
        if lab >= 3 and rng.random() < 0.3:
            # subdivide a pendant edge of an existing leaf
            leaf = rng.choice([v for v in range(t.num_vertices) if t.label[v] >= 0])
            e = t.leaf_edge(leaf)
            a, b, w = t.edge(e)
            q = a if b == leaf else b
            if w > 1:
                x = t.split_edge(e, q, rng.randint(1, w - 1))
            else:
                t.ew[e] += 1
                x = t.split_edge(e, q, 1)
            internal.append(x)
            t.attach_path(x, rng.randint(1, max_w), lab)
        else:
            t.attach_path(rng.choice(internal), rng.randint(1, max_w), lab)
    return t


@pytest.fixture
def dart() -> Graph:
    return gen_dart()


@pytest.fixture
def ex25() -> Graph:
    return gen_example25()


def twin_free_tpgs(max_n: int = 40):
    return st.builds(
        gen_random_tpg,
        n=st.integers(1, max_n),
        seed=st.integers(0, 2**32),
        branching=st.integers(1, 5),
        depth=st.integers(1, 8),
    )


@st.composite
def tpgs_with_twins(draw, max_n: int = 30):
    """Random twin-free TPG with extra true twins glued on."""
    g = draw(twin_free_tpgs(max_n))
    extra = draw(st.lists(st.integers(0, g.n - 1), max_size=6))
    adj = [set(a) for a in g.adj]
    for rep in extra:
        x = len(adj)
        adj.append(set(adj[rep]) | {rep})
        for w in adj[x]:
            adj[w].add(x)
    return Graph(len(adj), [sorted(a) for a in adj])


@st.composite
def small_graphs(draw, max_n: int = 8):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


# acceptance lines collected by test_acceptance.py, printed after the run
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
