import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fvs.generators import complete, cycle, random_multigraph
from fvs.graph import (ContractViolation, Instance, MultiGraph, components, delete_vertex,
                       is_acyclic, suppress_vertex, verify_solution)
from fvs.oracle import min_fvs_size


def ids(g, *labels):
    return [g.id_of(x) for x in labels]


def test_delete_star_center():
    g = MultiGraph.from_edges([("c", "a"), ("c", "b"), ("c", "d")])
    delete_vertex(g, g.id_of("c"))
    assert g.n == 3 and g.m == 0
    assert all(g.degree(v) == 0 for v in g.vertices())


def test_delete_triangle_vertex():
    g = cycle(3)
    delete_vertex(g, 0)
    assert g.n == 2 and g.m == 1


def test_delete_double_edge_endpoint():
    g = MultiGraph.from_edges([("u", "v"), ("u", "v"), ("v", "w")])
    u, v = ids(g, "u", "v")
    assert g.degree(v) == 3
    delete_vertex(g, u)
    assert g.degree(v) == 1


def test_delete_dead_vertex_is_violation():
    g = cycle(3)
    delete_vertex(g, 0)
    with pytest.raises(ContractViolation):
        delete_vertex(g, 0)


def test_suppress_path():
    g = MultiGraph.from_edges([("a", "b"), ("b", "c")])
    a, b, c = ids(g, "a", "b", "c")
    assert set(suppress_vertex(g, b)) == {a, c}
    assert g.multiplicity(a, c) == 1 and g.n == 2


def test_suppress_double_edge_gives_loop():
    g = MultiGraph.from_edges([("u", "v"), ("u", "v"), ("u", "x")])
    u, v = ids(g, "u", "v")
    suppress_vertex(g, v)
    assert g.has_loop(u)
    assert g.degree(u) == 3


def test_suppress_square_twice_gives_double_edge():
    g = MultiGraph.from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    a, b, c, d = ids(g, "a", "b", "c", "d")
    suppress_vertex(g, b)
    suppress_vertex(g, d)
    assert g.multiplicity(a, c) == 2


def test_suppress_wrong_degree_is_violation():
    g = complete(4)
    with pytest.raises(ContractViolation):
        suppress_vertex(g, 0)


def test_is_acyclic_examples():
    forest = MultiGraph.from_edges([(0, 1), (1, 2), (3, 4)])
    assert is_acyclic(forest)
    dbl = MultiGraph.from_edges([(0, 1), (0, 1), (1, 2)])
    assert not is_acyclic(dbl, [0, 1])
    assert is_acyclic(dbl, [1, 2])
    c5 = cycle(5)
    assert not is_acyclic(c5)
    assert is_acyclic(c5, [0, 1, 2, 3])


def test_verify_solution_examples():
    c5 = cycle(5)
    assert all(verify_solution(c5, [v]) for v in c5.vertices())
    k4 = complete(4)
    assert not any(verify_solution(k4, [v]) for v in k4.vertices())
    assert all(verify_solution(k4, pair) for pair in combinations(range(4), 2))
    g = MultiGraph.from_edges([("v", "v"), ("v", "w")])
    assert not verify_solution(g, [g.id_of("w")])
    assert verify_solution(g, [g.id_of("v")])


def test_components_examples():
    two = MultiGraph.from_edges([(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    assert sorted(len(c) for c in components(two)) == [3, 3]
    assert len(components(complete(5))) == 1
    assert components(MultiGraph()) == []


def test_labels_bijective_and_ids_stable():
    g = MultiGraph.from_edges([("x", "y"), ("y", "z")])
    x, y, z = ids(g, "x", "y", "z")
    delete_vertex(g, y)
    assert g.id_of("z") == z and g.label(z) == "z"
    assert {g.label(v) for v in g.vertices()} == {"x", "z"}


def test_identify_contracts_and_detects_loops():
    g = MultiGraph.from_edges([("a", "b"), ("b", "c"), ("a", "c")])
    a, b, c = ids(g, "a", "b", "c")
    assert not g.identify(a, b)
    assert g.multiplicity(a, c) == 2
    assert g.identify(a, c)
    g.audit()


def union_find_acyclic(g):
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for a, b, mult in g.edges():
        if a == b:
            return False
        for _ in range(mult):
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
    return True


def test_is_acyclic_matches_union_find():
    rng = random.Random(99)
    for _ in range(1000):
        g = random_multigraph(rng, 12, 16)
        assert is_acyclic(g) == union_find_acyclic(g)


ops = st.lists(st.tuples(st.sampled_from(["add", "del", "sup", "loop", "cap", "ident"]),
                         st.integers(0, 9), st.integers(0, 9)), max_size=40)


@settings(max_examples=200, deadline=None)
@given(ops)
def test_counters_and_symmetry_survive_any_operations(seq):
    g = MultiGraph.from_edges([], range(10))
    for op, a, b in seq:
        live = sorted(g.vertices())
        if not live:
            break
        a, b = live[a % len(live)], live[b % len(live)]
        if op == "add" and a != b:
            g.add_edge(a, b)
        elif op == "loop":
            g.add_edge(a, a)
        elif op == "del":
            g.delete_vertex(a)
        elif op == "sup" and g.degree(a) == 2 and not g.has_loop(a):
            g.suppress_vertex(a)
        elif op == "cap":
            g.cap_multiplicity(a, 2)
        elif op == "ident" and a != b:
            g.identify(a, b)
        g.audit()


def test_suppression_preserves_optimum():
    rng = random.Random(3)
    checked = 0
    for _ in range(400):
        g = random_multigraph(rng, 10, 16)
        cands = [v for v in g.vertices() if g.degree(v) == 2 and not g.has_loop(v)]
        if not cands:
            continue
        before = min_fvs_size(g)
        h = g.copy()
        h.suppress_vertex(cands[0])
        assert min_fvs_size(h) == before
        checked += 1
    assert checked > 50


def test_instance_invariants_after_moves():
    g = MultiGraph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    inst = Instance.from_graph(g, budget=2, undeletable=[0])
    inst.take(1)
    assert 1 not in set(inst.graph.vertices())
    assert inst.forced == [1] and inst.budget == 1
    assert inst.undeletable <= set(inst.graph.vertices())
    with pytest.raises(ContractViolation):
        inst.take(0)
