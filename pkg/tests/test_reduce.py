import random

from hypothesis import given, settings
from hypothesis import strategies as st

from fvs.generators import complete, cycle, disjoint_union, random_multigraph
from fvs.graph import Instance, MultiGraph, ReductionQueue
from fvs.oracle import min_fvs_size
from fvs.reduce import lower_bound_prune, reduce_exhaustively, split_components

BIG = 1 << 40


def reduced(g, k=BIG, undeletable=()):
    inst = Instance.from_graph(g.copy(), budget=k, undeletable=undeletable)
    reduce_exhaustively(inst)
    return inst


def test_path_vanishes():
    inst = reduced(MultiGraph.from_edges([(i, i + 1) for i in range(4)]), k=0)
    assert inst.graph.n == 0 and inst.forced == [] and not inst.infeasible


def test_triangle_with_pendant():
    g = MultiGraph.from_edges([("a", "b"), ("b", "c"), ("c", "a"), ("c", "p")])
    inst = reduced(g, k=1)
    assert inst.graph.n == 0 and len(inst.forced) == 1 and not inst.infeasible
    assert min_fvs_size(g) == 1


def test_undeletable_loop_is_infeasible():
    g = MultiGraph.from_edges([("v", "v"), ("v", "w"), ("w", "x"), ("x", "v")])
    for k in (0, 5):
        assert reduced(g, k=k, undeletable=[g.id_of("v")]).infeasible


def test_fixpoint_properties():
    rng = random.Random(11)
    for _ in range(500):
        g = random_multigraph(rng, 12, 30)
        vs = list(g.vertices())
        U = [v for v in vs if rng.random() < 0.2]
        inst = reduced(g, undeletable=U)
        if inst.infeasible:
            continue
        h = inst.graph
        h.audit()
        for v in h.vertices():
            assert not h.has_loop(v)
            assert all(m <= 2 for m in h.neighbors(v).values())
            if h.degree(v) <= 2:
                assert v in inst.undeletable or v in inst.irreducible
        assert inst.irreducible <= inst.undeletable
        assert inst.undeletable <= set(h.vertices())
        assert not set(inst.forced) & set(h.vertices())


def test_safety_for_every_prefix():
    rng = random.Random(2024)
    for _ in range(300):
        g = random_multigraph(rng, 10, 20)
        vs = list(g.vertices())
        U = [v for v in vs if rng.random() < 0.15]
        opt = min_fvs_size(g, U)
        steps = rng.randint(0, 3 * len(vs))
        inst = Instance.from_graph(g.copy(), budget=BIG, undeletable=U)
        if inst.infeasible:
            assert opt is None
            continue
        reduce_exhaustively(inst, max_steps=steps)
        if inst.infeasible:
            assert opt is None
            continue
        rest = min_fvs_size(inst.graph, inst.undeletable)
        if opt is None:
            assert rest is None
        else:
            assert rest is not None and len(inst.forced) + rest == opt


def test_confluence_of_values():
    rng = random.Random(5)
    for _ in range(200):
        g = random_multigraph(rng, 10, 22)
        results = set()
        for order_seed in range(3):
            inst = Instance.from_graph(g.copy(), budget=BIG)
            order = list(inst.graph.vertices())
            random.Random(order_seed).shuffle(order)
            reduce_exhaustively(inst, queue=ReductionQueue(order))
            results.add(len(inst.forced) + min_fvs_size(inst.graph, inst.undeletable))
        assert len(results) == 1


def test_lower_bound_examples():
    c5 = cycle(5)
    assert lower_bound_prune(Instance.from_graph(c5.copy(), budget=0))
    assert not lower_bound_prune(Instance.from_graph(c5.copy(), budget=1))
    forest = MultiGraph.from_edges([(0, 1), (1, 2), (1, 3)])
    assert not lower_bound_prune(Instance.from_graph(forest, budget=0))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_lower_bound_never_prunes_feasible(seed):
    rng = random.Random(seed)
    g = random_multigraph(rng, 11, 26)
    U = [v for v in g.vertices() if rng.random() < 0.2]
    opt = min_fvs_size(g, U)
    if opt is None:
        return
    for k in (opt, opt + 1):
        inst = Instance.from_graph(g.copy(), budget=k, undeletable=U)
        assert not lower_bound_prune(inst)


def component_solver(sub, cap):
    opt = min_fvs_size(sub.graph, sub.undeletable)
    if opt is None or opt > cap:
        return None
    from fvs.oracle import min_fvs_bruteforce
    return list(min_fvs_bruteforce(sub.graph, sub.undeletable).vertices)


def test_split_two_triangles_and_c5():
    g = disjoint_union(cycle(3), cycle(3), cycle(5))
    inst = Instance.from_graph(g, budget=5)
    sizes = []
    split_components(inst, component_solver, sizes)
    assert sorted(sizes) == [3, 3]
    assert inst.graph.n == 5 and inst.budget == 3 and len(inst.forced) == 2


def test_split_connected_unchanged():
    inst = Instance.from_graph(complete(4), budget=2)
    split_components(inst, component_solver)
    assert inst.graph.n == 4 and inst.budget == 2 and inst.forced == []


def test_split_triangle_and_k4():
    g = disjoint_union(cycle(3), complete(4))
    inst = Instance.from_graph(g.copy(), budget=2)
    split_components(inst, component_solver)
    assert inst.graph.n == 4 and inst.budget == 1
    assert min_fvs_size(inst.graph) > inst.budget
    assert min_fvs_size(g) == 3
