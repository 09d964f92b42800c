import random

import pytest

from fvs.generators import cycle, random_multigraph
from fvs.graph import ContractViolation, Instance, MultiGraph
from fvs.halfint import (HalfIntegralAssignment, RootedProblem, ii_step, rooted_integral_bruteforce,
                         solve_relaxation)
from fvs.oracle import min_fvs_size
from fvs.reduce import reduce_exhaustively


def rooted(edges, root, undeletable=()):
    g = MultiGraph.from_edges(edges)
    return RootedProblem(g, g.id_of(root), frozenset(g.id_of(u) for u in undeletable))


TRIANGLE = [("s", "a"), ("a", "b"), ("b", "s")]
TWO_TRIANGLES = [("s", "a"), ("a", "b"), ("b", "c"), ("c", "a"),
                 ("s", "d"), ("d", "e"), ("e", "f"), ("f", "d")]
# wheel: the root is the hub of a fan of five triangles closed into a ring
FAN = [("s", r) for r in "abcde"] + [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")]


def test_bruteforce_examples():
    assert rooted_integral_bruteforce(rooted([("s", "a"), ("a", "b")], "s")) == frozenset()
    assert len(rooted_integral_bruteforce(rooted(TRIANGLE, "s"))) == 1
    assert len(rooted_integral_bruteforce(rooted(TWO_TRIANGLES, "s"))) == 2


def test_bruteforce_size_limit():
    g = cycle(25)
    with pytest.raises(ContractViolation):
        rooted_integral_bruteforce(RootedProblem(g, 0))


@pytest.mark.parametrize("method", ["search", "lp"])
def test_relaxation_examples(method):
    tree = solve_relaxation(rooted([("s", "a"), ("a", "b")], "s"), method)
    assert tree.total == 0 and tree.values == {}
    tri = solve_relaxation(rooted(TRIANGLE, "s"), method)
    assert tri.total == 1 and tri.is_half_integral()
    p = rooted(FAN, "s")
    fan = solve_relaxation(p, method)
    assert fan.total == 2.5
    assert len(rooted_integral_bruteforce(p)) == 3
    assert fan.region == frozenset({p.root})
    assert all(fan.value(v) == 0.5 for v in p.graph.neighbors(p.root))


@pytest.mark.parametrize("method", ["search", "lp", "auto"])
def test_sandwich_bound(method):
    rng = random.Random(101)
    for _ in range(120):
        g = random_multigraph(rng, 12, 24)
        vs = list(g.vertices())
        s = rng.choice(vs)
        U = frozenset(v for v in vs if v != s and rng.random() < 0.2)
        p = RootedProblem(g, s, U)
        sol = solve_relaxation(p, method)
        integral = rooted_integral_bruteforce(p)
        if integral is None:
            assert sol is None
            continue
        assert isinstance(sol, HalfIntegralAssignment) and sol.is_half_integral()
        assert sol.total == sum(sol.values.values())
        assert sol.total <= len(integral) <= 2 * sol.total
        assert not U & set(sol.values)


def test_search_and_lp_agree():
    rng = random.Random(202)
    for _ in range(150):
        g = random_multigraph(rng, 10, 22)
        s = rng.choice(list(g.vertices()))
        p = RootedProblem(g, s)
        a, b = solve_relaxation(p, "search"), solve_relaxation(p, "lp")
        assert (a is None) == (b is None)
        if a is not None:
            assert a.total == b.total


def test_ii_step_without_undeletable_branches_on_max_degree():
    g = MultiGraph.from_edges([("c", i) for i in range(5)] + [(0, 1), (1, 2), (2, 0)])
    inst = Instance(graph=g, budget=3)
    assert ii_step(inst) == ("branch", g.id_of("c"))


def test_ii_step_tree_component_removed():
    g = MultiGraph.from_edges([("u", "a"), ("u", "b"), ("a", "c"), ("x", "y"), ("y", "z"), ("z", "x")])
    inst = Instance(graph=g, undeletable={g.id_of("u")}, budget=3)
    assert ii_step(inst) == ("greedy", None)
    assert not any(inst.graph.is_live(g.id_of(x)) for x in "uabc")
    assert inst.graph.n == 3


def test_ii_step_fan_branches_on_neighbour():
    g = MultiGraph.from_edges(FAN + [("a", "x"), ("x", "c"), ("x", "d")])
    s = g.id_of("s")
    inst = Instance(graph=g, undeletable={s}, budget=5)
    kind, v = ii_step(inst)
    assert kind == "branch" and v in g.neighbors(s)
    assert g.degree(v) == max(g.degree(u) for u in g.neighbors(s))


def test_greedy_steps_keep_optimum():
    rng = random.Random(303)
    greedy = 0
    for _ in range(400):
        g = random_multigraph(rng, 13, 30, p_loop=0.0)
        U = [v for v in g.vertices() if rng.random() < 0.3]
        inst = Instance.from_graph(g.copy(), budget=1 << 40, undeletable=U)
        if rng.random() < 0.5:
            reduce_exhaustively(inst)
        if inst.infeasible or not inst.undeletable:
            continue
        before = len(inst.forced) + min_fvs_size(inst.graph, inst.undeletable)
        for method in ("search", "lp"):
            work = inst.copy()
            kind, _ = ii_step(work, method)
            if kind != "greedy":
                continue
            greedy += 1
            rest = None if work.infeasible else min_fvs_size(work.graph, work.undeletable)
            assert rest is not None and len(work.forced) + rest == before
    assert greedy > 20


def test_ii_step_prunes_when_relaxation_exceeds_budget():
    # the wheel relaxes to 2.5, so no solution avoiding the hub fits in 2
    g = MultiGraph.from_edges(FAN)
    s = g.id_of("s")
    tight = Instance(graph=g.copy(), undeletable={s}, budget=2)
    assert ii_step(tight) == ("greedy", None) and tight.infeasible
    roomy = Instance(graph=g.copy(), undeletable={s}, budget=3)
    ii_step(roomy)
    assert not roomy.infeasible
