import random

from fvs.approx import approximate, shortest_cycle_warm_start
from fvs.cycles import shortest_cycle, shortest_cycle_through
from fvs.generators import complete, cycle, disjoint_union, random_multigraph, theta
from fvs.graph import MultiGraph, verify_solution
from fvs.oracle import min_fvs_size


def test_approximate_examples():
    assert approximate(MultiGraph.from_edges([(0, 1), (1, 2)])).size == 0
    assert approximate(cycle(5)).size == 1
    assert approximate(complete(5)).size == 3


def test_warm_start_examples():
    assert shortest_cycle_warm_start(cycle(5)).size == 1
    assert shortest_cycle_warm_start(disjoint_union(cycle(3), cycle(3))).size == 2
    assert shortest_cycle_warm_start(complete(4)).size == 2


def test_heuristics_feasible_and_above_optimum():
    rng = random.Random(8)
    for _ in range(300):
        g = random_multigraph(rng, 12, 26)
        opt = min_fvs_size(g)
        for sol in (approximate(g), shortest_cycle_warm_start(g)):
            assert verify_solution(g, sol.vertices)
            assert len(set(sol.vertices)) == sol.size >= opt


def test_approximate_respects_undeletable():
    rng = random.Random(4)
    for _ in range(200):
        g = random_multigraph(rng, 10, 20)
        U = {v for v in g.vertices() if rng.random() < 0.3}
        sol = approximate(g, U)
        if min_fvs_size(g, U) is None:
            assert sol is None
        else:
            assert not U & set(sol.vertices)
            assert verify_solution(g, sol.vertices)


def test_shortest_cycle_lengths():
    assert len(shortest_cycle(theta(2, 2, 3))) == 4
    assert shortest_cycle(MultiGraph.from_edges([(0, 1), (1, 2)])) is None
    dbl = MultiGraph.from_edges([(0, 1), (0, 1), (1, 2), (2, 0)])
    assert sorted(shortest_cycle(dbl)) == [0, 1]
    loop = MultiGraph.from_edges([(0, 0), (0, 1)])
    assert shortest_cycle_through(loop, 0) == [0]


def brute_girth_through(g, s):
    # shortest closed walk without repeated vertices through s, by DFS
    best = None

    def dfs(path, seen):
        nonlocal best
        v = path[-1]
        for u, mult in g.neighbors(v).items():
            if u == s and (len(path) > 2 or (len(path) == 2 and mult >= 2)):
                if best is None or len(path) < best:
                    best = len(path)
            elif u not in seen:
                dfs(path + [u], seen | {u})

    if g.has_loop(s):
        return 1
    dfs([s], {s})
    return best


def test_shortest_cycle_through_is_a_shortest_cycle():
    rng = random.Random(21)
    for _ in range(300):
        g = random_multigraph(rng, 9, 14, p_loop=0.0)
        for s in g.vertices():
            cyc = shortest_cycle_through(g, s)
            expect = brute_girth_through(g, s)
            if expect is None:
                assert cyc is None
                continue
            assert cyc[0] == s and len(cyc) == expect == len(set(cyc))
            if len(cyc) == 1:
                assert g.has_loop(s)
                continue
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                assert g.multiplicity(a, b) >= (2 if len(cyc) == 2 else 1)
