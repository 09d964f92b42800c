"""Greedy upper bounds: reduce-then-take-max-degree, and the shortest-cycle variant."""

from __future__ import annotations

from typing import Iterable

from .cycles import shortest_cycle
from .graph import Instance, MultiGraph, Solution
from .reduce import reduce_exhaustively

UNBOUNDED = 1 << 60


def approximate(g: MultiGraph, undeletable: Iterable[int] = ()) -> Solution | None:
    """Reduce as long as possible, then delete a highest-degree vertex; repeat.

    Vertices are returned in the order they left the graph (reduction-forced
    ones included). Returns None only when the undeletable set itself
    contains a cycle.
    """
    inst = Instance.from_graph(g.copy(), budget=UNBOUNDED, undeletable=undeletable)
    return approximate_instance(inst)


def approximate_instance(inst: Instance) -> Solution | None:
    """Same as :func:`approximate`, but consumes an existing instance."""
    inst.budget = UNBOUNDED
    g = inst.graph
    U = inst.undeletable
    while True:
        reduce_exhaustively(inst)
        if inst.infeasible:
            return None
        if g.n == 0:
            return Solution(tuple(inst.forced))
        best, best_deg = -1, -1
        for v in g.vertices():
            if v not in U:
                d = g.degree(v)
                if d > best_deg:
                    best, best_deg = v, d
        if best < 0:
            return None
        inst.take(best)


def shortest_cycle_warm_start(g: MultiGraph) -> Solution:
    """Repeatedly hit a shortest cycle at its highest-degree vertex."""
    h = g.copy()
    picked: list[int] = []
    while True:
        cyc = shortest_cycle(h)
        if cyc is None:
            return Solution(tuple(picked))
        v = max(cyc, key=lambda u: (h.degree(u), -u))
        picked.append(v)
        h.delete_vertex(v)
