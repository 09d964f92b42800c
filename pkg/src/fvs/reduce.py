"""Queue-driven simple reduction rules, the degree lower bound and component splitting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .graph import Instance, ReductionQueue, components


@dataclass
class ReductionOutcome:
    forced_added: int = 0
    vertices_removed: int = 0
    edges_removed: int = 0
    infeasible: bool = False


def reduce_exhaustively(inst: Instance, queue: ReductionQueue | None = None,
                        max_steps: int | None = None) -> ReductionOutcome:
    """Apply the simple rules until no queued vertex admits one.

    Rules, checked per dequeued vertex in this order:

    * negative budget, or a cycle inside U, makes the instance infeasible;
    * a self-loop forces its vertex into the solution (infeasible if it is
      undeletable);
    * multiplicities above two are lowered to two;
    * vertices of degree at most one are removed;
    * a deletable vertex with a double edge to an undeletable one is forced
      (U is kept independent, so this is "two edges into one component");
    * degree-2 vertices that are not marked irreducible are suppressed;
    * a vertex whose only edges are a single edge to ``u`` and a double edge
      to ``w`` forces ``w``.

    ``max_steps`` stops after that many dequeued vertices, leaving the rest
    queued.
    """
    g = inst.graph
    q = inst.queue if queue is None else queue
    saved_watch = g.watch
    g.watch = q
    n0, m0, f0 = g.n, g.m, len(inst.forced)
    steps = 0
    try:
        while q and not inst.infeasible:
            if max_steps is not None and steps >= max_steps:
                break
            steps += 1
            if inst.budget < 0:
                inst.infeasible = True
                break
            v = q.pop()
            if g.is_live(v):
                _reduce_vertex(inst, v)
        if inst.budget < 0:
            inst.infeasible = True
    finally:
        g.watch = saved_watch
    return ReductionOutcome(
        forced_added=len(inst.forced) - f0,
        vertices_removed=n0 - g.n,
        edges_removed=m0 - g.m,
        infeasible=inst.infeasible,
    )


def _reduce_vertex(inst: Instance, v: int) -> None:
    g = inst.graph
    U = inst.undeletable
    if g.has_loop(v):
        if v in U:
            inst.infeasible = True
        else:
            inst.take(v)
        return
    nbrs = g.neighbors(v)
    if any(mult > 2 for mult in nbrs.values()):
        g.cap_multiplicity(v, 2)
    deg = g.degree(v)
    if deg <= 1:
        inst.discard(v)
        return
    if v not in U:
        for u, mult in nbrs.items():
            if mult == 2 and u in U:
                inst.take(v)
                return
    if deg == 2 and v not in inst.irreducible:
        a, b = g.suppress_vertex(v)
        U.discard(v)
        inst.merged.pop(v, None)
        if a != b and a in U and b in U:
            inst.join_undeletable(a, b)
        return
    if deg == 3 and len(nbrs) == 2:
        (a, ma), (b, mb) = nbrs.items()
        w = b if mb == 2 else a
        if w not in U:
            inst.take(w)


def lower_bound_prune(inst: Instance) -> bool:
    """True when no solution of size at most ``budget`` can exist.

    Deleting the ``j`` highest-degree deletable vertices removes at most the
    sum of their degrees in edges, and a forest on ``n - j`` vertices has
    fewer than ``n - j`` edges.
    """
    k = inst.budget
    if k < 0:
        return True
    g = inst.graph
    E, V = g.m, g.n
    if E < V:
        return False
    U = inst.undeletable
    degs = sorted((g.degree(v) for v in g.vertices() if v not in U), reverse=True)
    removed = 0
    for j in range(1, min(k, len(degs)) + 1):
        removed += degs[j - 1]
        if E - removed < V - j:
            return False
    return True


ComponentSolver = Callable[[Instance, int], "list[int] | None"]


def split_components(inst: Instance, solver: ComponentSolver,
                     sizes: list[int] | None = None) -> Instance:
    """Solve every component but the largest separately.

    ``solver(sub, cap)`` must return a minimum solution of ``sub`` if one of
    size at most ``cap`` exists, else None. The solutions are added to
    ``inst.forced`` and the solved components are removed; ``inst`` is
    modified in place and returned.
    """
    g = inst.graph
    comps = components(g)
    if len(comps) <= 1:
        return inst
    for comp in comps[1:]:
        if sizes is not None:
            sizes.append(len(comp))
        sub = Instance(
            graph=g.subgraph(comp),
            undeletable=inst.undeletable & comp,
            budget=inst.budget,
            irreducible=inst.irreducible & comp,
            queue=ReductionQueue(),
        )
        sol = solver(sub, inst.budget)
        if sol is None:
            inst.infeasible = True
            return inst
        for v in comp:
            g.delete_vertex(v)
        inst.undeletable -= comp
        inst.irreducible -= comp
        inst.forced.extend(sol)
        inst.budget -= len(sol)
        if inst.budget < 0:
            inst.infeasible = True
            return inst
    return inst
