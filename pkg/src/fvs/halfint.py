"""Rooted half-integral relaxation and the branching step built on it.

The rooted problem asks for a minimum set X (avoiding the root and the
undeletable vertices) such that the component of the root in G - X is a
tree. Its relaxation puts a value ``x_v`` on every vertex and requires every
closed walk from the root that cannot be contracted to a point to collect
value at least 1, counting repeated visits. The minimal such walks are
cycles through the root and "lassos": a path from the root to a cycle,
walked there and back, so path vertices count twice.

A half-integral solution has a simple shape. Let R be the component of the
root among zero-valued vertices: R induces a tree, every boundary vertex
with a single edge into R may take value 1/2 and every boundary vertex with
two or more edges into R needs value 1. Two solvers live here:

* ``"search"``: branch and bound over such regions R. It returns the optimum
  with an inclusion-maximal region, which is what the greedy step needs.
* ``"lp"``: the linear program with lasso constraints generated lazily by a
  shortest-path separation, followed by a {0, 1/2, 1} program at the same
  value; a mismatch raises :class:`HalfIntegralityError`.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .graph import ContractViolation, Instance, MultiGraph

MAX_BRUTEFORCE_VERTICES = 20
SEARCH_NODE_LIMIT = 400
SEARCH_MAX_COMPONENT = 60


class HalfIntegralityError(RuntimeError):
    pass


@dataclass(frozen=True)
class RootedProblem:
    graph: MultiGraph
    root: int
    undeletable: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        if not self.graph.is_live(self.root):
            raise ContractViolation(f"root {self.root} is not live")


@dataclass
class HalfIntegralAssignment:
    values: dict[int, float] = field(default_factory=dict)  # nonzero entries only
    total: float = 0.0
    region: frozenset[int] = frozenset()  # zero-valued component of the root

    def value(self, v: int) -> float:
        return self.values.get(v, 0.0)

    def is_half_integral(self) -> bool:
        return all(2 * x == round(2 * x) and 0 <= x <= 1 for x in self.values.values())


def _component(g: MultiGraph, s: int) -> set[int]:
    seen = {s}
    stack = [s]
    while stack:
        v = stack.pop()
        for u in g.neighbors(v):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def _root_tree_after(g: MultiGraph, s: int, removed: set[int]) -> bool:
    """Is the component of ``s`` in ``g - removed`` a tree?"""
    seen = {s}
    stack = [s]
    twice_edges = 0
    while stack:
        v = stack.pop()
        if g.has_loop(v):
            return False
        for u, mult in g.neighbors(v).items():
            if u in removed:
                continue
            twice_edges += mult
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return twice_edges // 2 == len(seen) - 1


def rooted_integral_bruteforce(p: RootedProblem) -> frozenset[int] | None:
    """Minimum X avoiding root and undeletable vertices leaving the root in a tree."""
    g, s = p.graph, p.root
    comp = _component(g, s)
    if len(comp) > MAX_BRUTEFORCE_VERTICES:
        raise ContractViolation(f"oracle limited to {MAX_BRUTEFORCE_VERTICES} vertices")
    cand = sorted(comp - {s} - set(p.undeletable))
    for size in range(len(cand) + 1):
        for combo in combinations(cand, size):
            if _root_tree_after(g, s, set(combo)):
                return frozenset(combo)
    return None


def solve_relaxation(p: RootedProblem, method: str = "auto") -> HalfIntegralAssignment | None:
    """Optimal half-integral solution of the rooted relaxation, or None if infeasible.

    ``method`` is ``"search"``, ``"lp"`` or ``"auto"`` (search on small
    components, falling back to the LP when the search grows too large).
    """
    if method == "lp":
        return _solve_lp(p)
    if method == "search":
        return _solve_search(p, None)
    if method != "auto":
        raise ValueError(f"unknown relaxation method {method!r}")
    if len(_component(p.graph, p.root)) <= SEARCH_MAX_COMPONENT:
        try:
            return _solve_search(p, SEARCH_NODE_LIMIT)
        except _SearchLimit:
            pass
    return _solve_lp(p)


# -- region search ----------------------------------------------------------------


class _SearchLimit(Exception):
    pass


def _solve_search(p: RootedProblem, node_limit: int | None) -> HalfIntegralAssignment | None:
    g, s = p.graph, p.root
    U = p.undeletable
    if g.has_loop(s):
        return None
    best_cost = [float("inf")]
    best_region: list[frozenset[int] | None] = [None]
    best_edges: list[dict[int, int]] = [{}]
    nodes = [0]

    def rec(region: frozenset[int], into: dict[int, int], out: frozenset[int], cost: int) -> None:
        # cost is in half units
        nodes[0] += 1
        if node_limit is not None and nodes[0] > node_limit:
            raise _SearchLimit
        out = set(out)
        grow = []
        for v, cnt in into.items():
            if v in out:
                continue
            if cnt >= 2 or g.has_loop(v):
                if v in U:
                    return
                out.add(v)
                cost += min(cnt, 2)
            elif v in U:
                grow.append(v)
        if cost > best_cost[0]:
            return
        if grow:
            region, into, cost, ok = _absorb(g, region, into, out, cost, grow)
            if not ok:
                return
            rec(region, into, frozenset(out), cost)
            return
        free = [v for v in into if v not in out]
        if not free:
            if cost < best_cost[0] or (cost == best_cost[0] and len(region) > len(best_region[0])):
                best_cost[0] = cost
                best_region[0] = region
                best_edges[0] = dict(into)
            return
        v = min(free)
        r2, into2, cost2, ok = _absorb(g, region, into, out, cost, [v])
        if ok:
            rec(r2, into2, frozenset(out), cost2)
        rec(region, into, frozenset(out | {v}), cost + 1)

    start = {}
    for u, mult in g.neighbors(s).items():
        start[u] = mult
    rec(frozenset([s]), start, frozenset(), 0)
    if best_region[0] is None:
        return None
    region = best_region[0]
    values = {v: min(cnt, 2) / 2 for v, cnt in best_edges[0].items() if v not in region}
    return HalfIntegralAssignment(values=values, total=best_cost[0] / 2, region=region)


def _absorb(g, region, into, out, cost, verts):
    """Add ``verts`` (each with one edge into the region) to the region."""
    into = dict(into)
    region = set(region)
    for v in verts:
        if into.get(v, 0) != 1 or v in region:
            return region, into, cost, False
        region.add(v)
        del into[v]
        for u, mult in g.neighbors(v).items():
            if u in region:
                continue
            old = into.get(u, 0)
            new = old + mult
            into[u] = new
            if u in out:
                cost += min(new, 2) - min(old, 2)
    return frozenset(region), into, cost, True


# -- linear program ------------------------------------------------------------------


def _separate(g: MultiGraph, s: int, weight: dict[int, float], tol: float = 1e-9):
    """Lasso walks of weight below 1, as vertex -> visit-count dicts."""
    dist = {s: 0.0}
    parent = {s: -1}
    done = set()
    heap = [(0.0, s)]
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for u, _ in g.neighbors(v).items():
            nd = d + weight.get(u, 0.0)
            if u not in dist or nd < dist[u] - 1e-12:
                dist[u] = nd
                parent[u] = v
                heapq.heappush(heap, (nd, u))

    def path(v):
        out = []
        while v != s:
            out.append(v)
            v = parent[v]
        return out

    cuts = []
    for a in done:
        if g.has_loop(a) and 2 * dist[a] < 1 - tol:
            cuts.append(_counts(path(a) + path(a)))
        for b, mult in g.neighbors(a).items():
            if b < a:
                continue
            tree = 1 if parent.get(b) == a or parent.get(a) == b else 0
            if mult - tree > 0 and dist[a] + dist[b] < 1 - tol:
                cuts.append(_counts(path(a) + path(b)))
    return cuts


def _counts(vertices):
    out: dict[int, int] = {}
    for v in vertices:
        out[v] = out.get(v, 0) + 1
    return out


def _solve_lp(p: RootedProblem) -> HalfIntegralAssignment | None:
    from scipy.optimize import Bounds, LinearConstraint, linprog, milp

    g, s = p.graph, p.root
    U = set(p.undeletable)
    if g.has_loop(s):
        return None
    comp = _component(g, s)
    var = sorted(comp - {s} - U)
    index = {v: i for i, v in enumerate(var)}
    rows: list[dict[int, int]] = []
    seen_rows: set[tuple] = set()

    def add(cuts) -> int:
        added = 0
        for cut in cuts:
            row = {index[v]: c for v, c in cut.items() if v in index}
            key = tuple(sorted(row.items()))
            if not row:
                raise _Infeasible
            if key not in seen_rows:
                seen_rows.add(key)
                rows.append(row)
                added += 1
        return added

    def matrix():
        a = np.zeros((len(rows), len(var)))
        for r, row in enumerate(rows):
            for i, c in row.items():
                a[r, i] = c
        return a

    try:
        add(_separate(g, s, {}))
        if not rows:
            return HalfIntegralAssignment(values={}, total=0.0, region=frozenset(comp))
        while True:
            res = linprog(np.ones(len(var)), A_ub=-matrix(), b_ub=-np.ones(len(rows)),
                          bounds=(0, 1), method="highs")
            x = res.x
            if not add(_separate(g, s, {v: x[index[v]] for v in var})):
                break
        lp_value = float(res.fun)
        while True:
            res = milp(np.ones(len(var)),
                       constraints=LinearConstraint(matrix(), lb=2 * np.ones(len(rows)), ub=np.inf),
                       integrality=np.ones(len(var)), bounds=Bounds(0, 2))
            y = np.round(res.x).astype(int)
            if not add(_separate(g, s, {v: y[index[v]] / 2 for v in var})):
                break
    except _Infeasible:
        return None
    total = int(y.sum()) / 2
    if abs(total - lp_value) > 1e-6:
        raise HalfIntegralityError(f"LP optimum {lp_value} but best half-integral {total}")
    values = {v: y[index[v]] / 2 for v in var if y[index[v]]}
    region = {s}
    stack = [s]
    while stack:
        v = stack.pop()
        for u in g.neighbors(v):
            if u not in region and u not in values:
                region.add(u)
                stack.append(u)
    return HalfIntegralAssignment(values=values, total=total, region=frozenset(region))


class _Infeasible(Exception):
    pass


# -- branching step ----------------------------------------------------------------------


def pick_root(inst: Instance) -> int:
    """The undeletable vertex standing for the most original vertices (ties: smallest id)."""
    return min(inst.undeletable, key=lambda u: (-inst.merged.get(u, 1), u))


def ii_step(inst: Instance, method: str = "auto"):
    """One step of the relaxation-guided strategy on a reduced instance.

    Returns ``("branch", v)`` or ``("greedy", None)``; in the greedy case the
    instance has been modified (vertices moved into U, or a tree component
    dropped, or infeasibility flagged, which includes a relaxation value
    above the budget).
    """
    g = inst.graph
    U = inst.undeletable
    if not U:
        return "branch", _max_degree(g, (v for v in g.vertices()))
    u = pick_root(inst)
    sol = solve_relaxation(RootedProblem(g, u, frozenset(U)), method)
    if sol is None or math.ceil(sol.total - 1e-9) > inst.budget:
        # every solution avoiding U is feasible for the relaxation
        inst.infeasible = True
        return "greedy", None
    if sol.total == 0:
        for v in _component(g, u):
            inst.discard(v)
        return "greedy", None
    extra = sorted(sol.region - U)
    if extra:
        for v in extra:
            if g.is_live(v) and v not in inst.undeletable:
                inst.make_undeletable(v)
        return "greedy", None
    ones = sorted(v for v in g.neighbors(u) if sol.value(v) == 1)
    if ones:
        for v in ones:
            if g.is_live(v):
                inst.take(v)
        return "greedy", None
    return "branch", _max_degree(g, g.neighbors(u))


def _max_degree(g: MultiGraph, verts) -> int:
    best, best_deg = -1, -1
    for v in sorted(verts):
        d = g.degree(v)
        if d > best_deg:
            best, best_deg = v, d
    return best
