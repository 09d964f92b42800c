"""Exhaustive reference solvers for small graphs, used as test oracles."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .graph import ContractViolation, MultiGraph, Solution

MAX_ORACLE_VERTICES = 20


def _edge_list(g: MultiGraph, index: dict[int, int]) -> tuple[list[tuple[int, int]], int]:
    edges = []
    loops = 0
    for a, b, mult in g.edges():
        if a == b:
            loops |= 1 << index[a]
            continue
        for _ in range(mult):
            edges.append((index[a], index[b]))
    return edges, loops


def _forest_after(mask_removed: int, edges, loops: int, n: int) -> bool:
    if loops & ~mask_removed:
        return False
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        if (mask_removed >> a) & 1 or (mask_removed >> b) & 1:
            continue
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def min_fvs_bruteforce(g: MultiGraph, undeletable: Iterable[int] = ()) -> Solution | None:
    """Smallest X (disjoint from ``undeletable``) with G - X a forest.

    Subsets are tried in order of increasing size. Returns None if no such X
    exists.
    """
    verts = list(g.vertices())
    if len(verts) > MAX_ORACLE_VERTICES:
        raise ContractViolation(f"oracle limited to {MAX_ORACLE_VERTICES} vertices, got {len(verts)}")
    index = {v: i for i, v in enumerate(verts)}
    edges, loops = _edge_list(g, index)
    U = set(undeletable)
    cand = [index[v] for v in verts if v not in U]
    for size in range(len(cand) + 1):
        for combo in combinations(cand, size):
            mask = 0
            for i in combo:
                mask |= 1 << i
            if _forest_after(mask, edges, loops, len(verts)):
                return Solution(tuple(verts[i] for i in combo))
    return None


def min_fvs_size(g: MultiGraph, undeletable: Iterable[int] = ()) -> int | None:
    sol = min_fvs_bruteforce(g, undeletable)
    return None if sol is None else sol.size
