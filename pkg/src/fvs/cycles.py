"""Breadth-first shortest-cycle search in multigraphs."""

from __future__ import annotations

from collections import deque

from .graph import MultiGraph, is_acyclic


def shortest_cycle_through(g: MultiGraph, s: int, limit: int | None = None) -> list[int] | None:
    """A shortest cycle through ``s`` as a vertex list starting at ``s``.

    Only cycles strictly shorter than ``limit`` are reported. Double edges
    are cycles of length 2 and a self-loop is a cycle of length 1.
    """
    if g.has_loop(s):
        return [s] if limit is None or limit > 1 else None
    best = limit
    best_edge = None
    dist = {s: 0}
    parent = {s: -1}
    branch = {s: s}
    todo = deque([s])
    while todo:
        x = todo.popleft()
        dx = dist[x]
        if best is not None and 2 * dx + 1 >= best:
            break
        for y, mult in g.neighbors(x).items():
            if y == parent[x]:
                if mult >= 2 and y == s and (best is None or best > 2):
                    best, best_edge = 2, (x, y)
                continue
            if y not in dist:
                dist[y] = dx + 1
                parent[y] = x
                branch[y] = y if x == s else branch[x]
                todo.append(y)
                if mult >= 2 and x == s and (best is None or best > 2):
                    best, best_edge = 2, (y, x)
            elif y == s or branch[y] != branch[x]:
                length = dx + dist[y] + 1
                if best is None or length < best:
                    best, best_edge = length, (x, y)
    if best_edge is None:
        return None
    x, y = best_edge
    if y == s and parent[x] == s and dist[x] == 1 and best == 2:
        return [s, x]
    left = _path_to_root(parent, x)
    right = _path_to_root(parent, y)
    # left = [x, ..., s], right = [y, ..., s]
    return left[::-1] + right[:-1]


def _path_to_root(parent: dict[int, int], v: int) -> list[int]:
    out = [v]
    while parent[v] != -1:
        v = parent[v]
        out.append(v)
    return out


def shortest_cycle(g: MultiGraph) -> list[int] | None:
    """A globally shortest cycle; among equal lengths the first found from the smallest id."""
    best: list[int] | None = None
    for s in g.vertices():
        if g.degree(s) < 2:
            continue
        cyc = shortest_cycle_through(g, s, None if best is None else len(best))
        if cyc is not None:
            best = cyc
            if len(best) == 1:
                break
    return best


def has_cycle(g: MultiGraph) -> bool:
    return not is_acyclic(g)
