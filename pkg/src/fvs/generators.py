"""Named graphs and seeded random multigraphs for tests and desk-scale benchmarks."""

from __future__ import annotations

import random
from itertools import combinations

from .graph import MultiGraph


def cycle(n: int) -> MultiGraph:
    return MultiGraph.from_edges([(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> MultiGraph:
    return MultiGraph.from_edges(combinations(range(n), 2))


def petersen() -> MultiGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return MultiGraph.from_edges(outer + spokes + inner)


def cube() -> MultiGraph:
    edges = [(a, a ^ (1 << bit)) for a in range(8) for bit in range(3) if a < a ^ (1 << bit)]
    return MultiGraph.from_edges(edges)


def theta(*lengths: int) -> MultiGraph:
    """Two poles ``x`` and ``y`` joined by internally disjoint paths of the given lengths."""
    edges = []
    for p, length in enumerate(lengths):
        prev = "x"
        for i in range(length - 1):
            cur = f"p{p}_{i}"
            edges.append((prev, cur))
            prev = cur
        edges.append((prev, "y"))
    return MultiGraph.from_edges(edges)


def disjoint_union(*graphs: MultiGraph) -> MultiGraph:
    edges = []
    vertices = []
    for i, g in enumerate(graphs):
        vertices.extend(f"g{i}_{g.label(v)}" for v in g.vertices())
        for a, b, mult in g.edges():
            edges.extend([(f"g{i}_{g.label(a)}", f"g{i}_{g.label(b)}")] * mult)
    return MultiGraph.from_edges(edges, vertices)


def named_graphs() -> dict[str, MultiGraph]:
    out = {f"C{n}": cycle(n) for n in range(3, 9)}
    out["K4"] = complete(4)
    out["K5"] = complete(5)
    out["petersen"] = petersen()
    out["cube"] = cube()
    out["theta"] = theta(2, 2, 3)
    return out


def random_multigraph(rng: random.Random, max_n: int = 12, max_m: int = 24,
                      p_loop: float = 0.03, p_repeat: float = 0.1) -> MultiGraph:
    """Random multigraph with up to ``max_n`` vertices and ``max_m`` edges.

    Besides uniform random pairs, an edge repeats the previous one with
    probability ``p_repeat`` and is a self-loop with probability ``p_loop``.
    """
    n = rng.randint(1, max_n)
    m = rng.randint(0, max_m) if n > 1 else rng.randint(0, 2)
    edges = []
    for _ in range(m):
        r = rng.random()
        if r < p_loop or n == 1:
            v = rng.randrange(n)
            edges.append((v, v))
        elif r < p_loop + p_repeat and edges:
            edges.append(edges[-1])
        else:
            a, b = rng.sample(range(n), 2)
            edges.append((a, b))
    return MultiGraph.from_edges(edges, range(n))


def random_suite(count: int = 500, seed: int = 2016, max_n: int = 12, max_m: int = 24) -> list[MultiGraph]:
    rng = random.Random(seed)
    return [random_multigraph(rng, max_n, max_m) for _ in range(count)]


def random_simple_graph(rng: random.Random, n: int, m: int) -> MultiGraph:
    pairs = list(combinations(range(n), 2))
    return MultiGraph.from_edges(rng.sample(pairs, min(m, len(pairs))), range(n))


def random_subcubic(rng: random.Random, n: int, tries: int = 200) -> MultiGraph:
    """Random simple graph on ``n`` vertices with maximum degree 3."""
    deg = [0] * n
    edges = set()
    for _ in range(tries):
        a, b = rng.sample(range(n), 2)
        if deg[a] < 3 and deg[b] < 3 and (min(a, b), max(a, b)) not in edges:
            edges.add((min(a, b), max(a, b)))
            deg[a] += 1
            deg[b] += 1
    return MultiGraph.from_edges(sorted(edges), range(n))
