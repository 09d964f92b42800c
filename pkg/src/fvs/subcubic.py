"""Polynomial-time FVS for instances whose deletable vertices have degree at most 3.

The instance is turned into a graphic matroid parity problem: every deletable
vertex owns a pair of edges, the remaining edges ``Q`` are contracted, and a
maximum set of pairs whose union stays a forest gives the vertices that can
stay in the graph.

Matroid parity is solved algebraically. For pairs ``(b_i, c_i)`` of vectors,
the parity number equals half the rank of ``sum_i t_i (b_i c_i^T - c_i b_i^T)``
for generic ``t`` (Lovasz). Ranks are taken over GF(p) with random ``t``; a
maximum parity set is then extracted by discarding pairs whose removal keeps
the rank. The result is checked to be a forest and locally maximal before it
is returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .approx import UNBOUNDED
from .graph import ContractViolation, Instance, Solution, _DSU
from .reduce import reduce_exhaustively

PRIME = 2_147_483_647  # 2**31 - 1, products of two residues fit in int64

Edge = tuple[int, int]


@dataclass
class MatroidParityInstance:
    """Pairs of edges over the contracted graph ``G/Q``.

    ``pairs[i] = (owner, e1, e2)`` where ``owner`` is the deletable vertex and
    ``e1``, ``e2`` are its paired edges expressed over contracted node
    classes ``0..n_nodes-1``. ``singletons`` holds the contracted edges ``Q``
    in original (subdivided) node ids.
    """

    n_nodes: int
    pairs: list[tuple[int, Edge, Edge]] = field(default_factory=list)
    singletons: list[Edge] = field(default_factory=list)


def reduce_to_parity(inst: Instance) -> MatroidParityInstance:
    """Build the parity instance from a reduced instance with all deletable degrees equal to 3."""
    g = inst.graph
    U = inst.undeletable
    next_node = g.id_bound()
    edges: list[Edge] = []
    for a, b, mult in sorted(g.edges()):
        if a == b:
            raise ContractViolation(f"self-loop at {a} survives reduction")
        for _ in range(mult):
            if a not in U and b not in U:
                x = next_node
                next_node += 1
                edges.append((a, x))
                edges.append((x, b))
            else:
                edges.append((a, b))

    incident: dict[int, list[int]] = {}
    for eid, (a, b) in enumerate(edges):
        for end in (a, b):
            if end < g.id_bound() and end not in U:
                incident.setdefault(end, []).append(eid)
    deletable = [v for v in g.vertices() if v not in U]
    paired: set[int] = set()
    owners: list[tuple[int, int, int]] = []
    for v in deletable:
        eids = incident.get(v, [])
        if len(eids) != 3:
            raise ContractViolation(f"vertex {v} has degree {len(eids)}, expected 3")
        e1, e2, _ = sorted(eids)
        owners.append((v, e1, e2))
        paired.update((e1, e2))

    singletons = [edges[e] for e in range(len(edges)) if e not in paired]
    dsu = _DSU()
    for a, b in singletons:
        if not dsu.union(a, b):
            raise ContractViolation("the unpaired edges contain a cycle")

    classes: dict[int, int] = {}

    def cls(x: int) -> int:
        r = dsu.find(x)
        if r not in classes:
            classes[r] = len(classes)
        return classes[r]

    pairs = []
    for v, e1, e2 in owners:
        (a1, b1), (a2, b2) = edges[e1], edges[e2]
        pairs.append((v, (cls(a1), cls(b1)), (cls(a2), cls(b2))))
    return MatroidParityInstance(n_nodes=len(classes), pairs=pairs, singletons=singletons)


def _rank_mod_p(a: np.ndarray) -> int:
    a = a.copy()
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(a[rank:, c])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), PRIME - 2, PRIME)
        a[rank] = (a[rank] * inv) % PRIME
        below = rank + 1 + np.flatnonzero(a[rank + 1:, c])
        if below.size:
            factors = a[below, c]
            a[below] = (a[below] - (np.outer(factors, a[rank]) % PRIME)) % PRIME
        rank += 1
    return rank


def _independent_pairs(pairs: list[tuple[int, Edge, Edge]], chosen) -> bool:
    dsu = _DSU()
    for i in chosen:
        _, e1, e2 = pairs[i]
        for a, b in (e1, e2):
            if not dsu.union(a, b):
                return False
    return True


class _ParityRank:
    """Lovasz matrices for subsets of pairs, with fixed random coefficients."""

    def __init__(self, mpi: MatroidParityInstance, usable: list[int], rng: random.Random):
        nodes = sorted({x for i in usable for e in mpi.pairs[i][1:] for x in e})
        pos = {x: k for k, x in enumerate(nodes)}
        self.size = len(nodes)
        self.rows: dict[int, np.ndarray] = {}
        self.cols: dict[int, np.ndarray] = {}
        self.vals: dict[int, np.ndarray] = {}
        for i in usable:
            _, (x1, y1), (x2, y2) = mpi.pairs[i]
            t = rng.randrange(1, PRIME)
            b = {pos[x1]: 1, pos[y1]: PRIME - 1}
            c = {pos[x2]: 1, pos[y2]: PRIME - 1}
            r, cc, v = [], [], []
            for bi, bv in b.items():
                for cj, cv in c.items():
                    w = t * bv % PRIME * cv % PRIME
                    r += [bi, cj]
                    cc += [cj, bi]
                    v += [w, (PRIME - w) % PRIME]
            self.rows[i] = np.array(r, dtype=np.int64)
            self.cols[i] = np.array(cc, dtype=np.int64)
            self.vals[i] = np.array(v, dtype=np.int64)

    def parity_number(self, subset) -> int:
        subset = list(subset)
        if not subset:
            return 0
        m = np.zeros((self.size, self.size), dtype=np.int64)
        r = np.concatenate([self.rows[i] for i in subset])
        c = np.concatenate([self.cols[i] for i in subset])
        v = np.concatenate([self.vals[i] for i in subset])
        np.add.at(m, (r, c), v)
        m %= PRIME
        return _rank_mod_p(m) // 2


def graphic_matroid_parity(mpi: MatroidParityInstance, seed: int = 0, attempts: int = 8) -> set[int]:
    """Owners of a maximum set of pairs whose union is a forest in ``G/Q``."""
    usable = [
        i for i, (_, (x1, y1), (x2, y2)) in enumerate(mpi.pairs)
        if x1 != y1 and x2 != y2 and {x1, y1} != {x2, y2}
    ]
    if not usable:
        return set()
    for attempt in range(attempts):
        rng = random.Random(seed * 7919 + attempt)
        oracle = _ParityRank(mpi, usable, rng)
        chosen = _extract(oracle, usable)
        if chosen is not None and _independent_pairs(mpi.pairs, chosen):
            if not _is_maximal(mpi.pairs, chosen, usable):
                continue
            return {mpi.pairs[i][0] for i in chosen}
    raise RuntimeError("matroid parity extraction failed repeatedly")


def _extract(oracle: _ParityRank, usable: list[int]) -> list[int] | None:
    current = set(usable)
    target = oracle.parity_number(current)
    if target == 0:
        return []

    def drop(chunk: list[int]) -> None:
        if len(current) == target:
            return
        trial = current.difference(chunk)
        if oracle.parity_number(trial) == target:
            current.difference_update(chunk)
            return
        if len(chunk) == 1:
            return
        mid = len(chunk) // 2
        drop(chunk[:mid])
        drop([i for i in chunk[mid:] if i in current])

    drop(list(usable))
    if len(current) != target:
        return None
    return sorted(current)


def _is_maximal(pairs, chosen: list[int], usable: list[int]) -> bool:
    chosen_set = set(chosen)
    for i in usable:
        if i not in chosen_set and _independent_pairs(pairs, chosen + [i]):
            return False
    return True


def solve_subcubic(inst: Instance) -> Solution | None:
    """Minimum solution of an instance whose deletable vertices have degree <= 3.

    The budget of ``inst`` is ignored; callers compare the size themselves.
    Returns None when no solution exists at all (cycle inside U).
    """
    g = inst.graph
    for v in g.vertices():
        if v not in inst.undeletable and g.degree(v) > 3:
            raise ContractViolation(f"vertex {v} has degree {g.degree(v)} > 3")
    work = inst.copy()
    work.budget = UNBOUNDED
    reduce_exhaustively(work)
    if work.infeasible:
        return None
    mpi = reduce_to_parity(work)
    keep = graphic_matroid_parity(mpi)
    picked = [v for v in work.graph.vertices() if v not in work.undeletable and v not in keep]
    return Solution(tuple(work.forced) + tuple(sorted(picked)))
