"""Multigraph and instance types shared by every solver in the package.

Vertices are dense integer ids. Adjacency is a dict ``neighbor -> multiplicity``
per live vertex (``None`` once the vertex is deleted); self-loops are a flag
contributing 2 to the degree and never appear in the adjacency dicts.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class ContractViolation(ValueError):
    """An operation was called outside of its precondition."""


class MultiGraph:
    __slots__ = ("_adj", "_loop", "_deg", "labels", "_index", "n", "m", "watch")

    def __init__(self) -> None:
        self._adj: list[dict[int, int] | None] = []
        self._loop: list[bool] = []
        self._deg: list[int] = []
        # shared between copies; vertices created after parsing have no label
        self.labels: list[str] = []
        self._index: dict[str, int] = {}
        self.n = 0
        self.m = 0
        # anything with a push(v) method; told about every vertex whose
        # neighbourhood changed
        self.watch = None

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], vertices: Iterable = ()) -> "MultiGraph":
        g = cls()
        for v in vertices:
            g.vertex(str(v))
        for a, b in edges:
            g.add_edge(g.vertex(str(a)), g.vertex(str(b)))
        return g

    def vertex(self, label: str) -> int:
        """Id for ``label``, creating the vertex on first use."""
        v = self._index.get(label)
        if v is None:
            v = self.add_vertex(label)
        return v

    def add_vertex(self, label: str | None = None) -> int:
        v = len(self._adj)
        self._adj.append({})
        self._loop.append(False)
        self._deg.append(0)
        if label is not None:
            if len(self.labels) != v:
                raise ContractViolation("labelled vertices must be created before unlabelled ones")
            self.labels.append(label)
            self._index[label] = v
        self.n += 1
        return v

    def add_edge(self, u: int, v: int, mult: int = 1, cap: int | None = None) -> None:
        self._check_live(u)
        self._check_live(v)
        if u == v:
            if not self._loop[u]:
                self._loop[u] = True
                self._deg[u] += 2
                self.m += 1
            self._notify(u)
            return
        old = self._adj[u].get(v, 0)
        new = old + mult if cap is None else min(cap, old + mult)
        delta = new - old
        if delta:
            self._adj[u][v] = new
            self._adj[v][u] = new
            self._deg[u] += delta
            self._deg[v] += delta
            self.m += delta
        self._notify(u)
        self._notify(v)

    def remove_edge(self, u: int, v: int, mult: int = 1) -> None:
        """Drop ``mult`` parallel copies of ``uv``."""
        have = self._adj[u].get(v, 0)
        if have < mult:
            raise ContractViolation(f"edge {u}-{v} has multiplicity {have} < {mult}")
        if have == mult:
            del self._adj[u][v]
            del self._adj[v][u]
        else:
            self._adj[u][v] = have - mult
            self._adj[v][u] = have - mult
        self._deg[u] -= mult
        self._deg[v] -= mult
        self.m -= mult
        self._notify(u)
        self._notify(v)

    def cap_multiplicity(self, v: int, cap: int = 2) -> int:
        """Lower every multiplicity at ``v`` to ``cap``; returns edges removed."""
        removed = 0
        for u, mult in list(self._adj[v].items()):
            if mult > cap:
                self.remove_edge(v, u, mult - cap)
                removed += mult - cap
        return removed

    def remove_loop(self, v: int) -> None:
        if self._loop[v]:
            self._loop[v] = False
            self._deg[v] -= 2
            self.m -= 1
            self._notify(v)

    # -- queries ------------------------------------------------------------

    def is_live(self, v: int) -> bool:
        return 0 <= v < len(self._adj) and self._adj[v] is not None

    def vertices(self) -> Iterator[int]:
        return (v for v, a in enumerate(self._adj) if a is not None)

    def neighbors(self, v: int) -> dict[int, int]:
        """Neighbour -> multiplicity. Do not mutate."""
        return self._adj[v]

    def multiplicity(self, u: int, v: int) -> int:
        return self._adj[u].get(v, 0)

    def degree(self, v: int) -> int:
        return self._deg[v]

    def has_loop(self, v: int) -> bool:
        return self._loop[v]

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Each edge once as ``(u, v, mult)`` with ``u <= v``; loops as ``(v, v, 1)``."""
        for u, a in enumerate(self._adj):
            if a is None:
                continue
            if self._loop[u]:
                yield u, u, 1
            for v, mult in a.items():
                if u < v:
                    yield u, v, mult

    def label(self, v: int) -> str:
        return self.labels[v] if v < len(self.labels) else f"_aux{v}"

    def id_of(self, label: str) -> int:
        return self._index[label]

    def id_bound(self) -> int:
        """One past the largest id ever issued."""
        return len(self._adj)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"<MultiGraph n={self.n} m={self.m}>"

    # -- mutation -----------------------------------------------------------

    def delete_vertex(self, v: int) -> None:
        self._check_live(v)
        adj = self._adj[v]
        for u, mult in adj.items():
            del self._adj[u][v]
            self._deg[u] -= mult
            self.m -= mult
            self._notify(u)
        if self._loop[v]:
            self.m -= 1
        self._adj[v] = None
        self._loop[v] = False
        self._deg[v] = 0
        self.n -= 1

    def suppress_vertex(self, v: int) -> tuple[int, int]:
        """Replace degree-2 vertex ``v`` by an edge between its neighbours.

        Returns the two (possibly equal) former neighbours. Multiplicities are
        capped at 2; equal neighbours receive a self-loop.
        """
        self._check_live(v)
        if self._deg[v] != 2 or self._loop[v]:
            raise ContractViolation(f"vertex {v} has degree {self._deg[v]}, not a loop-free 2")
        ends = [u for u, mult in self._adj[v].items() for _ in range(mult)]
        a, b = ends
        self.delete_vertex(v)
        self.add_edge(a, b, 1, cap=2)
        return a, b

    def identify(self, keep: int, gone: int) -> bool:
        """Merge ``gone`` into ``keep`` (edge contraction when adjacent).

        A single ``keep``-``gone`` edge is contracted; parallel copies beyond
        the first turn into a self-loop at ``keep``. Returns True iff ``keep``
        ends up with a self-loop.
        """
        self._check_live(keep)
        self._check_live(gone)
        if keep == gone:
            raise ContractViolation("cannot identify a vertex with itself")
        between = self._adj[gone].get(keep, 0)
        loop = self._loop[gone] or between >= 2
        moved = [(x, mult) for x, mult in self._adj[gone].items() if x != keep]
        self.delete_vertex(gone)
        for x, mult in moved:
            self.add_edge(keep, x, mult, cap=2)
        if loop:
            self.add_edge(keep, keep)
        self._notify(keep)
        return self._loop[keep]

    def copy(self) -> "MultiGraph":
        g = MultiGraph.__new__(MultiGraph)
        g._adj = [None if a is None else a.copy() for a in self._adj]
        g._loop = self._loop.copy()
        g._deg = self._deg.copy()
        g.labels = self.labels
        g._index = self._index
        g.n = self.n
        g.m = self.m
        g.watch = None
        return g

    def subgraph(self, keep: Iterable[int]) -> "MultiGraph":
        """Induced subgraph on ``keep``; ids are preserved."""
        keep = set(keep)
        g = MultiGraph.__new__(MultiGraph)
        g._adj = [None] * len(self._adj)
        g._loop = [False] * len(self._adj)
        g._deg = [0] * len(self._adj)
        g.labels = self.labels
        g._index = self._index
        g.n = len(keep)
        g.m = 0
        g.watch = None
        for v in keep:
            self._check_live(v)
            adj = {u: mult for u, mult in self._adj[v].items() if u in keep}
            g._adj[v] = adj
            g._loop[v] = self._loop[v]
            g._deg[v] = sum(adj.values()) + (2 if self._loop[v] else 0)
            g.m += sum(adj.values()) + (2 if self._loop[v] else 0)
        g.m //= 2
        return g

    def audit(self) -> None:
        """Full consistency scan; raises AssertionError on corruption."""
        n = m2 = 0
        for v, a in enumerate(self._adj):
            if a is None:
                continue
            n += 1
            deg = 2 if self._loop[v] else 0
            for u, mult in a.items():
                assert u != v, f"loop stored in adjacency of {v}"
                assert mult >= 1
                assert self._adj[u] is not None and self._adj[u].get(v) == mult, (u, v)
                deg += mult
            assert deg == self._deg[v], (v, deg, self._deg[v])
            m2 += deg
        assert n == self.n, (n, self.n)
        assert m2 % 2 == 0 and m2 // 2 == self.m, (m2, self.m)

    def _check_live(self, v: int) -> None:
        if not self.is_live(v):
            raise ContractViolation(f"vertex {v} is not live")

    def _notify(self, v: int) -> None:
        if self.watch is not None:
            self.watch.push(v)


# -- free functions -----------------------------------------------------------


def delete_vertex(g: MultiGraph, v: int) -> None:
    g.delete_vertex(v)


def suppress_vertex(g: MultiGraph, v: int) -> tuple[int, int]:
    return g.suppress_vertex(v)


class _DSU:
    def __init__(self) -> None:
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while x != root:
            nxt = parent.get(x, x)
            parent[x] = root
            x = nxt
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def is_acyclic(g: MultiGraph, restrict: Iterable[int] | None = None) -> bool:
    """True iff ``g`` (or the subgraph induced by ``restrict``) is a forest."""
    if restrict is None:
        keep = None
        verts: Iterable[int] = g.vertices()
    else:
        keep = set(restrict)
        verts = keep
    dsu = _DSU()
    for v in verts:
        if g.has_loop(v):
            return False
        for u, mult in g.neighbors(v).items():
            if u < v or (keep is not None and u not in keep):
                continue
            if mult >= 2 or not dsu.union(u, v):
                return False
    return True


def verify_solution(g: MultiGraph, x: Iterable[int]) -> bool:
    """True iff deleting ``x`` from ``g`` leaves a forest."""
    x = set(x)
    return is_acyclic(g, (v for v in g.vertices() if v not in x))


def components(g: MultiGraph) -> list[set[int]]:
    """Connected components, largest first (ties: smallest minimum id)."""
    seen: set[int] = set()
    out: list[set[int]] = []
    for s in g.vertices():
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    comp.add(u)
                    stack.append(u)
        out.append(comp)
    out.sort(key=lambda c: (-len(c), min(c)))
    return out


# -- instances ------------------------------------------------------------------


class ReductionQueue:
    """Deduplicated FIFO of vertices waiting to be examined by the reducer."""

    __slots__ = ("pending", "_queued")

    def __init__(self, items: Iterable[int] = ()) -> None:
        self.pending: deque[int] = deque()
        self._queued: set[int] = set()
        for v in items:
            self.push(v)

    def push(self, v: int) -> None:
        if v not in self._queued:
            self._queued.add(v)
            self.pending.append(v)

    def pop(self) -> int:
        v = self.pending.popleft()
        self._queued.discard(v)
        return v

    def __len__(self) -> int:
        return len(self.pending)

    def __bool__(self) -> bool:
        return bool(self.pending)

    def copy(self) -> "ReductionQueue":
        q = ReductionQueue()
        q.pending = self.pending.copy()
        q._queued = self._queued.copy()
        return q


@dataclass
class Instance:
    """A decision sub-problem ``(G, U, k)`` plus bookkeeping.

    ``U`` is kept as an independent set: whenever two undeletable vertices
    would become adjacent they are identified, so every component of G[U]
    is a single vertex. ``forced`` lists solution vertices already removed
    from ``graph``.
    """

    graph: MultiGraph
    undeletable: set[int] = field(default_factory=set)
    budget: int = 0
    irreducible: set[int] = field(default_factory=set)
    forced: list[int] = field(default_factory=list)
    infeasible: bool = False
    queue: ReductionQueue = field(default_factory=ReductionQueue)
    merged: dict[int, int] = field(default_factory=dict)  # U vertex -> vertices it stands for, if > 1

    def __post_init__(self) -> None:
        self.graph.watch = self.queue

    @classmethod
    def from_graph(cls, g: MultiGraph, budget: int = 0,
                   undeletable: Iterable[int] = ()) -> "Instance":
        inst = cls(graph=g, budget=budget, queue=ReductionQueue(g.vertices()))
        for u in sorted(set(undeletable)):
            if inst.graph.is_live(u):
                inst.make_undeletable(u)
        return inst

    def copy(self) -> "Instance":
        return Instance(
            graph=self.graph.copy(),
            undeletable=self.undeletable.copy(),
            budget=self.budget,
            irreducible=self.irreducible.copy(),
            forced=self.forced.copy(),
            infeasible=self.infeasible,
            queue=self.queue.copy(),
            merged=self.merged.copy(),
        )

    def take(self, v: int) -> None:
        """Put ``v`` into the solution."""
        if v in self.undeletable:
            raise ContractViolation(f"vertex {v} is undeletable")
        self.graph.delete_vertex(v)
        self.forced.append(v)
        self.budget -= 1

    def discard(self, v: int) -> None:
        """Remove ``v`` without paying for it (it lies on no cycle)."""
        self.graph.delete_vertex(v)
        self.undeletable.discard(v)
        self.irreducible.discard(v)
        self.merged.pop(v, None)

    def make_undeletable(self, v: int) -> None:
        """Move ``v`` into U, identifying it with its undeletable neighbours."""
        g = self.graph
        self.undeletable.add(v)
        for w in [w for w in g.neighbors(v) if w in self.undeletable]:
            if g.identify(v, w):
                self.infeasible = True
            self.undeletable.discard(w)
            self.irreducible.discard(w)
            self.merged[v] = self.merged.get(v, 1) + self.merged.pop(w, 1)
        if g.has_loop(v):
            self.infeasible = True
        self.queue.push(v)

    def join_undeletable(self, a: int, b: int) -> int:
        """Identify two undeletable vertices (an edge now joins them)."""
        if self.graph.identify(a, b):
            self.infeasible = True
        self.undeletable.discard(b)
        self.irreducible.discard(b)
        self.merged[a] = self.merged.get(a, 1) + self.merged.pop(b, 1)
        return a


@dataclass(frozen=True)
class Solution:
    vertices: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def labels(self, g: MultiGraph) -> list[str]:
        return [g.label(v) for v in self.vertices]
