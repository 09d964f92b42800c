"""Branch-and-reduce search with pluggable pivot strategies.

A search node is an :class:`Instance` ``(G, U, k)``. After exhaustive
reduction the node is either solved, pruned, split into components, handed
to a polynomial special case, simplified by a greedy step, or split into two
children: the pivot goes into the solution (budget ``k - 1``) or into U.
Minimum solutions come from iterative deepening on ``k`` below a greedy
upper bound.
"""

from __future__ import annotations

import sys
import threading
import time
from dataclasses import dataclass, field
from typing import Callable

from .approx import UNBOUNDED, approximate, approximate_instance
from .graph import ContractViolation, Instance, MultiGraph, Solution
from .halfint import ii_step
from .reduce import lower_bound_prune, reduce_exhaustively, split_components
from .subcubic import solve_subcubic

STRATEGIES = ("cao", "cao/double", "cao/undel", "cfllv", "kp", "ii", "ii/kernel")
FLAGS = ("cc", "deg3", "lb", "ic")

# the algorithm variants compared in the desk benchmark, in table order
TABLE_ROWS = (
    "cao+deg3",
    "cfllv+ic",
    "kp+deg3+ic",
    "cao+cc+deg3",
    "cfllv+cc+ic",
    "kp+cc+deg3+ic",
    "cao+cc",
    "ii+cc",
    "ii/kernel+cc",
    "cao+cc+deg3+lb",
    "cao/double+cc+deg3+lb",
    "cao/undel+cc+deg3+lb",
    "cao+cc+deg3+lb+ic",
    "cao/double+cc+deg3+lb+ic",
    "cao/undel+cc+deg3+lb+ic",
    "cfllv+cc+lb+ic",
    "kp+cc+deg3+lb+ic",
    "cao+cc+lb",
    "ii+cc+lb",
    "ii/kernel+cc+lb",
    "ii+cc+deg3+lb",
    "ilp",
)

KernelHook = Callable[[Instance], bool]


class SolverTimeout(Exception):
    pass


@dataclass(frozen=True)
class BranchConfig:
    strategy: str = "cao"
    cc_split: bool = True
    subcubic: bool = True
    lower_bound: bool = True
    iterative_compression: bool = False
    # called on reduced instances; returns True when it changed the instance
    kernel_hook: KernelHook | None = None
    kernel_every_step: bool = False
    time_limit: float | None = None
    collect_stats: bool = False
    relaxation: str = "auto"

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ContractViolation(f"unknown strategy {self.strategy!r}")
        base = self.strategy
        if base == "cfllv" and (not self.iterative_compression or self.subcubic):
            raise ContractViolation("cfllv needs ic and excludes deg3")
        if base == "kp" and not (self.iterative_compression and self.subcubic):
            raise ContractViolation("kp needs ic and deg3")
        if base.startswith("ii") and self.iterative_compression:
            raise ContractViolation("ii excludes ic")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ContractViolation("time_limit must be positive")

    @property
    def name(self) -> str:
        on = (self.cc_split, self.subcubic, self.lower_bound, self.iterative_compression)
        return "+".join([self.strategy] + [f for f, flag in zip(FLAGS, on) if flag])

    @classmethod
    def parse(cls, text: str, **extra) -> "BranchConfig":
        """Build a config from ``strategy+flag+...`` (flags in any order)."""
        tokens = [t.strip().lower() for t in text.split("+") if t.strip()]
        bases = [t for t in tokens if t in STRATEGIES]
        if len(bases) != 1:
            raise ContractViolation(f"unknown algorithm {text!r}")
        flags = set(tokens) - set(bases)
        unknown = flags - set(FLAGS)
        if unknown or len(flags) != len(tokens) - 1:
            raise ContractViolation(f"bad flags in {text!r}")
        if bases[0] == "ii/kernel":
            extra.setdefault("kernel_every_step", True)
        return cls(strategy=bases[0], cc_split="cc" in flags, subcubic="deg3" in flags,
                   lower_bound="lb" in flags, iterative_compression="ic" in flags, **extra)


def valid_algorithms() -> list[str]:
    """Every valid strategy/flag combination, canonically named."""
    out = []
    for strategy in STRATEGIES:
        for mask in range(1 << len(FLAGS)):
            on = [bool(mask >> i & 1) for i in range(len(FLAGS))]
            try:
                cfg = BranchConfig(strategy, *on)
            except ContractViolation:
                continue
            out.append(cfg.name)
    return out


def canonical_name(text: str) -> str:
    if text.strip().lower() == "ilp":
        return "ilp"
    return BranchConfig.parse(text).name


@dataclass(frozen=True)
class BranchHints:
    """Preferred pivots in order; dead or undeletable entries are skipped."""

    queue: tuple[int, ...] = ()


def init_hints(g: MultiGraph, cfg: BranchConfig) -> BranchHints:
    """Hints from the greedy approximation, in deletion order."""
    if not cfg.iterative_compression:
        raise ContractViolation("hints are only used with ic")
    sol = approximate(g)
    return BranchHints(() if sol is None else tuple(sol.vertices))


@dataclass
class SearchStats:
    nodes_visited: int = 0
    prunes_by_lb: int = 0
    greedy_steps: int = 0
    subcubic_calls: int = 0
    components_separated: list[int] = field(default_factory=list)
    # (live vertices, vertices removed, edges removed) per reduction call
    reduction_calls: list[tuple[int, int, int]] = field(default_factory=list)
    initial_dn: int = 0
    initial_dm: int = 0


@dataclass
class SolveResult:
    solution: Solution | None  # optimal solution, None on timeout
    status: str  # "optimal" or "timeout"
    upper_bound: Solution | None
    stats: SearchStats
    elapsed: float

    @property
    def best(self) -> Solution | None:
        return self.solution if self.solution is not None else self.upper_bound


class BranchSolver:
    def __init__(self, cfg: BranchConfig):
        self.cfg = cfg
        self.stats = SearchStats()
        self.deadline: float | None = None

    # -- entry points ----------------------------------------------------

    def solve(self, g: MultiGraph) -> SolveResult:
        start = time.monotonic()
        if self.cfg.time_limit is not None:
            self.deadline = start + self.cfg.time_limit
        upper = approximate(g)
        inst = Instance.from_graph(g.copy(), budget=UNBOUNDED)
        n0, m0 = inst.graph.n, inst.graph.m
        reduce_exhaustively(inst)
        self.stats.initial_dn = n0 - inst.graph.n
        self.stats.initial_dm = m0 - inst.graph.m
        try:
            found = self.minimize(inst, UNBOUNDED)
        except SolverTimeout:
            return SolveResult(None, "timeout", upper, self.stats, time.monotonic() - start)
        sol = Solution(tuple(found)) if found is not None else None
        return SolveResult(sol, "optimal", sol, self.stats, time.monotonic() - start)

    def minimize(self, inst: Instance, cap: int) -> list[int] | None:
        """Minimum solution of ``inst`` using at most ``cap`` new vertices, or None.

        The returned list includes ``inst.forced``.
        """
        base = len(inst.forced)
        ub = approximate_instance(inst.copy())
        if ub is None:
            return None
        hints = tuple(ub.vertices[base:]) if self.cfg.iterative_compression else ()
        extra = len(ub) - base
        for t in range(min(cap, extra - 1) + 1):
            trial = inst.copy()
            trial.budget = t
            found = self.decide(trial, hints, 0)
            if found is not None:
                return found
        if extra <= cap:
            return list(ub.vertices)
        return None

    def decide(self, inst: Instance, hints: tuple = (), pos: int = 0) -> list[int] | None:
        """A solution of ``inst`` within its budget, or None if there is none."""
        cfg = self.cfg
        st = self.stats
        g = inst.graph
        st.nodes_visited += 1
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SolverTimeout
        n0, m0 = g.n, g.m
        reduce_exhaustively(inst)
        if cfg.collect_stats:
            st.reduction_calls.append((n0, n0 - g.n, m0 - g.m))
        while True:
            reduce_exhaustively(inst)
            if inst.infeasible:
                return None
            if g.n == 0:
                return list(inst.forced)
            if inst.budget <= 0:
                # a reduced nonempty graph always contains a cycle
                return None
            if cfg.kernel_hook is not None and (cfg.kernel_every_step or not inst.undeletable):
                if cfg.kernel_hook(inst):
                    continue
            if cfg.lower_bound and lower_bound_prune(inst):
                st.prunes_by_lb += 1
                return None
            if cfg.cc_split:
                before = g.n
                split_components(inst, self.minimize,
                                 st.components_separated if cfg.collect_stats else None)
                if inst.infeasible:
                    return None
                if g.n != before:
                    continue
            kind, v, pos = self.pick_pivot(inst, hints, pos)
            if kind == "subcubic":
                st.subcubic_calls += 1
                sol = solve_subcubic(inst)
                if sol is None or len(sol) - len(inst.forced) > inst.budget:
                    return None
                return list(sol.vertices)
            if kind == "greedy":
                st.greedy_steps += 1
                continue
            break
        child = inst.copy()
        child.take(v)
        found = self.decide(child, hints, pos)
        if found is not None:
            return found
        inst.make_undeletable(v)
        return self.decide(inst, hints, pos)

    # -- pivot choice ----------------------------------------------------

    def pick_pivot(self, inst: Instance, hints: tuple = (), pos: int = 0):
        """Next action as ``(kind, vertex, hint position)``.

        ``kind`` is ``"branch"``, ``"subcubic"`` or ``"greedy"`` (the
        instance was already simplified in place).
        """
        cfg = self.cfg
        g = inst.graph
        U = inst.undeletable
        if cfg.subcubic:
            if cfg.strategy == "kp":
                if all(is_tent(inst, v) for v in g.vertices() if v not in U):
                    return "subcubic", None, pos
            elif all(g.degree(v) <= 3 for v in g.vertices() if v not in U):
                return "subcubic", None, pos
        while pos < len(hints):
            h = hints[pos]
            pos += 1
            if g.is_live(h) and h not in U:
                return "branch", h, pos
        s = cfg.strategy
        if s == "cao":
            return "branch", max_degree_vertex(inst), pos
        if s == "cao/double":
            doubled = [v for v in g.vertices() if v not in U
                       and any(m == 2 for m in g.neighbors(v).values())]
            if doubled:
                return "branch", _argmax(doubled, g.degree), pos
            return "branch", max_degree_vertex(inst), pos
        if s in ("cao/undel", "cfllv"):
            return "branch", most_undeletable_edges_vertex(inst), pos
        if s == "kp":
            kind, v = kp_step(inst)
            return kind, v, pos
        kind, v = ii_step(inst, cfg.relaxation)
        return kind, v, pos


def _argmax(verts, key) -> int:
    best, best_val = -1, None
    for v in sorted(verts):
        val = key(v)
        if best_val is None or val > best_val:
            best, best_val = v, val
    return best


def max_degree_vertex(inst: Instance) -> int:
    g = inst.graph
    return _argmax((v for v in g.vertices() if v not in inst.undeletable), g.degree)


def edges_into_undeletable(inst: Instance, v: int) -> int:
    U = inst.undeletable
    return sum(m for u, m in inst.graph.neighbors(v).items() if u in U)


def most_undeletable_edges_vertex(inst: Instance, among=None) -> int:
    g = inst.graph
    cand = [v for v in (g.vertices() if among is None else among) if v not in inst.undeletable]
    best = _argmax(cand, lambda v: edges_into_undeletable(inst, v))
    if edges_into_undeletable(inst, best) == 0:
        return _argmax(cand, g.degree)
    return best


def is_tent(inst: Instance, v: int) -> bool:
    """Deletable, degree 3, and all three edge ends in U."""
    g = inst.graph
    return (v not in inst.undeletable and g.degree(v) == 3 and not g.has_loop(v)
            and edges_into_undeletable(inst, v) == 3)


def kp_step(inst: Instance):
    """Tent-based step: solve, subdivide towards the single deletable neighbour, or branch."""
    g = inst.graph
    U = inst.undeletable
    deletable = [v for v in g.vertices() if v not in U]
    if all(is_tent(inst, v) for v in deletable):
        return "subcubic", None
    changed = False
    for v in deletable:
        if not g.is_live(v) or v in U or g.degree(v) != 3 or g.has_loop(v):
            continue
        others = [u for u in g.neighbors(v) if u not in U]
        if len(others) == 1 and g.multiplicity(v, others[0]) == 1:
            u = others[0]
            w = g.add_vertex()
            g.remove_edge(u, v)
            g.add_edge(u, w)
            g.add_edge(w, v)
            U.add(w)
            inst.irreducible.add(w)
            changed = True
    if changed:
        return "greedy", None
    non_tents = [v for v in deletable if not is_tent(inst, v)]
    return "branch", most_undeletable_edges_vertex(inst, non_tents)


def solve_min(g: MultiGraph, cfg: BranchConfig | None = None) -> SolveResult:
    """Minimum feedback vertex set of ``g`` (ids of ``g``)."""
    return BranchSolver(cfg or BranchConfig()).solve(g)


def decide(g: MultiGraph, k: int, cfg: BranchConfig | None = None,
           undeletable=(), hints: BranchHints | None = None) -> Solution | None:
    """Some solution of size at most ``k`` avoiding ``undeletable``, or None."""
    solver = BranchSolver(cfg or BranchConfig())
    inst = Instance.from_graph(g.copy(), budget=k, undeletable=undeletable)
    found = solver.decide(inst, hints.queue if hints else ())
    return None if found is None else Solution(tuple(found))


def pick_pivot(inst: Instance, cfg: BranchConfig, hints: BranchHints | None = None):
    """``(kind, vertex)`` chosen for a reduced instance; may simplify ``inst`` in place."""
    kind, v, _ = BranchSolver(cfg).pick_pivot(inst, hints.queue if hints else (), 0)
    return kind, v


def run_with_big_stack(fn, *args, stack_mb: int = 512, **kwargs):
    """Run ``fn`` in a thread with a large stack and a high recursion limit."""
    box: dict = {}

    def target():
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # re-raised in the caller
            box["error"] = exc

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    sys.setrecursionlimit(max(old_limit, 200_000))
    threading.stack_size(stack_mb * 1024 * 1024)
    try:
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if "error" in box:
        raise box["error"]
    return box["value"]
