"""Cycle-hitting integer program with lazily generated cycle constraints.

Each vertex gets a 0/1 variable, the objective is the number of chosen
vertices, and every pooled cycle must contain a chosen vertex. The pool
starts with a shortest cycle through every vertex; whenever the backend
returns a set that still leaves a cycle, shortest cycles of the remaining
graph are added and the model is solved again.

Backends are callables ``backend(model) -> {vertex: 0 or 1}``:

* :func:`builtin_backend`: exact bitmask branch and bound, for small models.
* :func:`highs_backend`: the HiGHS MIP solver shipped with scipy.
* :class:`ExternalBackend`: writes an LP file and runs a command.
"""

from __future__ import annotations

import os
import re
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .approx import UNBOUNDED, shortest_cycle_warm_start
from .cycles import shortest_cycle_through
from .graph import Instance, MultiGraph, Solution, components, is_acyclic
from .reduce import reduce_exhaustively

DEFAULT_VARIABLE_CAP = 64
COMMAND_ENV = "FVS_ILP_COMMAND"


class IlpError(RuntimeError):
    """Backend failure or timeout; ``incumbent`` is the best known solution."""

    def __init__(self, message: str, incumbent: Solution | None = None):
        super().__init__(message)
        self.incumbent = incumbent


class BackendCapacityError(IlpError):
    pass


@dataclass(frozen=True)
class CycleConstraint:
    vertices: frozenset[int]

    def satisfied_by(self, chosen) -> bool:
        return not self.vertices.isdisjoint(chosen)


@dataclass
class IlpModel:
    variables: list[int]
    pool: list[CycleConstraint] = field(default_factory=list)
    lazy: list[bool] = field(default_factory=list)
    warm_start: Solution = Solution(())

    def add(self, constraints: Iterable[CycleConstraint], lazy: bool) -> int:
        known = set(self.pool)
        added = 0
        for c in constraints:
            if c not in known:
                known.add(c)
                self.pool.append(c)
                self.lazy.append(lazy)
                added += 1
        return added


@dataclass
class IlpStats:
    components: int = 0
    rounds: int = 0
    # one list per component: pool size and objective at each lazy round
    pool_sizes: list[list[int]] = field(default_factory=list)
    objectives: list[list[int]] = field(default_factory=list)
    bridges_removed: int = 0
    forced: int = 0


Backend = Callable[[IlpModel], dict]


def shortest_cycles(g: MultiGraph) -> list[CycleConstraint]:
    """A shortest cycle through each vertex, deduplicated as vertex sets."""
    out: list[CycleConstraint] = []
    seen: set[frozenset[int]] = set()
    for v in g.vertices():
        if g.degree(v) < 2 and not g.has_loop(v):
            continue
        cyc = shortest_cycle_through(g, v)
        if cyc is None:
            continue
        key = frozenset(cyc)
        if key not in seen:
            seen.add(key)
            out.append(CycleConstraint(key))
    return out


def find_bridges(g: MultiGraph) -> list[tuple[int, int]]:
    """Single edges whose removal disconnects their endpoints."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    bridges = []
    counter = 0
    for root in g.vertices():
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        stack = [(root, -1, iter(g.neighbors(root).items()))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for u, mult in it:
                if u == parent and mult == 1:
                    continue
                if u == v:
                    continue
                if u in disc:
                    low[v] = min(low[v], disc[u])
                else:
                    disc[u] = low[u] = counter
                    counter += 1
                    stack.append((u, v, iter(g.neighbors(u).items())))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if parent != -1:
                    low[parent] = min(low[parent], low[v])
                    if low[v] > disc[parent]:
                        bridges.append((min(parent, v), max(parent, v)))
    return bridges


# -- backends ------------------------------------------------------------------


def builtin_backend(model: IlpModel, cap: int = DEFAULT_VARIABLE_CAP) -> dict:
    """Exact hitting-set branch and bound over bitmasks."""
    if len(model.variables) > cap:
        raise BackendCapacityError(
            f"{len(model.variables)} variables exceed the built-in cap of {cap}; "
            "use the highs or external backend")
    index = {v: i for i, v in enumerate(model.variables)}
    masks = sorted({sum(1 << index[v] for v in c.vertices) for c in model.pool},
                   key=lambda m: bin(m).count("1"))
    n = len(model.variables)
    best_mask = (1 << n) - 1
    warm = sum(1 << index[v] for v in model.warm_start.vertices if v in index)
    if all(m & warm for m in masks):
        best_mask = warm
    best = [bin(best_mask).count("1"), best_mask]

    def lower_bound(open_masks, allowed):
        used = 0
        count = 0
        for m in open_masks:
            m &= allowed
            if not m & used:
                used |= m
                count += 1
        return count

    def rec(chosen: int, allowed: int, size: int) -> None:
        open_masks = [m for m in masks if not m & chosen]
        if not open_masks:
            if size < best[0]:
                best[0], best[1] = size, chosen
            return
        if any(not (m & allowed) for m in open_masks):
            return
        if size + lower_bound(open_masks, allowed) >= best[0]:
            return
        pick = min(open_masks, key=lambda m: bin(m & allowed).count("1"))
        rest = pick & allowed
        while rest:
            bit = rest & -rest
            rest ^= bit
            rec(chosen | bit, allowed, size + 1)
            allowed &= ~bit

    rec(0, (1 << n) - 1, 0)
    return {v: (best[1] >> i) & 1 for i, v in enumerate(model.variables)}


def _matrix(model: IlpModel):
    index = {v: i for i, v in enumerate(model.variables)}
    a = np.zeros((len(model.pool), len(model.variables)))
    for r, c in enumerate(model.pool):
        for v in c.vertices:
            a[r, index[v]] = 1
    return a


def highs_backend(model: IlpModel, time_limit: float | None = None) -> dict:
    from scipy.optimize import Bounds, LinearConstraint, milp

    if not model.variables:
        return {}
    if not model.pool:
        return {v: 0 for v in model.variables}
    options = {} if time_limit is None else {"time_limit": time_limit}
    res = milp(np.ones(len(model.variables)),
               constraints=LinearConstraint(_matrix(model), lb=1, ub=np.inf),
               integrality=np.ones(len(model.variables)), bounds=Bounds(0, 1), options=options)
    if res.status != 0 or res.x is None:
        raise IlpError(f"HiGHS failed: {res.message}")
    return {v: int(round(x)) for v, x in zip(model.variables, res.x)}


def write_lp(model: IlpModel) -> str:
    """The model in CPLEX LP text format; variable ``x<id>`` stands for vertex ``id``."""
    names = [f"x{v}" for v in model.variables]
    lines = ["\\ minimum feedback vertex set", "Minimize", " obj: " + (" + ".join(names) or "0"),
             "Subject To"]
    for r, c in enumerate(model.pool):
        lines.append(f" c{r}: " + " + ".join(f"x{v}" for v in sorted(c.vertices)) + " >= 1")
    lines.append("Binary")
    for i in range(0, len(names), 10):
        lines.append(" " + " ".join(names[i:i + 10]))
    lines.append("End")
    return "\n".join(lines) + "\n"


def parse_lp(text: str) -> IlpModel:
    """Read back the LP subset produced by :func:`write_lp`."""
    section = None
    variables: list[int] = []
    pool: list[CycleConstraint] = []
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        key = line.lower()
        if key in ("minimize", "subject to", "binary", "binaries", "end"):
            section = key
            continue
        if section == "subject to":
            body = line.split(":", 1)[-1]
            lhs, _, rhs = body.partition(">=")
            if rhs.strip() != "1":
                raise ValueError(f"unsupported constraint: {line}")
            pool.append(CycleConstraint(frozenset(_var_ids(lhs))))
        elif section in ("binary", "binaries"):
            variables.extend(_var_ids(line))
    return IlpModel(variables=variables, pool=pool, lazy=[False] * len(pool))


def _var_ids(text: str) -> list[int]:
    return [int(m) for m in re.findall(r"x(\d+)", text)]


def write_assignment(assign: dict) -> str:
    return "".join(f"x{v}={val}\n" for v, val in sorted(assign.items()))


def parse_assignment(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, _, value = line.replace(" ", "").partition("=")
        ids = _var_ids(name)
        if len(ids) != 1 or not value:
            raise ValueError(f"bad assignment line: {line!r}")
        out[ids[0]] = int(round(float(value)))
    return out


class ExternalBackend:
    """Runs ``command`` with ``{model}``, ``{solution}`` and ``{start}`` substituted."""

    def __init__(self, command: str | None = None, timeout: float | None = None):
        command = command or os.environ.get(COMMAND_ENV)
        if not command:
            raise IlpError(f"no external ILP command given (set {COMMAND_ENV})")
        self.command = command
        self.timeout = timeout

    def __call__(self, model: IlpModel) -> dict:
        with tempfile.TemporaryDirectory(prefix="fvs-ilp-") as tmp:
            model_path = os.path.join(tmp, "model.lp")
            sol_path = os.path.join(tmp, "solution.txt")
            start_path = os.path.join(tmp, "start.txt")
            with open(model_path, "w") as fh:
                fh.write(write_lp(model))
            warm = set(model.warm_start.vertices)
            with open(start_path, "w") as fh:
                fh.write(write_assignment({v: int(v in warm) for v in model.variables}))
            cmd = self.command.format(model=shlex.quote(model_path), solution=shlex.quote(sol_path),
                                      start=shlex.quote(start_path))
            try:
                proc = subprocess.run(cmd, shell=True, capture_output=True, text=True,
                                      timeout=self.timeout)
            except subprocess.TimeoutExpired as exc:
                raise IlpError("external ILP command timed out") from exc
            if proc.returncode != 0 or not os.path.exists(sol_path):
                raise IlpError(f"external ILP command failed ({proc.returncode}): {proc.stderr.strip()}")
            with open(sol_path) as fh:
                got = parse_assignment(fh.read())
        return {v: got.get(v, 0) for v in model.variables}


def make_backend(name: str, command: str | None = None, cap: int = DEFAULT_VARIABLE_CAP) -> Backend:
    if name == "builtin":
        return lambda model: builtin_backend(model, cap)
    if name == "highs":
        return highs_backend
    if name == "external":
        return ExternalBackend(command)
    raise ValueError(f"unknown ILP backend {name!r}")


# -- driver --------------------------------------------------------------------


def solve_ilp(g: MultiGraph, backend: Backend | None = None, stats: IlpStats | None = None,
              deadline: float | None = None) -> Solution:
    """Minimum feedback vertex set of ``g`` through the lazy cycle ILP."""
    backend = backend or builtin_backend
    stats = stats if stats is not None else IlpStats()
    inst = Instance.from_graph(g.copy(), budget=UNBOUNDED)
    reduce_exhaustively(inst)
    h = inst.graph
    stats.forced = len(inst.forced)
    chosen = list(inst.forced)
    for a, b in find_bridges(h):
        h.remove_edge(a, b)
        stats.bridges_removed += 1
    comps = [c for c in components(h) if not is_acyclic(h, c)]
    stats.components = len(comps)
    warm_parts = [shortest_cycle_warm_start(h.subgraph(c)) for c in comps]
    for i, comp in enumerate(comps):
        part = h.subgraph(comp)
        incumbent = Solution(tuple(chosen) + tuple(v for w in warm_parts[i:] for v in w.vertices))
        chosen.extend(_solve_component(part, warm_parts[i], backend, stats, deadline, incumbent))
    return Solution(tuple(chosen))


def _solve_component(part: MultiGraph, warm: Solution, backend: Backend, stats: IlpStats,
                     deadline: float | None, incumbent: Solution) -> list[int]:
    model = IlpModel(variables=sorted(part.vertices()), warm_start=warm)
    model.add(shortest_cycles(part), lazy=False)
    stats.pool_sizes.append([])
    stats.objectives.append([])
    while True:
        if deadline is not None and time.monotonic() > deadline:
            raise IlpError("ILP timed out", incumbent)
        stats.rounds += 1
        stats.pool_sizes[-1].append(len(model.pool))
        try:
            assign = backend(model)
        except IlpError as exc:
            exc.incumbent = exc.incumbent or incumbent
            raise
        except Exception as exc:
            raise IlpError(f"backend failed: {exc}", incumbent) from exc
        picked = sorted(v for v, val in assign.items() if val)
        stats.objectives[-1].append(len(picked))
        work = part.copy()
        for v in picked:
            work.delete_vertex(v)
        if is_acyclic(work):
            return picked
        before = len(model.pool)
        model.add(shortest_cycles(work), lazy=True)
        if len(model.pool) <= before:
            raise IlpError("lazy round added no constraint", incumbent)
