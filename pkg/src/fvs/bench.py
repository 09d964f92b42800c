"""Benchmark harness: isolated timed runs, CSV records and summary tables."""

from __future__ import annotations

import csv
import io
import multiprocessing as mp
import os
import time
import traceback
from dataclasses import asdict, dataclass, field, fields
from multiprocessing.connection import wait
from typing import Iterable, Sequence

from .approx import approximate
from .branch import BranchConfig, canonical_name, run_with_big_stack, solve_min
from .graph import verify_solution
from .ilp import make_backend, solve_ilp
from .pace_io import ParseError, read_instance

DEFAULT_TIMEOUT = 30 * 60.0


@dataclass
class RunRecord:
    instance: str
    algorithm: str
    outcome: str  # solved, timeout or error
    wall_time_s: float | None = None
    solution_size: int | None = None
    upper_bound: int | None = None  # size of the greedy approximation
    n: int | None = None
    m: int | None = None
    nodes_visited: int = 0
    prunes_by_lb: int = 0
    greedy_steps: int = 0
    subcubic_calls: int = 0
    components_separated: int = 0
    separated_vertices: int = 0
    initial_dn: int | None = None
    initial_dm: int | None = None
    avg_dn: float | None = None
    avg_dm: float | None = None
    avg2040_dn: float | None = None
    avg2040_dm: float | None = None
    error: str = ""

    @property
    def solved(self) -> bool:
        return self.outcome == "solved"


CSV_COLUMNS = [f.name for f in fields(RunRecord)]


@dataclass
class ReductionMeasures:
    n: int
    m: int
    initial_dn: int
    initial_dm: int
    avg_dn: float | None
    avg_dm: float | None
    avg2040_dn: float | None
    avg2040_dm: float | None
    separated_sizes: list[int] = field(default_factory=list)

    @property
    def initial_dn_pct(self) -> float:
        return 100.0 * self.initial_dn / self.n if self.n else 0.0

    @property
    def initial_dm_pct(self) -> float:
        return 100.0 * self.initial_dm / self.m if self.m else 0.0

    @property
    def separated_total(self) -> int:
        return sum(self.separated_sizes)

    @classmethod
    def from_stats(cls, n: int, m: int, stats) -> "ReductionMeasures":
        calls = stats.reduction_calls
        window = [c for c in calls if 20 <= c[0] <= 40]

        def mean(rows, i):
            return sum(r[i] for r in rows) / len(rows) if rows else None

        return cls(n=n, m=m, initial_dn=stats.initial_dn, initial_dm=stats.initial_dm,
                   avg_dn=mean(calls, 1), avg_dm=mean(calls, 2),
                   avg2040_dn=mean(window, 1), avg2040_dm=mean(window, 2),
                   separated_sizes=list(stats.components_separated))


@dataclass(frozen=True)
class TestSets:
    __test__ = False  # not a pytest class

    set_a: frozenset[str] = frozenset({
        "hidden_001", "hidden_007", "hidden_012", "hidden_056", "hidden_065", "hidden_083",
        "hidden_099", "hidden_106", "public_011", "public_014", "public_037", "public_069",
        "public_076", "public_086"})
    set_b: frozenset[str] = frozenset({
        "hidden_022", "hidden_041", "hidden_068", "hidden_088", "public_035", "public_066",
        "public_067"})
    set_c: frozenset[str] = frozenset({
        "hidden_001", "hidden_007", "hidden_012", "hidden_022", "hidden_056", "hidden_065",
        "hidden_068", "hidden_083", "hidden_088", "hidden_099", "hidden_106", "public_011",
        "public_014", "public_035", "public_069", "public_076", "public_086", "public_067"})

    def named(self) -> dict[str, frozenset[str]]:
        return {"A": self.set_a, "B": self.set_b, "C": self.set_c}


def instance_name(path: str) -> str:
    base = os.path.basename(path)
    for ext in (".graph", ".txt", ".gr"):
        if base.endswith(ext):
            return base[: -len(ext)]
    return base


def instance_group(name: str) -> str:
    if name.startswith("public"):
        return "public"
    if name.startswith("hidden"):
        return "hidden"
    return "other"


# -- running -------------------------------------------------------------------


def _solve_file(path: str, algorithm: str, collect_stats: bool, ilp_backend: str,
                ilp_command: str | None) -> dict:
    start = time.monotonic()
    g = read_instance(path)
    out = {"n": g.n, "m": g.m}
    ub = approximate(g)
    out["upper_bound"] = None if ub is None else ub.size
    if algorithm == "ilp":
        sol = solve_ilp(g, make_backend(ilp_backend, ilp_command))
        out["labels"] = sol.labels(g)
    else:
        cfg = BranchConfig.parse(algorithm, collect_stats=collect_stats)
        res = run_with_big_stack(solve_min, g, cfg)
        st = res.stats
        out.update(nodes_visited=st.nodes_visited, prunes_by_lb=st.prunes_by_lb,
                   greedy_steps=st.greedy_steps, subcubic_calls=st.subcubic_calls,
                   components_separated=len(st.components_separated),
                   separated_vertices=sum(st.components_separated),
                   initial_dn=st.initial_dn, initial_dm=st.initial_dm)
        if collect_stats:
            meas = ReductionMeasures.from_stats(g.n, g.m, st)
            out.update(avg_dn=meas.avg_dn, avg_dm=meas.avg_dm,
                       avg2040_dn=meas.avg2040_dn, avg2040_dm=meas.avg2040_dm)
        out["labels"] = res.solution.labels(g)
    out["wall_time_s"] = time.monotonic() - start
    return out


def _worker(conn, path, algorithm, collect_stats, ilp_backend, ilp_command) -> None:
    try:
        conn.send(("ok", _solve_file(path, algorithm, collect_stats, ilp_backend, ilp_command)))
    except ParseError as exc:
        conn.send(("error", f"parse error: {exc}"))
    except BaseException as exc:
        conn.send(("error", f"{type(exc).__name__}: {exc}\n{traceback.format_exc(limit=3)}"))
    finally:
        conn.close()


def _finish(path: str, algorithm: str, payload, elapsed: float, timeout: float) -> RunRecord:
    name = instance_name(path)
    if payload is None:
        return RunRecord(name, algorithm, "timeout", wall_time_s=timeout)
    status, data = payload
    if status != "ok":
        return RunRecord(name, algorithm, "error", wall_time_s=elapsed, error=str(data).strip())
    labels = data.pop("labels")
    rec = RunRecord(name, algorithm, "solved", **data)
    try:
        pristine = read_instance(path)
        ids = [pristine.id_of(label) for label in labels]
        ok = len(set(ids)) == len(ids) and verify_solution(pristine, ids)
    except (KeyError, OSError, ParseError) as exc:
        ok = False
        rec.error = f"verification failed: {exc}"
    if not ok:
        rec.outcome = "error"
        rec.error = rec.error or "solution does not verify"
    else:
        rec.solution_size = len(labels)
    return rec


def list_instances(directory: str) -> list[str]:
    return sorted(
        os.path.join(directory, f) for f in os.listdir(directory)
        if os.path.isfile(os.path.join(directory, f)) and not f.startswith(".")
    )


def run_suite(instances: str | Sequence[str], algorithms: Sequence[str],
              timeout: float = DEFAULT_TIMEOUT, jobs: int = 1, collect_stats: bool = False,
              ilp_backend: str = "highs", ilp_command: str | None = None,
              progress=None) -> list[RunRecord]:
    """Run every algorithm on every instance, each in its own killable process.

    ``instances`` is a directory or a list of paths. Records come back sorted
    by (instance, algorithm).
    """
    paths = list_instances(instances) if isinstance(instances, str) else list(instances)
    algos = [canonical_name(a) for a in algorithms]
    tasks = [(p, a) for p in paths for a in algos]
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    records: list[RunRecord] = []
    running: dict = {}
    pending = list(reversed(tasks))
    while pending or running:
        while pending and len(running) < max(1, jobs):
            path, algo = pending.pop()
            recv, send = ctx.Pipe(duplex=False)
            proc = ctx.Process(target=_worker, daemon=True,
                               args=(send, path, algo, collect_stats, ilp_backend, ilp_command))
            proc.start()
            send.close()
            running[recv] = (proc, path, algo, time.monotonic())
        now = time.monotonic()
        next_deadline = min(t0 + timeout for _, _, _, t0 in running.values())
        ready = wait(list(running), timeout=max(0.0, next_deadline - now))
        now = time.monotonic()
        for conn in list(running):
            proc, path, algo, t0 = running[conn]
            payload = None
            if conn in ready:
                try:
                    payload = conn.recv()
                except EOFError:
                    payload = ("error", f"worker died (exit code {proc.exitcode})")
            elif now - t0 < timeout:
                continue
            if payload is None:
                proc.kill()
            proc.join()
            conn.close()
            del running[conn]
            rec = _finish(path, algo, payload, now - t0, timeout)
            records.append(rec)
            if progress is not None:
                progress(rec)
    records.sort(key=lambda r: (r.instance, algos.index(r.algorithm)))
    return records


# -- CSV -----------------------------------------------------------------------


def write_csv(records: Iterable[RunRecord], out: io.TextIOBase | None = None) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        row = asdict(rec)
        for key, val in row.items():
            if val is None:
                row[key] = ""
            elif isinstance(val, float):
                row[key] = f"{val:.6f}"
        writer.writerow(row)
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def read_csv(text: str) -> list[RunRecord]:
    out = []
    types = {f.name: f.type for f in fields(RunRecord)}
    for row in csv.DictReader(io.StringIO(text)):
        kw = {}
        for key, val in row.items():
            t = str(types[key])
            if val == "":
                kw[key] = "" if t == "str" else (0 if t == "int" else None)
            elif "float" in t:
                kw[key] = float(val)
            elif "int" in t:
                kw[key] = int(val)
            else:
                kw[key] = val
        out.append(RunRecord(**kw))
    return out


# -- aggregation ---------------------------------------------------------------


@dataclass
class AlgorithmSummary:
    algorithm: str
    solved: int = 0
    solved_public: int = 0
    solved_hidden: int = 0
    runs: int = 0
    set_times: dict[str, float | None] = field(default_factory=dict)


@dataclass
class Report:
    summaries: list[AlgorithmSummary]
    gap_histogram: tuple[int, int, int, int, int]

    def table(self) -> str:
        head = f"{'algorithm':28s} {'solved':>6s} {'public':>6s} {'hidden':>6s} {'A':>9s} {'B':>9s} {'C':>9s}"
        lines = [head]
        for s in self.summaries:
            times = [("-" if s.set_times.get(k) is None else f"{s.set_times[k]:.1f}") for k in "ABC"]
            lines.append(f"{s.algorithm:28s} {s.solved:6d} {s.solved_public:6d} {s.solved_hidden:6d} "
                         f"{times[0]:>9s} {times[1]:>9s} {times[2]:>9s}")
        g = self.gap_histogram
        lines.append("")
        lines.append("approximation gap   0: %d   1: %d   2: %d   >2: %d   >10%%: %d" % g)
        return "\n".join(lines) + "\n"


def gap_histogram(pairs: Iterable[tuple[int, int]]) -> tuple[int, int, int, int, int]:
    """Counts of (approx, optimum) pairs by gap: 0, 1, 2, >2, and separately >10% of the optimum."""
    bins = [0, 0, 0, 0, 0]
    for approx, opt in pairs:
        gap = approx - opt
        bins[min(gap, 3)] += 1
        if gap > 0.1 * opt:
            bins[4] += 1
    return tuple(bins)


def aggregate(records: Iterable[RunRecord], sets: TestSets | None = None) -> Report:
    sets = sets or TestSets()
    records = sorted(records, key=lambda r: (r.algorithm, r.instance))
    by_algo: dict[str, list[RunRecord]] = {}
    for r in records:
        by_algo.setdefault(r.algorithm, []).append(r)
    summaries = []
    for algo in sorted(by_algo):
        recs = by_algo[algo]
        s = AlgorithmSummary(algo, runs=len(recs))
        for r in recs:
            if r.solved:
                s.solved += 1
                grp = instance_group(r.instance)
                s.solved_public += grp == "public"
                s.solved_hidden += grp == "hidden"
        for key, members in sets.named().items():
            part = [r for r in recs if r.instance in members]
            if part and all(r.solved for r in part):
                s.set_times[key] = sum(r.wall_time_s for r in part)
            else:
                s.set_times[key] = None
        summaries.append(s)
    pairs = {}
    for r in records:
        if r.solved and r.upper_bound is not None:
            pairs.setdefault(r.instance, (r.upper_bound, r.solution_size))
    return Report(summaries, gap_histogram(pairs[k] for k in sorted(pairs)))


def split_point_scores(measures: dict[str, Sequence[float]]) -> dict[str, float]:
    """Percentage of points when each test's point is split among its best algorithms."""
    names = sorted(measures)
    tests = len(measures[names[0]]) if names else 0
    if any(len(measures[n]) != tests for n in names):
        raise ValueError("all algorithms need the same test list")
    points = dict.fromkeys(names, 0.0)
    for t in range(tests):
        best = max(measures[n][t] for n in names)
        winners = [n for n in names if measures[n][t] == best]
        for n in winners:
            points[n] += 1.0 / len(winners)
    return {n: (100.0 * p / tests if tests else 0.0) for n, p in points.items()}


def strictly_better_counts(measures: dict[str, Sequence[float]]) -> dict[str, int]:
    a, b = sorted(measures)
    xs, ys = measures[a], measures[b]
    if len(xs) != len(ys):
        raise ValueError("both algorithms need the same test list")
    return {a: sum(x > y for x, y in zip(xs, ys)), b: sum(y > x for x, y in zip(xs, ys))}


def score_measures(measures: dict[str, Sequence[float]]) -> dict[str, float]:
    """Two algorithms: strictly-better counts; more: split-point percentages."""
    if len(measures) == 2:
        return {k: float(v) for k, v in strictly_better_counts(measures).items()}
    return split_point_scores(measures)
