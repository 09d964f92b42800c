import random
from pathlib import Path

from fvs.bench import (CSV_COLUMNS, ReductionMeasures, RunRecord, TestSets, aggregate, gap_histogram,
                       read_csv, run_suite, score_measures, split_point_scores,
                       strictly_better_counts, write_csv)
from fvs.branch import SearchStats
from fvs.generators import complete, cycle, petersen, random_simple_graph
from fvs.pace_io import write_instance

GOLDEN = Path(__file__).parent / "golden"


def write(tmp_path, name, g):
    path = tmp_path / name
    path.write_text(write_instance(g))
    return path


def test_two_by_two_records(tmp_path):
    write(tmp_path, "public_001.graph", cycle(5))
    write(tmp_path, "hidden_002.graph", petersen())
    recs = run_suite(str(tmp_path), ["cao+cc+deg3+lb", "ilp"], timeout=30)
    assert len(recs) == 4
    assert all(r.solved for r in recs)
    sizes = {(r.instance, r.algorithm): r.solution_size for r in recs}
    assert sizes[("public_001", "ilp")] == 1 and sizes[("hidden_002", "cao+cc+deg3+lb")] == 3


def test_timeout_record(tmp_path):
    g = random_simple_graph(random.Random(5), 90, 400)
    write(tmp_path, "hard.graph", g)
    (rec,) = run_suite(str(tmp_path), ["cao"], timeout=0.5)
    assert rec.outcome == "timeout" and rec.solution_size is None


def test_corrupted_file(tmp_path):
    (tmp_path / "broken.graph").write_text("a b\nthree tokens here\n")
    write(tmp_path, "ok.graph", complete(4))
    recs = run_suite(str(tmp_path), ["cao+cc+deg3+lb"], timeout=30)
    by_name = {r.instance: r for r in recs}
    assert by_name["broken"].outcome == "error" and "line 2" in by_name["broken"].error
    assert by_name["ok"].solved and by_name["ok"].solution_size == 2


def test_gap_histogram():
    assert gap_histogram([(10, 10), (10, 10), (11, 10)]) == (2, 1, 0, 0, 0)
    assert gap_histogram([(5, 2), (7, 4), (3, 1)]) == (0, 0, 1, 2, 3)


def rec(instance, algo, solved=True, t=1.0):
    return RunRecord(instance, algo, "solved" if solved else "timeout", wall_time_s=t,
                     solution_size=3 if solved else None, upper_bound=3)


def test_aggregate_counts_and_set_times():
    recs = [rec("public_011", "a", t=2.0), rec("hidden_001", "a", t=3.0), rec("public_999", "a", t=50.0),
            rec("public_011", "b", t=1.0), rec("hidden_001", "b", solved=False, t=9.0),
            rec("public_999", "b")]
    report = aggregate(recs)
    a, b = report.summaries
    assert (a.solved, a.solved_public, a.solved_hidden) == (3, 2, 1)
    assert a.set_times["A"] == 5.0 and a.set_times["B"] is None
    assert b.solved == 2 and b.set_times["A"] is None
    assert "public" in report.table()


def test_aggregate_is_order_invariant():
    recs = [rec(f"public_{i:03d}", algo, solved=(i + len(algo)) % 3 > 0, t=i)
            for i in range(12) for algo in ("x", "yy")]
    shuffled = list(recs)
    random.Random(1).shuffle(shuffled)
    assert aggregate(recs) == aggregate(shuffled)


def test_test_sets_shape():
    sets = TestSets()
    assert len(sets.set_a) == 14 and len(sets.set_b) == 7 and len(sets.set_c) == 18
    assert sets.set_c <= sets.set_a | sets.set_b


def test_scores():
    best = {"a": [5] * 10, "b": [1] * 10, "c": [2] * 10}
    assert split_point_scores(best) == {"a": 100.0, "b": 0.0, "c": 0.0}
    tie = split_point_scores({"a": [3], "b": [3], "c": [1]})
    assert tie == {"a": 50.0, "b": 50.0, "c": 0.0}
    assert strictly_better_counts({"a": [1, 2, 3], "b": [1, 1, 4]}) == {"a": 1, "b": 1}
    assert score_measures({"a": [2, 2], "b": [2, 1]}) == {"a": 1.0, "b": 0.0}


def test_reduction_percentages():
    st = SearchStats(initial_dn=3, initial_dm=5,
                     reduction_calls=[(30, 4, 6), (10, 2, 2), (25, 0, 1)])
    meas = ReductionMeasures.from_stats(12, 20, st)
    assert meas.initial_dn_pct == 25.0 and meas.initial_dm_pct == 25.0
    assert meas.avg_dn == 2.0 and meas.avg_dm == 3.0
    assert meas.avg2040_dn == 2.0 and meas.avg2040_dm == 3.5


def test_csv_schema_and_round_trip():
    recs = [rec("public_011", "cao+cc", t=0.25), RunRecord("x", "ilp", "error", error="boom, bad")]
    text = write_csv(recs)
    header = text.splitlines()[0]
    assert header == (GOLDEN / "csv_header.txt").read_text().strip()
    assert header.split(",") == CSV_COLUMNS
    back = read_csv(text)
    assert back[0].wall_time_s == 0.25 and back[0].solution_size == 3
    assert back[1].error == "boom, bad" and back[1].solution_size is None
