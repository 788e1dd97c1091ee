import io
from fractions import Fraction
from pathlib import Path

import pytest

from weakrank.analysis import (
    BenchEntry,
    bound_report,
    candidate_tails,
    counterexample_report,
    fairness_trajectory,
    load_manifest,
    neighbour_orders,
    p_sweep,
    parse_manifest,
    run_bench,
    run_entry,
    tail_matching_optimum,
    tcu_sweep,
    truncated_split_value,
)
from weakrank.core.errors import InputError, VariantError
from weakrank.models.matrix import PairOrderMatrix
from weakrank.models.order import BucketOrder
from weakrank.models.rational import round_2dp
from weakrank.schemas.report import BENCH_COLUMNS
from weakrank.schemas.solve import SolveStatus
from weakrank.schemas.variant import FairnessSpec, FixedBucketsVariant, ObopVariant, parse_groups
from weakrank.solver.engine import solve

OPTIMUM = "1 3 | 2 4 7 | 8 | 5 6"


def test_p_sweep_is_not_unimodal(four_items):
    sweep = p_sweep(four_items)
    assert [round_2dp(point.objective) for point in sweep.points] == ["3.40", "2.60", "2.80", "2.60"]
    assert sweep.minima == [2, 4]
    assert sweep.non_unimodal
    assert sweep.value_at(3) == Fraction(14, 5)


def test_p_sweep_csv(four_items):
    lines = p_sweep(four_items, [1, 2]).to_csv().splitlines()
    assert lines[0] == "param,objective_exact,objective_2dp,status,is_min"
    assert lines[1] == "1,17/5,3.40,Optimal,0"
    assert lines[2] == "2,13/5,2.60,Optimal,1"


def test_p_sweep_rejects_values_outside_range(four_items):
    with pytest.raises(VariantError):
        p_sweep(four_items, [0, 2])
    with pytest.raises(VariantError):
        p_sweep(four_items, [5])


def test_p_sweep_with_workers_matches_sequential(four_items, search_cfg):
    sequential = p_sweep(four_items, cfg=search_cfg)
    parallel = p_sweep(four_items, cfg=search_cfg.model_copy(update={"workers": 2}))
    assert [point.objective for point in parallel.points] == [point.objective for point in sequential.points]


def test_k_sweep_annotations(eight_items, search_cfg):
    sweep = tcu_sweep(eight_items, [4, 6, 7, 8], search_cfg)
    assert sweep.value_at(6) == sweep.value_at(8)
    assert round_2dp(sweep.value_at(4)) == "12.66"
    assert round_2dp(sweep.value_at(7)) == "11.58"
    notes = {point.value: point.annotations for point in sweep.points}
    assert notes[8] == ("full",)
    assert notes[6] == ("worst-bucket",)
    assert notes[4] == ()
    assert sweep.minima == [6, 8]


def test_k_sweep_report_carries_schema_version(four_items):
    report = tcu_sweep(four_items).report()
    assert report["schema_version"] == 1
    assert report["parameter"] == "k"
    assert len(report["points"]) == 4


def test_neighbour_orders():
    neighbours = {order.to_text() for order in neighbour_orders(BucketOrder.parse("1 2 | 3"))}
    assert neighbours == {"1 2 3", "1 | 2 | 3", "2 | 1 | 3"}


def test_trajectory_of_the_unfair_optimum():
    spec = parse_groups("1,3,4,8;2,5,6,7", 8)
    trajectory = fairness_trajectory(BucketOrder.parse(OPTIMUM), spec)
    first = trajectory.row(1, 1)
    assert (first.total, first.count, first.proportion) == (2, 2, 1)
    assert not first.within_bounds
    assert not trajectory.within_bounds
    assert len(trajectory.rows) == 2 * 4


def test_trajectory_counts_are_conserved():
    spec = parse_groups("mod3", 7)
    order = BucketOrder.parse("7 | 1 2 | 3 | 4 5 6")
    trajectory = fairness_trajectory(order, spec, slots=6)
    for prefix in range(1, 7):
        rows = [trajectory.row(group, prefix) for group in (1, 2, 3)]
        assert sum(row.count for row in rows) == rows[0].total
        assert sum(row.proportion for row in rows) == 1
    assert trajectory.row(1, 6).total == 7


def test_trajectory_of_a_single_bucket():
    spec = parse_groups("1,2;3,4", 4)
    trajectory = fairness_trajectory(BucketOrder.single_bucket(4), spec)
    assert [row.proportion for row in trajectory.rows] == [Fraction(1, 2), Fraction(1, 2)]
    assert trajectory.within_bounds


def test_trajectory_csv():
    spec = parse_groups("1;2", 2)
    lines = fairness_trajectory(BucketOrder.parse("2 | 1"), spec).to_csv().splitlines()
    assert lines[0] == "group,prefix,T,S,proportion_exact,target,within_bounds"
    assert lines[1] == "1,1,1,0,0,1/2,1"


def test_trajectory_needs_a_partition():
    spec = FairnessSpec.proportional([[1, 2]], 3)
    with pytest.raises(VariantError):
        fairness_trajectory(BucketOrder.single_bucket(3), spec)


def test_bound_report(eight_items):
    report = bound_report(eight_items, ObopVariant())
    assert round_2dp(report.objective) == "10.78"
    assert round_2dp(report.utopian_bound) == "7.22"
    assert round_2dp(report.gap_to_utopian) == "3.56"
    assert report.utopian_transitive is False


def test_bound_report_for_indifferent_matrix():
    report = bound_report(PairOrderMatrix.uniform(4), ObopVariant())
    assert report.objective == 0
    assert report.utopian_bound == 0
    assert report.gap_to_utopian == 0
    assert report.utopian_transitive


def test_bound_report_other_variants_have_no_utopian_fields(four_items):
    report = bound_report(four_items, FixedBucketsVariant(p=2))
    assert report.status == SolveStatus.OPTIMAL
    assert report.utopian_bound is None


def test_candidate_tails():
    order = BucketOrder.parse("1 | 2 3 | 4")
    assert set(candidate_tails(order, 2)) == {frozenset({2, 3}), frozenset({1, 3})}
    assert set(candidate_tails(order, 3)) == {frozenset({3})}
    with pytest.raises(VariantError):
        list(candidate_tails(order, 4))


@pytest.mark.slow
def test_best_orders_with_a_given_tail(counterexample, search_cfg):
    value, orders = tail_matching_optimum(counterexample, [1, 3, 7, 9], search_cfg)
    assert round_2dp(value) == "29.10"
    assert {order.to_text() for order in orders} == {
        "6 | 9 | 5 | 3 7 | 1 | 2 4 8 10",
        "6 | 9 | 5 | 3 | 7 | 1 | 2 4 8 10",
    }


def test_truncated_split(counterexample):
    order = BucketOrder.parse("6 | 9 | 5 | 3 7 | 1 | 4 | 2 | 10 | 8")
    assert round_2dp(truncated_split_value(counterexample, order, 3)) == "32.06"


@pytest.mark.slow
def test_counterexample_report_for_six(counterexample, search_cfg):
    report = counterexample_report(counterexample, 6, search_cfg)
    assert round_2dp(report.tcu_objective) == "28.90"
    assert round_2dp(report.obop_objective) == "26.26"
    assert round_2dp(report.tail_matching_objective) == "29.10"
    assert report.tail_matching_tail == (2, 4, 8, 10)
    assert report.tcu_objective < report.tail_matching_objective


@pytest.mark.slow
def test_counterexample_report_for_three(counterexample, search_cfg):
    report = counterexample_report(counterexample, 3, search_cfg)
    assert round_2dp(report.tcu_objective) == "30.10"
    assert [order.to_text() for order in report.tcu_optima] == ["6 | 9 | 5 | 1 2 3 4 7 8 10"]
    assert round_2dp(report.two_bucket_objective) == "31.38"
    assert round_2dp(report.truncated_split_objective) == "32.06"


def test_counterexample_report_needs_a_proper_cut(four_items):
    with pytest.raises(VariantError):
        counterexample_report(four_items, 4)


MANIFEST = """\
# name path variant [params] timelimit
ex1    {ex1}  obop                   -
ex1p5  {ex1}  fixed-p p=5            60
small  {b}    equal-sizes p=2 q=2    -
"""


def test_parse_manifest(tmp_path):
    entries = parse_manifest(MANIFEST.format(ex1="eight_items.csv", b="b.csv"), base=tmp_path)
    assert [entry.name for entry in entries] == ["ex1", "ex1p5", "small"]
    assert entries[0].path == tmp_path / "eight_items.csv"
    assert entries[0].time_limit is None
    assert entries[1].params == {"p": 5}
    assert entries[1].time_limit == 60.0
    assert entries[1].label == "fixed-p(p=5)"
    assert entries[2].params == {"p": 2, "q": 2}


@pytest.mark.parametrize(
    "line",
    ["ex1 a.csv obop", "ex1 a.csv fixed-p p5 60", "ex1 a.csv obop soon", "ex1 a.csv obop 0"],
)
def test_bad_manifest_lines(line):
    with pytest.raises(InputError) as info:
        parse_manifest(line + "\n", source="bench.txt")
    assert info.value.line == 1


def test_manifest_paths_are_relative_to_the_manifest(tmp_path):
    path = tmp_path / "runs" / "bench.txt"
    path.parent.mkdir()
    path.write_text("a ../x.csv obop -\n", encoding="utf-8")
    assert load_manifest(path)[0].path == tmp_path / "runs" / ".." / "x.csv"


def test_run_entry_records_errors(tmp_path):
    row = run_entry(BenchEntry("gone", tmp_path / "missing.csv", "obop", {}, None))
    assert row.status == "Error"
    assert row.error
    assert row.objective is None


def test_run_entry_rejects_bad_parameters(data_dir):
    row = run_entry(BenchEntry("bad", data_dir / "four_items.csv", "fixed-p", {"p": 9}, None))
    assert row.status == "Error"
    assert row.n == 4
    assert "p=9" in row.error


def test_run_bench_writes_rows_in_order(data_dir):
    entries = [
        BenchEntry("b-obop", data_dir / "four_items.csv", "obop", {}, None),
        BenchEntry("b-p3", data_dir / "four_items.csv", "fixed-p", {"p": 3}, 30.0),
        BenchEntry("gone", Path("missing.csv"), "obop", {}, None),
    ]
    out = io.StringIO()
    rows = run_bench(entries, out)
    lines = out.getvalue().splitlines()
    assert lines[0] == ",".join(BENCH_COLUMNS)
    assert [line.split(",")[0] for line in lines[1:]] == ["b-obop", "b-p3", "gone"]
    assert rows[0].status == "Optimal"
    assert round_2dp(rows[0].objective) == "2.60"
    assert rows[0].utopian_bound is not None
    assert rows[1].utopian_bound is None
    assert round_2dp(rows[1].objective) == "2.80"
    assert rows[2].error


def test_run_bench_keeps_going_after_an_unexpected_failure(data_dir, monkeypatch):
    calls = []

    def fail_first(matrix, variant, cfg):
        calls.append(variant.label)
        if len(calls) == 1:
            raise RuntimeError("boom")
        return solve(matrix, variant, cfg)

    monkeypatch.setattr("weakrank.analysis.bench.solve", fail_first)
    entries = [
        BenchEntry("first", data_dir / "four_items.csv", "obop", {}, None),
        BenchEntry("second", data_dir / "four_items.csv", "fixed-p", {"p": 3}, None),
    ]
    rows = run_bench(entries, io.StringIO())
    assert [row.instance for row in rows] == ["first", "second"]
    assert rows[0].status == "Error"
    assert rows[0].n == 4
    assert rows[0].error == "RuntimeError: boom"
    assert round_2dp(rows[1].objective) == "2.80"


def test_run_bench_on_an_empty_manifest():
    out = io.StringIO()
    assert run_bench([], out) == []
    assert out.getvalue() == ",".join(BENCH_COLUMNS) + "\n"
