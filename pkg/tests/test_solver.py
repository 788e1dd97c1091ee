from fractions import Fraction

import pytest

from weakrank.core.errors import EnumerationLimitError, VariantError
from weakrank.models.matrix import PairOrderMatrix, distance
from weakrank.models.order import BucketOrder
from weakrank.models.rational import round_2dp
from weakrank.schemas.solve import SolveConfig, SolveStatus
from weakrank.schemas.variant import (
    EqualSizesVariant,
    FairnessSpec,
    FairVariant,
    FixedBucketsVariant,
    ObopVariant,
    PrescribedSizesVariant,
    TailBounds,
    TcuVariant,
    make_variant,
    parse_groups,
    parse_variant,
)
from weakrank.solver.costs import CostTable
from weakrank.solver.engine import enumerate_optima, solve, strategy_for
from weakrank.solver.oracle import brute_force_solve, bucket_count_range
from weakrank.solver.pairs import chain_height, place_before, root_state

OPTIMUM = "1 3 | 2 4 7 | 8 | 5 6"


def texts(result):
    return [order.to_text() for order in result.optima]


def assert_unique(result, value, order):
    assert result.status == SolveStatus.OPTIMAL
    assert round_2dp(result.objective) == value
    assert texts(result) == [order]


def test_cost_table_matches_distance(eight_items):
    table = CostTable(eight_items)
    for text in (OPTIMUM, "1 2 3 4 5 6 7 8", "8 | 7 | 6 | 5 | 4 | 3 | 2 | 1"):
        order = BucketOrder.parse(text)
        assert table.value(table.order_cost(order)) == distance(order, eight_items)


def test_unconstrained_optimum(eight_items, search_cfg):
    result = solve(eight_items, ObopVariant(), search_cfg)
    assert_unique(result, "10.78", OPTIMUM)
    assert result.bound == result.objective
    assert result.strategy == "pairs"


@pytest.mark.parametrize(
    "p, value, order",
    [
        (2, "12.14", "1 2 3 4 7 | 5 6 8"),
        (4, "10.78", OPTIMUM),
        (5, "11.34", "1 3 | 4 7 | 2 | 8 | 5 6"),
    ],
)
def test_fixed_bucket_count(eight_items, search_cfg, p, value, order):
    assert_unique(solve(eight_items, FixedBucketsVariant(p=p), search_cfg), value, order)


def test_chain_height_counts_the_longest_chain_not_the_classes_ahead():
    table = CostTable(PairOrderMatrix.uniform(3))
    state = place_before(table, place_before(table, root_state(3), 0, 2), 1, 2)
    assert chain_height(state) == 2
    assert chain_height(place_before(table, state, 0, 1)) == 3


def test_two_bucket_search_keeps_every_optimum(four_items, search_cfg):
    result = solve(four_items, FixedBucketsVariant(p=2), search_cfg)
    assert result.strategy == "pairs"
    assert round_2dp(result.objective) == "2.60"
    assert set(texts(result)) == {"1 2 3 | 4", "1 2 | 3 4", "1 | 2 3 4"}


@pytest.mark.parametrize(
    "p, q, value, order",
    [
        (2, 4, "13.14", "1 3 4 7 | 2 5 6 8"),
        (4, 2, "11.46", "1 3 | 4 7 | 2 8 | 5 6"),
    ],
)
def test_equal_bucket_sizes(eight_items, search_cfg, p, q, value, order):
    result = solve(eight_items, EqualSizesVariant(p=p, q=q), search_cfg)
    assert_unique(result, value, order)
    assert result.strategy == "buckets"


@pytest.mark.parametrize(
    "sizes, value, order",
    [
        ((1, 3, 4), "13.66", "3 | 1 4 7 | 2 5 6 8"),
        ((1, 2, 2, 3), "13.78", "3 | 1 4 | 2 7 | 5 6 8"),
        ((2, 3, 1, 2), "10.78", OPTIMUM),
    ],
)
def test_prescribed_bucket_sizes(eight_items, search_cfg, sizes, value, order):
    assert_unique(solve(eight_items, PrescribedSizesVariant(sizes=sizes), search_cfg), value, order)


@pytest.mark.parametrize(
    "k, value, order",
    [
        (4, "12.66", "1 3 | 4 7 | 2 5 6 8"),
        (6, "10.78", OPTIMUM),
        (7, "11.58", "1 3 | 2 4 7 | 8 | 5 | 6"),
    ],
)
def test_tail_collapsed(eight_items, search_cfg, k, value, order):
    result = solve(eight_items, TcuVariant(k=k), search_cfg)
    assert_unique(result, value, order)
    assert result.strategy == "tail"


def test_tail_collapsed_with_full_head_is_unconstrained(eight_items, search_cfg):
    result = solve(eight_items, TcuVariant(k=8), search_cfg)
    assert_unique(result, "10.78", OPTIMUM)
    assert result.strategy == "pairs"


def test_tail_bounds(eight_items, search_cfg):
    bounds = TailBounds(groups=((1, 3),), lower=(1,), upper=(2,))
    result = solve(eight_items, TcuVariant(k=6, tail_bounds=bounds), search_cfg)
    assert result.status == SolveStatus.OPTIMAL
    assert result.objective > Fraction(1078, 100)
    for order in result.optima:
        assert len(order.buckets[-1]) == 2
        assert order.buckets[-1] & {0, 2}


def test_proportional_fairness(eight_items, search_cfg):
    variant = FairVariant(fairness=parse_groups("1,3,4,8;2,5,6,7", 8))
    assert_unique(solve(eight_items, variant, search_cfg), "11.86", "3 | 1 2 4 7 | 5 8 | 6")
    assert not variant.admits(BucketOrder.parse(OPTIMUM))


def test_fairness_that_cannot_be_met_is_infeasible(four_items):
    spec = FairnessSpec(groups=((1, 2), (3, 4)), lower=({"*": "1"}, {}))
    for cfg in (SolveConfig(strategy="search"), SolveConfig(strategy="brute")):
        result = solve(four_items, FairVariant(fairness=spec), cfg)
        assert result.status == SolveStatus.INFEASIBLE
        assert result.objective is None
        assert result.optima == ()


def test_counterexample_matrix_has_two_optima(counterexample, search_cfg):
    result = solve(counterexample, ObopVariant(), search_cfg)
    assert result.status == SolveStatus.OPTIMAL
    assert round_2dp(result.objective) == "26.26"
    assert texts(result) == [
        "6 | 9 | 5 | 3 7 | 1 | 4 | 2 | 10 | 8",
        "6 | 9 | 5 | 3 | 7 | 1 | 4 | 2 | 10 | 8",
    ]
    assert result.optima_count == "2"


def test_counterexample_tail_collapsed_head_differs(counterexample, search_cfg):
    assert_unique(solve(counterexample, TcuVariant(k=6), search_cfg), "28.90", "9 | 3 | 1 6 7 | 4 | 2 5 8 10")


def test_single_optimum_mode(counterexample, search_cfg):
    cfg = search_cfg.model_copy(update={"collect_optima": False})
    result = solve(counterexample, ObopVariant(), cfg)
    assert len(result.optima) == 1
    assert round_2dp(result.objective) == "26.26"


def test_optima_cap(counterexample, search_cfg):
    assert len(enumerate_optima(counterexample, ObopVariant(), search_cfg.model_copy(update={"optima_cap": 1}))) == 1


def test_uniform_matrix_has_every_order_optimal():
    result = solve(PairOrderMatrix.uniform(3), FixedBucketsVariant(p=1))
    assert result.objective == 0
    assert texts(result) == ["1 2 3"]
    assert len(enumerate_optima(PairOrderMatrix.uniform(3), ObopVariant())) == 1


def test_ties_are_listed_canonically():
    matrix = PairOrderMatrix.from_rows([
        ["1/2", 1, 1],
        [0, "1/2", "1/2"],
        [0, "1/2", "1/2"],
    ])
    result = solve(matrix, ObopVariant())
    assert texts(result) == ["1 | 2 3"]


def test_node_limit_reports_incumbent_and_bound(eight_items):
    result = solve(eight_items, ObopVariant(), SolveConfig(strategy="search", node_limit=1))
    assert result.status == SolveStatus.LIMIT
    assert result.objective is None
    assert result.incumbent is not None
    assert result.bound <= result.incumbent
    assert result.gap is not None and result.gap >= 0
    report = result.report()
    assert report["status"] == "Limit"
    assert report["gap_convention"].startswith("assumed")


def test_hints_seed_the_incumbent(eight_items):
    cfg = SolveConfig(strategy="search", node_limit=1)
    result = solve(eight_items, ObopVariant(), cfg, hints=[BucketOrder.parse(OPTIMUM)])
    assert round_2dp(result.incumbent) == "10.78"


def test_hints_the_variant_rejects_are_ignored(eight_items):
    cfg = SolveConfig(strategy="search", node_limit=1)
    result = solve(eight_items, FixedBucketsVariant(p=2), cfg, hints=[BucketOrder.parse(OPTIMUM)])
    assert all(order.bucket_count == 2 for order in result.optima)


def test_trace_is_written(tmp_path, four_items):
    path = tmp_path / "trace.jsonl"
    solve(four_items, ObopVariant(), SolveConfig(strategy="search", trace_path=path))
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines
    assert any('"incumbent"' in line for line in lines)


def test_auto_strategy_uses_enumeration_for_small_inputs(four_items):
    assert solve(four_items, ObopVariant()).strategy == "brute"
    assert solve(four_items, ObopVariant(), SolveConfig(strategy="search")).strategy == "pairs"


def test_strategy_choice():
    assert strategy_for(ObopVariant(), 8) == "pairs"
    assert strategy_for(TcuVariant(k=3), 8) == "tail"
    assert strategy_for(TcuVariant(k=8), 8) == "pairs"
    assert strategy_for(PrescribedSizesVariant(sizes=(4, 4)), 8) == "buckets"


def test_enumeration_refuses_large_inputs(counterexample):
    with pytest.raises(EnumerationLimitError):
        brute_force_solve(counterexample, ObopVariant(), SolveConfig(enumeration_threshold=9))


def test_bucket_count_range():
    assert list(bucket_count_range(ObopVariant(), 5)) == [1, 2, 3, 4, 5]
    assert list(bucket_count_range(FixedBucketsVariant(p=3), 5)) == [3]
    assert list(bucket_count_range(PrescribedSizesVariant(sizes=(2, 3)), 5)) == [2]


@pytest.mark.parametrize(
    "variant",
    [
        ObopVariant(),
        FixedBucketsVariant(p=2),
        FixedBucketsVariant(p=4),
        EqualSizesVariant(p=2, q=2),
        PrescribedSizesVariant(sizes=(1, 3)),
        TcuVariant(k=2),
        FairVariant(fairness=parse_groups("1,2;3,4", 4)),
    ],
    ids=lambda variant: variant.label,
)
def test_search_agrees_with_enumeration(four_items, oracle_cfg, variant):
    expected = brute_force_solve(four_items, variant, oracle_cfg)
    found = solve(four_items, variant, SolveConfig(strategy="search"))
    assert found.status == expected.status
    assert found.objective == expected.objective
    assert found.optima == expected.optima


@pytest.mark.parametrize(
    "kind, params",
    [
        ("fixed-p", {"p": 9}),
        ("equal-sizes", {"p": 3}),
        ("prescribed-sizes", {"sizes": "2,2"}),
        ("tcu", {"k": 0}),
        ("obop", {"p": 2}),
        ("fair", {}),
        ("median", {}),
    ],
)
def test_invalid_variants(kind, params):
    with pytest.raises(VariantError):
        make_variant(kind, 8, **params)


def test_variant_documents():
    variant = parse_variant('{"kind": "prescribed-sizes", "sizes": [2, 3, 1, 2]}')
    assert variant == PrescribedSizesVariant(sizes=(2, 3, 1, 2))
    assert make_variant("equal-sizes", 8, p=4) == EqualSizesVariant(p=4, q=2)
    assert make_variant("fair", 8, groups="mod3").fairness.groups == ((1, 4, 7), (2, 5, 8), (3, 6))
