"""Exhaustive agreement checks on small random instances."""
import itertools
import random
from fractions import Fraction

import pytest

from weakrank.core.errors import IncompatibleSolutionError
from weakrank.formulations import (
    CompiledModel,
    build_base_model,
    build_fair_model,
    build_variant_model,
    encode_solution,
)
from weakrank.formulations.names import a, b, x
from weakrank.models.enumeration import enumerate_weak_orders, ordered_bell
from weakrank.models.matrix import PairOrderMatrix, distance, utopian
from weakrank.schemas.solve import SolveConfig, SolveStatus
from weakrank.schemas.variant import (
    EqualSizesVariant,
    FairnessSpec,
    FairVariant,
    FixedBucketsVariant,
    PrescribedSizesVariant,
    make_variant,
)
from weakrank.solver.engine import solve
from weakrank.solver.oracle import brute_force_solve

pytestmark = pytest.mark.slow

SEARCH = SolveConfig(strategy="search", time_limit=None, node_limit=None)
ORACLE = SolveConfig(strategy="brute", enumeration_threshold=10)


def variants_for(n):
    yield make_variant("obop", n)
    yield make_variant("fixed-p", n, p=2)
    yield make_variant("fixed-p", n, p=n - 1)
    if n % 2 == 0:
        yield make_variant("equal-sizes", n, p=2)
    yield make_variant("prescribed-sizes", n, sizes=(1, n - 1))
    yield make_variant("tcu", n, k=n // 2)
    yield make_variant("fair", n, groups="mod3")


@pytest.mark.parametrize("n, count", [(3, 8), (4, 8), (5, 8), (6, 8), (7, 2)])
def test_search_matches_enumeration_on_random_matrices(n, count):
    rng = random.Random(1000 + n)
    for _ in range(count):
        matrix = PairOrderMatrix.sample(n, rng)
        bound = utopian(matrix).bound
        for variant in variants_for(n):
            expected = brute_force_solve(matrix, variant, ORACLE)
            found = solve(matrix, variant, SEARCH)
            assert found.status == expected.status, variant.label
            assert found.objective == expected.objective, variant.label
            assert set(found.optima) == set(expected.optima), variant.label
            if found.status == SolveStatus.OPTIMAL:
                assert bound <= found.objective


def _option_sets(variant):
    if isinstance(variant, (FixedBucketsVariant, EqualSizesVariant)):
        for options in ({}, {"add_tie_rep": True}, {"substitute_tie_rep": True}):
            yield "representative", options
    if isinstance(variant, (FixedBucketsVariant, EqualSizesVariant, PrescribedSizesVariant)):
        for comparability, transitivity, relax in itertools.product((False, True), repeat=3):
            yield "assignment", {"add_comparability": comparability, "add_transitivity": transitivity, "relax_x": relax}
    else:
        yield "assignment", {}


GRID = [
    (3, make_variant("obop", 3)),
    (3, make_variant("fixed-p", 3, p=1)),
    (3, make_variant("fixed-p", 3, p=2)),
    (3, make_variant("fixed-p", 3, p=3)),
    (3, make_variant("prescribed-sizes", 3, sizes=(2, 1))),
    (3, make_variant("tcu", 3, k=1)),
    (3, make_variant("tcu", 3, k=2)),
    (3, make_variant("fair", 3, groups="mod3")),
    (4, make_variant("obop", 4)),
    (4, make_variant("fixed-p", 4, p=2)),
    (4, make_variant("equal-sizes", 4, p=2)),
    (4, make_variant("prescribed-sizes", 4, sizes=(2, 1, 1))),
    (4, make_variant("tcu", 4, k=2)),
    (4, make_variant("fair", 4, groups="1,2;3,4", max_buckets=3)),
    (5, make_variant("fixed-p", 5, p=3)),
    (5, make_variant("prescribed-sizes", 5, sizes=(2, 3))),
    (5, make_variant("tcu", 5, k=3)),
    (5, make_variant("fair", 5, groups="mod3")),
    (6, make_variant("obop", 6)),
    (6, make_variant("fixed-p", 6, p=3)),
    (6, make_variant("equal-sizes", 6, p=3)),
]


@pytest.mark.parametrize("n, variant", GRID, ids=lambda value: getattr(value, "label", str(value)))
def test_models_admit_exactly_the_orders_of_their_variant(n, variant):
    matrix = PairOrderMatrix.sample(n, random.Random(n))
    orders = list(enumerate_weak_orders(n))
    for formulation, options in _option_sets(variant):
        model = build_variant_model(matrix, variant, formulation, **options)
        compiled = CompiledModel(model)
        for order in orders:
            try:
                values = encode_solution(order, model)
            except IncompatibleSolutionError:
                assert not variant.admits(order), (model.name, options, order.to_text())
                continue
            verdict = compiled.check(values)
            assert verdict.feasible == variant.admits(order), (model.name, options, order.to_text())
            if not verdict.feasible:
                continue
            assert verdict.objective == distance(order, matrix)
            if formulation == "representative":
                for r, s in itertools.combinations(range(n), 2):
                    assert values[b(r, s)] + values[a(s)] <= values[x(r, s)] + values[x(s, r)]


def test_base_model_has_one_point_per_weak_order_of_four_items():
    compiled = CompiledModel(build_base_model(4))
    feasible = sum(
        compiled.check(dict(zip(compiled.names, map(Fraction, values)))).feasible
        for values in itertools.product((0, 1), repeat=len(compiled.names))
    )
    assert feasible == ordered_bell(4) == 75


SHARES = [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(1)]


def _random_spec(rng, n):
    items = list(range(1, n + 1))
    rng.shuffle(items)
    cut = rng.randint(1, n - 1)
    groups = (tuple(sorted(items[:cut])), tuple(sorted(items[cut:])))
    lower, upper = [], []
    for _ in groups:
        low, high = sorted(rng.sample(SHARES, 2))
        lower.append({"*": low, str(rng.randint(1, n)): Fraction(0)})
        upper.append({"*": high})
    return FairnessSpec(groups=groups, lower=tuple(lower), upper=tuple(upper))


def test_linear_share_rows_match_floor_and_ceiling_checks():
    rng = random.Random(14)
    matrix = PairOrderMatrix.uniform(4)
    orders = list(enumerate_weak_orders(4))
    pairs = 0
    for _ in range(140):
        spec = _random_spec(rng, 4)
        compiled = CompiledModel(build_fair_model(matrix, spec))
        variant = FairVariant(fairness=spec)
        for order in orders:
            assert compiled.check(encode_solution(order, compiled.model)).feasible == variant.admits(order)
            pairs += 1
    assert pairs >= 10_000


def test_large_instance_stops_at_the_node_limit():
    matrix = PairOrderMatrix.sample(100, random.Random(100))
    result = solve(matrix, make_variant("obop", 100), SolveConfig(strategy="search", node_limit=500))
    assert result.status == SolveStatus.LIMIT
    assert result.incumbent is not None
    assert result.bound <= result.incumbent
    assert result.optima[0].n == 100
