import itertools
import math
from fractions import Fraction

import pytest

from weakrank.core.errors import IncompatibleSolutionError, VariantError
from weakrank.formulations import (
    VarKind,
    add_exclusion_cut,
    build_base_model,
    build_fair_model,
    build_obop_model,
    build_p_assignment_model,
    build_p_representative_model,
    build_tcu_model,
    build_variant_model,
    check_solution,
    encode_solution,
    export_lp,
    fix_consistent_permutation,
    parse_lp,
    validate_fairness_params,
)
from weakrank.formulations.fairness import lower_share_holds, upper_share_holds
from weakrank.models.matrix import PairOrderMatrix, distance
from weakrank.models.order import BucketOrder
from weakrank.models.rational import round_2dp
from weakrank.schemas.objective import KrpObjective, LopObjective
from weakrank.schemas.profile import PreferenceCounts
from weakrank.schemas.variant import FairnessSpec, FixedBucketsVariant, PrescribedSizesVariant, parse_groups

OPTIMUM = "1 3 | 2 4 7 | 8 | 5 6"
FAIR_GROUPS = "1,3,4,8;2,5,6,7"


def check(model, text):
    return check_solution(model, encode_solution(BucketOrder.parse(text), model))


def test_obop_model_sizes_for_three_items():
    model = build_obop_model(PairOrderMatrix.uniform(3))
    kinds = [variable.kind for variable in model.variables]
    assert kinds.count(VarKind.BINARY) == 6
    assert kinds.count(VarKind.CONTINUOUS) == 3
    assert len(model.rows_with_prefix("comp")) == 3
    assert len(model.rows_with_prefix("trans")) == 6
    assert len(model.rows_with_prefix("devlo")) + len(model.rows_with_prefix("devhi")) == 6
    model.validate_structure()


def test_obop_model_sizes_for_eight_items(eight_items):
    model = build_obop_model(eight_items)
    names = model.variable_names()
    assert sum(name.startswith("x_") for name in names) == 56
    assert sum(name.startswith("d_") for name in names) == 28
    assert len(model.rows_with_prefix("trans")) == 336


def test_base_model_counts_every_weak_order_of_three_items():
    model = build_base_model(3)
    names = model.variable_names()
    feasible = 0
    for values in itertools.product((0, 1), repeat=len(names)):
        if check_solution(model, dict(zip(names, map(Fraction, values)))).feasible:
            feasible += 1
    assert feasible == 13


def test_base_model_without_ties():
    model = build_base_model(3, no_ties=True)
    assert check(model, "2 | 1 | 3").feasible
    assert not check(model, "1 2 | 3").feasible


def test_encoding_of_a_tie():
    model = build_base_model(3)
    values = encode_solution(BucketOrder.parse("1 3 | 2"), model)
    assert values["x_1_3"] == values["x_3_1"] == 1
    assert values["x_1_2"] == 1 and values["x_2_1"] == 0
    assert values["x_3_2"] == 1 and values["x_2_3"] == 0


def test_example_optimum_checks_out(eight_items):
    verdict = check(build_obop_model(eight_items), OPTIMUM)
    assert verdict.feasible
    assert verdict.violated == ()
    assert round_2dp(verdict.objective) == "10.78"
    assert verdict.objective == distance(BucketOrder.parse(OPTIMUM), eight_items)


def test_lop_and_krp_objectives():
    counts = PreferenceCounts(counts=((0, 3, 2), (1, 0, 4), (2, 0, 0)))
    lop = build_base_model(3, LopObjective(counts=counts))
    assert check(lop, "1 | 2 | 3").objective == -(3 + 2 + 4)

    krp = build_base_model(3, KrpObjective(coefficients=((0, 1, 1), (0, 0, 1), (0, 0, 0))))
    assert check(krp, "1 | 2 | 3").objective == -3
    assert check(krp, "1 2 3").objective == -3


def test_assignment_model_encodes_bucket_positions(eight_items):
    model = build_p_assignment_model(eight_items, 2)
    values = encode_solution(BucketOrder.parse("1 2 3 4 7 | 5 6 8"), model)
    assert values["y_1_1"] == 1
    assert values["y_5_2"] == 1
    assert values["y_5_1"] == 0
    verdict = check_solution(model, values)
    assert verdict.feasible
    assert round_2dp(verdict.objective) == "12.14"


def test_assignment_model_rejects_other_bucket_counts(eight_items):
    model = build_p_assignment_model(eight_items, 2)
    with pytest.raises(IncompatibleSolutionError):
        encode_solution(BucketOrder.parse(OPTIMUM), model)


def test_assignment_model_switches(eight_items):
    plain = build_p_assignment_model(eight_items, 3)
    assert plain.rows_with_prefix("comp") == []
    both = build_p_assignment_model(eight_items, 3, add_base_valid_inequalities=True)
    assert len(both.rows_with_prefix("comp")) == 28
    assert len(both.rows_with_prefix("trans")) == 336
    relaxed = build_p_assignment_model(eight_items, 3, relax_x=True)
    assert all(v.kind is VarKind.CONTINUOUS for v in relaxed.variables if v.name.startswith("x_"))
    assert check(relaxed, "1 3 | 2 4 7 | 5 6 8").feasible


def test_sized_assignment_models(eight_items):
    equal = build_variant_model(eight_items, PrescribedSizesVariant(sizes=(4, 4)))
    assert check(equal, "1 3 4 7 | 2 5 6 8").feasible
    assert not check(equal, "1 3 | 2 4 5 6 7 8").feasible
    assert round_2dp(check(equal, "1 3 4 7 | 2 5 6 8").objective) == "13.14"
    with pytest.raises(VariantError):
        build_p_assignment_model(eight_items, 2, equal_size=3)


def test_representative_encoding():
    model = build_p_representative_model(PairOrderMatrix.uniform(3), 2)
    values = encode_solution(BucketOrder.parse("1 3 | 2"), model)
    assert values["a_3"] == values["a_2"] == 1
    assert values["a_1"] == 0
    assert values["b_1_3"] == 1
    assert values["b_1_2"] == values["b_2_3"] == 0
    verdict = check_solution(model, values)
    assert verdict.feasible
    assert verdict.objective == 2


def test_representative_tie_rep_options(eight_items):
    plain = build_p_representative_model(eight_items, 4)
    added = build_p_representative_model(eight_items, 4, add_tie_rep=True)
    substituted = build_p_representative_model(eight_items, 4, substitute_tie_rep=True)
    assert plain.rows_with_prefix("tierep") == []
    assert len(added.rows_with_prefix("tierep")) == 28
    assert len(added.rows_with_prefix("tiebefore")) == 28
    assert substituted.rows_with_prefix("tiebefore") == []
    for model in (plain, added, substituted):
        verdict = check(model, OPTIMUM)
        assert verdict.feasible
        assert round_2dp(verdict.objective) == "10.78"
    with pytest.raises(VariantError):
        build_p_representative_model(eight_items, 4, add_tie_rep=True, substitute_tie_rep=True)


def test_representative_equal_sizes():
    model = build_p_representative_model(PairOrderMatrix.uniform(4), 2, equal_size=2)
    assert check(model, "1 2 | 3 4").feasible
    assert not check(model, "1 | 2 3 4").feasible


def test_representative_covers_fixed_and_equal_only(eight_items):
    with pytest.raises(VariantError):
        build_variant_model(eight_items, PrescribedSizesVariant(sizes=(2, 6)), "representative")


def test_tcu_model(eight_items):
    model = build_tcu_model(eight_items, 4)
    verdict = check(model, "1 3 | 4 7 || 2 5 6 8")
    assert verdict.feasible
    assert round_2dp(verdict.objective) == "12.66"
    wrong_tail = check(model, "1 3 | 4 7 2 | 5 6 8")
    assert "tailsize" in wrong_tail.violated


def test_fair_model_rejects_the_unfair_optimum(eight_items):
    spec = parse_groups(FAIR_GROUPS, 8)
    model = build_fair_model(eight_items, spec)
    verdict = check(model, OPTIMUM)
    assert not verdict.feasible
    assert "fairlo_2_1" in verdict.violated
    assert "fairhi_1_1" in verdict.violated

    fair = check(model, "3 | 1 2 4 7 | 5 8 | 6")
    assert fair.feasible
    assert round_2dp(fair.objective) == "11.86"


def test_fair_share_rows_use_their_own_bound():
    spec = FairnessSpec(groups=((1, 2), (3, 4)), lower=({"*": "1/4"}, {}), upper=({"*": "3/4"}, {}))
    model = build_fair_model(PairOrderMatrix.uniform(4), spec)
    (low,) = model.rows_with_prefix("fairlo_1_1")
    (high,) = model.rows_with_prefix("fairhi_1_1")
    assert dict(low.terms) == {"y_1_1": -3, "y_2_1": -3, "y_3_1": 1, "y_4_1": 1}
    assert dict(high.terms) == {"y_1_1": 1, "y_2_1": 1, "y_3_1": -3, "y_4_1": -3}
    assert low.rhs == high.rhs == 3
    assert model.rows_with_prefix("fairlo_2") == model.rows_with_prefix("fairhi_2") == []


def test_fair_model_with_prefix_specific_shares():
    half = {"1": "1/2", "2": "1/2"}
    spec = FairnessSpec(groups=((1, 2, 3), (4, 5, 6)), lower=(half, {}), upper=(half, {}))
    model = build_fair_model(PairOrderMatrix.uniform(6), spec)
    assert check(model, "1 4 | 2 | 3 5 6").feasible
    assert not check(model, "1 2 3 | 4 5 6").feasible


def test_fair_model_empty_buckets_only_at_the_end():
    spec = FairnessSpec(groups=((1, 2), (3,)))
    model = build_fair_model(PairOrderMatrix.uniform(3), spec, max_buckets=3)
    values = encode_solution(BucketOrder.parse("1 | 2 3"), model)
    assert check_solution(model, values).feasible
    values.update({"y_1_1": Fraction(0), "y_1_2": Fraction(1), "y_2_2": Fraction(0), "y_2_3": Fraction(1),
                   "y_3_2": Fraction(0), "y_3_3": Fraction(1)})
    assert not check_solution(model, values).feasible


def test_exclusion_cut_removes_exactly_that_point(eight_items):
    model = build_obop_model(eight_items)
    values = encode_solution(BucketOrder.parse(OPTIMUM), model)
    cut = add_exclusion_cut(model, values)
    assert check_solution(cut, values).violated == ("cut_1",)
    assert check(cut, "1 3 | 2 4 7 | 8 | 6 | 5").feasible
    twice = add_exclusion_cut(cut, encode_solution(BucketOrder.parse("1 | 2 3 4 5 6 7 8"), cut))
    assert len(twice.rows_with_prefix("cut")) == 2


def test_fixing_a_consistent_permutation():
    model = fix_consistent_permutation(build_obop_model(PairOrderMatrix.uniform(3)), BucketOrder.parse("1 3 | 2"))
    assert check(model, "1 | 3 | 2").feasible
    assert check(model, "3 | 1 | 2").feasible
    assert not check(model, "1 3 | 2").feasible
    assert not check(model, "2 | 1 | 3").feasible


def test_lp_export_and_parse(four_items):
    model = build_p_assignment_model(four_items, 2, add_comparability=True)
    text = export_lp(model)
    assert text.splitlines()[0] == "\\ model: assignment_n4_p2"
    for section in ("Minimize", "Subject To", "Bounds", "Binaries", "End"):
        assert section in text.splitlines()

    parsed = parse_lp(text)
    assert parsed.metadata.formulation == "parsed"
    assert parsed.metadata.n == 4
    assert set(parsed.variable_names()) == set(model.variable_names())
    assert [row.name for row in parsed.constraints] == [row.name for row in model.constraints]

    values = encode_solution(BucketOrder.parse("1 | 2 3 4"), model)
    assert check_solution(parsed, values) == check_solution(model, values)
    with pytest.raises(IncompatibleSolutionError):
        encode_solution(BucketOrder.parse("1 | 2 3 4"), parsed)


def test_lp_export_scales_fractional_rows(eight_items):
    text = export_lp(build_obop_model(eight_items))
    devlo = next(line for line in text.splitlines() if line.startswith(" devlo_1_2:"))
    # c_12 = 0.52: d - x_12/2 + x_21/2 >= -1/50, scaled by 50
    assert devlo == " devlo_1_2: 50 d_1_2 - 25 x_1_2 + 25 x_2_1 >= -1"


def test_lp_export_names_tie_rep_rows(eight_items):
    text = export_lp(build_variant_model(eight_items, FixedBucketsVariant(p=3), "representative", add_tie_rep=True))
    assert any(line.startswith(" tierep_1_2:") for line in text.splitlines())


def test_fairness_diagnostics_flag_impossible_shares():
    spec = FairnessSpec(groups=((1, 2), (3, 4)), lower=({"*": "3/4"}, {"*": "1/2"}))
    diagnostics = validate_fairness_params(spec, 4)
    codes = {diagnostic.code for diagnostic in diagnostics}
    assert {"lower-sum", "lower-share", "lower-cap"} <= codes
    cap = next(diagnostic for diagnostic in diagnostics if diagnostic.code == "lower-cap")
    assert cap.group == 1
    assert cap.cap == 2


def test_upper_cap_counts_the_items_outside_the_group():
    spec = FairnessSpec(groups=((1, 2), (3, 4)), upper=({"*": "1/4"}, {}))
    caps = [diagnostic for diagnostic in validate_fairness_params(spec, 4) if diagnostic.code == "upper-cap"]
    assert [diagnostic.prefix for diagnostic in caps] == [1, 2, 3, 4]
    assert {(diagnostic.group, diagnostic.cap) for diagnostic in caps} == {(1, 2)}


def test_proportional_spec_has_no_diagnostics():
    assert validate_fairness_params(parse_groups(FAIR_GROUPS, 8), 8) == []


@pytest.mark.parametrize("share", [Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(2, 5), Fraction(1)])
def test_integer_share_rows_match_floor_and_ceil(share):
    for total in range(1, 13):
        for count in range(total + 1):
            assert lower_share_holds(share, total, count) == (math.floor(share * total) <= count)
            assert upper_share_holds(share, total, count) == (count <= math.ceil(share * total))
