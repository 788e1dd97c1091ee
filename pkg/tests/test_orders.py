from fractions import Fraction

import pytest

from weakrank.core.errors import DimensionError, EnumerationLimitError, InputError
from weakrank.models.enumeration import (
    check_enumeration_cap,
    consistent_linear_extensions,
    enumerate_weak_orders,
    ordered_bell,
)
from weakrank.models.matrix import PairOrderMatrix, distance, utopian
from weakrank.models.order import BucketOrder, bucket_matrix, bucket_order_from_matrix
from weakrank.models.rational import format_decimal, format_fraction, round_2dp, to_fraction

HALF = Fraction(1, 2)


def test_parse_and_print_round_trip():
    order = BucketOrder.parse("4 | 1 3 | 2 5")
    assert order.bucket_count == 3
    assert order.sizes == (1, 2, 2)
    assert order.position == (1, 2, 1, 0, 2)
    assert order.to_text() == "4 | 1 3 | 2 5"


def test_double_bar_separates_the_tail():
    assert BucketOrder.parse("1 3 | 4 7 || 2 5 6 8") == BucketOrder.parse("1 3 | 4 7 | 2 5 6 8")


def test_labels_resolve_items():
    order = BucketOrder.parse("b | a c", labels=["a", "b", "c"])
    assert order.buckets == (frozenset({1}), frozenset({0, 2}))
    assert order.to_text(["a", "b", "c"]) == "b | a c"


@pytest.mark.parametrize("text", ["1 | 1 2", "1 | | 2", "1 3", "0 | 1", "1 | x"])
def test_malformed_orders_are_rejected(text):
    with pytest.raises(InputError):
        BucketOrder.parse(text)


def test_bucket_matrix_entries():
    b = bucket_matrix(BucketOrder.parse("1 3 | 2"))
    assert b[0, 2] == HALF
    assert b[0, 1] == 1
    assert b[1, 0] == 0
    assert b[2, 1] == 1
    assert b[1, 1] == HALF


def test_bucket_matrix_decodes_back():
    order = BucketOrder.parse("2 | 1 4 | 3")
    assert bucket_order_from_matrix(bucket_matrix(order).entries) == order


def test_intransitive_matrix_encodes_no_order():
    cycle = [
        [HALF, Fraction(1), Fraction(0)],
        [Fraction(0), HALF, Fraction(1)],
        [Fraction(1), Fraction(0), HALF],
    ]
    assert bucket_order_from_matrix(cycle) is None


@pytest.mark.parametrize("n, count", [(0, 1), (1, 1), (2, 3), (3, 13), (4, 75), (8, 545835)])
def test_ordered_bell_numbers(n, count):
    assert ordered_bell(n) == count


def test_enumeration_yields_each_weak_order_once():
    orders = list(enumerate_weak_orders(4))
    assert len(orders) == 75
    assert len(set(orders)) == 75
    assert [order.bucket_count for order in orders] == sorted(order.bucket_count for order in orders)


def test_enumeration_cap_is_enforced():
    with pytest.raises(EnumerationLimitError) as info:
        check_enumeration_cap(11)
    assert info.value.count == ordered_bell(11)


def test_linear_extensions_permute_within_buckets():
    order = BucketOrder.parse("1 3 | 2 4 7 | 8 | 5 6")
    extensions = list(consistent_linear_extensions(order))
    assert len(extensions) == 2 * 6 * 1 * 2
    assert (0, 2, 1, 3, 6, 7, 4, 5) in extensions
    assert all(set(ext[:2]) == {0, 2} for ext in extensions)


def test_distance_of_example_optimum(eight_items):
    value = distance(BucketOrder.parse("1 3 | 2 4 7 | 8 | 5 6"), eight_items)
    assert round_2dp(value) == "10.78"


def test_distance_needs_matching_size(eight_items):
    with pytest.raises(DimensionError):
        distance(BucketOrder.parse("1 | 2"), eight_items)


def test_utopian_bound_of_example(eight_items):
    result = utopian(eight_items)
    assert round_2dp(result.bound) == "7.22"
    assert result.bound <= distance(BucketOrder.parse("1 3 | 2 4 7 | 8 | 5 6"), eight_items)


def test_utopian_of_uniform_matrix_is_exact():
    result = utopian(PairOrderMatrix.uniform(4))
    assert result.bound == 0
    assert result.is_transitive
    assert result.order == BucketOrder.single_bucket(4)


def test_sampled_matrices_are_complementary(rng):
    matrix = PairOrderMatrix.sample(5, rng)
    for r in range(5):
        for s in range(5):
            assert matrix[r, s] + matrix[s, r] == 1


def test_rationals_read_decimals_exactly():
    assert to_fraction("0.52") == Fraction(13, 25)
    assert to_fraction(0.52) == Fraction(13, 25)
    assert to_fraction("3/8") == Fraction(3, 8)
    with pytest.raises(ValueError):
        to_fraction("half")


def test_rational_rendering():
    assert format_fraction(Fraction(539, 50)) == "539/50"
    assert format_fraction(Fraction(4)) == "4"
    assert round_2dp(Fraction(1, 8)) == "0.13"
    assert round_2dp(Fraction(-1, 8)) == "-0.13"
    assert format_decimal(Fraction(13, 25)) == "0.52"
    assert format_decimal(Fraction(1, 3), digits=4) == "0.3333"
