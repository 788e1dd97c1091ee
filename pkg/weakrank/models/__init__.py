# weakrank/models/__init__.py
from .rational import Rational, format_fraction, round_2dp, to_fraction
from .order import BucketMatrix, BucketOrder, bucket_matrix, bucket_order_from_matrix
from .matrix import PairOrderMatrix, UtopianResult, distance, utopian
from .enumeration import consistent_linear_extensions, enumerate_weak_orders, ordered_bell

__all__ = [
    "Rational", "format_fraction", "round_2dp", "to_fraction",
    "BucketMatrix", "BucketOrder", "bucket_matrix", "bucket_order_from_matrix",
    "PairOrderMatrix", "UtopianResult", "distance", "utopian",
    "consistent_linear_extensions", "enumerate_weak_orders", "ordered_bell",
]
