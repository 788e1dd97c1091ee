# weakrank/schemas/variant.py
import math
from fractions import Fraction
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator

from weakrank.core.errors import VariantError
from weakrank.models.order import BucketOrder
from weakrank.models.rational import Rational

ShareMap = dict[str, Rational]
CountMap = dict[str, int]

ALL_PREFIXES = "*"


def _lookup(table: tuple[dict, ...], group: int, index: int, default):
    if not table:
        return default
    row = table[group]
    return row.get(str(index), row.get(ALL_PREFIXES, default))


def _check_keys(table: tuple[dict, ...]) -> None:
    for row in table:
        for key in row:
            if key != ALL_PREFIXES and not (key.isdigit() and int(key) >= 1):
                raise ValueError(f"prefix key must be '*' or a positive integer, got {key!r}")


class FairnessSpec(BaseModel):
    """Groups (1-based item ids) with share bounds per top-l prefix.

    `lower`/`upper` hold one map per group: `{"*": "1/2"}` applies to every prefix,
    `{"1": "1/2"}` to prefix 1 only; missing prefixes default to 0 and 1.
    `lower_count`/`upper_count` bound the number of group items in a prefix,
    `bucket_lower`/`bucket_upper` in a single bucket.
    """

    model_config = ConfigDict(frozen=True)

    groups: tuple[tuple[int, ...], ...]
    lower: tuple[ShareMap, ...] = ()
    upper: tuple[ShareMap, ...] = ()
    lower_count: tuple[CountMap, ...] = ()
    upper_count: tuple[CountMap, ...] = ()
    bucket_lower: tuple[CountMap, ...] = ()
    bucket_upper: tuple[CountMap, ...] = ()

    @field_validator("lower", "upper")
    @classmethod
    def _shares_in_unit_interval(cls, table):
        _check_keys(table)
        for row in table:
            for key, value in row.items():
                if not 0 <= value <= 1:
                    raise ValueError(f"share bound {value} for prefix {key} outside [0,1]")
        return table

    @field_validator("lower_count", "upper_count", "bucket_lower", "bucket_upper")
    @classmethod
    def _counts_non_negative(cls, table):
        _check_keys(table)
        if any(value < 0 for row in table for value in row.values()):
            raise ValueError("count bounds must be non-negative")
        return table

    @model_validator(mode="after")
    def _check_shape(self):
        g = len(self.groups)
        if g == 0:
            raise VariantError("fairness spec needs at least one group")
        seen: set[int] = set()
        for group in self.groups:
            if not group:
                raise VariantError("fairness groups must be non-empty")
            if seen & set(group) or len(set(group)) != len(group):
                raise VariantError("fairness groups must be disjoint")
            seen |= set(group)
        for name in ("lower", "upper", "lower_count", "upper_count", "bucket_lower", "bucket_upper"):
            table = getattr(self, name)
            if table and len(table) != g:
                raise VariantError(f"'{name}' has {len(table)} entries for {g} groups")
        if self.lower and self.upper:
            for i in range(g):
                keys = set(self.lower[i]) | set(self.upper[i]) | {ALL_PREFIXES}
                for key in keys:
                    index = 0 if key == ALL_PREFIXES else int(key)
                    if self.lower_bound(i, index) > self.upper_bound(i, index):
                        raise VariantError(f"group {i + 1}: lower share exceeds upper share at prefix {key}")
        return self

    @classmethod
    def proportional(cls, groups, n: int) -> "FairnessSpec":
        """Both shares equal to the group's share of the n items, at every prefix."""
        groups = tuple(tuple(group) for group in groups)
        shares = tuple({ALL_PREFIXES: Fraction(len(group), n)} for group in groups)
        return cls(groups=groups, lower=shares, upper=shares)

    @classmethod
    def preset(cls, name: str, n: int) -> "FairnessSpec":
        if name == "split":
            cut = math.floor(Fraction(4, 5) * n)
            groups = [range(1, cut + 1), range(cut + 1, n + 1)]
        elif name == "mod3":
            groups = [[r for r in range(1, n + 1) if r % 3 == residue] for residue in (1, 2, 0)]
        else:
            raise VariantError(f"unknown group preset {name!r} (expected 'split' or 'mod3')")
        return cls.proportional([list(g) for g in groups if len(g)], n)

    @property
    def group_count(self) -> int:
        return len(self.groups)

    def check_partition(self, n: int) -> None:
        covered = sorted(item for group in self.groups for item in group)
        if covered != list(range(1, n + 1)):
            raise VariantError(f"fairness groups must partition items 1..{n}")

    def masks(self) -> list[int]:
        """0-based item bitmask per group."""
        return [sum(1 << (item - 1) for item in group) for group in self.groups]

    def lower_bound(self, group: int, prefix: int) -> Fraction:
        return _lookup(self.lower, group, prefix, Fraction(0))

    def upper_bound(self, group: int, prefix: int) -> Fraction:
        return _lookup(self.upper, group, prefix, Fraction(1))

    def prefix_count_bounds(self, group: int, prefix: int) -> tuple[int, Optional[int]]:
        return _lookup(self.lower_count, group, prefix, 0), _lookup(self.upper_count, group, prefix, None)

    def bucket_count_bounds(self, group: int, bucket: int) -> tuple[int, Optional[int]]:
        return _lookup(self.bucket_lower, group, bucket, 0), _lookup(self.bucket_upper, group, bucket, None)

    def share_ok(self, group: int, prefix: int, total: int, count: int) -> bool:
        """floor(lower * total) <= count <= ceil(upper * total)."""
        lower, upper = self.lower_bound(group, prefix), self.upper_bound(group, prefix)
        return math.floor(lower * total) <= count <= math.ceil(upper * total)

    def counts_ok(self, group: int, prefix: int, count: int) -> bool:
        low, high = self.prefix_count_bounds(group, prefix)
        return count >= low and (high is None or count <= high)


class _Variant(BaseModel):
    model_config = ConfigDict(frozen=True)

    def validate_for(self, n: int) -> None:
        raise NotImplementedError

    def admits(self, order: BucketOrder) -> bool:
        raise NotImplementedError

    @property
    def label(self) -> str:
        raise NotImplementedError


class ObopVariant(_Variant):
    kind: Literal["obop"] = "obop"

    def validate_for(self, n: int) -> None:
        if n < 1:
            raise VariantError("need at least one item")

    def admits(self, order: BucketOrder) -> bool:
        return True

    @property
    def label(self) -> str:
        return "obop"


class FixedBucketsVariant(_Variant):
    kind: Literal["fixed-p"] = "fixed-p"
    p: int

    def validate_for(self, n: int) -> None:
        if not 1 <= self.p <= n:
            raise VariantError(f"bucket count p={self.p} outside 1..{n}")

    def admits(self, order: BucketOrder) -> bool:
        return order.bucket_count == self.p

    @property
    def label(self) -> str:
        return f"fixed-p(p={self.p})"


class EqualSizesVariant(_Variant):
    kind: Literal["equal-sizes"] = "equal-sizes"
    p: int
    q: int

    def validate_for(self, n: int) -> None:
        if self.p < 1 or self.q < 1 or self.p * self.q != n:
            raise VariantError(f"equal sizes need p*q = n, got {self.p}*{self.q} != {n}")

    def admits(self, order: BucketOrder) -> bool:
        return order.bucket_count == self.p and all(size == self.q for size in order.sizes)

    @property
    def sizes(self) -> tuple[int, ...]:
        return (self.q,) * self.p

    @property
    def label(self) -> str:
        return f"equal-sizes(p={self.p},q={self.q})"


class PrescribedSizesVariant(_Variant):
    kind: Literal["prescribed-sizes"] = "prescribed-sizes"
    sizes: tuple[int, ...]

    def validate_for(self, n: int) -> None:
        if not self.sizes or any(size < 1 for size in self.sizes) or sum(self.sizes) != n:
            raise VariantError(f"prescribed sizes {list(self.sizes)} must be positive and sum to {n}")

    def admits(self, order: BucketOrder) -> bool:
        return order.sizes == self.sizes

    @property
    def p(self) -> int:
        return len(self.sizes)

    @property
    def label(self) -> str:
        return "prescribed-sizes(" + ",".join(map(str, self.sizes)) + ")"


class TailBounds(BaseModel):
    """Bounds on how many items of each group end up in the collapsed tail."""

    model_config = ConfigDict(frozen=True)

    groups: tuple[tuple[int, ...], ...]
    lower: tuple[int, ...]
    upper: tuple[int, ...]

    @model_validator(mode="after")
    def _check_lengths(self):
        if not len(self.groups) == len(self.lower) == len(self.upper):
            raise VariantError("tail bounds need one lower and one upper bound per group")
        return self

    def masks(self) -> list[int]:
        return [sum(1 << (item - 1) for item in group) for group in self.groups]

    def admits(self, tail: frozenset[int]) -> bool:
        for group, low, high in zip(self.groups, self.lower, self.upper):
            count = sum(1 for item in group if item - 1 in tail)
            if not low <= count <= high:
                return False
        return True


class TcuVariant(_Variant):
    kind: Literal["tcu"] = "tcu"
    k: int
    tail_bounds: Optional[TailBounds] = None

    def validate_for(self, n: int) -> None:
        if not 1 <= self.k <= n:
            raise VariantError(f"k={self.k} outside 1..{n}")
        if self.tail_bounds:
            for group in self.tail_bounds.groups:
                if any(not 1 <= item <= n for item in group):
                    raise VariantError(f"tail group {list(group)} has items outside 1..{n}")

    def admits(self, order: BucketOrder) -> bool:
        tail = frozenset() if self.k == order.n else order.buckets[-1]
        if self.k < order.n and len(tail) != order.n - self.k:
            return False
        return self.tail_bounds is None or self.tail_bounds.admits(tail)

    @property
    def label(self) -> str:
        return f"tcu(k={self.k})"


class FairVariant(_Variant):
    kind: Literal["fair"] = "fair"
    fairness: FairnessSpec
    max_buckets: Optional[int] = None
    min_buckets: Optional[int] = None
    p: Optional[int] = None
    capacities: Optional[tuple[int, ...]] = None

    def fixed_p(self) -> Optional[int]:
        if self.p is not None:
            return self.p
        return len(self.capacities) if self.capacities else None

    def slots(self, n: int) -> int:
        """Bucket positions the prefix index ranges over."""
        return self.fixed_p() or self.max_buckets or n

    def validate_for(self, n: int) -> None:
        self.fairness.check_partition(n)
        p = self.fixed_p()
        if p is not None and not 1 <= p <= n:
            raise VariantError(f"bucket count p={p} outside 1..{n}")
        if self.capacities is not None:
            if self.p is not None and len(self.capacities) != self.p:
                raise VariantError(f"{len(self.capacities)} capacities for p={self.p}")
            if any(q < 1 for q in self.capacities) or sum(self.capacities) != n:
                raise VariantError(f"capacities {list(self.capacities)} must be positive and sum to {n}")
        if self.max_buckets is not None:
            if not 1 <= self.max_buckets <= n:
                raise VariantError(f"max_buckets={self.max_buckets} outside 1..{n}")
            if p is not None and p > self.max_buckets:
                raise VariantError(f"p={p} exceeds max_buckets={self.max_buckets}")
        if self.min_buckets is not None and not 1 <= self.min_buckets <= self.slots(n):
            raise VariantError(f"min_buckets={self.min_buckets} outside 1..{self.slots(n)}")

    def admits(self, order: BucketOrder) -> bool:
        n, b = order.n, order.bucket_count
        slots = self.slots(n)
        p = self.fixed_p()
        if b > slots or (p is not None and b != p) or b < (self.min_buckets or 1):
            return False
        if self.capacities is not None and order.sizes != self.capacities:
            return False
        spec = self.fairness
        masks = [frozenset(item - 1 for item in group) for group in spec.groups]
        total = 0
        counts = [0] * len(masks)
        for prefix in range(1, slots + 1):
            bucket = order.buckets[prefix - 1] if prefix <= b else frozenset()
            total += len(bucket)
            for i, members in enumerate(masks):
                inside = len(bucket & members)
                counts[i] += inside
                low, high = spec.bucket_count_bounds(i, prefix)
                if inside < low or (high is not None and inside > high):
                    return False
                if not spec.share_ok(i, prefix, total, counts[i]) or not spec.counts_ok(i, prefix, counts[i]):
                    return False
        return True

    @property
    def label(self) -> str:
        extras = []
        if self.fixed_p() is not None:
            extras.append(f"p={self.fixed_p()}")
        if self.max_buckets is not None:
            extras.append(f"max-buckets={self.max_buckets}")
        return "fair(" + ",".join([f"groups={self.fairness.group_count}"] + extras) + ")"


VariantSpec = Annotated[
    Union[ObopVariant, FixedBucketsVariant, EqualSizesVariant, PrescribedSizesVariant, TcuVariant, FairVariant],
    Field(discriminator="kind"),
]

variant_adapter: TypeAdapter = TypeAdapter(VariantSpec)


def parse_variant(document: Union[str, bytes, dict]) -> VariantSpec:
    if isinstance(document, dict):
        return variant_adapter.validate_python(document)
    return variant_adapter.validate_json(document)


def parse_groups(text: str, n: int) -> FairnessSpec:
    """A preset name (`split`, `mod3`) or 1-based groups like `1,3,4,8;2,5,6,7`,
    with proportional share bounds."""
    text = text.strip()
    if text in ("split", "mod3"):
        return FairnessSpec.preset(text, n)
    try:
        groups = [[int(item) for item in chunk.split(",") if item.strip()] for chunk in text.split(";")]
    except ValueError:
        raise VariantError(f"cannot read groups {text!r}") from None
    return FairnessSpec.proportional(groups, n)


def _int_list(value) -> Optional[tuple[int, ...]]:
    if value is None or isinstance(value, tuple):
        return value
    if isinstance(value, str):
        try:
            return tuple(int(part) for part in value.split(",") if part.strip())
        except ValueError:
            raise VariantError(f"expected comma-separated integers, got {value!r}") from None
    return tuple(value)


def make_variant(kind: str, n: int, **params) -> VariantSpec:
    """Variant from flat parameters, rejecting ones the kind does not take."""
    allowed = {
        "obop": set(),
        "fixed-p": {"p"},
        "equal-sizes": {"p", "q"},
        "prescribed-sizes": {"sizes"},
        "tcu": {"k"},
        "fair": {"groups", "fairness", "p", "max_buckets", "min_buckets", "capacities"},
    }
    if kind not in allowed:
        raise VariantError(f"unknown variant {kind!r} (expected one of {', '.join(allowed)})")
    given = {key: value for key, value in params.items() if value is not None}
    extra = set(given) - allowed[kind]
    if extra:
        raise VariantError(f"variant {kind!r} does not take {', '.join(sorted(extra))}")

    if kind == "equal-sizes" and "q" not in given and "p" in given:
        if n % given["p"]:
            raise VariantError(f"equal sizes need p to divide n={n}")
        given["q"] = n // given["p"]
    for key in ("sizes", "capacities"):
        if key in given:
            given[key] = _int_list(given[key])
    if kind == "fair":
        groups = given.pop("groups", None)
        if "fairness" not in given:
            if groups is None:
                raise VariantError("the fair variant needs groups")
            given["fairness"] = groups if isinstance(groups, FairnessSpec) else parse_groups(groups, n)
    missing = {"fixed-p": ["p"], "equal-sizes": ["p"], "prescribed-sizes": ["sizes"], "tcu": ["k"]}.get(kind, [])
    for key in missing:
        if key not in given:
            raise VariantError(f"variant {kind!r} needs {key}")

    variant = variant_adapter.validate_python({"kind": kind, **given})
    variant.validate_for(n)
    return variant
