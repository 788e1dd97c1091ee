# weakrank/formulations/fairness.py
import logging
import math
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict

from weakrank.formulations.model import Constraint, Sense, row
from weakrank.formulations.names import y
from weakrank.schemas.variant import FairnessSpec

logger = logging.getLogger(__name__)


class FairnessDiagnostic(BaseModel):
    model_config = ConfigDict(frozen=True)

    code: str
    message: str
    group: Optional[int] = None  # 1-based
    prefix: Optional[int] = None
    cap: Optional[int] = None


def lower_share_holds(share: Fraction, total: int, count: int) -> bool:
    """floor(share * total) <= count, kept in integers."""
    num, den = share.numerator, share.denominator
    return num * total <= den * count + den - 1


def upper_share_holds(share: Fraction, total: int, count: int) -> bool:
    """count <= ceil(share * total), kept in integers."""
    num, den = share.numerator, share.denominator
    return den * count - (den - 1) <= num * total


def fairness_rows(spec: FairnessSpec, n: int, slots: int) -> list[Constraint]:
    """Share rows over the top-l prefixes; vacuous rows (lower 0, upper 1) are left out."""
    rows = []
    for i, group in enumerate(spec.groups):
        members = {item - 1 for item in group}
        for prefix in range(1, slots + 1):
            positions = range(prefix)
            low_share, high_share = spec.lower_bound(i, prefix), spec.upper_bound(i, prefix)
            if low_share > 0:
                num, den = low_share.numerator, low_share.denominator
                terms = [(y(r, u), num - (den if r in members else 0)) for r in range(n) for u in positions]
                rows.append(row(f"fairlo_{i + 1}_{prefix}", _nonzero(terms), Sense.LE, den - 1))
            if high_share < 1:
                num, den = high_share.numerator, high_share.denominator
                terms = [(y(r, u), (den if r in members else 0) - num) for r in range(n) for u in positions]
                rows.append(row(f"fairhi_{i + 1}_{prefix}", _nonzero(terms), Sense.LE, den - 1))

            low, high = spec.prefix_count_bounds(i, prefix)
            group_terms = [(y(r, u), 1) for r in sorted(members) for u in positions]
            if low > 0:
                rows.append(row(f"prefixlo_{i + 1}_{prefix}", group_terms, Sense.GE, low))
            if high is not None:
                rows.append(row(f"prefixhi_{i + 1}_{prefix}", group_terms, Sense.LE, high))

            low, high = spec.bucket_count_bounds(i, prefix)
            bucket_terms = [(y(r, prefix - 1), 1) for r in sorted(members)]
            if low > 0:
                rows.append(row(f"bucketlo_{i + 1}_{prefix}", bucket_terms, Sense.GE, low))
            if high is not None:
                rows.append(row(f"buckethi_{i + 1}_{prefix}", bucket_terms, Sense.LE, high))
    return rows


def _nonzero(terms):
    return [(name, coef) for name, coef in terms if coef != 0]


def validate_fairness_params(spec: FairnessSpec, n: int) -> list[FairnessDiagnostic]:
    """Warnings about share bounds that cannot all be met; never raises."""
    diagnostics: list[FairnessDiagnostic] = []
    g = spec.group_count
    sizes = [len(group) for group in spec.groups]

    for prefix in range(1, n + 1):
        total_lower = sum((spec.lower_bound(i, prefix) for i in range(g)), Fraction(0))
        total_upper = sum((spec.upper_bound(i, prefix) for i in range(g)), Fraction(0))
        if total_lower > 1:
            diagnostics.append(FairnessDiagnostic(
                code="lower-sum",
                message=f"lower shares sum past 1 at prefix {prefix} ({total_lower})",
                prefix=prefix,
            ))
        if total_upper < 1:
            diagnostics.append(FairnessDiagnostic(
                code="upper-sum",
                message=f"upper shares sum below 1 at prefix {prefix} ({total_upper})",
                prefix=prefix,
            ))

    for i in range(g):
        share = Fraction(sizes[i], n)
        if spec.lower_bound(i, n) > share:
            diagnostics.append(FairnessDiagnostic(
                code="lower-share",
                message=f"group {i + 1}: final lower share exceeds its size share ({spec.lower_bound(i, n)} > {share})",
                group=i + 1,
                prefix=n,
            ))
        if spec.upper_bound(i, n) < share:
            diagnostics.append(FairnessDiagnostic(
                code="upper-share",
                message=f"group {i + 1}: final upper share is below its size share ({spec.upper_bound(i, n)} < {share})",
                group=i + 1,
                prefix=n,
            ))
        for prefix in range(1, n + 1):
            low_share, high_share = spec.lower_bound(i, prefix), spec.upper_bound(i, prefix)
            if low_share > share:
                cap = math.floor(sizes[i] / low_share)
                diagnostics.append(FairnessDiagnostic(
                    code="lower-cap",
                    message=f"group {i + 1}: lower share at prefix {prefix} limits the top buckets to {cap} items",
                    group=i + 1, prefix=prefix, cap=cap,
                ))
            if high_share < share:
                cap = math.floor((n - sizes[i]) / (1 - high_share))
                diagnostics.append(FairnessDiagnostic(
                    code="upper-cap",
                    message=f"group {i + 1}: upper share at prefix {prefix} limits the top buckets to {cap} items",
                    group=i + 1, prefix=prefix, cap=cap,
                ))

    for diagnostic in diagnostics:
        logger.warning(diagnostic.message)
    return diagnostics
