# weakrank/formulations/__init__.py
from typing import Literal

from weakrank.core.errors import VariantError
from weakrank.models.matrix import PairOrderMatrix
from weakrank.schemas.variant import (
    EqualSizesVariant,
    FairVariant,
    FixedBucketsVariant,
    ObopVariant,
    PrescribedSizesVariant,
    TcuVariant,
    VariantSpec,
)

from .builders import (
    build_base_model,
    build_fair_model,
    build_obop_model,
    build_p_assignment_model,
    build_p_representative_model,
    build_tcu_model,
)
from .checker import CheckResult, CompiledModel, add_exclusion_cut, check_solution, encode_solution, fix_consistent_permutation
from .fairness import FairnessDiagnostic, fairness_rows, validate_fairness_params
from .lp_format import export_lp, parse_lp
from .model import Constraint, IlpModel, ModelMetadata, Objective, Sense, Variable, VarKind

Formulation = Literal["assignment", "representative"]


def build_variant_model(
    matrix: PairOrderMatrix,
    variant: VariantSpec,
    formulation: Formulation = "assignment",
    **options,
) -> IlpModel:
    """The model for `variant`; `options` are the formulation's switches
    (add_comparability, relax_x, substitute_tie_rep, ...)."""
    variant.validate_for(matrix.n)
    if isinstance(variant, ObopVariant):
        return build_obop_model(matrix)
    if isinstance(variant, TcuVariant):
        return build_tcu_model(matrix, variant.k, variant.tail_bounds)
    if isinstance(variant, FairVariant):
        return build_fair_model(
            matrix,
            variant.fairness,
            fixed_p=variant.p,
            capacities=variant.capacities,
            max_buckets=variant.max_buckets,
            min_buckets=variant.min_buckets,
        )
    if formulation == "representative":
        if isinstance(variant, FixedBucketsVariant):
            return build_p_representative_model(matrix, variant.p, **options)
        if isinstance(variant, EqualSizesVariant):
            return build_p_representative_model(matrix, variant.p, equal_size=variant.q, **options)
        raise VariantError("the representative formulation covers fixed-p and equal-sizes only")
    if isinstance(variant, FixedBucketsVariant):
        return build_p_assignment_model(matrix, variant.p, **options)
    if isinstance(variant, EqualSizesVariant):
        return build_p_assignment_model(matrix, variant.p, equal_size=variant.q, **options)
    if isinstance(variant, PrescribedSizesVariant):
        return build_p_assignment_model(matrix, variant.p, prescribed=variant.sizes, **options)
    raise VariantError(f"no model for variant {variant.kind!r}")


__all__ = [
    "build_base_model", "build_fair_model", "build_obop_model", "build_p_assignment_model",
    "build_p_representative_model", "build_tcu_model", "build_variant_model",
    "CheckResult", "CompiledModel", "add_exclusion_cut", "check_solution", "encode_solution",
    "fix_consistent_permutation", "FairnessDiagnostic", "fairness_rows", "validate_fairness_params",
    "export_lp", "parse_lp", "Constraint", "IlpModel", "ModelMetadata", "Objective", "Sense",
    "Variable", "VarKind", "Formulation",
]
