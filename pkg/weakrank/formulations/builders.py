# weakrank/formulations/builders.py
import logging
from fractions import Fraction
from itertools import permutations
from typing import Optional, Sequence

from weakrank.core.errors import DimensionError, VariantError
from weakrank.formulations.model import (
    IlpModel,
    ModelMetadata,
    Objective,
    Sense,
    Variable,
    binary,
    continuous,
    row,
)
from weakrank.formulations.fairness import fairness_rows
from weakrank.formulations.names import a, b, d, x, y, z
from weakrank.models.matrix import PairOrderMatrix
from weakrank.schemas.objective import KrpObjective, LopObjective, ObopObjective, ObjectiveSpec
from weakrank.schemas.variant import FairnessSpec, TailBounds

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


def _x_variables(n: int, relax: bool = False) -> list[Variable]:
    make = (lambda name: continuous(name)) if relax else binary
    return [make(x(r, s)) for r in range(n) for s in range(n) if r != s]


def _comparability_rows(n: int, no_ties: bool = False) -> list:
    sense = Sense.EQ if no_ties else Sense.GE
    return [
        row(f"comp_{r + 1}_{s + 1}", [(x(r, s), 1), (x(s, r), 1)], sense, 1)
        for r in range(n)
        for s in range(r + 1, n)
    ]


def _transitivity_rows(n: int) -> list:
    return [
        row(f"trans_{r + 1}_{s + 1}_{t + 1}", [(x(r, s), 1), (x(s, t), 1), (x(r, t), -1)], Sense.LE, 1)
        for r, s, t in permutations(range(n), 3)
    ]


def _deviation_part(matrix: PairOrderMatrix) -> tuple[list[Variable], list, Objective]:
    """d_rs >= |(x_rs - x_sr + 1)/2 - c_rs| for r < s, objective 2 sum d_rs."""
    n = matrix.n
    variables, rows, terms = [], [], []
    for r in range(n):
        for s in range(r + 1, n):
            c = matrix[r, s]
            variables.append(continuous(d(r, s)))
            rows.append(row(f"devlo_{r + 1}_{s + 1}", [(d(r, s), 1), (x(r, s), -HALF), (x(s, r), HALF)], Sense.GE, HALF - c))
            rows.append(row(f"devhi_{r + 1}_{s + 1}", [(d(r, s), 1), (x(r, s), HALF), (x(s, r), -HALF)], Sense.GE, c - HALF))
            terms.append((d(r, s), Fraction(2)))
    return variables, rows, Objective.model_construct(terms=tuple(terms), constant=Fraction(0), sense="min")


def build_base_model(n: int, objective: Optional[ObjectiveSpec] = None, no_ties: bool = False) -> IlpModel:
    if n < 1:
        raise VariantError(f"need at least one item, got n={n}")
    variables = _x_variables(n)
    rows = _comparability_rows(n, no_ties) + _transitivity_rows(n)
    goal = Objective.model_construct(terms=(), constant=Fraction(0), sense="min")
    matrix = None
    formulation = "base"

    if isinstance(objective, ObopObjective):
        matrix = objective.matrix
        _check_size(matrix.n, n)
        extra_vars, extra_rows, goal = _deviation_part(matrix)
        variables += extra_vars
        rows += extra_rows
        formulation = "obop"
    elif isinstance(objective, LopObjective):
        _check_size(objective.counts.n, n)
        counts = objective.counts.counts
        goal = Objective.model_construct(
            terms=tuple((x(r, s), Fraction(-counts[r][s])) for r in range(n) for s in range(n) if r != s and counts[r][s]),
            constant=Fraction(0),
            sense="min",
        )
    elif isinstance(objective, KrpObjective):
        _check_size(len(objective.coefficients), n)
        coef = objective.coefficients
        if any(len(line) != n for line in coef):
            raise DimensionError(f"coefficient matrix must be {n}x{n}")
        goal = Objective.model_construct(
            terms=tuple((x(r, s), -2 * coef[r][s]) for r in range(n) for s in range(n) if r != s and coef[r][s]),
            constant=sum((coef[r][s] for r in range(n) for s in range(n) if r != s), Fraction(0)),
            sense="min",
        )

    return IlpModel.model_construct(
        name=f"{formulation}_n{n}",
        variables=tuple(variables),
        constraints=tuple(rows),
        objective=goal,
        metadata=ModelMetadata(formulation=formulation, n=n, no_ties=no_ties, matrix=matrix),
    )


def build_obop_model(matrix: PairOrderMatrix) -> IlpModel:
    return build_base_model(matrix.n, ObopObjective(matrix=matrix))


def _bucket_rows(n: int, slots: int) -> list:
    """Assignment y_ru, ties inside a bucket and the order between buckets."""
    rows = [row(f"assign_{r + 1}", [(y(r, u), 1) for u in range(slots)], Sense.EQ, 1) for r in range(n)]
    for u in range(slots):
        for r in range(n):
            for s in range(r + 1, n):
                rows.append(row(
                    f"tie_{r + 1}_{s + 1}_{u + 1}",
                    [(y(r, u), 1), (y(s, u), 1), (x(r, s), -1), (x(s, r), -1)],
                    Sense.LE, 0,
                ))
    for u in range(slots - 1):
        for r in range(n):
            for s in range(n):
                if r == s:
                    continue
                terms = [(x(s, r), 1)]
                terms += [(y(r, v), 1) for v in range(u + 1)]
                terms += [(y(s, v), 1) for v in range(u + 1, slots)]
                rows.append(row(f"order_{r + 1}_{s + 1}_{u + 1}", terms, Sense.LE, 2))
    return rows


def _size_rows(n: int, slots: int, sizes: Optional[Sequence[int]]) -> list:
    if sizes is None:
        return [row(f"nonempty_{u + 1}", [(y(r, u), 1) for r in range(n)], Sense.GE, 1) for u in range(slots)]
    return [row(f"size_{u + 1}", [(y(r, u), 1) for r in range(n)], Sense.EQ, sizes[u]) for u in range(slots)]


def build_p_assignment_model(
    matrix: PairOrderMatrix,
    p: int,
    equal_size: Optional[int] = None,
    prescribed: Optional[Sequence[int]] = None,
    add_comparability: bool = False,
    add_transitivity: bool = False,
    add_base_valid_inequalities: bool = False,
    relax_x: bool = False,
) -> IlpModel:
    n = matrix.n
    if not 1 <= p <= n:
        raise VariantError(f"bucket count p={p} outside 1..{n}")
    if equal_size is not None and prescribed is not None:
        raise VariantError("choose either equal bucket sizes or prescribed sizes, not both")
    sizes = None
    if equal_size is not None:
        if p * equal_size != n:
            raise VariantError(f"equal sizes need p*q = n, got {p}*{equal_size} != {n}")
        sizes = [equal_size] * p
    elif prescribed is not None:
        sizes = list(prescribed)
        if len(sizes) != p or any(q < 1 for q in sizes) or sum(sizes) != n:
            raise VariantError(f"prescribed sizes {sizes} must be {p} positive values summing to {n}")
    if add_base_valid_inequalities:
        add_comparability = add_transitivity = True

    dev_vars, dev_rows, goal = _deviation_part(matrix)
    variables = _x_variables(n, relax=relax_x) + [binary(y(r, u)) for r in range(n) for u in range(p)] + dev_vars
    rows = _bucket_rows(n, p) + _size_rows(n, p, sizes)
    if add_comparability:
        rows += _comparability_rows(n)
    if add_transitivity:
        rows += _transitivity_rows(n)
    rows += dev_rows

    options = {
        "sizes": sizes,
        "add_comparability": add_comparability,
        "add_transitivity": add_transitivity,
        "relax_x": relax_x,
    }
    return IlpModel.model_construct(
        name=f"assignment_n{n}_p{p}",
        variables=tuple(variables),
        constraints=tuple(rows),
        objective=goal,
        metadata=ModelMetadata(formulation="assignment", n=n, p=p, slots=p, options=options, matrix=matrix),
    )


def build_p_representative_model(
    matrix: PairOrderMatrix,
    p: int,
    substitute_tie_rep: bool = False,
    add_tie_rep: bool = False,
    equal_size: Optional[int] = None,
) -> IlpModel:
    """Each bucket is represented by its highest-index item (a_r = 1); b_rs = 1 when
    s represents the bucket of r."""
    n = matrix.n
    if not 1 <= p <= n:
        raise VariantError(f"bucket count p={p} outside 1..{n}")
    if substitute_tie_rep and add_tie_rep:
        raise VariantError("substitute_tie_rep and add_tie_rep are mutually exclusive")
    if equal_size is not None and p * equal_size != n:
        raise VariantError(f"equal sizes need p*q = n, got {p}*{equal_size} != {n}")

    dev_vars, dev_rows, goal = _deviation_part(matrix)
    variables = (
        _x_variables(n)
        + [binary(a(r)) for r in range(n)]
        + [binary(b(r, s)) for r in range(n) for s in range(r + 1, n)]
        + dev_vars
    )
    rows = _comparability_rows(n) + _transitivity_rows(n)
    rows.append(row("reps", [(a(r), 1) for r in range(n)], Sense.EQ, p))
    for r in range(n):
        for s in range(r + 1, n):
            rows.append(row(f"repsel_{r + 1}_{s + 1}", [(b(r, s), 1), (a(s), -1)], Sense.LE, 0))
    for r in range(n):
        rows.append(row(f"onerep_{r + 1}", [(b(r, s), 1) for s in range(r + 1, n)] + [(a(r), 1)], Sense.EQ, 1))
    for r in range(n):
        for s in range(r + 1, n):
            if not substitute_tie_rep:
                rows.append(row(f"tiebefore_{r + 1}_{s + 1}", [(x(r, s), 1), (b(r, s), -1)], Sense.GE, 0))
                rows.append(row(f"tieafter_{r + 1}_{s + 1}", [(x(s, r), 1), (b(r, s), -1)], Sense.GE, 0))
            rows.append(row(f"maxrep_{r + 1}_{s + 1}", [(x(r, s), 1), (x(s, r), 1), (a(r), 1)], Sense.LE, 2))
            if substitute_tie_rep or add_tie_rep:
                rows.append(row(
                    f"tierep_{r + 1}_{s + 1}",
                    [(b(r, s), 1), (a(s), 1), (x(r, s), -1), (x(s, r), -1)],
                    Sense.LE, 0,
                ))
    if equal_size is not None:
        for s in range(n):
            rows.append(row(f"repsize_{s + 1}", [(b(r, s), 1) for r in range(s)] + [(a(s), -(equal_size - 1))], Sense.EQ, 0))
    rows += dev_rows

    options = {"substitute_tie_rep": substitute_tie_rep, "add_tie_rep": add_tie_rep, "equal_size": equal_size}
    return IlpModel.model_construct(
        name=f"representative_n{n}_p{p}",
        variables=tuple(variables),
        constraints=tuple(rows),
        objective=goal,
        metadata=ModelMetadata(formulation="representative", n=n, p=p, options=options, matrix=matrix),
    )


def build_tcu_model(matrix: PairOrderMatrix, k: int, tail_bounds: Optional[TailBounds] = None) -> IlpModel:
    n = matrix.n
    if not 1 <= k <= n:
        raise VariantError(f"k={k} outside 1..{n}")
    base = build_obop_model(matrix)
    variables = list(base.variables) + [binary(z(r)) for r in range(n)]
    rows = list(base.constraints)
    rows.append(row("tailsize", [(z(r), 1) for r in range(n)], Sense.EQ, n - k))
    for r in range(n):
        for s in range(n):
            if r == s:
                continue
            rows.append(row(f"tailtie_{r + 1}_{s + 1}", [(x(r, s), 1), (z(r), 1), (z(s), -1)], Sense.LE, 1))
            rows.append(row(f"tailafter_{r + 1}_{s + 1}", [(x(r, s), 1), (z(s), -1)], Sense.GE, 0))
    if tail_bounds is not None:
        for i, (group, low, high) in enumerate(zip(tail_bounds.groups, tail_bounds.lower, tail_bounds.upper)):
            terms = [(z(item - 1), 1) for item in group]
            rows.append(row(f"tailgroup_lo_{i + 1}", terms, Sense.GE, low))
            rows.append(row(f"tailgroup_hi_{i + 1}", terms, Sense.LE, high))

    options = {"tail_bounds": tail_bounds.model_dump() if tail_bounds else None}
    return IlpModel.model_construct(
        name=f"tcu_n{n}_k{k}",
        variables=tuple(variables),
        constraints=tuple(rows),
        objective=base.objective,
        metadata=ModelMetadata(formulation="tcu", n=n, k=k, options=options, matrix=matrix),
    )


def build_fair_model(
    matrix: PairOrderMatrix,
    spec: FairnessSpec,
    fixed_p: Optional[int] = None,
    capacities: Optional[Sequence[int]] = None,
    max_buckets: Optional[int] = None,
    min_buckets: Optional[int] = None,
) -> IlpModel:
    n = matrix.n
    spec.check_partition(n)
    if capacities is not None:
        if fixed_p is not None and fixed_p != len(capacities):
            raise VariantError(f"{len(capacities)} capacities for p={fixed_p}")
        if any(q < 1 for q in capacities) or sum(capacities) != n:
            raise VariantError(f"capacities {list(capacities)} must be positive and sum to {n}")
        fixed_p = len(capacities)
    slots = fixed_p or max_buckets or n
    if not 1 <= slots <= n:
        raise VariantError(f"bucket positions {slots} outside 1..{n}")

    dev_vars, dev_rows, goal = _deviation_part(matrix)
    variables = _x_variables(n) + [binary(y(r, u)) for r in range(n) for u in range(slots)] + dev_vars
    rows = _bucket_rows(n, slots)
    if fixed_p is not None:
        rows += _size_rows(n, slots, list(capacities) if capacities is not None else None)
    else:
        # a bucket may only be empty if every later bucket is empty too
        for u in range(slots - 1):
            for r in range(n):
                rows.append(row(
                    f"emptylast_{r + 1}_{u + 1}",
                    [(y(s, u), 1) for s in range(n)] + [(y(r, v), -1) for v in range(u + 1, slots)],
                    Sense.GE, 0,
                ))
        for u in range(min_buckets or 0):
            rows.append(row(f"nonempty_{u + 1}", [(y(r, u), 1) for r in range(n)], Sense.GE, 1))
    rows += fairness_rows(spec, n, slots)
    rows += dev_rows

    options = {
        "fairness": spec.model_dump(),
        "fixed_p": fixed_p,
        "capacities": list(capacities) if capacities is not None else None,
        "max_buckets": max_buckets,
        "min_buckets": min_buckets,
    }
    return IlpModel.model_construct(
        name=f"fair_n{n}_slots{slots}",
        variables=tuple(variables),
        constraints=tuple(rows),
        objective=goal,
        metadata=ModelMetadata(formulation="fair", n=n, p=fixed_p, slots=slots, options=options, matrix=matrix),
    )


def _check_size(got: int, n: int) -> None:
    if got != n:
        raise DimensionError(f"objective data is {got}x{got}, model has n={n}")
