# weakrank/formulations/checker.py
import math
from fractions import Fraction
from typing import Mapping, Optional

from pydantic import BaseModel, ConfigDict

from weakrank.core.errors import IncompatibleSolutionError, ModelError
from weakrank.formulations.model import Constraint, IlpModel, Sense, VarKind, row
from weakrank.formulations.names import a, b, d, x, y, z
from weakrank.models.order import HALF, BucketOrder
from weakrank.models.rational import Rational

Assignment = dict[str, Fraction]

ONE, ZERO = Fraction(1), Fraction(0)


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    feasible: bool
    violated: tuple[str, ...]
    objective: Rational


class CompiledModel:
    """Rows scaled to integer coefficients, for repeated exact checks of one model."""

    def __init__(self, model: IlpModel):
        self.model = model
        self.names = model.variable_names()
        self.index = {name: i for i, name in enumerate(self.names)}
        self.rows = []
        for constraint in model.constraints:
            scale = _row_scale(constraint)
            coefs = [(self.index[name], int(coef * scale)) for name, coef in constraint.terms]
            self.rows.append((constraint.name, coefs, constraint.sense, constraint.rhs * scale))

    def check(self, assignment: Mapping[str, Fraction]) -> CheckResult:
        values = []
        for name in self.names:
            if name not in assignment:
                raise ModelError(f"no value for variable {name}")
            values.append(Fraction(assignment[name]))
        common = 1
        for value in values:
            common = math.lcm(common, value.denominator)
        scaled = [int(value * common) for value in values]

        violated = []
        for variable, value in zip(self.model.variables, values):
            if value < variable.lower or (variable.upper is not None and value > variable.upper):
                violated.append(f"bounds:{variable.name}")
            elif variable.kind is VarKind.BINARY and value not in (ZERO, ONE):
                violated.append(f"integrality:{variable.name}")
        for name, coefs, sense, rhs in self.rows:
            lhs = sum(coef * scaled[i] for i, coef in coefs)
            if not sense.holds(Fraction(lhs), rhs * common):
                violated.append(name)

        objective = self.model.objective.constant + sum(
            (coef * values[self.index[name]] for name, coef in self.model.objective.terms), Fraction(0)
        )
        return CheckResult(feasible=not violated, violated=tuple(violated), objective=objective)


def _row_scale(constraint: Constraint) -> int:
    scale = constraint.rhs.denominator
    for _, coef in constraint.terms:
        scale = math.lcm(scale, Fraction(coef).denominator)
    return scale


def check_solution(model: IlpModel, assignment: Mapping[str, Fraction], compiled: Optional[CompiledModel] = None) -> CheckResult:
    """Evaluate every row exactly; `compiled` lets callers reuse the scaled rows."""
    return (compiled or CompiledModel(model)).check(assignment)


def encode_solution(order: BucketOrder, model: IlpModel) -> Assignment:
    """Variable values that represent `order` in `model`."""
    meta = model.metadata
    n = meta.n
    if order.n != n:
        raise IncompatibleSolutionError(f"bucket order has {order.n} items, model has n={n}")
    if meta.formulation == "parsed":
        raise IncompatibleSolutionError("parsed models carry no variable semantics; encode into the built model")
    pos = order.position
    values: Assignment = {}

    for r in range(n):
        for s in range(n):
            if r != s:
                values[x(r, s)] = ONE if pos[r] <= pos[s] else ZERO

    if meta.matrix is not None:
        c = meta.matrix
        for r in range(n):
            for s in range(r + 1, n):
                b_rs = HALF if pos[r] == pos[s] else (ONE if pos[r] < pos[s] else ZERO)
                values[d(r, s)] = abs(b_rs - c[r, s])

    if meta.formulation in ("assignment", "fair"):
        slots = meta.slots
        if meta.p is not None and order.bucket_count != meta.p:
            raise IncompatibleSolutionError(f"order has {order.bucket_count} buckets, model fixes p = {meta.p}")
        if order.bucket_count > slots:
            raise IncompatibleSolutionError(f"order has {order.bucket_count} buckets, model has {slots} positions")
        for r in range(n):
            for u in range(slots):
                values[y(r, u)] = ONE if pos[r] == u else ZERO

    elif meta.formulation == "representative":
        top = {index: max(bucket) for index, bucket in enumerate(order.buckets)}
        for r in range(n):
            values[a(r)] = ONE if top[pos[r]] == r else ZERO
            for s in range(r + 1, n):
                values[b(r, s)] = ONE if top[pos[r]] == s else ZERO

    elif meta.formulation == "tcu":
        tail = order.buckets[-1] if meta.k < n else frozenset()
        for r in range(n):
            values[z(r)] = ONE if r in tail else ZERO

    missing = [name for name in model.variable_names() if name not in values]
    if missing:
        raise ModelError(f"cannot encode variables {missing[:3]} of a {meta.formulation} model")
    return values


def add_exclusion_cut(model: IlpModel, assignment: Mapping[str, Fraction]) -> IlpModel:
    """Cut off one 0/1 point of the x variables: at least one x must change."""
    terms, ones = [], 0
    for variable in model.variables:
        if not variable.name.startswith("x_"):
            continue
        if assignment[variable.name] == 1:
            terms.append((variable.name, -1))
            ones += 1
        else:
            terms.append((variable.name, 1))
    cuts = sum(1 for constraint in model.constraints if constraint.name.startswith("cut_"))
    return model.with_constraints([row(f"cut_{cuts + 1}", terms, Sense.GE, 1 - ones)])


def fix_consistent_permutation(model: IlpModel, order: BucketOrder) -> IlpModel:
    """Only the linear extensions of `order` stay feasible."""
    n = model.metadata.n
    if order.n != n:
        raise IncompatibleSolutionError(f"bucket order has {order.n} items, model has n={n}")
    pos = order.position
    rows = []
    for constraint in model.constraints:
        if constraint.name.startswith("comp_"):
            constraint = constraint.model_copy(update={"sense": Sense.EQ})
        rows.append(constraint)
    for r in range(n):
        for s in range(n):
            if pos[r] < pos[s]:
                rows.append(row(f"fix_{r + 1}_{s + 1}", [(x(r, s), 1)], Sense.EQ, 1))
    metadata = model.metadata.model_copy(update={"no_ties": True})
    return model.model_copy(update={"constraints": tuple(rows), "metadata": metadata})
