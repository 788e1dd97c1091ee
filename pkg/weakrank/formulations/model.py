# weakrank/formulations/model.py
from enum import Enum
from fractions import Fraction
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict

from weakrank.core.errors import ModelError
from weakrank.models.matrix import PairOrderMatrix
from weakrank.models.rational import Rational


class VarKind(str, Enum):
    BINARY = "binary"
    CONTINUOUS = "continuous"


class Sense(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="

    def holds(self, lhs: Fraction, rhs: Fraction) -> bool:
        if self is Sense.LE:
            return lhs <= rhs
        if self is Sense.GE:
            return lhs >= rhs
        return lhs == rhs


class Variable(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    kind: VarKind = VarKind.BINARY
    lower: Rational = Fraction(0)
    upper: Optional[Rational] = Fraction(1)


class Constraint(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    terms: tuple[tuple[str, Rational], ...]
    sense: Sense
    rhs: Rational


class Objective(BaseModel):
    model_config = ConfigDict(frozen=True)

    terms: tuple[tuple[str, Rational], ...] = ()
    constant: Rational = Fraction(0)
    sense: str = "min"


class ModelMetadata(BaseModel):
    """What the model encodes, so solutions can be mapped onto its variables."""

    model_config = ConfigDict(frozen=True)

    formulation: str  # base | obop | assignment | representative | tcu | fair | parsed
    n: int
    slots: Optional[int] = None  # bucket positions of y_ru / fair models
    p: Optional[int] = None
    k: Optional[int] = None
    no_ties: bool = False
    options: dict[str, Any] = {}
    matrix: Optional[PairOrderMatrix] = None


class IlpModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    objective: Objective
    metadata: ModelMetadata

    def variable_names(self) -> list[str]:
        return [variable.name for variable in self.variables]

    def constraint(self, name: str) -> Constraint:
        for row in self.constraints:
            if row.name == name:
                return row
        raise ModelError(f"no constraint named {name!r}")

    def rows_with_prefix(self, prefix: str) -> list[Constraint]:
        return [row for row in self.constraints if row.name.startswith(prefix + "_") or row.name == prefix]

    def with_constraints(self, rows: list[Constraint], **metadata_updates) -> "IlpModel":
        metadata = self.metadata.model_copy(update=metadata_updates) if metadata_updates else self.metadata
        return self.model_copy(update={"constraints": self.constraints + tuple(rows), "metadata": metadata})

    def validate_structure(self) -> None:
        names = self.variable_names()
        declared = set(names)
        if len(declared) != len(names):
            raise ModelError("duplicate variable names")
        for variable in self.variables:
            if variable.kind is VarKind.BINARY and (variable.lower != 0 or variable.upper != 1):
                raise ModelError(f"binary variable {variable.name} must have bounds [0,1]")
        row_names = [row.name for row in self.constraints]
        if len(set(row_names)) != len(row_names):
            raise ModelError("duplicate constraint names")
        for row in self.constraints:
            for name, _ in row.terms:
                if name not in declared:
                    raise ModelError(f"constraint {row.name} references undeclared variable {name}")
        for name, _ in self.objective.terms:
            if name not in declared:
                raise ModelError(f"objective references undeclared variable {name}")


def binary(name: str) -> Variable:
    return Variable.model_construct(name=name, kind=VarKind.BINARY, lower=Fraction(0), upper=Fraction(1))


def continuous(name: str, lower=Fraction(0), upper: Optional[Fraction] = Fraction(1)) -> Variable:
    return Variable.model_construct(name=name, kind=VarKind.CONTINUOUS, lower=Fraction(lower), upper=upper)


def row(name: str, terms, sense: Sense, rhs) -> Constraint:
    # builders pass exact Fractions; skip per-row validation on large models
    return Constraint.model_construct(
        name=name,
        terms=tuple((var, Fraction(coef)) for var, coef in terms),
        sense=sense,
        rhs=Fraction(rhs),
    )
