# weakrank/schemas/objective.py
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field

from weakrank.models.matrix import PairOrderMatrix
from weakrank.models.rational import Rational
from weakrank.schemas.profile import PreferenceCounts


class ObopObjective(BaseModel):
    """min sum over r<s of 2 |b_rs - c_rs|, linearized with d_rs."""

    model_config = ConfigDict(frozen=True)
    kind: Literal["obop"] = "obop"
    matrix: PairOrderMatrix


class LopObjective(BaseModel):
    """min -sum a_rs x_rs with a_rs the number of ballots ranking r before s."""

    model_config = ConfigDict(frozen=True)
    kind: Literal["lop"] = "lop"
    counts: PreferenceCounts


class KrpObjective(BaseModel):
    """min -sum a_rs (2 x_rs - 1) for a user-supplied coefficient matrix."""

    model_config = ConfigDict(frozen=True)
    kind: Literal["krp"] = "krp"
    coefficients: tuple[tuple[Rational, ...], ...]


ObjectiveSpec = Annotated[Union[ObopObjective, LopObjective, KrpObjective], Field(discriminator="kind")]
