# weakrank/schemas/profile.py
from pydantic import BaseModel, ConfigDict, Field, model_validator

from weakrank.core.errors import DimensionError, InputError


class Ballot(BaseModel):
    model_config = ConfigDict(frozen=True)

    multiplicity: int = Field(ge=1)
    ranking: tuple[int, ...]  # 1-based item ids, strict preference order


class PreferenceProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    labels: tuple[str, ...]
    ballots: tuple[Ballot, ...]
    warnings: tuple[str, ...] = ()

    @model_validator(mode="after")
    def _check_ballots(self):
        if len(self.labels) != self.n:
            raise DimensionError(f"{len(self.labels)} labels for {self.n} items")
        for ballot in self.ballots:
            if len(set(ballot.ranking)) != len(ballot.ranking):
                raise InputError(f"duplicate item in ballot {ballot.ranking}")
            for item in ballot.ranking:
                if not 1 <= item <= self.n:
                    raise InputError(f"item {item} out of range 1..{self.n}")
        return self

    @property
    def m(self) -> int:
        return sum(ballot.multiplicity for ballot in self.ballots)


class PreferenceCounts(BaseModel):
    model_config = ConfigDict(frozen=True)

    counts: tuple[tuple[int, ...], ...]  # counts[r][s]: voters ranking r strictly before s
    labels: tuple[str, ...] | None = None

    @property
    def n(self) -> int:
        return len(self.counts)

    @model_validator(mode="after")
    def _check_counts(self):
        n = len(self.counts)
        for r, row in enumerate(self.counts):
            if len(row) != n:
                raise DimensionError(f"count row {r + 1} has {len(row)} entries, expected {n}")
            if row[r] != 0:
                raise InputError(f"diagonal count at item {r + 1} must be 0")
            if any(value < 0 for value in row):
                raise InputError(f"negative count in row {r + 1}")
        return self
