# weakrank/ingest/__init__.py
from pathlib import Path
from typing import Optional

from weakrank.core.errors import InputError
from weakrank.models.matrix import PairOrderMatrix
from weakrank.schemas.profile import PreferenceProfile

from .matrix_csv import load_matrix_csv, save_matrix_csv
from .preflib import pair_order_matrix, parse_profile, preference_counts


def load_instance(path: Path) -> tuple[PairOrderMatrix, Optional[PreferenceProfile]]:
    """Matrix for a `.csv` pair order matrix or a PrefLib profile file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read instance: {exc.strerror}", source=str(path)) from None
    if Path(path).suffix.lower() == ".csv":
        return load_matrix_csv(text, source=str(path)), None
    profile = parse_profile(text, source=str(path))
    return pair_order_matrix(preference_counts(profile)), profile


__all__ = [
    "load_instance", "load_matrix_csv", "save_matrix_csv",
    "pair_order_matrix", "parse_profile", "preference_counts",
]
