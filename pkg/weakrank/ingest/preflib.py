# weakrank/ingest/preflib.py
import logging
import re
from fractions import Fraction
from typing import Optional

from weakrank.core.errors import ProfileParseError
from weakrank.models.matrix import PairOrderMatrix
from weakrank.models.order import HALF
from weakrank.schemas.profile import Ballot, PreferenceCounts, PreferenceProfile

logger = logging.getLogger(__name__)

_HEADER = re.compile(r"^#\s*([A-Za-z][A-Za-z ]*?)\s*(\d+)?\s*:\s*(.*)$")
_KNOWN_KEYS = {
    "FILE NAME", "TITLE", "DESCRIPTION", "DATA TYPE", "MODIFICATION TYPE", "RELATES TO",
    "RELATED FILES", "PUBLICATION DATE", "MODIFICATION DATE", "NUMBER ALTERNATIVES",
    "NUMBER VOTERS", "NUMBER UNIQUE ORDERS", "ALTERNATIVE NAME",
}
_STRICT_TYPES = {"soc", "soi"}


def parse_profile(text: str, source: Optional[str] = None) -> PreferenceProfile:
    """Parse a PrefLib strict-order file (complete or incomplete ballots).

    Both the `# KEY: value` header layout and the older layout (item count line,
    `id,label` lines, `voters,sum,unique` line) are read.
    """
    lines = text.splitlines()
    first = next((line.strip() for line in lines if line.strip()), "")
    if first and not first.startswith("#"):
        return _parse_legacy(lines, source)

    n: Optional[int] = None
    voters: Optional[int] = None
    names: dict[int, str] = {}
    warnings: list[str] = []
    ballots: list[Ballot] = []

    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = _HEADER.match(line)
            if not match:
                _warn(warnings, f"line {number}: unreadable header {line!r} ignored")
                continue
            key, index, value = match.group(1).strip().upper(), match.group(2), match.group(3).strip()
            if key not in _KNOWN_KEYS:
                _warn(warnings, f"line {number}: unknown header key {key!r} ignored")
            elif key == "DATA TYPE" and value.lower() not in _STRICT_TYPES:
                raise ProfileParseError(
                    f"data type {value!r} carries tied ballots; only strict orders (soc/soi) are accepted",
                    source=source, line=number,
                )
            elif key == "NUMBER ALTERNATIVES":
                n = _int(value, source, number)
            elif key == "NUMBER VOTERS":
                voters = _int(value, source, number)
            elif key == "ALTERNATIVE NAME":
                if index is None:
                    raise ProfileParseError("alternative name without an item id", source=source, line=number)
                names[int(index)] = value
            continue
        ballots.append(_parse_ballot(line, ":", n, source, number))

    if n is None:
        if not names:
            raise ProfileParseError("missing '# NUMBER ALTERNATIVES' header", source=source)
        n = max(names)
    _check_range(ballots, n, source)
    profile = _build(n, names, ballots, warnings)
    if voters is not None and voters != profile.m:
        _warn(warnings, f"header declares {voters} voters, ballots sum to {profile.m}")
        profile = profile.model_copy(update={"warnings": tuple(warnings)})
    return profile


def _parse_legacy(lines: list[str], source: Optional[str]) -> PreferenceProfile:
    body = [(number, raw.strip()) for number, raw in enumerate(lines, start=1) if raw.strip()]
    number, line = body[0]
    n = _int(line, source, number)
    if len(body) < n + 2:
        raise ProfileParseError("truncated file: expected item names and a voter line", source=source)
    names: dict[int, str] = {}
    for number, line in body[1 : n + 1]:
        item, _, label = line.partition(",")
        names[_int(item, source, number)] = label.strip()
    ballots = [_parse_ballot(line, ",", n, source, number) for number, line in body[n + 2 :]]
    return _build(n, names, ballots, [])


def _parse_ballot(line: str, separator: str, n: Optional[int], source: Optional[str], number: int) -> Ballot:
    if "{" in line or "}" in line:
        raise ProfileParseError(
            "tied ballot found; only strict orders are accepted", source=source, line=number
        )
    head, sep, rest = line.partition(separator)
    if not sep or not rest.strip():
        raise ProfileParseError(f"malformed ballot line {line!r}", source=source, line=number)
    multiplicity = _int(head, source, number)
    if multiplicity < 1:
        raise ProfileParseError(f"multiplicity must be positive, got {multiplicity}", source=source, line=number)
    ranking = tuple(_int(token, source, number) for token in rest.split(",") if token.strip())
    seen: set[int] = set()
    for item in ranking:
        if item in seen:
            raise ProfileParseError(f"duplicate item {item} in ballot", source=source, line=number)
        seen.add(item)
        if n is not None and not 1 <= item <= n:
            raise ProfileParseError(f"item {item} out of range 1..{n}", source=source, line=number)
    return Ballot(multiplicity=multiplicity, ranking=ranking)


def _check_range(ballots: list[Ballot], n: int, source: Optional[str]) -> None:
    # ballots read before the item-count header could not be range-checked
    for ballot in ballots:
        for item in ballot.ranking:
            if not 1 <= item <= n:
                raise ProfileParseError(f"item {item} out of range 1..{n}", source=source)


def _build(n: int, names: dict[int, str], ballots: list[Ballot], warnings: list[str]) -> PreferenceProfile:
    labels = tuple(names.get(i, str(i)) for i in range(1, n + 1))
    return PreferenceProfile(n=n, labels=labels, ballots=tuple(ballots), warnings=tuple(warnings))


def _int(token: str, source: Optional[str], number: int) -> int:
    try:
        return int(token.strip())
    except ValueError:
        raise ProfileParseError(f"expected an integer, got {token.strip()!r}", source=source, line=number) from None


def _warn(warnings: list[str], message: str) -> None:
    logger.warning(message)
    warnings.append(message)


def preference_counts(profile: PreferenceProfile) -> PreferenceCounts:
    n = profile.n
    counts = [[0] * n for _ in range(n)]
    for ballot in profile.ballots:
        ranking = [item - 1 for item in ballot.ranking]
        for i, r in enumerate(ranking):
            for s in ranking[i + 1 :]:
                counts[r][s] += ballot.multiplicity
    return PreferenceCounts(counts=tuple(tuple(row) for row in counts), labels=profile.labels)


def pair_order_matrix(counts: PreferenceCounts) -> PairOrderMatrix:
    n = counts.n
    a = counts.counts
    entries = []
    for r in range(n):
        row = []
        for s in range(n):
            total = a[r][s] + a[s][r]
            row.append(Fraction(a[r][s], total) if r != s and total else HALF)
        entries.append(tuple(row))
    return PairOrderMatrix(entries=tuple(entries), labels=counts.labels)
