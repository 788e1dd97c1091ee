# weakrank/formulations/lp_format.py
import math
import re
from fractions import Fraction
from typing import Iterable, Optional

from weakrank.core.errors import ModelError
from weakrank.formulations.model import (
    IlpModel,
    ModelMetadata,
    Objective,
    Sense,
    VarKind,
    binary,
    continuous,
    row,
)
from weakrank.models.rational import format_fraction

TERMS_PER_LINE = 8

_SECTIONS = {"minimize": "objective", "subject to": "rows", "bounds": "bounds", "binaries": "binaries", "end": "end"}
_ROW_START = re.compile(r"^\s*([A-Za-z_][\w.]*)\s*:(.*)$")
_COMMENT = re.compile(r"^\\\s*([a-z ]+):\s*(.*)$")
_BOUND = re.compile(r"^\s*(\S+)\s*<=\s*(\S+)\s*<=\s*(\S+)\s*$")
_LOWER_ONLY = re.compile(r"^\s*(\S+)\s*>=\s*(\S+)\s*$")


def export_lp(model: IlpModel) -> str:
    """CPLEX-LP text. Rows are scaled to integer coefficients; the objective is
    scaled by the lcm of its denominators, recorded in a comment."""
    meta = model.metadata
    scale = _lcm(coef.denominator for _, coef in model.objective.terms)
    lines = [
        f"\\ model: {model.name}",
        f"\\ formulation: {meta.formulation}",
        f"\\ n: {meta.n}",
        f"\\ objective constant: {format_fraction(model.objective.constant)}",
    ]
    if scale != 1:
        lines.append(f"\\ objective scale: {scale}")
    lines.append("Minimize")
    lines += _expression("obj", [(name, coef * scale) for name, coef in model.objective.terms])
    lines.append("Subject To")
    for constraint in model.constraints:
        factor = _lcm([constraint.rhs.denominator] + [coef.denominator for _, coef in constraint.terms])
        terms = [(name, coef * factor) for name, coef in constraint.terms]
        body = _expression(constraint.name, terms)
        body[-1] += f" {constraint.sense.value} {_number(constraint.rhs * factor)}"
        lines += body

    bounded = [v for v in model.variables if v.kind is VarKind.CONTINUOUS]
    if bounded:
        lines.append("Bounds")
        for variable in bounded:
            if variable.upper is None:
                lines.append(f" {variable.name} >= {_number(variable.lower)}")
            else:
                lines.append(f" {_number(variable.lower)} <= {variable.name} <= {_number(variable.upper)}")
    binaries = [v.name for v in model.variables if v.kind is VarKind.BINARY]
    if binaries:
        lines.append("Binaries")
        for start in range(0, len(binaries), TERMS_PER_LINE):
            lines.append(" " + " ".join(binaries[start:start + TERMS_PER_LINE]))
    lines.append("End")
    return "\n".join(lines) + "\n"


def _lcm(values: Iterable[int]) -> int:
    result = 1
    for value in values:
        result = math.lcm(result, value)
    return result


def _number(value: Fraction) -> str:
    if value.denominator != 1:
        raise ModelError(f"non-integer value {value} after scaling")
    return str(value.numerator)


def _expression(name: str, terms: list[tuple[str, Fraction]]) -> list[str]:
    if not terms:
        return [f" {name}: 0"]
    pieces = []
    for index, (var, coef) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        magnitude = abs(coef)
        text = var if magnitude == 1 else f"{_number(magnitude)} {var}"
        pieces.append(("- " + text if sign == "-" else text) if index == 0 else f"{sign} {text}")
    lines = []
    for start in range(0, len(pieces), TERMS_PER_LINE):
        chunk = " ".join(pieces[start:start + TERMS_PER_LINE])
        lines.append(f" {name}: {chunk}" if start == 0 else f"   {chunk}")
    return lines


def parse_lp(text: str) -> IlpModel:
    """Read back a file written by export_lp."""
    comments: dict[str, str] = {}
    section: Optional[str] = None
    blocks: dict[str, list[list[str]]] = {"objective": [], "rows": []}
    bounds: list[str] = []
    binaries: list[str] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip():
            continue
        if line.startswith("\\"):
            match = _COMMENT.match(line)
            if match:
                comments[match.group(1).strip()] = match.group(2).strip()
            continue
        keyword = line.strip().lower()
        if keyword in _SECTIONS:
            section = _SECTIONS[keyword]
            continue
        if section in ("objective", "rows"):
            match = _ROW_START.match(line)
            if match:
                blocks[section].append([match.group(1), match.group(2)])
            elif blocks[section]:
                blocks[section][-1][1] += " " + line.strip()
            else:
                raise ModelError(f"line {number}: expression without a name")
        elif section == "bounds":
            bounds.append(line)
        elif section == "binaries":
            binaries += line.split()
        elif section == "end":
            break
        else:
            raise ModelError(f"line {number}: content outside any section")

    if len(blocks["objective"]) != 1:
        raise ModelError("LP text must hold exactly one objective")
    scale = Fraction(comments.get("objective scale", "1"))
    objective_terms, _, _ = _parse_terms(blocks["objective"][0][1], allow_sense=False)
    objective = Objective.model_construct(
        terms=tuple((name, coef / scale) for name, coef in objective_terms),
        constant=Fraction(comments.get("objective constant", "0")),
        sense="min",
    )

    constraints = []
    for name, body in blocks["rows"]:
        terms, sense, rhs = _parse_terms(body, allow_sense=True)
        constraints.append(row(name, terms, sense, rhs))

    variables = []
    for line in bounds:
        match = _BOUND.match(line)
        if match:
            lower, name, upper = match.groups()
            variables.append(continuous(name, Fraction(lower), Fraction(upper)))
            continue
        match = _LOWER_ONLY.match(line)
        if not match:
            raise ModelError(f"cannot read bound {line.strip()!r}")
        variables.append(continuous(match.group(1), Fraction(match.group(2)), None))
    variables += [binary(name) for name in binaries]

    metadata = ModelMetadata(
        formulation="parsed",
        n=int(comments.get("n", "0")),
        options={"source_formulation": comments.get("formulation")},
    )
    model = IlpModel.model_construct(
        name=comments.get("model", "parsed"),
        variables=tuple(variables),
        constraints=tuple(constraints),
        objective=objective,
        metadata=metadata,
    )
    model.validate_structure()
    return model


def _parse_terms(body: str, allow_sense: bool):
    tokens = body.split()
    terms: list[tuple[str, Fraction]] = []
    sign, coef = 1, None
    sense, rhs = None, None
    index = 0
    while index < len(tokens):
        token = tokens[index]
        if token in ("<=", ">=", "="):
            if not allow_sense or index + 2 != len(tokens):
                raise ModelError(f"malformed row {body.strip()!r}")
            sense, rhs = Sense(token), Fraction(tokens[index + 1])
            break
        if token in ("+", "-"):
            sign = -1 if token == "-" else 1
        elif _is_number(token):
            coef = Fraction(token)
        else:
            terms.append((token, sign * (coef if coef is not None else 1)))
            sign, coef = 1, None
        index += 1
    if allow_sense and sense is None:
        raise ModelError(f"row without a sense: {body.strip()!r}")
    return terms, sense, rhs


def _is_number(token: str) -> bool:
    try:
        Fraction(token)
    except ValueError:
        return False
    return True
