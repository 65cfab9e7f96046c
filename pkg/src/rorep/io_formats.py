"""File formats: performance CSV, preference DSL, result documents.

The JSON result schema is a fixed field-name contract (see README); the
markdown form mirrors the relation-matrix and marginal-table layouts used
for human review. Criteria are echoed gain-oriented with their original
direction flag.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass

from .engine import RelationBundle
from .model import DomainError, PreferenceStatement, Problem, ValueFunction, build_problem
from .representatives import DiscriminantSet, MinimalityResult, SufficientSet


class ParseError(ValueError):
    """Malformed input with a 1-based position."""

    def __init__(self, message: str, line: int, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(f"{message} ({where})")


@dataclass(frozen=True)
class RawTable:
    alternatives: tuple[str, ...]
    criteria: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]
    directions: tuple[str, ...]


_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def parse_performance_csv(text: str) -> RawTable:
    """Header ``alternative,<crit>,...``, optional direction row, dot-decimal cells."""
    reader = csv.reader(io.StringIO(text))
    records = [(lineno, row) for lineno, row in enumerate(reader, start=1) if row]
    if not records:
        raise ParseError("empty table", 1)

    header_line, header = records[0]
    if not header or header[0].strip() != "alternative":
        raise ParseError("header must start with 'alternative'", header_line, 1)
    criteria = tuple(cell.strip() for cell in header[1:])
    if not criteria or any(not c for c in criteria):
        raise ParseError("header must name at least one criterion", header_line)
    if len(set(criteria)) != len(criteria):
        raise ParseError("duplicate criterion name in header", header_line)

    body = records[1:]
    directions = tuple("gain" for _ in criteria)
    if body:
        _, first = body[0]
        cells = [c.strip() for c in first[1:]]
        if cells and all(c in ("gain", "cost") for c in cells):
            if len(cells) != len(criteria):
                raise ParseError("direction row width does not match header", body[0][0])
            directions = tuple(cells)
            body = body[1:]

    alternatives: list[str] = []
    rows: list[tuple[float, ...]] = []
    seen = set()
    for lineno, row in body:
        if len(row) != len(criteria) + 1:
            raise ParseError(
                f"expected {len(criteria) + 1} cells, found {len(row)}", lineno
            )
        alt = row[0].strip()
        if not alt:
            raise ParseError("empty alternative id", lineno, 1)
        if alt in seen:
            raise ParseError(f"duplicate alternative id {alt!r}", lineno, 1)
        seen.add(alt)
        values = []
        for col, cell in enumerate(row[1:], start=2):
            s = cell.strip()
            if not _NUMBER.match(s):
                raise ParseError(f"not a number: {s!r}", lineno, col)
            v = float(s)
            if not math.isfinite(v):
                raise ParseError(f"non-finite score {s!r}", lineno, col)
            values.append(v)
        alternatives.append(alt)
        rows.append(tuple(values))
    if not rows:
        raise ParseError("table has no data rows", records[-1][0])
    return RawTable(tuple(alternatives), criteria, tuple(rows), directions)


def problem_from_raw(raw: RawTable) -> Problem:
    return build_problem(
        list(raw.alternatives),
        list(raw.criteria),
        [list(r) for r in raw.rows],
        list(raw.directions),
    )


_STATEMENT = re.compile(r"^([\w.-]+)\s*([>=])\s*([\w.-]+)$")


def parse_preferences(text: str) -> list[PreferenceStatement]:
    """One statement per line: ``a > b`` (strict) or ``a = b`` (indifference)."""
    statements = []
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        m = _STATEMENT.match(line)
        if not m:
            raise ParseError(f"cannot parse statement {line!r}", lineno)
        a, op, b = m.groups()
        kind = "strict" if op == ">" else "indifference"
        try:
            statements.append(PreferenceStatement(kind=kind, a=a, b=b))
        except DomainError as exc:
            raise ParseError(str(exc), lineno) from None
    return statements


# --- result documents -------------------------------------------------------

CODE_NECESSARY = "N"
CODE_STRICT = "S"
CODE_INCOMPARABLE = "I"


@dataclass(frozen=True)
class CriterionEcho:
    id: str
    direction: str
    alpha: float
    beta: float
    points: tuple[float, ...]


@dataclass(frozen=True)
class RelationsSection:
    necessary: tuple[tuple[str, ...], ...]
    strict: tuple[tuple[str, ...], ...]
    incomparable: tuple[tuple[str, ...], ...]
    d_pairs: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class FunctionTable:
    label: str
    marginals: tuple[tuple[str, tuple[tuple[float, float], ...]], ...]


@dataclass(frozen=True)
class SufficientSection:
    r: int
    iteration_log: tuple[int, ...]


@dataclass(frozen=True)
class MinimalitySection:
    t: int
    z_star: int


@dataclass(frozen=True)
class DiscriminantSection:
    epsilon_star: float
    functions: tuple[FunctionTable, ...]
    coverage: tuple[tuple[str, str, tuple[str, ...]], ...]


@dataclass(frozen=True)
class ResultDocument:
    version: str
    eps_fixed: float
    big_m: float
    alternatives: tuple[str, ...]
    criteria: tuple[CriterionEcho, ...]
    relations: RelationsSection | None = None
    sufficient: SufficientSection | None = None
    minimality: MinimalitySection | None = None
    discriminant: DiscriminantSection | None = None


def function_table(problem: Problem, func: ValueFunction) -> FunctionTable:
    marginals = tuple(
        (crit.id, tuple(zip(crit.points, func.values[crit.id])))
        for crit in problem.criteria
    )
    return FunctionTable(label=func.label, marginals=marginals)


def relations_section(bundle: RelationBundle) -> RelationsSection:
    def codes(matrix, code):
        return tuple(
            tuple(code if cell else "" for cell in row) for row in matrix
        )

    return RelationsSection(
        necessary=codes(bundle.necessary, CODE_NECESSARY),
        strict=codes(bundle.strict, CODE_STRICT),
        incomparable=codes(bundle.incomparable, CODE_INCOMPARABLE),
        d_pairs=bundle.d_pairs,
    )


def build_document(
    problem: Problem,
    version: str,
    eps_fixed: float,
    big_m: float,
    relations: RelationBundle | None = None,
    sufficient: SufficientSet | None = None,
    minimality: MinimalityResult | None = None,
    discriminant: DiscriminantSet | None = None,
) -> ResultDocument:
    criteria = tuple(
        CriterionEcho(
            id=c.id,
            direction="cost" if c.cost else "gain",
            alpha=c.alpha,
            beta=c.beta,
            points=c.points,
        )
        for c in problem.criteria
    )
    return ResultDocument(
        version=version,
        eps_fixed=eps_fixed,
        big_m=big_m,
        alternatives=problem.alternatives,
        criteria=criteria,
        relations=relations_section(relations) if relations else None,
        sufficient=SufficientSection(sufficient.r, sufficient.iteration_log)
        if sufficient
        else None,
        minimality=MinimalitySection(minimality.t, minimality.z_star) if minimality else None,
        discriminant=DiscriminantSection(
            epsilon_star=discriminant.epsilon_star,
            functions=tuple(function_table(problem, f) for f in discriminant.functions),
            coverage=tuple(
                (a, b, labels) for (a, b), labels in discriminant.coverage.items()
            ),
        )
        if discriminant
        else None,
    )


def to_json_dict(doc: ResultDocument) -> dict:
    out: dict = {
        "version": doc.version,
        "parameters": {"eps_fixed": doc.eps_fixed, "big_m": doc.big_m},
        "problem": {
            "alternatives": list(doc.alternatives),
            "criteria": [
                {
                    "id": c.id,
                    "direction": c.direction,
                    "alpha": c.alpha,
                    "beta": c.beta,
                    "points": list(c.points),
                }
                for c in doc.criteria
            ],
        },
    }
    if doc.relations is not None:
        out["relations"] = {
            "necessary": [list(r) for r in doc.relations.necessary],
            "strict": [list(r) for r in doc.relations.strict],
            "incomparable": [list(r) for r in doc.relations.incomparable],
            "d_pairs": [[a, b] for a, b in doc.relations.d_pairs],
        }
    if doc.sufficient is not None:
        out["sufficient"] = {
            "r": doc.sufficient.r,
            "iteration_log": list(doc.sufficient.iteration_log),
        }
    if doc.minimality is not None:
        out["minimality"] = {"t": doc.minimality.t, "z_star": doc.minimality.z_star}
    if doc.discriminant is not None:
        out["discriminant"] = {
            "epsilon_star": doc.discriminant.epsilon_star,
            "functions": [
                {
                    "label": f.label,
                    "marginals": {
                        crit: [[x, u] for x, u in pairs] for crit, pairs in f.marginals
                    },
                }
                for f in doc.discriminant.functions
            ],
            "coverage": [
                {"a": a, "b": b, "functions": list(labels)}
                for a, b, labels in doc.discriminant.coverage
            ],
        }
    return out


def from_json_dict(data: dict) -> ResultDocument:
    criteria = tuple(
        CriterionEcho(
            id=c["id"],
            direction=c["direction"],
            alpha=c["alpha"],
            beta=c["beta"],
            points=tuple(c["points"]),
        )
        for c in data["problem"]["criteria"]
    )
    relations = None
    if "relations" in data:
        r = data["relations"]
        relations = RelationsSection(
            necessary=tuple(tuple(row) for row in r["necessary"]),
            strict=tuple(tuple(row) for row in r["strict"]),
            incomparable=tuple(tuple(row) for row in r["incomparable"]),
            d_pairs=tuple((a, b) for a, b in r["d_pairs"]),
        )
    sufficient = None
    if "sufficient" in data:
        sufficient = SufficientSection(
            r=data["sufficient"]["r"],
            iteration_log=tuple(data["sufficient"]["iteration_log"]),
        )
    minimality = None
    if "minimality" in data:
        minimality = MinimalitySection(
            t=data["minimality"]["t"], z_star=data["minimality"]["z_star"]
        )
    discriminant = None
    if "discriminant" in data:
        d = data["discriminant"]
        discriminant = DiscriminantSection(
            epsilon_star=d["epsilon_star"],
            functions=tuple(
                FunctionTable(
                    label=f["label"],
                    marginals=tuple(
                        (crit, tuple((x, u) for x, u in pairs))
                        for crit, pairs in f["marginals"].items()
                    ),
                )
                for f in d["functions"]
            ),
            coverage=tuple(
                (c["a"], c["b"], tuple(c["functions"])) for c in d["coverage"]
            ),
        )
    return ResultDocument(
        version=data["version"],
        eps_fixed=data["parameters"]["eps_fixed"],
        big_m=data["parameters"]["big_m"],
        alternatives=tuple(data["problem"]["alternatives"]),
        criteria=criteria,
        relations=relations,
        sufficient=sufficient,
        minimality=minimality,
        discriminant=discriminant,
    )


def serialize_results(doc: ResultDocument, format: str = "json") -> str:
    if format == "json":
        return json.dumps(to_json_dict(doc), indent=2) + "\n"
    if format == "markdown":
        return render_markdown(doc)
    raise ValueError(f"unknown format {format!r}")


def parse_results(text: str) -> ResultDocument:
    return from_json_dict(json.loads(text))


def _matrix_md(alternatives, matrix, title):
    lines = [f"### {title}", ""]
    lines.append("| | " + " | ".join(alternatives) + " |")
    lines.append("|---" * (len(alternatives) + 1) + "|")
    for name, row in zip(alternatives, matrix):
        lines.append(f"| **{name}** | " + " | ".join(cell or " " for cell in row) + " |")
    lines.append("")
    return lines


def _function_md(table: FunctionTable):
    lines = [f"### Value function {table.label}", ""]
    headers = []
    for crit, _ in table.marginals:
        headers += [crit, f"u({crit})"]
    lines.append("| " + " | ".join(headers) + " |")
    lines.append("|---" * len(headers) + "|")
    depth = max(len(pairs) for _, pairs in table.marginals)
    for k in range(depth):
        cells = []
        for _, pairs in table.marginals:
            if k < len(pairs):
                x, u = pairs[k]
                cells += [f"{x:g}", f"{u:.6g}"]
            else:
                cells += ["", ""]
        lines.append("| " + " | ".join(cells) + " |")
    lines.append("")
    return lines


def render_markdown(doc: ResultDocument) -> str:
    lines = [
        "# Robust ordinal regression results",
        "",
        f"- tool version: {doc.version}",
        f"- eps_fixed: {doc.eps_fixed:g}",
        f"- big_m: {doc.big_m:g}",
        f"- alternatives: {', '.join(doc.alternatives)}",
        "",
    ]
    if doc.relations is not None:
        lines += _matrix_md(doc.alternatives, doc.relations.necessary, "Necessary preference")
        lines += _matrix_md(doc.alternatives, doc.relations.strict, "Strict necessary preference")
        lines += _matrix_md(doc.alternatives, doc.relations.incomparable, "Incomparability")
    if doc.sufficient is not None:
        lines.append(
            f"Sufficient set: {doc.sufficient.r} functions; "
            f"remaining pairs per step: {list(doc.sufficient.iteration_log)}"
        )
        lines.append("")
    if doc.minimality is not None:
        lines.append(
            f"Minimal representative count t = {doc.minimality.t} "
            f"(z* = {doc.minimality.z_star})"
        )
        lines.append("")
    if doc.discriminant is not None:
        lines.append(f"Maximal common margin epsilon* = {doc.discriminant.epsilon_star:.6g}")
        lines.append("")
        for table in doc.discriminant.functions:
            lines += _function_md(table)
    return "\n".join(lines)
