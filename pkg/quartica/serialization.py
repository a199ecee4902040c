"""JSON models for curves, lines, weak combinatorics and run reports.

Rationals travel as strings "p/q" or "p" (plain ints are accepted on
input). A field element is either one rational or the list of its
power-basis coordinates.
"""

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from .arrangement import ProjLine
from .errors import FieldMismatchError, InputError
from .numberfield import FieldElement, NumberField, format_rational, parse_rational
from .polyring import HomPoly, polynomial_product

ElementJSON = Union[int, str, List[Union[int, str]]]


def parse_element(nf: NumberField, value: ElementJSON) -> FieldElement:
    if isinstance(value, list):
        return nf.element([parse_rational(v) for v in value])
    return nf.from_rational(parse_rational(value))


def dump_element(value: FieldElement) -> Union[str, List[str]]:
    if value.is_rational():
        return format_rational(value.coeffs[0])
    return value.to_json()


class FieldModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    min_poly: List[Union[int, str]] = Field(default_factory=lambda: ["0", "1"])
    label: str = "Q"
    root_index: int = 0
    symbol: str = "a"

    def to_field(self) -> NumberField:
        return NumberField(
            tuple(parse_rational(c) for c in self.min_poly),
            label=self.label,
            root_index=self.root_index,
            symbol=self.symbol,
        )

    @classmethod
    def from_field(cls, nf: NumberField) -> "FieldModel":
        return cls(
            min_poly=[format_rational(c) for c in nf.min_poly],
            label=nf.label,
            root_index=nf.root_index,
            symbol=nf.symbol,
        )


class TermModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    exp: Tuple[int, int, int]
    coeff: ElementJSON


class PolynomialModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    degree: int = Field(ge=0)
    terms: List[TermModel]

    def to_hompoly(self, nf: NumberField) -> HomPoly:
        terms: Dict[Tuple[int, int, int], FieldElement] = {}
        for t in self.terms:
            value = parse_element(nf, t.coeff)
            terms[t.exp] = terms[t.exp] + value if t.exp in terms else value
        try:
            return HomPoly(nf, self.degree, terms)
        except ValueError as exc:
            raise InputError(str(exc)) from exc

    @classmethod
    def from_hompoly(cls, f: HomPoly) -> "PolynomialModel":
        return cls(
            degree=f.degree,
            terms=[TermModel(exp=e, coeff=dump_element(c)) for e, c in f.sorted_terms()],
        )


class LineModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coords: Tuple[ElementJSON, ElementJSON, ElementJSON]
    label: Optional[str] = None

    def to_line(self, nf: NumberField) -> ProjLine:
        return ProjLine(tuple(parse_element(nf, c) for c in self.coords))

    @classmethod
    def from_line(cls, line: ProjLine, label: Optional[str] = None) -> "LineModel":
        return cls(coords=tuple(dump_element(c) for c in line.coords), label=label)


@dataclass
class CurveSpec:
    """A reduced curve: an optional smooth curve (usually a quartic) and lines"""

    label: str
    field: NumberField
    quartic: Optional[HomPoly] = None
    lines: List[ProjLine] = field(default_factory=list)
    line_labels: Optional[List[str]] = None

    def __post_init__(self):
        if self.quartic is not None and self.quartic.field != self.field:
            raise FieldMismatchError(f"{self.label}: curve coefficients outside {self.field.label}")
        for line in self.lines:
            if line.field != self.field:
                raise FieldMismatchError(f"{self.label}: line {line} outside {self.field.label}")
        if self.line_labels is not None and len(self.line_labels) != len(self.lines):
            raise InputError(f"{self.label}: one label per line required")

    @property
    def degree(self) -> int:
        return (self.quartic.degree if self.quartic is not None else 0) + len(self.lines)

    def labels(self) -> List[str]:
        return self.line_labels or [f"l{i + 1}" for i in range(len(self.lines))]

    def polynomial(self) -> HomPoly:
        """Defining form of the union curve."""
        factors = [] if self.quartic is None else [self.quartic]
        factors += [line.linear_form() for line in self.lines]
        if not factors:
            raise InputError(f"{self.label}: empty curve")
        return polynomial_product(factors)


class CurveSpecModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str = "input"
    field: FieldModel = Field(default_factory=FieldModel)
    quartic: Optional[PolynomialModel] = None
    lines: List[LineModel] = Field(default_factory=list)

    def to_curve_spec(self) -> CurveSpec:
        nf = self.field.to_field()
        labels = [ln.label for ln in self.lines]
        return CurveSpec(
            label=self.label,
            field=nf,
            quartic=self.quartic.to_hompoly(nf) if self.quartic is not None else None,
            lines=[ln.to_line(nf) for ln in self.lines],
            line_labels=labels if all(labels) and labels else None,
        )

    @classmethod
    def from_curve_spec(cls, spec: CurveSpec) -> "CurveSpecModel":
        labels = spec.line_labels or [None] * len(spec.lines)
        return cls(
            label=spec.label,
            field=FieldModel.from_field(spec.field),
            quartic=PolynomialModel.from_hompoly(spec.quartic) if spec.quartic is not None else None,
            lines=[LineModel.from_line(ln, lb) for ln, lb in zip(spec.lines, labels)],
        )


def load_json(text: str, source: str = "input") -> Any:
    """json.loads with decode errors turned into InputError naming line and column."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def parse_curve_json(text: str, source: str = "input") -> CurveSpec:
    return CurveSpecModel.model_validate(load_json(text, source)).to_curve_spec()


def parse_lines_json(text: str, nf: Optional[NumberField] = None) -> List[ProjLine]:
    """A JSON list of coordinate triples, e.g. '[[1, 0, "-1/2"], [0, 1, 1]]'."""
    nf = nf or NumberField.rationals()
    data = load_json(text, "--lines")
    if not isinstance(data, list):
        raise InputError("--lines expects a JSON list of coordinate triples")
    lines = []
    for i, item in enumerate(data):
        if not isinstance(item, list) or len(item) != 3:
            raise InputError(f"--lines entry {i + 1} is not a coordinate triple")
        lines.append(LineModel(coords=tuple(item)).to_line(nf))
    return lines


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), default=_default)


def _default(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, FieldElement):
        return dump_element(value)
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def digest(payload: Any) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()[:16]


class RunReport(BaseModel):
    """Result of one CLI command"""

    command: str
    inputs_digest: str
    passed: bool = True
    results: Dict[str, Any] = Field(default_factory=dict)
    messages: List[str] = Field(default_factory=list)
    timing: Optional[Dict[str, float]] = None

    def to_json(self) -> str:
        return json.dumps(self.model_dump(exclude_none=True), sort_keys=True, indent=2,
                          default=_default)
