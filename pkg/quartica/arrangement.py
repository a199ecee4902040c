"""Projective lines and points over a number field and the incidence
structure of a line arrangement.

Lines and points are canonically scaled (first nonzero coordinate 1), so
exact equality is projective equality.
"""

import csv
import io
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CheckFailure, DuplicateLineError, SameLineError, ZeroFormError
from .llogger import setup_logger
from .numberfield import FieldElement, NumberField
from .polyring import HomPoly

logger = setup_logger(__name__)


def canonical_triple(coords: Sequence[FieldElement]) -> Tuple[FieldElement, FieldElement, FieldElement]:
    coords = tuple(coords)
    if len(coords) != 3:
        raise ValueError(f"expected three coordinates, got {len(coords)}")
    for c in coords:
        if not c.is_zero():
            inv = c.inv()
            return tuple(x * inv for x in coords)
    raise ZeroFormError("all three coordinates are zero")


@dataclass(frozen=True)
class _Projective:
    coords: Tuple[FieldElement, FieldElement, FieldElement]

    def __post_init__(self):
        object.__setattr__(self, "coords", canonical_triple(self.coords))

    @classmethod
    def of(cls, nf: NumberField, values: Sequence):
        return cls(tuple(nf(v) for v in values))

    @property
    def field(self) -> NumberField:
        return self.coords[0].field

    def sort_key(self) -> tuple:
        return tuple(c.coeffs for c in self.coords)

    def to_json(self) -> List[List[str]]:
        return [c.to_json() for c in self.coords]


@dataclass(frozen=True)
class ProjLine(_Projective):
    """Line uX + vY + wZ = 0"""

    def linear_form(self) -> HomPoly:
        return HomPoly.from_linear(self.field, self.coords)

    def contains(self, point: "ProjPoint") -> bool:
        return sum((a * b for a, b in zip(self.coords, point.coords)), self.field.zero()).is_zero()

    def __str__(self) -> str:
        return str(self.linear_form())


@dataclass(frozen=True)
class ProjPoint(_Projective):
    """Point (X : Y : Z)"""

    def __str__(self) -> str:
        return "(" + " : ".join(str(c) for c in self.coords) + ")"


def intersect(l1: ProjLine, l2: ProjLine) -> ProjPoint:
    """Cross product of the two coordinate triples."""
    (a1, b1, c1), (a2, b2, c2) = l1.coords, l2.coords
    cross = (b1 * c2 - c1 * b2, c1 * a2 - a1 * c2, a1 * b2 - b1 * a2)
    if all(c.is_zero() for c in cross):
        raise SameLineError(f"{l1} and {l2} are the same line")
    return ProjPoint(cross)


def lines_through(point: ProjPoint, lines: Sequence[ProjLine]) -> List[int]:
    return [i for i, line in enumerate(lines) if line.contains(point)]


@dataclass(frozen=True)
class IncidencePoint:
    point: ProjPoint
    multiplicity: int
    lines: Tuple[int, ...]


@dataclass(frozen=True)
class IncidenceStructure:
    """Singular points of a line arrangement with their multiplicities"""

    n_lines: int
    points: Tuple[IncidencePoint, ...]
    t_vector: Dict[int, int] = field(default_factory=dict)

    def t(self, k: int) -> int:
        return self.t_vector.get(k, 0)

    def points_of_multiplicity(self, k: Optional[int] = None, at_least: int = 3) -> List[IncidencePoint]:
        if k is not None:
            return [p for p in self.points if p.multiplicity == k]
        return [p for p in self.points if p.multiplicity >= at_least]


def _check_distinct(lines: Sequence[ProjLine]):
    seen: Dict[ProjLine, int] = {}
    for i, line in enumerate(lines):
        if line in seen:
            logger.error(f"duplicate line: {line} at positions {seen[line]} and {i}")
            raise DuplicateLineError(seen[line], i)
        seen[line] = i


def incidence(lines: Sequence[ProjLine], threads: int = 1) -> IncidenceStructure:
    """All pairwise intersections grouped into points with multiplicities."""
    lines = list(lines)
    _check_distinct(lines)
    n = len(lines)
    pairs = list(combinations(range(n), 2))

    def meet(pair):
        i, j = pair
        return intersect(lines[i], lines[j])

    if threads > 1 and len(pairs) > 64:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            meets = list(pool.map(meet, pairs, chunksize=64))
    else:
        meets = [meet(p) for p in pairs]

    groups: Dict[ProjPoint, set] = {}
    for (i, j), point in zip(pairs, meets):
        groups.setdefault(point, set()).update((i, j))

    points = []
    for point in sorted(groups, key=lambda p: p.sort_key()):
        incident = tuple(sorted(groups[point]))
        # substitution recheck: no other input line may pass through the point
        if lines_through(point, lines) != list(incident):
            raise CheckFailure(f"incidence recheck failed at {point}")
        points.append(IncidencePoint(point, len(incident), incident))

    t_vector = dict(sorted(Counter(p.multiplicity for p in points).items()))
    total = sum(comb(p.multiplicity, 2) for p in points)
    if total != comb(n, 2):
        raise CheckFailure(f"counting identity failed: {total} != C({n},2) = {comb(n, 2)}")
    logger.info(f"incidence: {n} lines, t-vector {t_vector}")
    return IncidenceStructure(n, tuple(points), t_vector)


def ordinary_tjurina(inc: IncidenceStructure) -> int:
    """Sum of (m_p - 1)^2 over the points; valid when all points are ordinary."""
    return sum((p.multiplicity - 1) ** 2 for p in inc.points)


# ----------------------------------------------------------------------------


@dataclass
class IncidenceTable:
    """Lines against selected points, "+" where incident"""

    row_labels: List[str]
    column_labels: List[str]
    cells: List[List[bool]]
    points: List[IncidencePoint]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.row_labels), len(self.column_labels)

    def marked(self, row_label: str) -> List[str]:
        row = self.cells[self.row_labels.index(row_label)]
        return [c for c, hit in zip(self.column_labels, row) if hit]

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([""] + self.column_labels)
        for label, row in zip(self.row_labels, self.cells):
            writer.writerow([label] + ["+" if hit else "" for hit in row])
        return out.getvalue()

    def diff(self, other: "IncidenceTable") -> List[str]:
        """Cell-by-cell mismatches against another table with the same labels."""
        problems = []
        if self.row_labels != other.row_labels:
            problems.append(f"row labels differ: {self.row_labels} vs {other.row_labels}")
        if self.column_labels != other.column_labels:
            problems.append(f"column labels differ: {self.column_labels} vs {other.column_labels}")
        if problems:
            return problems
        for r, label in enumerate(self.row_labels):
            for c, col in enumerate(self.column_labels):
                if self.cells[r][c] != other.cells[r][c]:
                    mine = "+" if self.cells[r][c] else "empty"
                    theirs = "+" if other.cells[r][c] else "empty"
                    problems.append(f"{label}/{col}: {mine} vs {theirs}")
        return problems


def incidence_table(
    inc: IncidenceStructure,
    lines: Sequence[ProjLine],
    multiplicity: Optional[int] = None,
    line_labels: Optional[Sequence[str]] = None,
    reference_points: Optional[Sequence[Tuple[str, ProjPoint]]] = None,
) -> IncidenceTable:
    """Rows are lines, columns the points of the given multiplicity (default >= 3).

    With ``reference_points`` the matching columns carry those labels and come
    first in reference order; other columns are labelled X1, X2, ...
    """
    selected = inc.points_of_multiplicity(multiplicity)
    if line_labels is None:
        line_labels = [f"l{i + 1}" for i in range(len(lines))]
    if len(line_labels) != len(lines):
        raise ValueError("one label per line required")

    by_point = {p.point: p for p in selected}
    columns: List[Tuple[str, IncidencePoint]] = []
    if reference_points:
        used = set()
        for label, ref in reference_points:
            hit = by_point.get(ref)
            if hit is not None:
                columns.append((label, hit))
                used.add(ref)
        extra = [p for p in selected if p.point not in used]
        columns.extend((f"X{k + 1}", p) for k, p in enumerate(extra))
    else:
        columns = [(f"P{k + 1}", p) for k, p in enumerate(selected)]

    cells = [[i in p.lines for _, p in columns] for i in range(len(lines))]
    return IncidenceTable(
        row_labels=list(line_labels),
        column_labels=[label for label, _ in columns],
        cells=cells,
        points=[p for _, p in columns],
    )


def parse_table_csv(text: str) -> IncidenceTable:
    """Read a "+"/empty CSV table back (points are not recoverable)."""
    reader = list(csv.reader(io.StringIO(text)))
    if not reader:
        return IncidenceTable([], [], [], [])
    header = reader[0][1:]
    rows = [r for r in reader[1:] if r]
    return IncidenceTable(
        row_labels=[r[0] for r in rows],
        column_labels=header,
        cells=[[cell.strip() == "+" for cell in r[1:]] for r in rows],
        points=[],
    )
