"""How lines meet a smooth curve, bitangent verification, and the local
singularity types of a curve-plus-lines arrangement.

Supported local types (all quasi-homogeneous, Tjurina = Milnor number):
A1 (1), A3 (3), A5 (5), A7 (7), D4 (4), D6 (6), X9 (9).
"""

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .arrangement import ProjLine, ProjPoint, incidence
from .errors import (
    CheckFailure,
    DuplicateLineError,
    InputError,
    NonReducedError,
    UnsupportedSingularityError,
)
from .llogger import setup_logger
from .polyring import (
    BinaryForm,
    HomPoly,
    MultiplicityPattern,
    line_parameter,
    restrict_to_line,
    root_multiplicity,
    squarefree_pattern,
)

logger = setup_logger(__name__)


class TangencyLabel:
    """Contact labels of a line against a quartic"""
    TRANSVERSE = "transverse"
    SIMPLE_TANGENT = "simple-tangent"
    BITANGENT = "bitangent"
    FLEX = "flex"
    HYPEROSCULATING = "hyperosculating"
    COMPONENT = "component"
    OTHER = "other"


PATTERN_LABELS = {
    "1111": TangencyLabel.TRANSVERSE,
    "211": TangencyLabel.SIMPLE_TANGENT,
    "22": TangencyLabel.BITANGENT,
    "31": TangencyLabel.FLEX,
    "4": TangencyLabel.HYPEROSCULATING,
}

LOCAL_TJURINA = {"A1": 1, "A3": 3, "A5": 5, "A7": 7, "D4": 4, "D6": 6, "X9": 9}

# contact order m of a line with a smooth branch gives A_(2m-1)
CONTACT_TYPES = {1: "A1", 2: "A3", 3: "A5", 4: "A7"}


@dataclass(frozen=True)
class TangencyClass:
    pattern: Optional[MultiplicityPattern]
    label: str

    @property
    def is_bitangent(self) -> bool:
        return self.label in (TangencyLabel.BITANGENT, TangencyLabel.HYPEROSCULATING)

    def to_dict(self) -> dict:
        return {"label": self.label, "pattern": self.pattern.label if self.pattern else None}


def classify_line(Q: HomPoly, line: ProjLine) -> TangencyClass:
    """Restrict, take the multiplicity pattern, map to a label."""
    b = restrict_to_line(Q, line)
    if b.is_zero():
        return TangencyClass(None, TangencyLabel.COMPONENT)
    pattern = squarefree_pattern(b)
    return TangencyClass(pattern, PATTERN_LABELS.get(pattern.label, TangencyLabel.OTHER))


# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SingularityProfile:
    """Counts of each supported local type"""

    n2: int = 0  # A1 nodes
    t2: int = 0  # A3 tacnodes
    t5: int = 0  # A5
    t7: int = 0  # A7
    n3: int = 0  # D4 ordinary triple points
    d6: int = 0  # D6
    n4: int = 0  # X9 ordinary quadruple points

    _FIELDS = {"A1": "n2", "A3": "t2", "A5": "t5", "A7": "t7", "D4": "n3", "D6": "d6", "X9": "n4"}

    def __post_init__(self):
        for name in ("n2", "t2", "t5", "t7", "n3", "d6", "n4"):
            if getattr(self, name) < 0:
                raise ValueError(f"negative count {name}")

    @classmethod
    def from_types(cls, types: Sequence[str]) -> "SingularityProfile":
        counts = Counter(types)
        unknown = set(counts) - set(cls._FIELDS)
        if unknown:
            raise UnsupportedSingularityError(f"unknown local types {sorted(unknown)}")
        return cls(**{cls._FIELDS[k]: v for k, v in counts.items()})

    @property
    def tau(self) -> int:
        return (self.n2 + 3 * self.t2 + 5 * self.t5 + 7 * self.t7
                + 4 * self.n3 + 6 * self.d6 + 9 * self.n4)

    def to_dict(self) -> Dict[str, int]:
        return {"n2": self.n2, "t2": self.t2, "t5": self.t5, "t7": self.t7,
                "n3": self.n3, "d6": self.d6, "n4": self.n4}


@dataclass(frozen=True)
class LocalSite:
    """One singular point of the arrangement.

    ``point`` is None for tangency points that are only known as roots of a
    line's restriction (not located over the base field).
    """

    point: Optional[ProjPoint]
    lines: Tuple[int, ...]
    on_quartic: bool
    contacts: Tuple[int, ...] = ()
    kind: str = ""

    @property
    def tjurina(self) -> int:
        return LOCAL_TJURINA[self.kind]

    def to_dict(self) -> dict:
        return {
            "point": self.point.to_json() if self.point is not None else None,
            "lines": list(self.lines),
            "on_quartic": self.on_quartic,
            "contacts": list(self.contacts),
            "type": self.kind,
        }


def _restrictions(Q: HomPoly, lines: Sequence[ProjLine], threads: int) -> List[BinaryForm]:
    if threads > 1 and len(lines) > 4:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda ln: restrict_to_line(Q, ln), lines))
    return [restrict_to_line(Q, ln) for ln in lines]


def locate_sites(Q: Optional[HomPoly], lines: Sequence[ProjLine], threads: int = 1) -> List[LocalSite]:
    """Every singular point of V(Q * prod lines) with its local type."""
    lines = list(lines)
    try:
        inc = incidence(lines, threads=threads)
    except DuplicateLineError as exc:
        raise NonReducedError(f"repeated line component: {exc}") from exc

    forms: List[Optional[BinaryForm]] = [None] * len(lines)
    patterns: List[Optional[MultiplicityPattern]] = [None] * len(lines)
    if Q is not None:
        forms = _restrictions(Q, lines, threads)
        for i, b in enumerate(forms):
            if b.is_zero():
                raise NonReducedError(f"line {i + 1} ({lines[i]}) is a component of the curve")
            patterns[i] = squarefree_pattern(b)

    sites: List[LocalSite] = []
    consumed: List[List[int]] = [[] for _ in lines]

    for ip in inc.points:
        k = ip.multiplicity
        on_q = Q is not None and Q.evaluate(ip.point.coords).is_zero()
        if not on_q:
            kind = {2: "A1", 3: "D4", 4: "X9"}.get(k)
            if kind is None:
                logger.error(f"{k} concurrent lines at {ip.point}")
                raise UnsupportedSingularityError(
                    f"{k} concurrent lines at {ip.point}: ordinary {k}-fold point not supported",
                    point=ip.point,
                )
            sites.append(LocalSite(ip.point, ip.lines, False, (), kind))
            continue
        if k != 2:
            raise UnsupportedSingularityError(
                f"{k} lines meet on the curve at {ip.point}", point=ip.point
            )
        contacts = []
        for i in ip.lines:
            s0, t0 = line_parameter(lines[i], ip.point.coords)
            contacts.append(root_multiplicity(forms[i], s0, t0))
        shape = tuple(sorted(contacts, reverse=True))
        kind = {(1, 1): "D4", (2, 1): "D6"}.get(shape)
        if kind is None:
            raise UnsupportedSingularityError(
                f"lines {[i + 1 for i in ip.lines]} meet the curve at {ip.point} "
                f"with contact orders {contacts}",
                point=ip.point,
            )
        for i, c in zip(ip.lines, contacts):
            consumed[i].append(c)
        sites.append(LocalSite(ip.point, ip.lines, True, tuple(contacts), kind))

    for i, pattern in enumerate(patterns):
        if pattern is None:
            continue
        rest = pattern
        for c in consumed[i]:
            if c not in rest.parts:
                raise CheckFailure(
                    f"line {i + 1}: contact {c} at a crossing is missing from pattern {pattern}"
                )
            rest = rest.without(c)
        for m in rest.parts:
            kind = CONTACT_TYPES.get(m)
            if kind is None:
                raise UnsupportedSingularityError(f"line {i + 1} has contact order {m}")
            sites.append(LocalSite(None, (i,), True, (m,), kind))
    return sites


def classify_arrangement(Q: Optional[HomPoly], lines: Sequence[ProjLine], threads: int = 1) -> SingularityProfile:
    """Singularity profile of the union of Q (optional) and the lines."""
    sites = locate_sites(Q, lines, threads=threads)
    profile = SingularityProfile.from_types([s.kind for s in sites])
    logger.info(f"arrangement profile {profile.to_dict()} tau={profile.tau}")
    return profile


# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class BitangentReport:
    per_line: Tuple[TangencyClass, ...]
    failures: Tuple[Tuple[int, str], ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.failures and len(self.per_line) == 28

    @property
    def bitangent_count(self) -> int:
        return sum(1 for c in self.per_line if c.label == TangencyLabel.BITANGENT)

    @property
    def h(self) -> int:
        return sum(1 for c in self.per_line if c.label == TangencyLabel.HYPEROSCULATING)

    def census(self) -> Tuple[int, int]:
        """Expected (tacnodes, A7 points) of the curve plus its bitangents."""
        return 56 - 2 * self.h, self.h

    def to_dict(self) -> dict:
        return {
            "per_line": [{"line": i + 1, **c.to_dict()} for i, c in enumerate(self.per_line)],
            "bitangents": self.bitangent_count,
            "h": self.h,
            "failures": [{"line": i + 1, "pattern": p} for i, p in self.failures],
            "passed": self.passed,
        }


def verify_bitangent_set(Q: HomPoly, lines: Sequence[ProjLine], threads: int = 1) -> BitangentReport:
    """Check that every one of the 28 lines is a bitangent (hyperflex lines included)."""
    lines = list(lines)
    if len(lines) != 28:
        raise InputError(f"expected 28 lines, got {len(lines)}")
    if len(set(lines)) != len(lines):
        raise InputError("bitangent set contains a repeated line")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            classes = list(pool.map(lambda ln: classify_line(Q, ln), lines))
    else:
        classes = [classify_line(Q, ln) for ln in lines]
    failures = tuple(
        (i, c.pattern.label if c.pattern else c.label)
        for i, c in enumerate(classes)
        if not c.is_bitangent
    )
    for i, p in failures:
        logger.warning(f"line {i + 1} is not a bitangent (pattern {p})")
    report = BitangentReport(tuple(classes), failures)
    logger.info(f"bitangent check: {report.bitangent_count} + {report.h} hyperflex lines")
    return report
