"""Arithmetic on weak combinatorics of quartic-plus-line arrangements.

All quantities are exact (ints and Fractions).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, floor
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .arrangement import IncidenceStructure
from .errors import HyperflexRangeError, UnboundedSystemError, UnsupportedSingularityError
from .llogger import setup_logger
from .tangency import SingularityProfile

logger = setup_logger(__name__)


class WeakCombinatorics(BaseModel):
    """k quartics, d lines and the singularity counts of their union"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    k: int = Field(ge=0)
    d: int = Field(ge=0)
    n2: int = Field(0, ge=0)
    n3: int = Field(0, ge=0)
    n4: int = Field(0, ge=0)
    t2: int = Field(0, ge=0)
    t5: int = Field(0, ge=0)
    d6: int = Field(0, ge=0)
    t7: int = Field(0, ge=0)

    @property
    def m(self) -> int:
        return 4 * self.k + self.d


@dataclass(frozen=True)
class CountResult:
    lhs: int
    rhs: int

    @property
    def residual(self) -> int:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.residual == 0

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "residual": self.residual, "holds": self.holds}


def count_check(wc: WeakCombinatorics) -> CountResult:
    """16 C(k,2) + 4kd + C(d,2) against the weighted singularity count."""
    lhs = 16 * comb(wc.k, 2) + 4 * wc.k * wc.d + comb(wc.d, 2)
    rhs = (wc.n2 + 2 * wc.t2 + 3 * wc.n3 + 3 * wc.t5
           + 4 * wc.d6 + 4 * wc.t7 + 6 * wc.n4)
    return CountResult(lhs, rhs)


class HirzebruchStatus:
    HOLDS = "holds"
    FAILS = "fails"
    HYPOTHESIS_VIOLATED = "hypothesis-violated"


@dataclass(frozen=True)
class HirzebruchResult:
    status: str
    lhs: Optional[Fraction] = None
    rhs: Optional[Fraction] = None
    violations: Tuple[str, ...] = ()

    @property
    def slack(self) -> Optional[Fraction]:
        if self.lhs is None:
            return None
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.status == HirzebruchStatus.HOLDS

    def to_dict(self) -> dict:
        def text(q):
            return None if q is None else str(q)
        return {
            "status": self.status,
            "lhs": text(self.lhs),
            "rhs": text(self.rhs),
            "slack": text(self.slack),
            "violations": list(self.violations),
        }


def hirzebruch_check(wc: WeakCombinatorics) -> HirzebruchResult:
    """56k + n2 + 3/4 n3 >= d + 13/8 d6 + 5/2 t2 + 5 t5 + 29/4 t7.

    Only claimed for k >= 1, d >= 1 and 4k + d >= 6; otherwise the status is
    hypothesis-violated and nothing is evaluated.
    """
    violations = []
    if wc.k < 1:
        violations.append("k >= 1")
    if wc.d < 1:
        violations.append("d >= 1")
    if wc.m < 6:
        violations.append("4k + d >= 6")
    if violations:
        logger.info(f"hirzebruch: hypotheses violated ({', '.join(violations)})")
        return HirzebruchResult(HirzebruchStatus.HYPOTHESIS_VIOLATED, violations=tuple(violations))
    lhs = 56 * wc.k + wc.n2 + Fraction(3, 4) * wc.n3
    rhs = (wc.d + Fraction(13, 8) * wc.d6 + Fraction(5, 2) * wc.t2
           + 5 * wc.t5 + Fraction(29, 4) * wc.t7)
    status = HirzebruchStatus.HOLDS if lhs >= rhs else HirzebruchStatus.FAILS
    return HirzebruchResult(status, Fraction(lhs), Fraction(rhs))


@dataclass(frozen=True)
class LangerResult:
    value: Fraction
    bound: Fraction

    @property
    def feasible(self) -> bool:
        return self.value <= self.bound

    def to_dict(self) -> dict:
        return {"value": str(self.value), "bound": str(self.bound), "feasible": self.feasible}


def langer_lhs_bound(wc: WeakCombinatorics) -> LangerResult:
    """Lower bound of the local orbifold sum, against (5m^2 - 6m)/4."""
    value = (Fraction(9, 4) * wc.n2 + Fraction(45, 8) * wc.t2 + Fraction(117, 16) * wc.n3
             + Fraction(35, 4) * wc.t5 + Fraction(333, 32) * wc.d6
             + Fraction(189, 16) * wc.t7 + 15 * wc.n4)
    m = wc.m
    return LangerResult(Fraction(value), Fraction(5 * m * m - 6 * m, 4))


# ----------------------------------------------------------------------------
# bitangent arrangements: one smooth quartic and its 28 bitangents


@dataclass(frozen=True)
class QuadrupleChain:
    h: int
    t2: int
    t7: int
    constant: Fraction  # 28 + 5/2 t2 + 29/4 t7 = 168 + 9/4 h
    n2_n3_lower: int
    n4_cap: int

    def to_dict(self) -> dict:
        return {"h": self.h, "t2": self.t2, "t7": self.t7, "constant": str(self.constant),
                "n2_n3_lower": self.n2_n3_lower, "n4_cap": self.n4_cap}


def quadruple_bound_chain(h: int) -> QuadrupleChain:
    if not 0 <= h <= 12:
        raise HyperflexRangeError(f"hyperflex count must lie in 0..12, got {h}")
    t2, t7 = 56 - 2 * h, h
    constant = 28 + Fraction(5, 2) * t2 + Fraction(29, 4) * t7
    # 56 + n2 + 3/4 n3 >= constant, and n2 + n3 >= n2 + 3/4 n3
    lower = ceil(constant - 56)
    # n2 + 3 n3 + 6 n4 = C(28, 2) once the tangency terms are removed
    n4_cap = floor(Fraction(comb(28, 2) - lower, 6))
    return QuadrupleChain(h, t2, t7, constant, lower, n4_cap)


def quadruple_bound(h: int) -> int:
    return quadruple_bound_chain(h).n4_cap


def free_tjurina_target(d: int, d1: int) -> int:
    """(d-1)^2 - d1(d-d1-1): tau of a free curve with exponent d1."""
    return (d - 1) ** 2 - d1 * (d - d1 - 1)


def du_plessis_wall_bounds(d: int, r: int) -> Tuple[Optional[int], int]:
    """(lower, upper) range of tau for a reduced curve of degree d with mdr r."""
    if 2 * r <= d - 1:
        return (d - 1) * (d - r - 1), free_tjurina_target(d, r)
    return None, (d - 1) * (d - r - 1) + r * r - comb(2 * r + 2 - d, 2)


def weak_combinatorics_from_profile(profile: SingularityProfile, k: int, d: int) -> WeakCombinatorics:
    return WeakCombinatorics(
        k=k, d=d,
        n2=profile.n2, n3=profile.n3, n4=profile.n4,
        t2=profile.t2, t5=profile.t5, d6=profile.d6, t7=profile.t7,
    )


def weak_combinatorics_from_bitangents(inc: IncidenceStructure, h: int) -> WeakCombinatorics:
    """One quartic and its bitangents: line crossings plus the tangency census."""
    beyond = {k: v for k, v in inc.t_vector.items() if k > 4}
    if beyond:
        raise UnsupportedSingularityError(f"points of multiplicity {sorted(beyond)} among the lines")
    if not 0 <= h <= 12:
        raise HyperflexRangeError(f"hyperflex count must lie in 0..12, got {h}")
    return WeakCombinatorics(
        k=1, d=inc.n_lines,
        n2=inc.t(2), n3=inc.t(3), n4=inc.t(4),
        t2=56 - 2 * h, t7=h,
    )


# ----------------------------------------------------------------------------
# linear Diophantine systems over non-negative integers


class Equation(BaseModel):
    coeffs: List[int]
    rhs: int


class DiophantineSystem(BaseModel):
    unknowns: List[str]
    equations: List[Equation]

    @model_validator(mode="after")
    def check_shape(self):
        if len(set(self.unknowns)) != len(self.unknowns):
            raise ValueError("unknown names must be distinct")
        for i, eq in enumerate(self.equations):
            if len(eq.coeffs) != len(self.unknowns):
                raise ValueError(
                    f"equation {i + 1} has {len(eq.coeffs)} coefficients for "
                    f"{len(self.unknowns)} unknowns"
                )
        return self

    def bounds(self) -> List[int]:
        """Upper bound per unknown from equations with non-negative coefficients."""
        out = []
        for i, name in enumerate(self.unknowns):
            best = None
            for eq in self.equations:
                if eq.rhs >= 0 and eq.coeffs[i] > 0 and min(eq.coeffs) >= 0:
                    b = eq.rhs // eq.coeffs[i]
                    best = b if best is None else min(best, b)
            if best is None:
                logger.error(f"no bound for unknown {name}")
                raise UnboundedSystemError(f"unknown {name!r} is not bounded by any equation")
            out.append(best)
        return out


def enumerate_nonneg(system: DiophantineSystem) -> List[Dict[str, int]]:
    """Every non-negative integer solution, in lexicographic order."""
    bounds = system.bounds()
    n = len(system.unknowns)
    eqs = [(list(eq.coeffs), eq.rhs) for eq in system.equations]
    capped = [i for i, (c, r) in enumerate(eqs) if min(c, default=0) >= 0]
    solutions: List[Dict[str, int]] = []
    values = [0] * n
    partial = [0] * len(eqs)

    def search(pos: int):
        if pos == n:
            if all(partial[j] == eqs[j][1] for j in range(len(eqs))):
                solutions.append(dict(zip(system.unknowns, values)))
            return
        for v in range(bounds[pos] + 1):
            for j, (c, _) in enumerate(eqs):
                partial[j] += c[pos] * v
            if all(partial[j] <= eqs[j][1] for j in capped):
                values[pos] = v
                search(pos + 1)
            for j, (c, _) in enumerate(eqs):
                partial[j] -= c[pos] * v
            if any(partial[j] + eqs[j][0][pos] * (v + 1) > eqs[j][1]
                   for j in capped if eqs[j][0][pos] > 0):
                break

    search(0)
    logger.info(f"diophantine: {len(solutions)} solution(s) within bounds {bounds}")
    return solutions


def two_lines_system() -> DiophantineSystem:
    """Weighted count and free Tjurina target for a smooth quartic plus two lines."""
    return DiophantineSystem(
        unknowns=["n2", "t2", "n3", "t5", "d6", "t7"],
        equations=[
            Equation(coeffs=[1, 2, 3, 3, 4, 4], rhs=9),
            Equation(coeffs=[1, 3, 4, 5, 6, 7], rhs=19),
        ],
    )


@dataclass
class DiophantineReport:
    system: DiophantineSystem
    solutions: List[Dict[str, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "unknowns": self.system.unknowns,
            "bounds": self.system.bounds(),
            "solutions": self.solutions,
            "count": len(self.solutions),
        }
