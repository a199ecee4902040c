"""Numeric search for the 28 bitangents of a plane quartic.

In each of three affine charts the candidate lines are Y = m X + c W. With
p(X) = Q(X, m X + c, 1) = sum a_k X^k, the line is a bitangent exactly when
p is a_4 times a perfect square, which is the vanishing of

    E1 = 8 a1 a4^2 - 4 a2 a3 a4 + a3^3                  (cubic in c)
    E2 = 64 a0 a4^3 - (4 a2 a4 - a3^2)^2                (quartic in c)

The slopes m are the roots of Res_c(E1, E2), which is computed exactly by
evaluating 7x7 Sylvester determinants at integer slopes and interpolating.
Everything after that (root finding, the square test) is numeric with mpmath.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .arrangement import ProjLine
from .config import EngineConfig
from .errors import BitangentCountError, InputError, RootFindingError
from .linalg import determinant, solve_square
from .llogger import setup_logger
from .numberfield import FieldElement, NumberField, aberth_roots
from .polyring import HomPoly, UniPoly, monomials

logger = setup_logger(__name__)

Bivariate = Dict[Tuple[int, int], FieldElement]  # (power of m, power of c) -> coeff

CHARTS = (("A", (0, 1, 2)), ("B", (1, 2, 0)), ("C", (2, 0, 1)))

# formal degrees of E1 and E2: (in c, in m)
E1_DEGREES = (3, 9)
E2_DEGREES = (4, 12)
RESULTANT_BOUND = E1_DEGREES[0] * E2_DEGREES[1] + E2_DEGREES[0] * E1_DEGREES[1]


def gaussian_rationals() -> NumberField:
    """Q(i); the chosen root is +i."""
    return NumberField((Fraction(1), Fraction(0), Fraction(1)), label="Q(i)", root_index=1, symbol="i")


# ----------------------------------------------------------------------------
# bivariate helpers


def _bi_add(p: Bivariate, q: Bivariate, scale: int = 1) -> Bivariate:
    out = dict(p)
    for k, v in q.items():
        v = v * scale
        out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if not v.is_zero()}


def _bi_mul(p: Bivariate, q: Bivariate) -> Bivariate:
    out: Bivariate = {}
    for (i1, j1), a in p.items():
        for (i2, j2), b in q.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out[k] + a * b if k in out else a * b
    return {k: v for k, v in out.items() if not v.is_zero()}


def _bi_scale(p: Bivariate, s: int) -> Bivariate:
    return {k: v * s for k, v in p.items()}


def chart_coefficients(g: HomPoly) -> List[Bivariate]:
    """a_0..a_4 of g(X, m X + c, 1) as polynomials in (m, c)."""
    coeffs: List[Bivariate] = [dict() for _ in range(g.degree + 1)]
    for (a, b, _), q in g.terms.items():
        for j in range(b + 1):
            key = (j, b - j)
            value = q * comb(b, j)
            target = coeffs[a + j]
            target[key] = target[key] + value if key in target else value
    return [{k: v for k, v in c.items() if not v.is_zero()} for c in coeffs]


def square_conditions(a: Sequence[Bivariate]) -> Tuple[Bivariate, Bivariate]:
    """(E1, E2) from the chart coefficients of a quartic."""
    a0, a1, a2, a3, a4 = a
    a4sq = _bi_mul(a4, a4)
    a3sq = _bi_mul(a3, a3)
    e1 = _bi_add(
        _bi_add(_bi_scale(_bi_mul(a1, a4sq), 8), _bi_mul(_bi_mul(a2, a3), a4), -4),
        _bi_mul(a3sq, a3),
    )
    inner = _bi_add(_bi_scale(_bi_mul(a2, a4), 4), a3sq, -1)
    e2 = _bi_add(_bi_scale(_bi_mul(a0, _bi_mul(a4sq, a4)), 64), _bi_mul(inner, inner), -1)
    return e1, e2


def _in_c(p: Bivariate, m, degree: int, zero) -> list:
    """Coefficients of p(m, c) in c, constant first, padded to ``degree``."""
    out = [zero] * (degree + 1)
    for (i, j), v in p.items():
        out[j] = out[j] + v * m ** i
    return out


def _sylvester(p: Sequence, q: Sequence, zero) -> List[List]:
    dp, dq = len(p) - 1, len(q) - 1
    size = dp + dq
    rows = []
    for i in range(dq):
        rows.append([zero] * i + list(reversed(p)) + [zero] * (size - dp - 1 - i))
    for i in range(dp):
        rows.append([zero] * i + list(reversed(q)) + [zero] * (size - dq - 1 - i))
    return rows


def resultant_in_c(e1: Bivariate, e2: Bivariate, nf: NumberField, threads: int = 1) -> UniPoly:
    """Res_c(E1, E2) as a polynomial in m, by evaluation at m = 0..B and interpolation."""
    zero, one = nf.zero(), nf.one()
    nodes = list(range(RESULTANT_BOUND + 1))

    def value(m: int) -> FieldElement:
        mv = nf(m)
        p = _in_c(e1, mv, E1_DEGREES[0], zero)
        q = _in_c(e2, mv, E2_DEGREES[0], zero)
        return determinant(_sylvester(p, q, zero), zero, one)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(value, nodes))
    else:
        values = [value(m) for m in nodes]

    # Newton divided differences, then expansion to the power basis
    dd = list(values)
    n = len(nodes)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - j])
    poly = UniPoly(nf, [dd[-1]])
    for k in range(n - 2, -1, -1):
        poly = poly * UniPoly(nf, [nf(-nodes[k]), one]) + UniPoly(nf, [dd[k]])
    return poly


def _strip_factor(r: UniPoly, factor: UniPoly) -> UniPoly:
    if factor.is_zero() or factor.degree <= 0:
        return r
    g = r.gcd(factor)
    while g.degree > 0:
        r = r.exact_div(g)
        g = r.gcd(factor)
    return r


# ----------------------------------------------------------------------------
# numeric lines


def _norm(v) -> mpmath.mpf:
    return mpmath.sqrt(sum(abs(x) ** 2 for x in v))


def line_distance(u: Sequence, v: Sequence) -> float:
    """|u x v| / (|u| |v|) for complex coordinate triples."""
    cross = (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )
    denom = _norm(u) * _norm(v)
    if denom == 0:
        return float("inf")
    return float(_norm(cross) / denom)


@dataclass(frozen=True)
class NumericLine:
    coords: Tuple[mpmath.mpc, mpmath.mpc, mpmath.mpc]
    residual: float
    chart: str

    def normalized(self) -> Tuple[mpmath.mpc, ...]:
        """Scaled so the largest coordinate is 1."""
        big = max(self.coords, key=abs)
        return tuple(c / big for c in self.coords)

    def to_json(self, digits: int = 15) -> List[List[str]]:
        return [
            [mpmath.nstr(mpmath.re(c), digits), mpmath.nstr(mpmath.im(c), digits)]
            for c in self.normalized()
        ]


@dataclass
class BitangentSearch:
    lines: List[NumericLine]
    skipped_charts: List[str] = field(default_factory=list)
    transformed: bool = False

    @property
    def count(self) -> int:
        return len(self.lines)

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "transformed": self.transformed,
            "skipped_charts": self.skipped_charts,
            "lines": [
                {"coords": ln.to_json(), "residual": ln.residual, "chart": ln.chart}
                for ln in self.lines
            ],
        }


def _cluster(roots: Sequence[mpmath.mpc], radius) -> List[mpmath.mpc]:
    groups: List[List[mpmath.mpc]] = []
    for z in roots:
        for g in groups:
            if abs(z - g[0]) <= radius * max(1, abs(g[0])):
                g.append(z)
                break
        else:
            groups.append([z])
    return [sum(g) / len(g) for g in groups]


def square_residual(p: Sequence[mpmath.mpc]) -> Optional[mpmath.mpf]:
    """How far p0 + ... + p4 X^4 is from p4 (X^2 + beta X + gamma)^2; None when p4 ~ 0."""
    p0, p1, p2, p3, p4 = p
    scale = max(abs(x) for x in p)
    if scale == 0 or abs(p4) <= mpmath.mpf(10) ** (-mpmath.mp.dps // 2) * scale:
        return None
    beta = p3 / (2 * p4)
    gamma = (4 * p2 * p4 - p3 ** 2) / (8 * p4 ** 2)
    square = (gamma ** 2, 2 * beta * gamma, beta ** 2 + 2 * gamma, 2 * beta, 1)
    return max(abs(pk - p4 * sk) for pk, sk in zip(p, square)) / scale


def _numeric_bivariate(p: Bivariate, digits: int) -> Dict[Tuple[int, int], mpmath.mpc]:
    return {k: v.embed_numeric(digits) for k, v in p.items()}


def _chart_lines(Q: HomPoly, name: str, order: Tuple[int, ...], cfg: EngineConfig,
                 tol: float, threads: int) -> Optional[List[NumericLine]]:
    nf = Q.field
    g = Q.permute(order)
    a = chart_coefficients(g)
    e1, e2 = square_conditions(a)
    r = resultant_in_c(e1, e2, nf, threads=threads)
    if r.is_zero():
        logger.warning(f"chart {name}: resultant vanishes identically, skipping")
        return None
    r = r.squarefree_part()
    a4 = UniPoly(nf, [a[4].get((i, 0), nf.zero()) for i in range(5)])
    r = _strip_factor(r, a4)
    logger.debug(f"chart {name}: slope polynomial of degree {r.degree}")
    if r.degree <= 0:
        return []

    digits = cfg.digits
    with mpmath.workdps(digits + 10):
        slopes = aberth_roots(r.to_numeric(digits), digits=digits, seed=cfg.seed,
                              max_iter=cfg.root_max_iter)
        e1n, e2n = _numeric_bivariate(e1, digits), _numeric_bivariate(e2, digits)
        an = [_numeric_bivariate(ak, digits) for ak in a]
        small = mpmath.mpf(10) ** (-(digits // 2))
        radius = mpmath.mpf(10) ** (-(digits // 4))
        zero = mpmath.mpc(0)
        found = []
        for m0 in slopes:
            c_poly = _in_c(e1n, m0, E1_DEGREES[0], zero)
            scale = max([abs(v) for v in e1n.values()] + [mpmath.mpf(1)])
            scale *= max(1, abs(m0)) ** E1_DEGREES[1]
            if max(abs(v) for v in c_poly) <= small * scale:
                c_poly = _in_c(e2n, m0, E2_DEGREES[0], zero)
            try:
                c_roots = aberth_roots(c_poly, digits=digits, seed=cfg.seed,
                                       max_iter=cfg.root_max_iter)
            except RootFindingError:
                logger.warning(f"chart {name}: no intercepts for slope {mpmath.nstr(m0, 8)}")
                continue
            for c0 in _cluster(c_roots, radius):
                p = [sum((v * m0 ** i * c0 ** j for (i, j), v in ak.items()), zero) for ak in an]
                res = square_residual(p)
                if res is None or res > tol:
                    continue
                coords = [zero, zero, zero]
                for k, value in enumerate((m0, mpmath.mpc(-1), c0)):
                    coords[order[k]] = value
                found.append(NumericLine(tuple(coords), float(res), name))
    logger.info(f"chart {name}: {len(found)} bitangent candidates")
    return found


def _dedupe(lines: Sequence[NumericLine], tol: float) -> List[NumericLine]:
    kept: List[NumericLine] = []
    for ln in sorted(lines, key=lambda x: x.residual):
        if all(line_distance(ln.coords, k.coords) > tol for k in kept):
            kept.append(ln)
    return kept


def _search(Q: HomPoly, cfg: EngineConfig, tol: float, threads: int) -> BitangentSearch:
    candidates: List[NumericLine] = []
    skipped = []
    for name, order in CHARTS:
        lines = _chart_lines(Q, name, order, cfg, tol, threads)
        if lines is None:
            skipped.append(name)
        else:
            candidates.extend(lines)
    return BitangentSearch(_dedupe(candidates, tol), skipped)


def random_change(seed: int, size: int = 5) -> List[List[Fraction]]:
    """An invertible integer 3x3 matrix drawn from the seed."""
    rng = np.random.default_rng(seed)
    nf = NumberField.rationals()
    while True:
        m = [[Fraction(int(v)) for v in rng.integers(-size, size + 1, size=3)] for _ in range(3)]
        det = determinant([[nf(v) for v in row] for row in m], nf.zero(), nf.one())
        if not det.is_zero():
            return m


def _inverse_transpose(m: List[List[Fraction]]) -> List[List[Fraction]]:
    cols = []
    for k in range(3):
        e = [Fraction(int(i == k)) for i in range(3)]
        cols.append(solve_square(m, e))
    # cols[k] is column k of m^-1, so it is row k of m^-T
    return cols


def find_bitangents_numeric(Q: HomPoly, config: Optional[EngineConfig] = None,
                            tol: Optional[float] = None,
                            threads: Optional[int] = None) -> BitangentSearch:
    """All 28 bitangents of a smooth quartic as numeric lines.

    Falls back to one random projective change of coordinates when the three
    charts do not give exactly 28 lines. Raises BitangentCountError otherwise.
    """
    if Q.degree != 4:
        raise InputError(f"expected a quartic, got degree {Q.degree}")
    cfg = config or EngineConfig()
    tol = cfg.tol if tol is None else tol
    threads = cfg.threads if threads is None else threads

    search = _search(Q, cfg, tol, threads)
    if search.count == 28:
        return search
    logger.warning(f"found {search.count} bitangents, retrying after a random change of coordinates")

    change = random_change(cfg.seed)
    nf = Q.field
    forms = [
        HomPoly.from_linear(nf, [nf(v) for v in row]) for row in change
    ]
    moved = _search(Q.compose_linear(forms), cfg, tol, threads)
    back = _inverse_transpose(change)
    lines = []
    with mpmath.workdps(cfg.digits + 10):
        for ln in moved.lines:
            coords = tuple(
                sum((mpmath.mpf(back[i][k].numerator) / back[i][k].denominator * ln.coords[k]
                     for k in range(3)), mpmath.mpc(0))
                for i in range(3)
            )
            lines.append(NumericLine(coords, ln.residual, ln.chart))
    result = BitangentSearch(lines, moved.skipped_charts, transformed=True)
    if result.count != 28:
        logger.error(f"bitangent search found {result.count} lines")
        raise BitangentCountError(
            f"expected 28 bitangents, found {result.count}",
            lines=[ln.to_json() for ln in result.lines],
            residuals=[ln.residual for ln in result.lines],
        )
    return result


# ----------------------------------------------------------------------------


def quartic_from_numeric(coeffs: Mapping[Tuple[int, int, int], complex]) -> HomPoly:
    """Quartic from float or complex coefficients, converted exactly.

    Floats become their exact binary Fractions; any nonzero imaginary part
    moves the polynomial to Q(i).
    """
    complex_input = any(isinstance(v, complex) and v.imag != 0 for v in coeffs.values())
    nf = gaussian_rationals() if complex_input else NumberField.rationals()
    terms = {}
    for exp, v in coeffs.items():
        if isinstance(v, complex):
            re, im = Fraction(v.real), Fraction(v.imag)
            terms[tuple(exp)] = nf.element([re, im]) if complex_input else nf(re)
        elif isinstance(v, float):
            terms[tuple(exp)] = nf(Fraction(v))
        else:
            terms[tuple(exp)] = nf(v)
    degrees = {sum(e) for e in terms}
    if degrees != {4}:
        raise InputError(f"coefficients are not all of degree 4: {sorted(degrees)}")
    return HomPoly(nf, 4, terms)


def random_quartic(seed: int, size: int = 9) -> HomPoly:
    """Quartic with integer coefficients in [-size, size] drawn from the seed."""
    rng = np.random.default_rng(seed)
    nf = NumberField.rationals()
    terms = {e: int(v) for e, v in zip(monomials(4), rng.integers(-size, size + 1, size=15))}
    return HomPoly(nf, 4, terms)


@dataclass
class LineMatch:
    pairs: List[Tuple[int, int, float]]
    unmatched_found: List[int]
    unmatched_table: List[int]

    @property
    def complete(self) -> bool:
        return not self.unmatched_found and not self.unmatched_table

    def to_dict(self) -> dict:
        return {
            "pairs": [{"found": i + 1, "table": j + 1, "distance": d} for i, j, d in self.pairs],
            "unmatched_found": [i + 1 for i in self.unmatched_found],
            "unmatched_table": [j + 1 for j in self.unmatched_table],
            "complete": self.complete,
        }


def match_lines(found: Sequence[NumericLine], table: Sequence[ProjLine], tol: float = 1e-8,
                digits: int = 30) -> LineMatch:
    """Pair numeric lines with exact table lines (projective distance <= tol)."""
    exact = [tuple(c.embed_numeric(digits) for c in ln.coords) for ln in table]
    pairs = []
    used = set()
    unmatched_found = []
    for i, ln in enumerate(found):
        best = None
        for j, u in enumerate(exact):
            if j in used:
                continue
            d = line_distance(ln.coords, u)
            if d <= tol and (best is None or d < best[1]):
                best = (j, d)
        if best is None:
            unmatched_found.append(i)
        else:
            used.add(best[0])
            pairs.append((i, best[0], best[1]))
    unmatched_table = [j for j in range(len(table)) if j not in used]
    return LineMatch(pairs, unmatched_found, unmatched_table)
