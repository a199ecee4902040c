"""
Built-in curves: the Ciani pencil, the three bitangent tables with their
quadruple points, and the arrangements assembled from them.

Every entry is a CurveSpec; lookups go through get_builtin(name).
"""

from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from quartica.arrangement import ProjLine, ProjPoint
from quartica.errors import CheckFailure, InputError, UnknownBuiltinError
from quartica.llogger import setup_logger
from quartica.numberfield import FieldElement, NumberField, format_rational, parse_rational
from quartica.polyring import HomPoly
from quartica.serialization import CurveSpec
from quartica.tangency import classify_line

logger = setup_logger(__name__)

Triple = Tuple[object, object, object]


# ----------------------------------------------------------------------------
# fields


@lru_cache(maxsize=None)
def klein_field() -> NumberField:
    """Q(e), e^2 + e + 2 = 0, e = (-1 + sqrt(-7))/2"""
    return NumberField((2, 1, 1), label="Q(e)", root_index=1, symbol="e")


@lru_cache(maxsize=None)
def dyck_field() -> NumberField:
    """Q(w), w^4 + 1 = 0, w = exp(i pi/4)"""
    return NumberField((1, 0, 0, 0, 1), label="Q(w)", root_index=3, symbol="w")


@lru_cache(maxsize=None)
def kk_field() -> NumberField:
    """Q(g), g^4 - 8g^2 + 36 = 0, g = sqrt(5) + i"""
    return NumberField((36, 0, -8, 0, 1), label="Q(g)", root_index=3, symbol="g")


def kk_constants() -> Dict[str, FieldElement]:
    """i, r = sqrt(5), and the hyperflex slopes a, b inside Q(g)."""
    K = kk_field()
    g = K.gen()
    i = (g ** 3 - 2 * g) / 12
    r = (14 * g - g ** 3) / 12
    if i * i != K(-1) or r * r != K(5):
        raise CheckFailure("Q(g): i^2 = -1 and r^2 = 5 do not hold")
    return {"i": i, "r": r, "a": r * (2 * i + 1) / 5, "b": r * (2 * i - 1) / 5}


# ----------------------------------------------------------------------------
# quartics


def fermat(nf: NumberField) -> HomPoly:
    return HomPoly(nf, 4, {(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1})


def ciani(nf: NumberField, lam) -> HomPoly:
    """x^4 + y^4 + z^4 + lam (x^2y^2 + x^2z^2 + y^2z^2)"""
    lam = nf(lam)
    return HomPoly(nf, 4, {
        (4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1,
        (2, 2, 0): lam, (2, 0, 2): lam, (0, 2, 2): lam,
    })


def klein_lambda_candidates() -> List[FieldElement]:
    """The two roots of lam^2 + 3 lam + 18 in Q(e): 3e and -3(e + 1)."""
    e = klein_field().gen()
    candidates = [3 * e, -3 * (e + 1)]
    for lam in candidates:
        if not (lam * lam + 3 * lam + 18).is_zero():
            raise CheckFailure(f"{lam} is not a root of lam^2 + 3 lam + 18")
    return candidates


@lru_cache(maxsize=None)
def klein_lambda() -> Tuple[FieldElement, bool]:
    """Ciani parameter whose member has the Klein table lines as bitangents.

    Returns (lam, verified). When neither root works the first one is
    returned with verified False.
    """
    lines = klein_lines()
    candidates = klein_lambda_candidates()
    for lam in candidates:
        Q = ciani(klein_field(), lam)
        if all(classify_line(Q, ln).is_bitangent for ln in lines):
            logger.info(f"klein: table lines are bitangent to the Ciani member lam = {lam}")
            return lam, True
        logger.info(f"klein: lam = {lam} rejected")
    logger.warning("klein: no root of lam^2 + 3 lam + 18 fits the bitangent table")
    return candidates[0], False


def klein_quartic() -> HomPoly:
    return ciani(klein_field(), klein_lambda()[0])


# ----------------------------------------------------------------------------
# bitangent tables


def _lines(nf: NumberField, rows: Sequence[Triple]) -> Tuple[ProjLine, ...]:
    return tuple(ProjLine.of(nf, row) for row in rows)


def _points(nf: NumberField, rows: Sequence[Triple]) -> Tuple[Tuple[str, ProjPoint], ...]:
    return tuple((f"P{k + 1}", ProjPoint.of(nf, row)) for k, row in enumerate(rows))


@lru_cache(maxsize=None)
def klein_lines() -> Tuple[ProjLine, ...]:
    e = klein_field().gen()
    return _lines(klein_field(), [
        (0, 1, e), (0, 1, -e), (e, -1, 0), (0, e, -1), (1 - e, 1, -1),
        (1, -1, e - 1), (1, 1 - e, 1), (e, 1, 0), (1, -e, 0), (1, -1, 1 - e),
        (1, 1, e - 1), (1, 0, e), (1, e, 0), (1, -1, 1), (1, e - 1, 1),
        (0, e, 1), (e - 1, 1, 1), (e, 0, 1), (1, 1, -1), (1, 1, 1),
        (1, 0, -e), (1, 1, 1 - e), (e - 1, 1, -1), (1, 1 - e, -1), (1, e - 1, -1),
        (e - 1, -1, -1), (1, -1, -1), (e, 0, -1),
    ])


@lru_cache(maxsize=None)
def klein_points() -> Tuple[Tuple[str, ProjPoint], ...]:
    e = klein_field().gen()
    return _points(klein_field(), [
        (1, 0, 0), (e, -e - 2, -e), (e, e + 2, e), (-e, e + 2, -e), (e, e + 2, -e),
        (0, 0, 1), (1 - e, e - 1, -2 * e - 2), (1 - e, 1 - e, 2 * e + 2), (0, 1, 1),
        (-3 * e - 2, e - 2, -e + 2), (1, 1, 0), (-1, 0, 1), (-2 * e - 2, e - 1, e - 1),
        (e, -1, -1), (-1, 1, 0), (0, 1, 0), (e + 2, e, -e), (-1, -1, e), (-1, 1, -e),
        (0, -1, 1), (1, 0, 1),
    ])


@lru_cache(maxsize=None)
def dyck_lines() -> Tuple[ProjLine, ...]:
    w = dyck_field().gen()
    w2, w3 = w ** 2, w ** 3
    return _lines(dyck_field(), [
        (0, -w, 1), (0, w, 1), (0, -w3, 1), (0, w3, 1),
        (-1, -1, 1), (-1, 1, 1), (-1, -w2, 1), (-1, w2, 1),
        (1, -1, 1), (1, 1, 1), (1, -w2, 1), (1, w2, 1),
        (-w, 0, 1), (w, 0, 1),
        (-w2, -1, 1), (-w2, 1, 1), (-w2, -w2, 1), (-w2, w2, 1),
        (w2, -1, 1), (w2, 1, 1), (w2, -w2, 1), (w2, w2, 1),
        (-w3, 0, 1), (w3, 0, 1),
        (-w, 1, 0), (w, 1, 0), (-w3, 1, 0), (w3, 1, 0),
    ])


@lru_cache(maxsize=None)
def dyck_points() -> Tuple[Tuple[str, ProjPoint], ...]:
    w2 = dyck_field().gen() ** 2
    return _points(dyck_field(), [
        (1, 0, 0), (1, 0, 1), (0, 1, 1), (-1, 1, 0), (1, 1, 0), (0, 1, -1),
        (0, 1, w2), (-w2, 1, 0), (w2, 1, 0), (0, 1, -w2), (-1, 0, 1), (0, 1, 0),
        (-1, 0, -w2), (-1, 0, w2), (0, 0, 1),
    ])


@lru_cache(maxsize=None)
def kk_lines() -> Tuple[ProjLine, ...]:
    c = kk_constants()
    i, a, b = c["i"], c["a"], c["b"]
    h = i / 2
    return _lines(kk_field(), [
        (0, -a, 1), (0, -b, 1), (0, b, 1), (0, a, 1),
        (-1, -1, 1), (-1, 1, 1), (-1, -2 * i, 1), (-1, 2 * i, 1),
        (1, -1, 1), (1, 1, 1), (1, -2 * i, 1), (1, 2 * i, 1),
        (-2 * i, -1, 1), (-2 * i, 1, 1), (-h, -h, 1), (-h, h, 1),
        (h, -h, 1), (h, h, 1), (2 * i, -1, 1), (2 * i, 1, 1),
        (-a, 0, 1), (-b, 0, 1), (b, 0, 1), (a, 0, 1),
        (-a, 1, 0), (-b, 1, 0), (b, 1, 0), (a, 1, 0),
    ])


@lru_cache(maxsize=None)
def kk_points() -> Tuple[Tuple[str, ProjPoint], ...]:
    return _points(kk_field(), [
        (1, 0, -1), (1, 0, 0), (1, 0, 1), (0, 1, -1), (0, 1, 0),
        (0, 1, 1), (-1, 1, 0), (1, 1, 0), (0, 0, 1),
    ])


# lines of the Dyck table dividing x^4+y^4, y^4+z^4 and x^4+z^4 (1-based)
HYPERFLEX_GROUPS = {
    1: (25, 26, 27, 28),
    2: (1, 2, 3, 4),
    3: (13, 14, 23, 24),
}


def other_hyperflex_lines(k: int) -> Tuple[int, ...]:
    """The eight Dyck-table lines outside group k, in table order."""
    if k not in HYPERFLEX_GROUPS:
        raise UnknownBuiltinError(f"hyperflex group must be 1, 2 or 3, got {k}")
    return tuple(sorted(n for g, group in HYPERFLEX_GROUPS.items() if g != k for n in group))


# ----------------------------------------------------------------------------
# curve specs


def _labels(indices: Sequence[int]) -> List[str]:
    return [f"l{n}" for n in indices]


def _pick(lines: Sequence[ProjLine], indices: Sequence[int]) -> List[ProjLine]:
    return [lines[n - 1] for n in indices]


def _table_spec(label: str, nf: NumberField, quartic: Optional[HomPoly],
                lines: Sequence[ProjLine]) -> CurveSpec:
    return CurveSpec(label=label, field=nf, quartic=quartic, lines=list(lines),
                     line_labels=_labels(range(1, len(lines) + 1)))


def _fermat_with(label: str, indices: Sequence[int]) -> CurveSpec:
    nf = dyck_field()
    return CurveSpec(label=label, field=nf, quartic=fermat(nf),
                     lines=_pick(dyck_lines(), indices), line_labels=_labels(indices))


def q_octic(k: int) -> CurveSpec:
    """F times the binary quartic of group k: four concurrent hyperflex lines."""
    if k not in HYPERFLEX_GROUPS:
        raise UnknownBuiltinError(f"q-octic index must be 1, 2 or 3, got {k}")
    return _fermat_with(f"q{k}-octic", HYPERFLEX_GROUPS[k])


def h_arrangement(n: int) -> CurveSpec:
    """Q_k plus one hyperflex line of another group; n = 8(k - 1) + i."""
    if not 1 <= n <= 24:
        raise UnknownBuiltinError(f"h-arrangement index must lie in 1..24, got {n}")
    k, i = divmod(n - 1, 8)
    extra = other_hyperflex_lines(k + 1)[i]
    return _fermat_with(f"h-arrangement-{n}", HYPERFLEX_GROUPS[k + 1] + (extra,))


def g_arrangement(k: int, i: int, j: int) -> CurveSpec:
    """Q_k plus two hyperflex lines (the i-th and j-th) from the other groups."""
    if k not in HYPERFLEX_GROUPS or not 1 <= i < j <= 8:
        raise UnknownBuiltinError(f"g-arrangement needs k in 1..3 and 1 <= i < j <= 8, got {k}, {i}, {j}")
    others = other_hyperflex_lines(k)
    extra = (others[i - 1], others[j - 1])
    return _fermat_with(f"g-arrangement-{k}-{i}-{j}", HYPERFLEX_GROUPS[k] + extra)


def c_dodecic(k: int) -> CurveSpec:
    """F times two of the three binary quartics; c1 = groups 1,2, c2 = 1,3, c3 = 2,3."""
    pairs = {1: (1, 2), 2: (1, 3), 3: (2, 3)}
    if k not in pairs:
        raise UnknownBuiltinError(f"c-dodecic index must be 1, 2 or 3, got {k}")
    a, b = pairs[k]
    return _fermat_with(f"c{k}-dodecic", HYPERFLEX_GROUPS[a] + HYPERFLEX_GROUPS[b])


def ciani_spec(lam) -> CurveSpec:
    nf = NumberField.rationals()
    try:
        value = parse_rational(lam)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"ciani parameter must be rational, got {lam!r}") from exc
    return CurveSpec(label=f"ciani:{format_rational(value)}", field=nf, quartic=ciani(nf, value))


def _rational_quartic(terms: Dict[Tuple[int, int, int], int]) -> HomPoly:
    return HomPoly(NumberField.rationals(), 4, terms)


def _witness(label: str, terms: Dict[Tuple[int, int, int], int], line: Triple) -> CurveSpec:
    nf = NumberField.rationals()
    return CurveSpec(label=label, field=nf, quartic=_rational_quartic(terms),
                     lines=[ProjLine.of(nf, line)])


_FERMAT_TERMS = {(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1}

# one smooth quartic and one line per contact pattern of the restriction
WITNESSES: Dict[str, Callable[[], CurveSpec]] = {
    "witness-1111": lambda: _witness("witness-1111", _FERMAT_TERMS, (0, 0, 1)),
    "witness-22": lambda: _witness("witness-22", _FERMAT_TERMS, (1, 1, 1)),
    "witness-211": lambda: _witness(
        "witness-211", {(4, 0, 0): 1, (2, 2, 0): -1, (0, 3, 1): 1, (0, 0, 4): 1}, (0, 0, 1)),
    "witness-31": lambda: _witness(
        "witness-31", {(3, 1, 0): 1, (0, 3, 1): 1, (1, 0, 3): 1}, (0, 0, 1)),
    "witness-4": lambda: _witness(
        "witness-4", {(4, 0, 0): 1, (0, 3, 1): 1, (0, 0, 4): 1}, (0, 0, 1)),
}


def _klein() -> CurveSpec:
    return _table_spec("klein", klein_field(), klein_quartic(), klein_lines())


def _dyck() -> CurveSpec:
    return _table_spec("dyck", dyck_field(), fermat(dyck_field()), dyck_lines())


def _kk() -> CurveSpec:
    return _table_spec("kk", kk_field(), ciani(kk_field(), 3), kk_lines())


def _kl_octic() -> CurveSpec:
    indices = (5, 6, 7, 8)
    return CurveSpec(label="kl-octic", field=kk_field(), quartic=ciani(kk_field(), 3),
                     lines=_pick(kk_lines(), indices), line_labels=_labels(indices))


def _qk_octic() -> CurveSpec:
    indices = (1, 2, 4, 16)
    return CurveSpec(label="qk-octic", field=klein_field(), quartic=klein_quartic(),
                     lines=_pick(klein_lines(), indices), line_labels=_labels(indices))


_FIXED: Dict[str, Callable[[], CurveSpec]] = {
    "klein": _klein,
    "klein-bitangents": lambda: _table_spec("klein-bitangents", klein_field(), None, klein_lines()),
    "dyck": _dyck,
    "fermat": lambda: CurveSpec(label="fermat", field=NumberField.rationals(),
                                quartic=fermat(NumberField.rationals())),
    "dyck-bitangents": lambda: _table_spec("dyck-bitangents", dyck_field(), None, dyck_lines()),
    "kk": _kk,
    "kk-bitangents": lambda: _table_spec("kk-bitangents", kk_field(), None, kk_lines()),
    "kl-octic": _kl_octic,
    "dl-septic": lambda: _fermat_with("dl-septic", (1, 2, 4)),
    "qk-octic": _qk_octic,
    "q1-octic": lambda: q_octic(1),
    "q2-octic": lambda: q_octic(2),
    "q3-octic": lambda: q_octic(3),
    "c1-dodecic": lambda: c_dodecic(1),
    "c2-dodecic": lambda: c_dodecic(2),
    "c3-dodecic": lambda: c_dodecic(3),
    **WITNESSES,
}

# exact tables accepted by --match, and the named quadruple points of each
TABLES: Dict[str, Tuple[Callable[[], Tuple[ProjLine, ...]], Callable[[], tuple]]] = {
    "klein-table": (klein_lines, klein_points),
    "dyck-table": (dyck_lines, dyck_points),
    "kk-table": (kk_lines, kk_points),
}

_REFERENCE_POINTS = {
    "klein": klein_points, "klein-bitangents": klein_points,
    "dyck": dyck_points, "dyck-bitangents": dyck_points,
    "kk": kk_points, "kk-bitangents": kk_points,
}


def _int(text: str, name: str) -> int:
    if not text.isdigit():
        raise UnknownBuiltinError(f"unknown built-in {name!r}")
    return int(text)


def get_builtin(name: str) -> CurveSpec:
    """Resolve a registry name to a CurveSpec."""
    name = name.strip().lower()
    if name in _FIXED:
        return _FIXED[name]()
    if name in TABLES:
        return _FIXED[name.replace("-table", "-bitangents")]()
    if name.startswith("ciani:"):
        return ciani_spec(name.split(":", 1)[1])
    if name.startswith("h-arrangement-"):
        return h_arrangement(_int(name[len("h-arrangement-"):], name))
    if name.startswith("g-arrangement-"):
        parts = name[len("g-arrangement-"):].split("-")
        if len(parts) != 3:
            raise UnknownBuiltinError(f"unknown built-in {name!r}; expected g-arrangement-K-I-J")
        return g_arrangement(*(_int(p, name) for p in parts))
    logger.error(f"unknown built-in {name}")
    raise UnknownBuiltinError(f"unknown built-in {name!r}; see `quartica list`")


def table_lines(name: str) -> List[ProjLine]:
    """Exact lines of a --match table."""
    key = name.strip().lower()
    if key not in TABLES:
        raise UnknownBuiltinError(f"unknown table {name!r}; choose one of {sorted(TABLES)}")
    return list(TABLES[key][0]())


def reference_points(name: str) -> Optional[List[Tuple[str, ProjPoint]]]:
    """Labelled quadruple points for the built-ins that carry a bitangent table."""
    source = _REFERENCE_POINTS.get(name.strip().lower())
    return list(source()) if source is not None else None


def list_builtins() -> List[str]:
    names = list(_FIXED) + list(TABLES)
    names += [f"h-arrangement-{n}" for n in range(1, 25)]
    names += [f"g-arrangement-{k}-{i}-{j}"
              for k in (1, 2, 3) for i, j in combinations(range(1, 9), 2)]
    names.append("ciani:<lambda>")
    return names
