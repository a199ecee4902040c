"""Homogeneous polynomials in x, y, z over a NumberField, binary forms, and
dense univariate polynomials.

Monomials are ordered degree-lexicographically with x > y > z; that order
fixes matrix layouts and serialization.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import mpmath

from .errors import FieldMismatchError, ZeroFormError
from .linalg import SparseMatrix
from .llogger import setup_logger
from .numberfield import FieldElement, NumberField

logger = setup_logger(__name__)

Exp = Tuple[int, int, int]
VARIABLES = ("x", "y", "z")


@lru_cache(maxsize=None)
def monomials(t: int) -> Tuple[Exp, ...]:
    """Exponent triples of degree t in deglex order (x > y > z)."""
    if t < 0:
        return ()
    return tuple((a, b, t - a - b) for a in range(t, -1, -1) for b in range(t - a, -1, -1))


@lru_cache(maxsize=None)
def monomial_index(t: int) -> Dict[Exp, int]:
    return {e: i for i, e in enumerate(monomials(t))}


def dim_s(t: int) -> int:
    """dim S_t = (t+1)(t+2)/2."""
    return (t + 1) * (t + 2) // 2 if t >= 0 else 0


def _var_index(var) -> int:
    if isinstance(var, int):
        if var not in (0, 1, 2):
            raise ValueError(f"variable index out of range: {var}")
        return var
    try:
        return VARIABLES.index(var)
    except ValueError:
        raise ValueError(f"unknown variable {var!r}; expected one of x, y, z") from None


# ----------------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial over a NumberField, constant term first"""

    __slots__ = ("field", "coeffs")

    def __init__(self, nf: NumberField, coeffs: Iterable):
        c = [nf(x) for x in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.field = nf
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> FieldElement:
        return self.coeffs[-1]

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero()
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = other.coeffs + (z,) * (n - len(other.coeffs))
        return UniPoly(self.field, [x + y for x, y in zip(a, b)])

    def __neg__(self) -> "UniPoly":
        return UniPoly(self.field, [-x for x in self.coeffs])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return UniPoly(self.field, [x * other for x in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly(self.field, [])
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        out[i + j] = out[i + j] + x * y
        return UniPoly(self.field, out)

    __rmul__ = __mul__

    def __call__(self, value):
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(self.field, [c * k for k, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = other.lead().inv()
        quot = [self.field.zero()] * max(0, len(rem) - db)
        while len(rem) - 1 >= db and rem:
            shift = len(rem) - 1 - db
            c = rem[-1] * inv_lead
            quot[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - c * b
            rem.pop()
            while rem and rem[-1].is_zero():
                rem.pop()
        return UniPoly(self.field, quot), UniPoly(self.field, rem)

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        inv_lead = self.lead().inv()
        return UniPoly(self.field, [c * inv_lead for c in self.coeffs])

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def squarefree_part(self) -> "UniPoly":
        if self.degree <= 0:
            return self.monic()
        g = self.gcd(self.derivative())
        return self.exact_div(g).monic()

    def deflate(self, root: FieldElement) -> "UniPoly":
        """Divide by (u - root), which must be a factor."""
        return self.exact_div(UniPoly(self.field, [-root, self.field.one()]))

    def to_numeric(self, digits: int = 30) -> List[mpmath.mpc]:
        return [c.embed_numeric(digits) for c in self.coeffs]

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"


# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplicityPattern:
    """Root multiplicities of a binary form over the algebraic closure"""

    parts: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))

    @property
    def degree(self) -> int:
        return sum(self.parts)

    @property
    def label(self) -> str:
        return "".join(str(p) for p in self.parts)

    def without(self, part: int) -> "MultiplicityPattern":
        parts = list(self.parts)
        parts.remove(part)
        return MultiplicityPattern(tuple(parts))

    def __str__(self) -> str:
        return "{" + ",".join(str(p) for p in self.parts) + "}"


class BinaryForm:
    """Form of degree d in (s, t); coeffs run s^d, s^(d-1) t, ..., t^d"""

    __slots__ = ("field", "degree", "coeffs")

    def __init__(self, nf: NumberField, coeffs: Sequence):
        if not coeffs:
            raise ValueError("a binary form needs at least one coefficient")
        self.field = nf
        self.coeffs = tuple(nf(c) for c in coeffs)
        self.degree = len(self.coeffs) - 1

    @classmethod
    def linear(cls, a: FieldElement, b: FieldElement) -> "BinaryForm":
        return cls(a.field, [a, b])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if other.degree != self.degree:
            raise ValueError("degrees differ")
        return BinaryForm(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other) -> "BinaryForm":
        if not isinstance(other, BinaryForm):
            return BinaryForm(self.field, [c * other for c in self.coeffs])
        out = [self.field.zero()] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return BinaryForm(self.field, out)

    __rmul__ = __mul__

    def __call__(self, s, t) -> FieldElement:
        d = self.degree
        return sum((c * s ** (d - k) * t ** k for k, c in enumerate(self.coeffs)), self.field.zero())

    def substitute(self, a, b, c, d) -> "BinaryForm":
        """b(a s + b t, c s + d t)."""
        first = BinaryForm(self.field, [a, b])
        second = BinaryForm(self.field, [c, d])
        total = BinaryForm(self.field, [self.field.zero()] * (self.degree + 1))
        for k, coeff in enumerate(self.coeffs):
            if coeff:
                total = total + _power(first, self.degree - k) * _power(second, k) * coeff
        return total

    def dehomogenize(self) -> Tuple[int, UniPoly]:
        """(multiplicity of the root (1:0), b(u, 1) with u = s/t)."""
        if self.is_zero():
            raise ZeroFormError("zero binary form")
        k = 0
        while self.coeffs[k].is_zero():
            k += 1
        return k, UniPoly(self.field, reversed(self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        return f"BinaryForm({[str(c) for c in self.coeffs]})"


def _power(form: BinaryForm, k: int) -> BinaryForm:
    result = BinaryForm(form.field, [form.field.one()])
    for _ in range(k):
        result = result * form
    return result


# ----------------------------------------------------------------------------


class HomPoly:
    """Sparse homogeneous polynomial over a NumberField.

    ``terms`` maps exponent triples (a, b, c) with a+b+c = degree to nonzero
    FieldElements. Instances are treated as immutable.
    """

    __slots__ = ("field", "degree", "terms")

    def __init__(self, nf: NumberField, degree: int, terms: Mapping[Exp, object] = None):
        if degree < 0:
            raise ValueError(f"negative degree {degree}")
        clean: Dict[Exp, FieldElement] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != 3 or min(exp) < 0 or sum(exp) != degree:
                raise ValueError(f"exponent {exp} is not a degree-{degree} monomial")
            value = nf(coeff)
            if exp in clean:
                value = clean[exp] + value
            if value.is_zero():
                clean.pop(exp, None)
            else:
                clean[exp] = value
        self.field = nf
        self.degree = degree
        self.terms = clean

    # --------------------------------------------------------- constructors

    @classmethod
    def zero(cls, nf: NumberField, degree: int) -> "HomPoly":
        return cls(nf, degree, {})

    @classmethod
    def constant(cls, nf: NumberField, value=1) -> "HomPoly":
        return cls(nf, 0, {(0, 0, 0): value})

    @classmethod
    def variable(cls, nf: NumberField, var) -> "HomPoly":
        exp = [0, 0, 0]
        exp[_var_index(var)] = 1
        return cls(nf, 1, {tuple(exp): 1})

    @classmethod
    def from_linear(cls, nf: NumberField, coords: Sequence) -> "HomPoly":
        """u x + v y + w z."""
        u, v, w = coords
        return cls(nf, 1, {(1, 0, 0): u, (0, 1, 0): v, (0, 0, 1): w})

    # -------------------------------------------------------------- algebra

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "HomPoly"):
        if other.field != self.field:
            raise FieldMismatchError(
                f"polynomials over different fields ({self.field.label}, {other.field.label})"
            )

    def __eq__(self, other):
        if not isinstance(other, HomPoly):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.field == other.field
        return self.field == other.field and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        if self.is_zero():
            return 0
        return hash((self.degree, frozenset(self.terms.items())))

    def __add__(self, other: "HomPoly") -> "HomPoly":
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.degree != self.degree:
            raise ValueError(f"cannot add degree {self.degree} and degree {other.degree} forms")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return HomPoly(self.field, self.degree, terms)

    def __neg__(self) -> "HomPoly":
        return HomPoly(self.field, self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        return self + (-other)

    def __mul__(self, other) -> "HomPoly":
        if not isinstance(other, HomPoly):
            value = self.field(other)
            return HomPoly(self.field, self.degree, {e: c * value for e, c in self.terms.items()})
        self._check(other)
        terms: Dict[Exp, FieldElement] = {}
        for (a1, b1, c1), x in self.terms.items():
            for (a2, b2, c2), y in other.terms.items():
                e = (a1 + a2, b1 + b2, c1 + c2)
                p = x * y
                terms[e] = terms[e] + p if e in terms else p
        return HomPoly(self.field, self.degree + other.degree, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HomPoly":
        result = HomPoly.constant(self.field)
        for _ in range(k):
            result = result * self
        return result

    # ------------------------------------------------------------- calculus

    def partial(self, var) -> "HomPoly":
        i = _var_index(var)
        if self.degree == 0:
            return HomPoly.zero(self.field, 0)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * e[i]
        return HomPoly(self.field, self.degree - 1, terms)

    def gradient(self) -> Tuple["HomPoly", "HomPoly", "HomPoly"]:
        return tuple(self.partial(v) for v in range(3))

    def evaluate(self, point: Sequence) -> FieldElement:
        x, y, z = (self.field(p) for p in point)
        acc = self.field.zero()
        for (a, b, c), coeff in self.terms.items():
            acc = acc + coeff * x ** a * y ** b * z ** c
        return acc

    def compose_linear(self, forms: Sequence["HomPoly"]) -> "HomPoly":
        """f(L0, L1, L2) for three linear forms."""
        powers = [[HomPoly.constant(self.field)] for _ in range(3)]
        for i in range(3):
            for _ in range(self.degree):
                powers[i].append(powers[i][-1] * forms[i])
        total = HomPoly.zero(self.field, self.degree)
        for (a, b, c), coeff in self.terms.items():
            total = total + powers[0][a] * powers[1][b] * powers[2][c] * coeff
        return total

    def permute(self, order: Sequence[int]) -> "HomPoly":
        """g(X0, X1, X2) = f with x_{order[k]} replaced by X_k."""
        terms = {}
        for e, c in self.terms.items():
            ne = [0, 0, 0]
            for k, src in enumerate(order):
                ne[k] = e[src]
            terms[tuple(ne)] = c
        return HomPoly(self.field, self.degree, terms)

    def to_numeric(self, digits: int = 30) -> Dict[Exp, mpmath.mpc]:
        return {e: c.embed_numeric(digits) for e, c in self.terms.items()}

    def sorted_terms(self) -> List[Tuple[Exp, FieldElement]]:
        index = monomial_index(self.degree)
        return sorted(self.terms.items(), key=lambda item: index[item[0]])

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for (a, b, c), coeff in self.sorted_terms():
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v for v, k in zip(VARIABLES, (a, b, c)) if k
            )
            text = str(coeff)
            if not mono:
                pieces.append(f"({text})" if " " in text else text)
            elif coeff == 1:
                pieces.append(mono)
            elif coeff == -1:
                pieces.append(f"-{mono}")
            else:
                pieces.append(f"({text})*{mono}" if " " in text else f"{text}*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"HomPoly(degree={self.degree}, {self})"


# ----------------------------------------------------------------------------
# module-level operations


def partial_derivative(f: HomPoly, var) -> HomPoly:
    return f.partial(var)


def _coords(line) -> Tuple[FieldElement, FieldElement, FieldElement]:
    return tuple(getattr(line, "coords", line))


def spanning_points(line) -> Tuple[tuple, tuple]:
    """Two distinct points on uX + vY + wZ = 0.

    Among (0,-w,v), (-w,0,u), (-v,u,0) the first two nonzero triples.
    """
    u, v, w = _coords(line)
    candidates = [(u * 0, -w, v), (-w, u * 0, u), (-v, u, u * 0)]
    chosen = [p for p in candidates if any(not c.is_zero() for c in p)]
    if len(chosen) < 2:
        raise ZeroFormError("the zero triple does not define a line")
    return chosen[0], chosen[1]


def restrict_to_line(f: HomPoly, line) -> BinaryForm:
    """b(s, t) = f(s p + t q) for the canonical spanning points p, q of the line."""
    p, q = spanning_points(line)
    nf = f.field
    linear = [BinaryForm(nf, [p[i], q[i]]) for i in range(3)]
    powers = [[BinaryForm(nf, [nf.one()])] for _ in range(3)]
    for i in range(3):
        for _ in range(f.degree):
            powers[i].append(powers[i][-1] * linear[i])
    total = BinaryForm(nf, [nf.zero()] * (f.degree + 1))
    for (a, b, c), coeff in f.terms.items():
        total = total + powers[0][a] * powers[1][b] * powers[2][c] * coeff
    return total


def line_parameter(line, point) -> Tuple[FieldElement, FieldElement]:
    """(s, t) with point proportional to s p + t q; the point must lie on the line."""
    p, q = spanning_points(line)
    point = tuple(point)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        det = p[i] * q[j] - p[j] * q[i]
        if not det.is_zero():
            s = (point[i] * q[j] - point[j] * q[i]) / det
            t = (p[i] * point[j] - p[j] * point[i]) / det
            return s, t
    raise ZeroFormError("spanning points are dependent")


def root_multiplicity(b: BinaryForm, s0: FieldElement, t0: FieldElement) -> int:
    """Multiplicity of the root (s0 : t0) of b (0 when it is not a root)."""
    if b.is_zero():
        raise ZeroFormError("multiplicity on the zero form")
    if t0.is_zero():
        k, _ = b.dehomogenize()
        return k
    u0 = s0 / t0
    _, g = b.dehomogenize()
    mult = 0
    while not g.is_zero() and g(u0).is_zero():
        g = g.deflate(u0)
        mult += 1
    return mult


def squarefree_pattern(b: BinaryForm) -> MultiplicityPattern:
    """Multiplicities of the roots of b over the algebraic closure.

    Only gcd degrees are used: with G_j = deg gcd(g, g', ..., g^(j)) the number
    of roots of multiplicity >= j+1 is G_j - G_(j+1). The root (1:0) is
    counted through the leading zero coefficients.
    """
    if b.is_zero():
        raise ZeroFormError("squarefree pattern of the zero form")
    k_inf, g = b.dehomogenize()
    degrees = [g.degree]
    h = g
    deriv = g
    while h.degree > 0:
        deriv = deriv.derivative()
        h = h.gcd(deriv)
        degrees.append(max(h.degree, 0))
    degrees.append(0)
    at_least = [degrees[j] - degrees[j + 1] for j in range(len(degrees) - 1)]
    parts: List[int] = []
    for j in range(len(at_least)):
        nxt = at_least[j + 1] if j + 1 < len(at_least) else 0
        parts.extend([j + 1] * (at_least[j] - nxt))
    if k_inf:
        parts.append(k_inf)
    return MultiplicityPattern(tuple(parts))


def graded_map_matrix(generators: Sequence[HomPoly], t: int) -> SparseMatrix:
    """Matrix of (a_1, ..., a_k) -> sum a_i gen_i from (S_(t-e))^k to S_t.

    e is the common generator degree. Rows are the degree-t monomials, columns
    run generator-major over the degree-(t-e) monomials, both in deglex order.
    """
    if not generators:
        raise ValueError("no generators")
    nf = generators[0].field
    e = generators[0].degree
    for g in generators:
        if g.field != nf:
            raise FieldMismatchError("generators over different fields")
        if g.degree != e:
            raise ValueError("generators must share one degree")
    rows_basis = monomial_index(t)
    src = monomials(t - e)
    ncols = len(generators) * len(src)
    rows: List[Dict[int, FieldElement]] = [dict() for _ in range(len(rows_basis))]
    for gi, g in enumerate(generators):
        for mi, (a, b, c) in enumerate(src):
            col = gi * len(src) + mi
            for (ga, gb, gc), coeff in g.terms.items():
                rows[rows_basis[(a + ga, b + gb, c + gc)]][col] = coeff
    return SparseMatrix(nf, len(rows_basis), ncols, rows)


def jacobian_matrix(f: HomPoly, t: int) -> SparseMatrix:
    """graded_map_matrix of the three partials of f into degree t."""
    return graded_map_matrix(f.gradient(), t)


def polynomial_product(factors: Sequence[HomPoly]) -> HomPoly:
    if not factors:
        raise ValueError("empty product")
    result = factors[0]
    for f in factors[1:]:
        result = result * f
    return result
