"""Exact arithmetic in Q and in simple extensions Q(a) = Q[x]/(m(x)).

Rationals are ``fractions.Fraction``. A ``NumberField`` is identified by its
monic minimal polynomial; ``FieldElement`` stores coordinates in the power
basis 1, a, ..., a^(n-1) and is always kept reduced. The numeric bridge
(``embed_numeric``) evaluates an element at a chosen complex root of the
minimal polynomial, found with the Aberth iteration in ``aberth_roots``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np

from .errors import FieldDivisionError, FieldMismatchError, RootFindingError
from .llogger import setup_logger

logger = setup_logger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]


def parse_rational(value) -> Fraction:
    """Parse "p/q", "p", an int or a Fraction into a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


# ----------------------------------------------------------------------------
# dense univariate helpers over Q, coefficient lists constant term first


def _trim(p: List[Fraction]) -> List[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        quot[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        a.pop()
        _trim(a)
    return _trim(quot), a


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


# ----------------------------------------------------------------------------
# simultaneous root iteration


def _to_mpc(c):
    if isinstance(c, Fraction):
        return mpmath.mpc(mpmath.mpf(c.numerator) / c.denominator)
    if isinstance(c, int):
        return mpmath.mpc(c)
    return mpmath.mpc(c)


def _horner(a, z):
    """Value and derivative of sum a[k] z^k."""
    p = mpmath.mpc(0)
    dp = mpmath.mpc(0)
    for c in reversed(a):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def sort_roots(roots, quantum: int = 12) -> list:
    """Order complex roots by (real part, imaginary part).

    Real parts are compared after rounding to ``quantum`` decimals so that
    conjugate pairs compare equal on the real part.
    """
    def key(z):
        return (int(mpmath.nint(mpmath.re(z) * 10 ** quantum)), float(mpmath.im(z)))
    return sorted(roots, key=key)


def aberth_roots(coeffs: Sequence, digits: int = 30, seed: int = 0,
                 max_iter: int = 1000) -> List[mpmath.mpc]:
    """All complex roots of sum coeffs[k] x^k, with multiplicity.

    Aberth-Ehrlich iteration at ``digits`` + 10 working digits from seeded,
    randomly perturbed points on a circle enclosing all roots. A root is
    frozen when its Newton correction falls below 10^-digits (relative) or
    when the residual reaches rounding level, which is how multiple roots
    stop. Raises RootFindingError after ``max_iter`` sweeps.
    """
    with mpmath.workdps(digits + 10):
        a = [_to_mpc(c) for c in coeffs]
        while a and a[-1] == 0:
            a.pop()
        if len(a) <= 1:
            return []
        zeros_at_origin = 0
        while a[0] == 0:
            a.pop(0)
            zeros_at_origin += 1
        n = len(a) - 1
        roots = [mpmath.mpc(0)] * zeros_at_origin
        if n == 0:
            return roots
        lead = a[-1]
        a = [c / lead for c in a]
        if n == 1:
            return roots + [-a[0]]

        # Fujiwara bound on root moduli
        radius = 2 * max(abs(a[n - k]) ** (mpmath.mpf(1) / k) for k in range(1, n + 1))
        radius = max(radius, mpmath.mpf("1e-3"))
        rng = np.random.default_rng(seed)
        offset = rng.uniform(0.0, 2 * np.pi)
        z = []
        for k in range(n):
            theta = offset + 2 * np.pi * k / n + rng.uniform(-0.25, 0.25) / n
            r = radius * (0.5 + 0.5 * rng.uniform(0.5, 1.0))
            z.append(mpmath.mpc(r * mpmath.cos(theta), r * mpmath.sin(theta)))

        eps_step = mpmath.mpf(10) ** (-digits)
        eps_value = mpmath.mpf(10) ** (-(digits + 6))
        absa = [abs(c) for c in a]
        done = [False] * n
        for iteration in range(max_iter):
            for i in range(n):
                if done[i]:
                    continue
                zi = z[i]
                p, dp = _horner(a, zi)
                scale = mpmath.mpf(0)
                for c in reversed(absa):
                    scale = scale * abs(zi) + c
                if abs(p) <= eps_value * scale:
                    done[i] = True
                    continue
                if dp == 0:
                    z[i] = zi * (1 + eps_step) + eps_step
                    continue
                ratio = p / dp
                s = mpmath.mpc(0)
                for j in range(n):
                    if j != i:
                        diff = zi - z[j]
                        if diff == 0:
                            diff = eps_value
                        s += 1 / diff
                step = ratio / (1 - ratio * s)
                z[i] = zi - step
                if abs(step) <= eps_step * max(1, abs(z[i])):
                    done[i] = True
            if all(done):
                logger.debug(f"aberth: degree {n} converged after {iteration + 1} sweeps")
                return roots + z
        logger.error(f"aberth: degree {n} did not converge in {max_iter} sweeps")
        raise RootFindingError(
            f"root iteration for a degree-{n} polynomial exceeded {max_iter} sweeps"
        )


@lru_cache(maxsize=64)
def _sorted_field_roots(min_poly: Tuple[Fraction, ...], digits: int, seed: int):
    roots = aberth_roots(min_poly, digits=digits, seed=seed)
    # Newton polish: min_poly is squarefree, so every root is simple
    with mpmath.workdps(digits + 10):
        a = [_to_mpc(c) for c in min_poly]
        polished = []
        for z in roots:
            for _ in range(8):
                p, dp = _horner(a, z)
                if dp == 0:
                    break
                z = z - p / dp
            polished.append(z)
        return tuple(sort_roots(polished))


# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class NumberField:
    """Q[x]/(min_poly); ``min_poly`` is monic, constant term first.

    Irreducibility of ``min_poly`` is a precondition and is not checked.
    Two fields are equal exactly when their minimal polynomials are.
    """

    min_poly: Tuple[Fraction, ...]
    label: str = field(default="Q", compare=False)
    root_index: int = field(default=0, compare=False)
    symbol: str = field(default="a", compare=False)

    def __post_init__(self):
        poly = tuple(_trim([parse_rational(c) for c in self.min_poly]))
        if len(poly) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if poly[-1] != 1:
            raise ValueError(f"minimal polynomial must be monic, leading coefficient {poly[-1]}")
        object.__setattr__(self, "min_poly", poly)
        if not 0 <= self.root_index < len(poly) - 1:
            raise ValueError(f"root_index {self.root_index} out of range for degree {len(poly) - 1}")

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls((Fraction(0), Fraction(1)), label="Q", root_index=0, symbol="a")

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def is_rational(self) -> bool:
        return self.degree == 1 and self.min_poly[0] == 0

    @cached_property
    def _tail(self) -> Tuple[Fraction, ...]:
        # a^n = -sum tail[i] a^i
        return self.min_poly[:-1]

    def zero(self) -> "FieldElement":
        return FieldElement(self, ())

    def one(self) -> "FieldElement":
        return FieldElement(self, (Fraction(1),))

    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return FieldElement(self, (-self.min_poly[0],))
        return FieldElement(self, (Fraction(0), Fraction(1)))

    def from_rational(self, q: Scalar) -> "FieldElement":
        return FieldElement(self, (parse_rational(q),))

    def element(self, coeffs: Iterable) -> "FieldElement":
        """Element from power-basis coordinates; longer lists are reduced."""
        return FieldElement(self, tuple(parse_rational(c) for c in coeffs))

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(
                    f"element of {value.field.label} used in {self.label}"
                )
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return self.from_rational(value)
        if isinstance(value, str):
            return self.from_rational(parse_rational(value))
        return self.element(value)

    def numeric_roots(self, digits: int = 30) -> tuple:
        """Complex roots of min_poly sorted by (real, imaginary) part."""
        return _sorted_field_roots(self.min_poly, digits, 0)

    def numeric_generator(self, digits: int = 30) -> mpmath.mpc:
        return self.numeric_roots(digits + 10)[self.root_index]

    def __str__(self) -> str:
        return self.label


class FieldElement:
    """Element of a NumberField in the power basis; immutable"""

    __slots__ = ("field", "coeffs")

    def __init__(self, nf: NumberField, coeffs: Sequence[Fraction]):
        n = nf.degree
        c = [Fraction(x) for x in coeffs]
        if len(c) > n:
            c = FieldElement._reduce(nf, c)
        c = c + [Fraction(0)] * (n - len(c))
        object.__setattr__(self, "field", nf)
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @staticmethod
    def _reduce(nf: NumberField, c: List[Fraction]) -> List[Fraction]:
        n = nf.degree
        tail = nf._tail
        for k in range(len(c) - 1, n - 1, -1):
            top = c[k]
            if top:
                base = k - n
                for i, m in enumerate(tail):
                    if m:
                        c[base + i] -= top * m
            c.pop()
        return c

    # ---------------------------------------------------------------- basics

    def _coerce(self, other) -> Optional["FieldElement"]:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                logger.error(f"field mismatch: {self.field.label} vs {other.field.label}")
                raise FieldMismatchError(
                    f"operands live in different fields ({self.field.label}, {other.field.label})"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field.from_rational(other)
        return None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.min_poly, self.coeffs))

    # ------------------------------------------------------------ arithmetic

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, [x + y for x, y in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-x for x in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, [x - y for x, y in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational():
            q = o.coeffs[0]
            return FieldElement(self.field, [x * q for x in self.coeffs])
        if self.is_rational():
            q = self.coeffs[0]
            return FieldElement(self.field, [x * q for x in o.coeffs])
        n = self.field.degree
        prod = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    if y:
                        prod[i + j] += x * y
        return FieldElement(self.field, prod)

    __rmul__ = __mul__

    def inv(self) -> "FieldElement":
        """Multiplicative inverse via the extended Euclidean algorithm mod min_poly."""
        if self.is_zero():
            raise FieldDivisionError(f"inverse of zero in {self.field.label}")
        if self.is_rational():
            return self.field.from_rational(1 / self.coeffs[0])
        # invariant: r_i = s_i * a  (mod m)
        r0, r1 = list(self.field.min_poly), _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r1 is a nonzero constant since min_poly is irreducible
        if not r1:
            raise FieldDivisionError(
                f"{self} is a zero divisor; the minimal polynomial of {self.field.label} is reducible"
            )
        c = r1[0]
        return FieldElement(self.field, [x / c for x in s1])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # --------------------------------------------------------------- numeric

    def embed_numeric(self, precision: int = 30) -> mpmath.mpc:
        """Value at the field's chosen complex root, relative error < 10^-precision."""
        if self.is_rational():
            with mpmath.workdps(precision + 10):
                return _to_mpc(self.coeffs[0])
        root = self.field.numeric_generator(precision)
        with mpmath.workdps(precision + 10):
            acc = mpmath.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * root + _to_mpc(c)
            return acc

    def mod(self, prime: int, root: int) -> int:
        """Image in F_p under a -> root; raises ValueError on a bad denominator."""
        acc = 0
        for c in reversed(self.coeffs):
            if c.denominator % prime == 0:
                raise ValueError(f"denominator {c.denominator} not invertible mod {prime}")
            acc = (acc * root + c.numerator * pow(c.denominator, -1, prime)) % prime
        return acc

    # ------------------------------------------------------------- printing

    def to_json(self) -> List[str]:
        return [format_rational(c) for c in self.coeffs]

    def __str__(self) -> str:
        sym = self.field.symbol
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                body = format_rational(c)
            else:
                mono = sym if k == 1 else f"{sym}^{k}"
                if c == 1:
                    body = mono
                elif c == -1:
                    body = f"-{mono}"
                elif c.denominator == 1:
                    body = f"{c.numerator}*{mono}"
                else:
                    body = f"({c})*{mono}"
            parts.append(body)
        if not parts:
            return "0"
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __repr__(self) -> str:
        return f"FieldElement({self.field.label}: {self})"


# ----------------------------------------------------------------------------
# functional surface


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def embed_numeric(a: FieldElement, precision: int = 30) -> mpmath.mpc:
    return a.embed_numeric(precision)


def common_denominator(values: Iterable[FieldElement]) -> int:
    """Least common multiple of every coordinate denominator."""
    lcm = 1
    for v in values:
        for c in v.coeffs:
            d = c.denominator
            lcm = lcm * d // gcd(lcm, d)
    return lcm
