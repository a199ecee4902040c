"""Rank and kernel computations for the graded Jacobian maps.

Two backends share one small interface (``rank``, ``kernel``,
``kernel_dim``, ``shifted_rank``):

- ``ExactBackend`` does Gauss-Jordan elimination on sparse rows over the
  number field itself.
- ``ModularBackend`` maps the field to F_p through a root of the minimal
  polynomial modulo a prime p < 2^31 and eliminates with numpy int64 arrays.
  Ranks mod p never exceed the true rank; the prime is drawn from the seed.

In ``auto`` mode the modular backend only supplies bounds: the Jacobian
engine certifies every dimension it reports against exact relations.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import nextprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor_sqf, gf_sqf_p

from .llogger import setup_logger
from .methods import RankMethod

logger = setup_logger(__name__)


@dataclass
class SparseMatrix:
    """Row-sparse matrix over a NumberField; rows map column index -> entry"""

    field: object
    nrows: int
    ncols: int
    rows: List[Dict[int, object]]

    @property
    def cells(self) -> int:
        return self.nrows * self.ncols

    def nonzeros(self) -> int:
        return sum(len(r) for r in self.rows)


# ----------------------------------------------------------------------------
# exact elimination


def _echelon_insert(basis: Dict[int, Dict[int, object]], row: Dict[int, object]) -> bool:
    """Reduce ``row`` against a fully reduced basis and add it when nonzero.

    ``basis`` maps pivot column -> row with entry 1 at the pivot and zeros in
    every other pivot column. Returns True when the rank grew.
    """
    row = dict(row)
    for col in [c for c in row if c in basis]:
        factor = row.get(col)
        if factor is None or factor.is_zero():
            continue
        for c, v in basis[col].items():
            nv = row.get(c)
            nv = -(factor * v) if nv is None else nv - factor * v
            if nv.is_zero():
                row.pop(c, None)
            else:
                row[c] = nv
    row = {c: v for c, v in row.items() if not v.is_zero()}
    if not row:
        return False
    pivot = min(row)
    inv = row[pivot].inv()
    row = {c: v * inv for c, v in row.items()}
    for other in basis.values():
        factor = other.get(pivot)
        if factor is not None:
            for c, v in row.items():
                nv = other.get(c)
                nv = -(factor * v) if nv is None else nv - factor * v
                if nv.is_zero():
                    other.pop(c, None)
                else:
                    other[c] = nv
    basis[pivot] = row
    return True


class ExactBackend:
    """Gauss-Jordan over the number field"""

    name = RankMethod.EXACT
    prime: Optional[int] = None

    def __init__(self, field):
        self.field = field

    def _reduce(self, rows, ncols):
        basis: Dict[int, Dict[int, object]] = {}
        for r in rows:
            if r:
                _echelon_insert(basis, r)
        return basis

    def rank(self, matrix: SparseMatrix) -> int:
        return len(self._reduce(matrix.rows, matrix.ncols))

    def kernel(self, matrix: SparseMatrix):
        basis = self._reduce(matrix.rows, matrix.ncols)
        free = [c for c in range(matrix.ncols) if c not in basis]
        one = self.field.one()
        vectors = []
        for f in free:
            v = {f: one}
            for pc, row in basis.items():
                entry = row.get(f)
                if entry is not None:
                    v[pc] = -entry
            vectors.append(v)
        return len(basis), vectors

    @staticmethod
    def kernel_dim(kernel) -> int:
        return len(kernel)

    def shifted_rank(self, kernel, shift_maps: Sequence[Sequence[int]]) -> int:
        basis: Dict[int, Dict[int, object]] = {}
        for mapping in shift_maps:
            for v in kernel:
                _echelon_insert(basis, {mapping[c]: val for c, val in v.items()})
        return len(basis)

    @staticmethod
    def extend(basis: Dict[int, Dict[int, object]], rows) -> List[Dict[int, object]]:
        """Insert ``rows`` into ``basis``; returns the rows that raised the rank."""
        return [r for r in rows if r and _echelon_insert(basis, r)]


# ----------------------------------------------------------------------------
# modular elimination


def modular_root(field, prime: int) -> Optional[int]:
    """A root of the field's minimal polynomial in F_p, or None."""
    den = 1
    for c in field.min_poly:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in field.min_poly]
    if ints[-1] % prime == 0:
        return None
    if len(ints) == 2:
        return (-ints[0] * pow(ints[1], -1, prime)) % prime
    f = [ZZ(c % prime) for c in reversed(ints)]
    if not gf_sqf_p(f, prime, ZZ):
        return None
    _, factors = gf_factor_sqf(f, prime, ZZ)
    for fac in factors:
        if len(fac) == 2:
            return int(-fac[1]) % prime
    return None


def choose_prime(field, seed: int, avoid: int = 1, attempts: int = 500) -> Tuple[int, int]:
    """(p, r): a prime in [2^30, 2^31) not dividing ``avoid`` and a root r of min_poly mod p."""
    rng = random.Random(seed)
    p = int(nextprime(rng.randrange(2 ** 30, 2 ** 30 + 2 ** 29)))
    for _ in range(attempts):
        if avoid % p:
            r = modular_root(field, p)
            if r is not None:
                logger.debug(f"modular backend: prime {p}, root {r}")
                return p, r
        p = int(nextprime(p))
    raise RuntimeError(f"no suitable prime found for {field.label} after {attempts} attempts")


def rref_mod(a: np.ndarray, prime: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form mod p; returns (nonzero rows, pivot columns)."""
    a = np.array(a, dtype=np.int64) % prime
    nrows, ncols = a.shape
    r = 0
    pivots: List[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), prime - 2, prime)
        a[r] = (a[r] * inv) % prime
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r]) % prime) % prime
        pivots.append(c)
        r += 1
    return a[:r], pivots


class ModularBackend:
    """Elimination over F_p with numpy int64 arrays"""

    name = RankMethod.MODULAR

    def __init__(self, field, prime: int, root: int):
        self.field = field
        self.prime = prime
        self.root = root
        self._images: Dict[object, int] = {}

    def image(self, value) -> int:
        cached = self._images.get(value)
        if cached is None:
            cached = value.mod(self.prime, self.root)
            self._images[value] = cached
        return cached

    def to_array(self, matrix: SparseMatrix) -> np.ndarray:
        a = np.zeros((matrix.nrows, matrix.ncols), dtype=np.int64)
        for i, row in enumerate(matrix.rows):
            for j, v in row.items():
                a[i, j] = self.image(v)
        return a

    def rank(self, matrix: SparseMatrix) -> int:
        if matrix.nrows == 0 or matrix.ncols == 0:
            return 0
        return len(rref_mod(self.to_array(matrix), self.prime)[1])

    def kernel(self, matrix: SparseMatrix):
        n = matrix.ncols
        if matrix.nrows == 0:
            return 0, np.eye(n, dtype=np.int64)
        reduced, pivots = rref_mod(self.to_array(matrix), self.prime)
        pivot_set = set(pivots)
        free = [c for c in range(n) if c not in pivot_set]
        k = np.zeros((len(free), n), dtype=np.int64)
        for idx, f in enumerate(free):
            k[idx, f] = 1
            if pivots:
                k[idx, pivots] = (-reduced[:, f]) % self.prime
        return len(pivots), k

    @staticmethod
    def kernel_dim(kernel) -> int:
        return int(kernel.shape[0])

    def shifted_rank(self, kernel, shift_maps: Sequence[Sequence[int]]) -> int:
        return int(self.shifted_span(kernel, shift_maps).shape[0])

    def shifted_span(self, rows: np.ndarray, shift_maps: Sequence[Sequence[int]],
                     width: Optional[int] = None) -> np.ndarray:
        """Echelon basis of the images of ``rows`` under the column maps."""
        width = width or max(max(m) for m in shift_maps) + 1
        if rows.shape[0] == 0:
            return np.zeros((0, width), dtype=np.int64)
        blocks = []
        for mapping in shift_maps:
            block = np.zeros((rows.shape[0], width), dtype=np.int64)
            block[:, np.asarray(mapping)] = rows
            blocks.append(block)
        return rref_mod(np.vstack(blocks), self.prime)[0]

    def reduce_rows(self, vectors: Sequence[Dict[int, object]], width: int) -> np.ndarray:
        """Sparse field vectors as a (len, width) array mod p."""
        a = np.zeros((len(vectors), width), dtype=np.int64)
        for i, v in enumerate(vectors):
            for j, value in v.items():
                a[i, j] = self.image(value)
        return a


def choose_backend(field, largest_cells: int, config, avoid: int = 1):
    """Exact when forced, or in auto mode when the largest matrix fits ``exact_cells``."""
    method = RankMethod.parse(config.rank_method)
    if method == RankMethod.EXACT or (
        method == RankMethod.AUTO and largest_cells <= config.exact_cells
    ):
        logger.info(f"rank backend: exact over {field.label} (largest matrix {largest_cells} cells)")
        return ExactBackend(field)
    prime, root = choose_prime(field, config.seed, avoid)
    logger.info(f"rank backend: modular p={prime} (largest matrix {largest_cells} cells)")
    return ModularBackend(field, prime, root)


def solve_square(matrix: List[List[object]], rhs: List[object]):
    """Solve a square system over a field by Gaussian elimination; None if singular."""
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if a[r][c] != 0), None)
        if pivot is None:
            return None
        a[c], a[pivot] = a[pivot], a[c]
        inv = 1 / a[c][c] if isinstance(a[c][c], Fraction) else a[c][c].inv()
        a[c] = [v * inv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                factor = a[r][c]
                a[r] = [x - factor * y for x, y in zip(a[r], a[c])]
    return [a[r][n] for r in range(n)]


def determinant(matrix: List[List[object]], zero, one):
    """Determinant over a field (FieldElement entries) by elimination."""
    n = len(matrix)
    a = [list(row) for row in matrix]
    det = one
    for c in range(n):
        pivot = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
        if pivot is None:
            return zero
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det = det * a[c][c]
        inv = a[c][c].inv()
        for r in range(c + 1, n):
            if not a[r][c].is_zero():
                factor = a[r][c] * inv
                a[r] = [x - factor * y for x, y in zip(a[r], a[c])]
    return det
