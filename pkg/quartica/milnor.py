"""Graded linear algebra on the Jacobian ideal of a reduced plane curve.

For f of degree d the degree-T Jacobian map is

    M_T : (S_(T-d+1))^3 -> S_T,   (a, b, c) -> a f_x + b f_y + c f_z

so dim M(f)_T = dim S_T - rank M_T and the degree-t Jacobian relations are
the kernel of M_(t+d-1). Everything in this module is built from ranks and
kernels of these matrices.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from .combinatorics import du_plessis_wall_bounds, free_tjurina_target
from .config import EngineConfig
from .errors import (
    CheckFailure,
    DegreeCapError,
    InconsistentClassificationError,
    InputError,
    ResolutionError,
    StabilizationError,
    ZeroFormError,
)
from .linalg import ExactBackend, ModularBackend, choose_backend, rref_mod
from .llogger import setup_logger
from .methods import RankMethod
from .numberfield import common_denominator
from .polyring import HomPoly, dim_s, graded_map_matrix, monomial_index, monomials
from .tangency import SingularityProfile

logger = setup_logger(__name__)


class CurveKind:
    SMOOTH = "smooth"
    FREE = "free"
    NEARLY_FREE = "nearly-free"
    PLUS_ONE = "plus-one-generated"
    GENERAL = "m-syzygy"


@dataclass
class GradedDims:
    """dim M(f)_t for the degrees computed so far"""

    dims: Dict[int, int] = field(default_factory=dict)
    stabilized_value: Optional[int] = None
    stable_from: Optional[int] = None

    def __getitem__(self, t: int) -> int:
        return self.dims[t]

    def to_dict(self) -> dict:
        return {
            "dims": {str(t): v for t, v in sorted(self.dims.items())},
            "stabilized_value": self.stabilized_value,
            "stable_from": self.stable_from,
        }


@dataclass(frozen=True)
class Resolution:
    """0 -> sum S(-e_j) -> sum S(1-d-d_i) -> S^3(1-d) -> S"""

    d: int
    d_list: Tuple[int, ...]
    e_list: Tuple[int, ...]
    numerator: Tuple[int, ...] = ()

    @property
    def m(self) -> int:
        return len(self.d_list)

    @property
    def koszul(self) -> bool:
        """True for the Koszul resolution of a smooth curve."""
        return self.d_list == (self.d - 1,) * 3 and self.e_list == (3 * self.d - 3,)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "m": self.m,
            "d_list": list(self.d_list),
            "e_list": list(self.e_list),
            "koszul": self.koszul,
        }

    def __str__(self) -> str:
        def block(shifts):
            parts = []
            for s in sorted(set(shifts), reverse=True):
                k = shifts.count(s)
                parts.append(f"S^{k}(-{s})" if k > 1 else f"S(-{s})")
            return " + ".join(parts) if parts else "0"

        gens = [self.d - 1 + di for di in self.d_list]
        return (f"0 -> {block(list(self.e_list))} -> {block(gens)} "
                f"-> S^3(-{self.d - 1}) -> S")


@dataclass(frozen=True)
class CurveClass:
    kind: str
    m: int
    level: Optional[int] = None  # d3 for plus-one generated curves
    identity_value: Optional[int] = None  # (d-1)^2 - d1(d-d1-1)
    checks: Tuple[str, ...] = ()  # Tjurina identities that were tested

    @property
    def label(self) -> str:
        if self.kind == CurveKind.GENERAL:
            return f"{self.m}-syzygy"
        if self.kind == CurveKind.PLUS_ONE:
            return f"{self.kind} (level {self.level})"
        return self.kind

    def to_dict(self) -> dict:
        return {"kind": self.kind, "label": self.label, "m": self.m,
                "level": self.level, "identity_value": self.identity_value,
                "checks": list(self.checks)}


# ----------------------------------------------------------------------------


def _shift_maps(t: int) -> List[List[int]]:
    """Column maps for multiplication by x, y, z from degree t-1 to t."""
    src = monomials(t - 1)
    dst = monomial_index(t)
    n_dst = len(dst)
    maps = []
    for v in range(3):
        mapping = []
        for g in range(3):
            for mono in src:
                shifted = list(mono)
                shifted[v] += 1
                mapping.append(g * n_dst + dst[tuple(shifted)])
        maps.append(mapping)
    return maps


class RelationCertifier:
    """Exact dims of the relation spaces AR_t, proved with modular bounds.

    Reduction mod p can only lose rank, so 3 dim S_t - rank_p M_(t+d-1) bounds
    dim AR_t from above. Exact relations multiplied by S_1 and reduced mod p
    bound dim S_1 AR_(t-1) from below. Where the two bounds meet, degree t has
    no new generators and nothing exact is computed. Elsewhere the relations
    of degree t come from exact elimination and the ones outside S_1 AR_(t-1)
    join the generating set.
    """

    def __init__(self, gradient: Tuple[HomPoly, HomPoly, HomPoly], d: int,
                 exact: ExactBackend, modular: ModularBackend, threads: int = 1):
        self.gradient = gradient
        self.d = d
        self.exact = exact
        self.modular = modular
        self.threads = threads
        self.generators: List[Tuple[int, Dict[int, object]]] = []
        self.exact_degrees: List[int] = []
        self._upper: Dict[int, int] = {}
        self._dims: Dict[int, int] = {}
        self._new: Dict[int, int] = {}
        self._span = np.zeros((0, 0), dtype=np.int64)
        self._next = 0

    def _upper_bound(self, t: int) -> int:
        if t not in self._upper:
            rank = self.modular.rank(graded_map_matrix(self.gradient, t + self.d - 1))
            self._upper[t] = 3 * dim_s(t) - rank
        return self._upper[t]

    def prefetch(self, degrees: Iterable[int]):
        """Modular bounds for several degrees at once."""
        todo = [t for t in degrees if t >= self._next and t not in self._upper]
        if self.threads > 1 and len(todo) > 1:
            with ThreadPoolExecutor(max_workers=min(self.threads, len(todo))) as pool:
                for t, bound in zip(todo, pool.map(self._upper_bound, todo)):
                    self._upper[t] = bound

    def dim(self, t: int) -> int:
        if t < 0:
            return 0
        self.extend_through(t)
        return self._dims[t]

    def new_generators(self, t: int) -> int:
        self.extend_through(t)
        return self._new[t]

    def extend_through(self, t_max: int):
        if self._next <= t_max:
            self.prefetch(range(self._next, t_max + 1))
        while self._next <= t_max:
            self._step(self._next)
            self._next += 1

    def _exact_multiples(self, t: int) -> Iterator[Dict[int, object]]:
        """Monomial multiples of the generators found so far, in degree t."""
        dst = monomial_index(t)
        n_dst = len(dst)
        for degree, vector in self.generators:
            src = monomials(degree)
            n_src = len(src)
            for mono in monomials(t - degree):
                out = {}
                for c, value in vector.items():
                    g, base = divmod(c, n_src)
                    shifted = tuple(a + b for a, b in zip(src[base], mono))
                    out[g * n_dst + dst[shifted]] = value
                yield out

    def _reduce(self, vectors, width: int) -> np.ndarray:
        try:
            return self.modular.reduce_rows(vectors, width)
        except ValueError as exc:
            raise CheckFailure(
                f"exact relation does not reduce mod {self.modular.prime} ({exc}); "
                "rerun with another seed"
            ) from exc

    def _step(self, t: int):
        width = 3 * dim_s(t)
        upper = self._upper_bound(t)
        if t == 0 or self._span.shape[0] == 0:
            shifted = np.zeros((0, width), dtype=np.int64)
        else:
            shifted = self.modular.shifted_span(self._span, _shift_maps(t), width)
        lower = int(shifted.shape[0])
        if lower > upper:
            raise CheckFailure(
                f"degree {t}: {lower} independent relations mod p but at most {upper} exist"
            )
        if lower == upper:
            self._dims[t], self._new[t], self._span = upper, 0, shifted
            return

        # bounds apart: a generator degree, or a prime that lost rank
        self.exact_degrees.append(t)
        rank, kernel = self.exact.kernel(graded_map_matrix(self.gradient, t + self.d - 1))
        basis: Dict[int, Dict[int, object]] = {}
        self.exact.extend(basis, self._exact_multiples(t))
        new = self.exact.extend(basis, kernel)
        if len(basis) != len(kernel):
            raise CheckFailure(f"degree {t}: multiples of relations leave the relation space")
        if len(kernel) != upper:
            logger.warning(f"degree {t}: prime {self.modular.prime} overestimates dim AR_t "
                           f"({upper} vs {len(kernel)})")
        self.generators.extend((t, v) for v in new)
        self._dims[t], self._new[t] = len(kernel), len(new)
        rows = np.vstack([shifted, self._reduce(new, width)]) if new else shifted
        self._span = rref_mod(rows, self.modular.prime)[0]
        if self._span.shape[0] != len(kernel):
            logger.warning(f"degree {t}: relations lose rank mod {self.modular.prime}, "
                           "later degrees fall back to exact elimination")
        logger.debug(f"degree {t}: dim AR_t = {len(kernel)}, {len(new)} new generator(s) (exact)")


# ----------------------------------------------------------------------------


class JacobianEngine:
    """Rank and kernel cache for the Jacobian maps of one curve.

    One backend (exact or modular) is chosen up front from the size of the
    largest matrix the analysis will touch. In auto mode a modular choice is
    wrapped in a RelationCertifier, so every rank the engine hands out is
    exact; only an explicit ``modular`` rank method reports mod-p values.
    """

    def __init__(self, f: HomPoly, config: Optional[EngineConfig] = None):
        self.config = config or EngineConfig()
        if f.is_zero():
            raise ZeroFormError("the zero polynomial does not define a curve")
        d = f.degree
        if d < 2:
            raise InputError(f"degree {d} curve has no Jacobian relations to study")
        if d > self.config.degree_cap:
            logger.error(f"degree {d} exceeds the linear-algebra cap {self.config.degree_cap}")
            raise DegreeCapError(
                f"degree {d} exceeds the cap {self.config.degree_cap}; "
                "use the singularity profile for tau instead"
            )
        self.f = f
        self.d = d
        self.gradient = f.gradient()
        self.scan_start = 3 * (d - 2)
        self.scan_end = self.scan_start + d
        self.window = 2 * d
        largest = max(
            dim_s(self.scan_end) * 3 * dim_s(self.scan_end - d + 1),
            dim_s(self.window + d - 1) * 3 * dim_s(self.window),
        )
        avoid = common_denominator(c for g in self.gradient for c in g.terms.values())
        self.backend = choose_backend(f.field, largest, self.config, avoid=avoid)
        self.certifier: Optional[RelationCertifier] = None
        if (RankMethod.parse(self.config.rank_method) == RankMethod.AUTO
                and self.backend.name == RankMethod.MODULAR):
            self.certifier = RelationCertifier(self.gradient, d, ExactBackend(f.field),
                                               self.backend, threads=self.config.threads)
        self._ranks: Dict[int, int] = {}
        self._kernels: Dict[int, object] = {}

    @property
    def rank_method(self) -> str:
        return RankMethod.EXACT if self.certifier is not None else self.backend.name

    @property
    def certified(self) -> bool:
        return self.rank_method == RankMethod.EXACT

    @property
    def prime(self) -> Optional[int]:
        return self.backend.prime

    def matrix(self, t: int):
        return graded_map_matrix(self.gradient, t)

    def _certified_rank(self, t: int) -> int:
        # rank M_t = 3 dim S_(t-d+1) - dim AR_(t-d+1)
        s = t - self.d + 1
        return 3 * dim_s(s) - self.certifier.dim(s) if s >= 0 else 0

    def rank(self, t: int) -> int:
        if t not in self._ranks:
            if self.certifier is not None:
                self._ranks[t] = self._certified_rank(t)
            else:
                self._ranks[t] = self.backend.rank(self.matrix(t))
            logger.debug(f"rank M_{t} = {self._ranks[t]}")
        return self._ranks[t]

    def ranks(self, degrees: Iterable[int]) -> Dict[int, int]:
        """Ranks for several degrees; missing ones are computed in parallel."""
        degrees = list(degrees)
        todo = [t for t in degrees if t not in self._ranks]
        threads = self.config.threads
        if self.certifier is not None:
            if todo:
                self.certifier.extend_through(max(todo) - self.d + 1)
            for t in todo:
                self.rank(t)
        elif threads > 1 and len(todo) > 1:
            with ThreadPoolExecutor(max_workers=min(threads, len(todo))) as pool:
                for t, r in zip(todo, pool.map(lambda t: self.backend.rank(self.matrix(t)), todo)):
                    self._ranks[t] = r
                    logger.debug(f"rank M_{t} = {r}")
        else:
            for t in todo:
                self.rank(t)
        return {t: self._ranks[t] for t in degrees}

    def milnor_dim(self, t: int) -> int:
        if t < 0:
            return 0
        return dim_s(t) - self.rank(t)

    def ar_dim(self, t: int) -> int:
        if t < 0:
            return 0
        return 3 * dim_s(t) - self.rank(t + self.d - 1)

    def ar_kernel(self, t: int):
        """Basis of the degree-t relations, in generator-major monomial coordinates."""
        if t not in self._kernels:
            rank, kernel = self.backend.kernel(self.matrix(t + self.d - 1))
            self._ranks.setdefault(t + self.d - 1, rank)
            self._kernels[t] = kernel
        return self._kernels[t]

    # ------------------------------------------------------------------ tau

    def stabilize(self) -> GradedDims:
        """Scan from 3(d-2) until two consecutive dims agree."""
        self.ranks((self.scan_start, self.scan_start + 1))
        dims = GradedDims()
        for t in range(self.scan_start, self.scan_end):
            a, b = self.milnor_dim(t), self.milnor_dim(t + 1)
            dims.dims[t], dims.dims[t + 1] = a, b
            if a == b:
                dims.stabilized_value = a
                dims.stable_from = t
                break
        if dims.stabilized_value is None:
            logger.error(f"milnor dims did not stabilize on [{self.scan_start}, {self.scan_end}]")
            raise StabilizationError(
                f"dim M(f)_t not constant on [{self.scan_start}, {self.scan_end}]; "
                "the curve is probably not reduced"
            )
        logger.info(f"milnor: degree {self.d}, stabilized at t={dims.stable_from}, "
                    f"tau={dims.stabilized_value}")
        return dims

    def graded_dims(self) -> GradedDims:
        """Full Hilbert function up to the stable degree."""
        dims = self.stabilize()
        self.ranks(range(0, dims.stable_from))
        for t in range(0, dims.stable_from):
            dims.dims[t] = self.milnor_dim(t)
        dims.dims = dict(sorted(dims.dims.items()))
        return dims

    def mdr(self) -> int:
        for t in range(0, self.d):
            if self.ar_dim(t) > 0:
                return t
        raise CheckFailure(f"no Jacobian relation up to degree {self.d - 1}")

    # ----------------------------------------------------------- resolution

    def generator_degrees(self) -> List[int]:
        """Degrees of a minimal generating set of the relation module.

        In degree t the new generators number dim AR_t minus the rank of
        x AR_(t-1) + y AR_(t-1) + z AR_(t-1).
        """
        if self.certifier is not None:
            self.certifier.extend_through(self.window)
            return [t for t in range(self.window + 1)
                    for _ in range(self.certifier.new_generators(t))]
        degrees: List[int] = []
        previous = None
        for t in range(0, self.window + 1):
            kernel = self.ar_kernel(t)
            size = self.backend.kernel_dim(kernel)
            spanned = 0
            if previous is not None and self.backend.kernel_dim(previous) > 0:
                spanned = self.backend.shifted_rank(previous, _shift_maps(t))
            new = size - spanned
            if new < 0:
                raise CheckFailure(f"degree {t}: shifted relations exceed the relation space")
            if new:
                logger.debug(f"{new} new relation generator(s) in degree {t}")
            degrees.extend([t] * new)
            previous = kernel
        return degrees


def hilbert_numerator(dims: GradedDims, d: int) -> np.ndarray:
    """Coefficients of (1-T)^3 * sum_t dim M(f)_t T^t, constant first."""
    n = dims.stable_from
    h = np.array([dims[t] for t in range(n)], dtype=np.int64)
    head = np.convolve(h, np.array([1, -3, 3, -1], dtype=np.int64)) if n else np.zeros(1, np.int64)
    tail = np.zeros(n + 3, dtype=np.int64)
    tail[n:n + 3] = dims.stabilized_value * np.array([1, -2, 1], dtype=np.int64)
    size = max(len(head), len(tail), 3 * d + 2)
    out = np.zeros(size, dtype=np.int64)
    out[:len(head)] += head
    out[:len(tail)] += tail
    return out


def resolution_from_numerator(numerator: np.ndarray, d: int, d_list: List[int]) -> Resolution:
    """Read the e_j off numerator = 1 - 3T^(d-1) + sum T^(d-1+d_i) - sum T^(e_j)."""
    size = max(len(numerator), d + max(d_list, default=0) + 1)
    known = np.zeros(size, dtype=np.int64)
    known[0] += 1
    known[d - 1] -= 3
    for di in d_list:
        known[d - 1 + di] += 1
    residual = np.zeros(size, dtype=np.int64)
    residual[:len(numerator)] += numerator
    residual -= known
    if np.any(residual > 0):
        bad = [int(k) for k in np.nonzero(residual > 0)[0]]
        logger.error(f"hilbert numerator has positive residual in degrees {bad}")
        raise ResolutionError(
            f"Hilbert numerator does not match relation degrees {d_list}: positive terms at {bad}"
        )
    e_list: List[int] = []
    for k in np.nonzero(residual < 0)[0]:
        e_list.extend([int(k)] * int(-residual[k]))
    if len(e_list) != len(d_list) - 2:
        logger.error(f"{len(e_list)} second syzygies for {len(d_list)} relations")
        raise ResolutionError(
            f"expected {len(d_list) - 2} second syzygies, the Hilbert numerator gives {len(e_list)}"
        )
    trimmed = np.trim_zeros(numerator, "b")
    return Resolution(d, tuple(sorted(d_list)), tuple(sorted(e_list)), tuple(int(c) for c in trimmed))


def classify_resolution(resolution: Resolution, tau: int) -> CurveClass:
    """Shape test on the resolution, cross-checked with the Tjurina identities."""
    d, dl, m = resolution.d, resolution.d_list, resolution.m
    r = dl[0]
    target = free_tjurina_target(d, r)
    if tau == 0:
        kind = CurveKind.SMOOTH
    elif m == 2 and dl[0] + dl[1] == d - 1:
        kind = CurveKind.FREE
    elif m == 3 and dl[0] + dl[1] == d and dl[1] == dl[2]:
        kind = CurveKind.NEARLY_FREE
    elif m == 3 and dl[0] + dl[1] == d and dl[2] > dl[1]:
        kind = CurveKind.PLUS_ONE
    else:
        kind = CurveKind.GENERAL

    checks = ["du-plessis-wall-upper"]
    if 2 * r <= d - 1:
        checks.extend(["free-identity", "du-plessis-wall-lower"])
    if 2 * r <= d - 1 and (kind == CurveKind.FREE) != (tau == target):
        logger.error(f"free test disagrees: shape {kind}, tau={tau}, target={target}")
        raise InconsistentClassificationError(
            f"resolution shape says {kind} but (d-1)^2 - r(d-r-1) = {target} vs tau = {tau}"
        )
    if 2 * r <= d and kind == CurveKind.NEARLY_FREE:
        checks.append("nearly-free-identity")
    if 2 * r <= d and kind == CurveKind.NEARLY_FREE and tau + 1 != target:
        logger.error(f"nearly-free test disagrees: tau={tau}, target={target}")
        raise InconsistentClassificationError(
            f"nearly-free shape but (d-1)^2 - r(d-r-1) = {target} != tau + 1 = {tau + 1}"
        )
    lower, upper = du_plessis_wall_bounds(d, r)
    if tau > upper or (lower is not None and tau < lower):
        raise InconsistentClassificationError(
            f"tau={tau} outside the du Plessis-Wall range [{lower}, {upper}] for d={d}, r={r}"
        )
    level = dl[2] if kind == CurveKind.PLUS_ONE else None
    return CurveClass(kind, m, level, target, tuple(checks))


# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class MilnorAnalysis:
    degree: int
    tau: int
    mdr: int
    dims: GradedDims
    resolution: Resolution
    curve_class: CurveClass
    rank_method: str
    prime: Optional[int] = None
    exact_degrees: Tuple[int, ...] = ()  # relation degrees eliminated exactly under auto

    @property
    def certified(self) -> bool:
        return self.rank_method == RankMethod.EXACT

    def to_dict(self) -> dict:
        out = {
            "d": self.degree,
            "tau": self.tau,
            "mdr": self.mdr,
            "class": self.curve_class.label,
            "rank_method": self.rank_method,
            "prime": self.prime,
            "certified": self.certified,
            "exact_degrees": list(self.exact_degrees),
            "resolution": str(self.resolution),
        }
        out.update(self.resolution.to_dict())
        return out


def _engine(f: HomPoly, config: Optional[EngineConfig]) -> JacobianEngine:
    return JacobianEngine(f, config)


def milnor_dim(f: HomPoly, t: int, config: Optional[EngineConfig] = None) -> int:
    if t < 0:
        raise ValueError(f"negative degree {t}")
    return _engine(f, config).milnor_dim(t)


def ar_dim(f: HomPoly, t: int, config: Optional[EngineConfig] = None) -> int:
    if t < 0:
        raise ValueError(f"negative degree {t}")
    return _engine(f, config).ar_dim(t)


def mdr(f: HomPoly, config: Optional[EngineConfig] = None) -> int:
    return _engine(f, config).mdr()


def _check_profile(tau: int, profile: Optional[SingularityProfile]):
    if profile is not None and profile.tau != tau:
        logger.error(f"tau from ranks {tau} != tau from local types {profile.tau}")
        raise InconsistentClassificationError(
            f"total Tjurina number {tau} disagrees with the singularity profile ({profile.tau})"
        )


def total_tjurina(f: HomPoly, config: Optional[EngineConfig] = None,
                  profile: Optional[SingularityProfile] = None) -> int:
    tau = _engine(f, config).stabilize().stabilized_value
    _check_profile(tau, profile)
    return tau


def _resolve(engine: JacobianEngine) -> Tuple[GradedDims, Resolution]:
    dims = engine.graded_dims()
    d_list = engine.generator_degrees()
    numerator = hilbert_numerator(dims, engine.d)
    resolution = resolution_from_numerator(numerator, engine.d, d_list)
    if resolution.m >= 3 and resolution.d_list[0] + resolution.d_list[1] < engine.d:
        raise ResolutionError(f"d1 + d2 < d for relation degrees {resolution.d_list}")
    if resolution.m == 3 and resolution.d_list[2] > engine.d - 1:
        raise ResolutionError(f"d3 > d - 1 for the 3-syzygy curve {resolution.d_list}")
    logger.info(f"resolution: {resolution}")
    return dims, resolution


def minimal_resolution(f: HomPoly, config: Optional[EngineConfig] = None) -> Resolution:
    return _resolve(_engine(f, config))[1]


def classify(f: HomPoly, config: Optional[EngineConfig] = None) -> CurveClass:
    return analyze(f, config).curve_class


def analyze(f: HomPoly, config: Optional[EngineConfig] = None,
            profile: Optional[SingularityProfile] = None) -> MilnorAnalysis:
    """tau, mdr, minimal resolution and class, sharing one rank cache."""
    engine = _engine(f, config)
    dims, resolution = _resolve(engine)
    tau = dims.stabilized_value
    _check_profile(tau, profile)
    r = engine.mdr()
    if r != resolution.d_list[0]:
        raise InconsistentClassificationError(
            f"mdr {r} differs from the lowest generator degree {resolution.d_list[0]}"
        )
    curve_class = classify_resolution(resolution, tau)
    logger.info(f"milnor: tau={tau} mdr={r} class={curve_class.label} via {engine.rank_method}")
    return MilnorAnalysis(
        degree=engine.d,
        tau=tau,
        mdr=r,
        dims=dims,
        resolution=resolution,
        curve_class=curve_class,
        rank_method=engine.rank_method,
        prime=engine.prime,
        exact_degrees=tuple(engine.certifier.exact_degrees) if engine.certifier else (),
    )
