"""
Command implementations behind the quartica CLI.

Each cmd_* function takes already-parsed inputs and returns a RunReport;
argument parsing, output formatting and exit codes live in
scripts/quartica_cli.py.
"""

import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple

from quartica.arrangement import incidence, incidence_table, ordinary_tjurina
from quartica.bitangents import find_bitangents_numeric, match_lines, random_quartic
from quartica.combinatorics import (
    DiophantineReport,
    DiophantineSystem,
    HirzebruchStatus,
    WeakCombinatorics,
    count_check,
    enumerate_nonneg,
    hirzebruch_check,
    langer_lhs_bound,
    quadruple_bound_chain,
    two_lines_system,
    weak_combinatorics_from_profile,
)
from quartica.config import EngineConfig
from quartica.errors import DegreeCapError, InputError, UnsupportedSingularityError
from quartica.llogger import setup_logger
from quartica.milnor import analyze, total_tjurina
from quartica.numberfield import NumberField
from quartica.polyring import HomPoly
from quartica.serialization import (
    CurveSpec,
    CurveSpecModel,
    PolynomialModel,
    RunReport,
    digest,
    load_json,
    parse_curve_json,
    parse_lines_json,
)
from quartica.tangency import SingularityProfile, classify_arrangement, verify_bitangent_set

from services.registry import (
    ciani_spec,
    get_builtin,
    klein_lambda,
    list_builtins,
    reference_points,
    table_lines,
)

logger = setup_logger(__name__)

# bitangent arrangements: t_2 and t_4 of the 28 lines
EXPECTED_QUADRUPLES = {"klein": (252, 21), "dyck": (288, 15), "kk": (324, 9)}


class Timer:
    """Wall-clock timings per phase, reported only on request"""

    def __init__(self, enabled: bool = False):
        self.enabled = enabled
        self.phases: Dict[str, float] = {}

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.phases[name] = round(time.perf_counter() - start, 6)

    def report(self) -> Optional[Dict[str, float]]:
        return dict(self.phases) if self.enabled else None


# ----------------------------------------------------------------------------
# inputs


def load_curve(builtin: Optional[str] = None, input_path: Optional[str] = None,
               lines: Optional[str] = None) -> CurveSpec:
    """Exactly one of a registry name, a curve JSON file or a JSON list of lines."""
    given = [x for x in (builtin, input_path, lines) if x is not None]
    if len(given) != 1:
        raise InputError("give exactly one of --builtin, --input or --lines")
    if builtin is not None:
        return get_builtin(builtin)
    if input_path is not None:
        path = Path(input_path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
        return parse_curve_json(text, source=str(path))
    parsed = parse_lines_json(lines)
    nf = parsed[0].field if parsed else None
    return CurveSpec(label="lines", field=nf or NumberField.rationals(), lines=parsed)


def curve_payload(spec: CurveSpec) -> Dict[str, Any]:
    return CurveSpecModel.from_curve_spec(spec).model_dump(mode="json")


def _report(command: str, inputs: Dict[str, Any], timer: Timer, **fields) -> RunReport:
    return RunReport(command=command, inputs_digest=digest(inputs), timing=timer.report(), **fields)


def _quartic_is_smooth(Q: HomPoly, config: EngineConfig) -> bool:
    return total_tjurina(Q, config) == 0


def arrangement_profile(spec: CurveSpec,
                        config: EngineConfig) -> Tuple[Optional[SingularityProfile], Optional[str]]:
    """(profile, reason) from the local classifier.

    The profile is None when the classifier does not apply (no smooth quartic
    plus lines) or when it met a point outside the supported local types;
    ``reason`` is set only in the second case.
    """
    if not spec.lines and spec.quartic is None:
        return None, None
    if spec.quartic is not None:
        if spec.quartic.degree != 4 or not _quartic_is_smooth(spec.quartic, config):
            logger.info(f"{spec.label}: curve is not a smooth quartic, no local profile")
            return None, None
    try:
        return classify_arrangement(spec.quartic, spec.lines, threads=config.threads), None
    except UnsupportedSingularityError as exc:
        logger.warning(f"{spec.label}: local classification skipped ({exc})")
        return None, str(exc)


# ----------------------------------------------------------------------------
# commands


def cmd_incidence(spec: CurveSpec, multiplicity: Optional[int] = None,
                  config: Optional[EngineConfig] = None, timing: bool = False) -> RunReport:
    """Intersection points of the lines, their multiplicities and the "+" table."""
    cfg = config or EngineConfig()
    timer = Timer(timing)
    with timer.phase("incidence"):
        inc = incidence(spec.lines, threads=cfg.threads)
        table = incidence_table(
            inc, spec.lines,
            multiplicity=multiplicity,
            line_labels=spec.labels(),
            reference_points=reference_points(spec.label),
        )
    labels = spec.labels()
    points = [
        {
            "label": column,
            "coords": p.point.to_json(),
            "multiplicity": p.multiplicity,
            "lines": [labels[i] for i in p.lines],
        }
        for column, p in zip(table.column_labels, table.points)
    ]
    results = {
        "n_lines": inc.n_lines,
        "t_vector": {str(k): v for k, v in sorted(inc.t_vector.items())},
        "ordinary_tjurina": ordinary_tjurina(inc),
        "points": points,
        "table": table.to_csv(),
    }
    messages = []
    passed = True
    expected = EXPECTED_QUADRUPLES.get(spec.label.replace("-bitangents", ""))
    if expected is not None:
        found = (inc.t(2), inc.t(4))
        if found != expected:
            passed = False
            messages.append(f"expected t2, t4 = {expected}, found {found}")
    logger.info(f"incidence: {inc.n_lines} lines, t = {results['t_vector']}")
    inputs = {"curve": curve_payload(spec), "filter": multiplicity}
    return _report("incidence", inputs, timer, passed=passed, results=results, messages=messages)


def cmd_verify_bitangents(spec: CurveSpec, config: Optional[EngineConfig] = None,
                          timing: bool = False) -> RunReport:
    """Check that all 28 lines are bitangent to the quartic."""
    cfg = config or EngineConfig()
    timer = Timer(timing)
    if spec.quartic is None:
        raise InputError(f"{spec.label}: verify needs a quartic and its 28 lines")
    inputs = {"curve": curve_payload(spec)}
    messages: List[str] = []
    results: Dict[str, Any] = {}

    if spec.label == "klein":
        lam, verified = klein_lambda()
        results["lambda"] = str(lam)
        if not verified:
            messages.append("no Ciani member at a root of lam^2 + 3 lam + 18 fits the table; "
                            "checked incidences only")
            with timer.phase("incidence"):
                inc = incidence(spec.lines, threads=cfg.threads)
            found = (inc.t(2), inc.t(4))
            results["mode"] = "incidence-only"
            results["t_vector"] = {str(k): v for k, v in sorted(inc.t_vector.items())}
            passed = found == EXPECTED_QUADRUPLES["klein"]
            return _report("verify", inputs, timer, passed=passed, results=results,
                           messages=messages)

    with timer.phase("tangency"):
        report = verify_bitangent_set(spec.quartic, spec.lines, threads=cfg.threads)
    labels = spec.labels()
    results.update(report.to_dict())
    results["mode"] = "tangency"
    t2, t7 = report.census()
    results["census"] = {"t2": t2, "t7": t7}
    for i, pattern in report.failures:
        messages.append(f"{labels[i]} is not a bitangent (pattern {pattern})")
    return _report("verify", inputs, timer, passed=report.passed, results=results,
                   messages=messages)


def cmd_milnor(spec: CurveSpec, config: Optional[EngineConfig] = None,
               timing: bool = False) -> RunReport:
    """tau, mdr, minimal resolution and class of the union curve.

    Passes only when the ranks are exact and every cross-check that applies
    to the curve ran: a quartic-line arrangement whose singular points fall
    outside the supported local types fails instead of going unchecked.
    """
    cfg = config or EngineConfig()
    timer = Timer(timing)
    f = spec.polynomial()
    with timer.phase("profile"):
        profile, skipped = arrangement_profile(spec, cfg)
    try:
        with timer.phase("milnor"):
            analysis = analyze(f, cfg, profile)
    except DegreeCapError as exc:
        if profile is not None:
            raise DegreeCapError(f"{exc} (the singularity profile gives tau = {profile.tau})") from exc
        raise
    results = analysis.to_dict()
    results["dims"] = analysis.dims.to_dict()
    messages: List[str] = []
    if profile is not None:
        results["profile"] = profile.to_dict()
        profile_check = "passed"
    elif skipped is not None:
        profile_check = "skipped"
        messages.append(f"tau not cross-checked against local types: {skipped}")
    else:
        profile_check = "not-applicable"
    if not analysis.certified:
        messages.append(f"ranks computed mod {analysis.prime} only; "
                        "use --rank-method auto or exact to certify")
    results["checks"] = {
        "certified": analysis.certified,
        "profile": profile_check,
        "classification": list(analysis.curve_class.checks),
    }
    passed = analysis.certified and profile_check != "skipped"
    inputs = {"curve": curve_payload(spec)}
    return _report("milnor", inputs, timer, passed=passed, results=results, messages=messages)


def cmd_hirzebruch(spec: Optional[CurveSpec] = None, wc: Optional[WeakCombinatorics] = None,
                   config: Optional[EngineConfig] = None, timing: bool = False) -> RunReport:
    """The quartic-line Hirzebruch inequality, from counts or from a classified curve."""
    cfg = config or EngineConfig()
    timer = Timer(timing)
    if (spec is None) == (wc is None):
        raise InputError("hirzebruch needs either a curve or weak combinatorics")
    messages: List[str] = []
    if spec is not None:
        if spec.quartic is not None and spec.quartic.degree != 4:
            raise InputError(f"{spec.label}: the curve component must be a quartic")
        with timer.phase("tangency"):
            profile = classify_arrangement(spec.quartic, spec.lines, threads=cfg.threads)
        wc = weak_combinatorics_from_profile(
            profile, k=0 if spec.quartic is None else 1, d=len(spec.lines)
        )
        inputs = {"curve": curve_payload(spec)}
    else:
        inputs = {"wc": wc.model_dump()}
    result = hirzebruch_check(wc)
    count = count_check(wc)
    if not count.holds:
        messages.append(f"weighted singularity count off by {count.residual}")
    if result.status == HirzebruchStatus.FAILS:
        messages.append(f"inequality fails by {-result.slack}")
    results = {
        "wc": wc.model_dump(),
        "hirzebruch": result.to_dict(),
        "count": count.to_dict(),
        "langer": langer_lhs_bound(wc).to_dict(),
    }
    passed = result.status != HirzebruchStatus.FAILS
    return _report("hirzebruch", inputs, timer, passed=passed, results=results, messages=messages)


def cmd_find_bitangents(spec: Optional[CurveSpec] = None, ciani: Optional[str] = None,
                        random_count: Optional[int] = None, match: Optional[str] = None,
                        tol: Optional[float] = None, config: Optional[EngineConfig] = None,
                        timing: bool = False) -> RunReport:
    """Numeric bitangents of one quartic, optionally matched to an exact table."""
    cfg = config or EngineConfig()
    tol = cfg.tol if tol is None else tol
    timer = Timer(timing)
    if sum(x is not None for x in (spec, ciani, random_count)) != 1:
        raise InputError("give exactly one of a curve, --ciani or --random")

    if random_count is not None:
        return _find_random(random_count, tol, cfg, timer)

    if ciani is not None:
        spec = ciani_spec(ciani)
    if spec.quartic is None or spec.quartic.degree != 4:
        raise InputError(f"{spec.label}: find-bitangents needs a quartic")
    with timer.phase("search"):
        search = find_bitangents_numeric(spec.quartic, cfg, tol=tol)
    results: Dict[str, Any] = search.to_dict()
    results["max_residual"] = max((ln.residual for ln in search.lines), default=0.0)
    passed = search.count == 28
    messages: List[str] = []
    if match is not None:
        with timer.phase("match"):
            matched = match_lines(search.lines, table_lines(match), tol=tol, digits=cfg.digits)
        results["match"] = {"table": match, **matched.to_dict()}
        if not matched.complete:
            passed = False
            messages.append(
                f"{len(matched.pairs)}/28 matched; unmatched table lines "
                f"{[j + 1 for j in matched.unmatched_table]}"
            )
    inputs = {"quartic": PolynomialModel.from_hompoly(spec.quartic).model_dump(mode="json"),
              "field": curve_payload(spec)["field"], "match": match, "tol": tol}
    return _report("find-bitangents", inputs, timer, passed=passed, results=results,
                   messages=messages)


def _find_random(count: int, tol: float, cfg: EngineConfig, timer: Timer) -> RunReport:
    if count < 1:
        raise InputError(f"--random needs a positive count, got {count}")
    runs = []
    passed = True
    with timer.phase("search"):
        for k in range(count):
            Q = random_quartic(cfg.seed + k)
            search = find_bitangents_numeric(Q, cfg, tol=tol)
            worst = max((ln.residual for ln in search.lines), default=0.0)
            runs.append({
                "quartic": str(Q),
                "count": search.count,
                "max_residual": worst,
                "transformed": search.transformed,
            })
            passed = passed and search.count == 28 and worst <= tol
    inputs = {"random": count, "seed": cfg.seed, "tol": tol}
    return _report("find-bitangents", inputs, timer, passed=passed, results={"runs": runs})


def cmd_list() -> RunReport:
    names = list_builtins()
    return RunReport(command="list", inputs_digest=digest({}), results={"builtins": names})


def cmd_diophantine(system_text: Optional[str] = None, timing: bool = False) -> RunReport:
    """Non-negative solutions of a linear system (default: smooth quartic plus two lines)."""
    timer = Timer(timing)
    if system_text is None:
        system = two_lines_system()
    else:
        system = DiophantineSystem.model_validate(load_json(system_text, "--system"))
    with timer.phase("enumerate"):
        solutions = enumerate_nonneg(system)
    report = DiophantineReport(system, solutions)
    return _report("diophantine", {"system": system.model_dump()}, timer,
                   results=report.to_dict())


def cmd_quadruple_bound(h: int) -> RunReport:
    chain = quadruple_bound_chain(h)
    return RunReport(command="quadruple-bound", inputs_digest=digest({"h": h}),
                     results=chain.to_dict())
