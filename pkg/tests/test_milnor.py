"""Milnor algebra dimensions, minimal resolutions and freeness classes"""

import random
from math import comb

import numpy as np
import pytest

from quartica.arrangement import ProjLine
from quartica.bitangents import random_quartic
from quartica.config import EngineConfig
from quartica.errors import DegreeCapError, InconsistentClassificationError, ZeroFormError
from quartica.milnor import (
    CurveKind,
    GradedDims,
    Resolution,
    analyze,
    classify_resolution,
    hilbert_numerator,
    mdr,
    milnor_dim,
    resolution_from_numerator,
    total_tjurina,
)
from quartica.polyring import HomPoly, polynomial_product
from quartica.tangency import SingularityProfile, classify_arrangement
from services.registry import WITNESSES, get_builtin

FERMAT_DIMS = GradedDims(dims={0: 1, 1: 3, 2: 6, 3: 7, 4: 6, 5: 3, 6: 1},
                         stabilized_value=0, stable_from=7)


def _assert_numerator_matches(analysis):
    """(1-T)^3 H(T) must equal 1 - 3T^(d-1) + sum T^(d-1+d_i) - sum T^(e_j)."""
    d = analysis.degree
    numerator = hilbert_numerator(analysis.dims, d)
    expected = np.zeros(max(len(numerator), 3 * d), dtype=np.int64)
    expected[0] += 1
    expected[d - 1] -= 3
    for di in analysis.resolution.d_list:
        expected[d - 1 + di] += 1
    for e in analysis.resolution.e_list:
        expected[e] -= 1
    padded = np.zeros_like(expected)
    padded[:len(numerator)] = numerator
    assert np.array_equal(padded, expected)


def _assert_syzygy_bounds(analysis):
    d, d_list = analysis.degree, analysis.resolution.d_list
    assert list(d_list) == sorted(d_list)
    if len(d_list) >= 3:
        assert d_list[0] + d_list[1] >= d
    if len(d_list) == 3:
        assert d_list[2] <= d - 1


def _random_curve(seed):
    """Random quartic plus 1 + seed % 5 rational lines; even seeds with 3+ lines get a triple point."""
    rng = random.Random(seed)
    quartic = random_quartic(seed)
    qq = quartic.field
    lines = []
    while len(lines) < 1 + seed % 5:
        coords = tuple(rng.randint(-50, 50) for _ in range(3))
        if any(coords) and ProjLine.of(qq, coords) not in lines:
            lines.append(ProjLine.of(qq, coords))
    concurrent = len(lines) >= 3 and seed % 2 == 0
    if concurrent:
        a, b = rng.randint(1, 9), rng.randint(1, 9)
        lines[2] = ProjLine.of(qq, [a * u + b * v for u, v in zip(lines[0].coords, lines[1].coords)])
    return quartic, lines, concurrent


RANDOM_SEEDS = [pytest.param(seed, marks=pytest.mark.slow) if seed % 5 >= 3 else seed
                for seed in range(15)]


def test_hilbert_numerator_of_smooth_quartic():
    # (1 + T + T^2)^3 (1 - T)^3 = (1 - T^3)^3
    numerator = hilbert_numerator(FERMAT_DIMS, 4)
    expected = np.zeros_like(numerator)
    expected[[0, 3, 6, 9]] = [1, -3, 3, -1]
    assert np.array_equal(numerator, expected)
    resolution = resolution_from_numerator(numerator, 4, [3, 3, 3])
    assert resolution.e_list == (9,)
    assert resolution.koszul


def test_smooth_quartic(fermat_qq, config):
    analysis = analyze(fermat_qq, config)
    assert analysis.tau == 0
    assert analysis.mdr == 3
    assert analysis.resolution.koszul
    assert analysis.curve_class.kind == CurveKind.SMOOTH
    assert [analysis.dims[t] for t in range(7)] == [1, 3, 6, 7, 6, 3, 1]


def test_milnor_dim_and_mdr(fermat_qq, config):
    assert milnor_dim(fermat_qq, 3, config) == 7
    assert mdr(fermat_qq, config) == 3


@pytest.mark.parametrize("name, tau", [("witness-1111", 4), ("witness-22", 6),
                                       ("witness-211", 5), ("witness-31", 6), ("witness-4", 7)])
def test_witness_quintics(name, tau, config):
    spec = WITNESSES[name]()
    profile = classify_arrangement(spec.quartic, spec.lines)
    analysis = analyze(spec.polynomial(), config, profile=profile)
    assert analysis.degree == 5
    assert analysis.tau == tau
    _assert_numerator_matches(analysis)
    # free would need tau = 12 (mdr 2) or 13 (mdr 1)
    assert analysis.curve_class.kind not in (CurveKind.FREE, CurveKind.NEARLY_FREE)


def test_exact_and_modular_agree():
    spec = WITNESSES["witness-22"]()
    f = spec.polynomial()
    exact = analyze(f, EngineConfig(rank_method="exact", threads=1, seed=1))
    modular = analyze(f, EngineConfig(rank_method="modular", threads=1, seed=1))
    assert exact.rank_method == "exact" and exact.prime is None
    assert modular.rank_method == "modular" and modular.prime is not None
    assert exact.certified and not modular.certified
    assert modular.exact_degrees == ()
    assert (exact.tau, exact.mdr) == (modular.tau, modular.mdr)
    assert exact.resolution.d_list == modular.resolution.d_list


@pytest.mark.parametrize("name", sorted(WITNESSES))
def test_certified_auto_matches_exact(name):
    spec = WITNESSES[name]()
    f = spec.polynomial()
    exact = analyze(f, EngineConfig(rank_method="exact", threads=1, seed=3))
    auto = analyze(f, EngineConfig(rank_method="auto", exact_cells=0, threads=1, seed=3))
    assert exact.rank_method == "exact" and exact.exact_degrees == ()
    assert auto.rank_method == "exact" and auto.certified and auto.prime is not None
    assert (auto.tau, auto.mdr) == (exact.tau, exact.mdr)
    assert auto.resolution.d_list == exact.resolution.d_list
    assert auto.resolution.e_list == exact.resolution.e_list
    assert auto.dims.dims == exact.dims.dims
    # every generator degree needs an exact elimination
    assert set(exact.resolution.d_list) <= set(auto.exact_degrees)
    _assert_numerator_matches(exact)


def test_certification_with_threads():
    f = get_builtin("dl-septic").polynomial()
    single = analyze(f, EngineConfig(rank_method="auto", exact_cells=0, threads=1, seed=11))
    pooled = analyze(f, EngineConfig(rank_method="auto", exact_cells=0, threads=3, seed=11))
    assert single.certified and pooled.certified
    assert single.exact_degrees == pooled.exact_degrees
    assert single.resolution.d_list == pooled.resolution.d_list
    assert single.resolution.e_list == pooled.resolution.e_list


def test_default_config_reports_exact_ranks():
    analysis = analyze(get_builtin("dl-septic").polynomial(), EngineConfig(threads=1))
    assert analysis.rank_method == "exact"
    assert analysis.certified
    assert analysis.to_dict()["certified"] is True
    assert analysis.resolution.d_list == (3, 4, 5)


@pytest.mark.parametrize("seed", RANDOM_SEEDS)
def test_random_quartic_with_lines(seed, config):
    quartic, lines, concurrent = _random_curve(seed)
    k = len(lines)
    profile = classify_arrangement(quartic, lines)
    # nodes with Q and between lines, plus one for a D4 point
    assert profile.tau == 4 * k + comb(k, 2) + int(concurrent)
    f = polynomial_product([quartic] + [line.linear_form() for line in lines])
    assert f.degree == 4 + k
    assert total_tjurina(f, config, profile=profile) == profile.tau
    analysis = analyze(f, config, profile=profile)
    assert analysis.tau == profile.tau
    assert analysis.certified
    _assert_numerator_matches(analysis)
    _assert_syzygy_bounds(analysis)


@pytest.mark.parametrize("seed", [s for s in range(15) if s % 5 < 2])
def test_random_curves_exact_mode(seed, config):
    quartic, lines, _ = _random_curve(seed)
    f = polynomial_product([quartic] + [line.linear_form() for line in lines])
    exact = analyze(f, EngineConfig(rank_method="exact", threads=1, seed=config.seed))
    auto = analyze(f, config)
    assert exact.rank_method == "exact" and exact.prime is None
    assert (exact.tau, exact.mdr) == (auto.tau, auto.mdr)
    assert exact.resolution.d_list == auto.resolution.d_list
    assert exact.resolution.e_list == auto.resolution.e_list
    _assert_numerator_matches(exact)
    _assert_syzygy_bounds(exact)


@pytest.mark.parametrize(
    "name, tau, d_list, e_list, kind",
    [
        ("dl-septic", 25, (3, 4, 5), (12,), CurveKind.PLUS_ONE),
        ("kl-octic", 35, (4, 4, 5), (13,), CurveKind.PLUS_ONE),
        ("qk-octic", 33, (4, 4, 7), (15,), CurveKind.PLUS_ONE),
        ("q1-octic", 37, (3, 4), (), CurveKind.FREE),
    ],
)
def test_named_arrangements(name, tau, d_list, e_list, kind, config):
    spec = get_builtin(name)
    profile = classify_arrangement(spec.quartic, spec.lines)
    analysis = analyze(spec.polynomial(), config, profile=profile)
    assert analysis.tau == tau
    assert analysis.resolution.d_list == d_list
    assert analysis.resolution.e_list == e_list
    assert analysis.curve_class.kind == kind
    assert analysis.rank_method == "exact" and analysis.certified
    _assert_numerator_matches(analysis)
    _assert_syzygy_bounds(analysis)


def test_plus_one_label(config):
    analysis = analyze(get_builtin("kl-octic").polynomial(), config)
    assert analysis.curve_class.label == "plus-one-generated (level 5)"
    assert analysis.to_dict()["class"] == analysis.curve_class.label


H_NAMES = [f"h-arrangement-{n}" for n in range(1, 25)]
G_NAMES = ["g-arrangement-1-1-5", "g-arrangement-2-1-8", "g-arrangement-3-2-6"]
C_NAMES = ["c1-dodecic", "c2-dodecic", "c3-dodecic"]


@pytest.mark.slow
@pytest.mark.parametrize("name", H_NAMES)
def test_h_arrangements_are_free(name, config):
    analysis = analyze(get_builtin(name).polynomial(), config)
    assert analysis.degree == 9
    assert (analysis.tau, analysis.mdr) == (48, 4)
    assert analysis.resolution.d_list == (4, 4)
    assert analysis.resolution.e_list == ()
    assert analysis.curve_class.kind == CurveKind.FREE
    assert analysis.rank_method == "exact" and analysis.certified
    _assert_numerator_matches(analysis)


@pytest.mark.slow
@pytest.mark.parametrize("name", G_NAMES)
def test_g_arrangements_are_nearly_free(name, config):
    analysis = analyze(get_builtin(name).polynomial(), config)
    assert analysis.degree == 10
    assert (analysis.tau, analysis.mdr) == (60, 5)
    assert analysis.resolution.d_list == (5, 5, 5)
    assert analysis.resolution.e_list == (15,)
    assert analysis.curve_class.kind == CurveKind.NEARLY_FREE
    assert analysis.rank_method == "exact" and analysis.certified
    _assert_numerator_matches(analysis)
    _assert_syzygy_bounds(analysis)


@pytest.mark.slow
@pytest.mark.parametrize("name", C_NAMES)
def test_dodecics_are_nearly_free(name, config):
    spec = get_builtin(name)
    profile = classify_arrangement(spec.quartic, spec.lines)
    analysis = analyze(spec.polynomial(), config, profile=profile)
    assert analysis.degree == 12
    assert (analysis.tau, analysis.mdr) == (90, 5)
    assert analysis.resolution.d_list == (5, 7, 7)
    assert analysis.resolution.e_list == (19,)
    assert analysis.curve_class.kind == CurveKind.NEARLY_FREE
    assert analysis.rank_method == "exact" and analysis.certified
    _assert_numerator_matches(analysis)
    _assert_syzygy_bounds(analysis)


def test_profile_disagreement(fermat_qq, config):
    with pytest.raises(InconsistentClassificationError):
        total_tjurina(fermat_qq, config, profile=SingularityProfile(n2=1))


def test_degree_cap(qq, config):
    f = HomPoly(qq, 13, {(13, 0, 0): 1, (0, 13, 0): 1, (0, 0, 13): 1})
    with pytest.raises(DegreeCapError):
        analyze(f, config)


def test_zero_polynomial(qq, config):
    with pytest.raises(ZeroFormError):
        analyze(HomPoly.zero(qq, 4), config)


def test_classify_resolution_shapes():
    free = classify_resolution(Resolution(8, (3, 4), ()), 37)
    assert free.kind == CurveKind.FREE
    nearly = classify_resolution(Resolution(10, (5, 5, 5), (15,)), 60)
    assert nearly.kind == CurveKind.NEARLY_FREE
    plus_one = classify_resolution(Resolution(7, (3, 4, 5), (12,)), 25)
    assert plus_one.label == "plus-one-generated (level 5)"
    general = classify_resolution(Resolution(9, (4, 5, 5, 5), (10, 10)), 40)
    assert general.label == "4-syzygy"


def test_classify_resolution_rejects_bad_free_tau():
    with pytest.raises(InconsistentClassificationError):
        classify_resolution(Resolution(8, (3, 4), ()), 36)
