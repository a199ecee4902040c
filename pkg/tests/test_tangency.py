"""Line contact classification and arrangement profiles"""

import pytest

from quartica.arrangement import ProjLine
from quartica.errors import InputError, NonReducedError, UnsupportedSingularityError
from quartica.polyring import HomPoly
from quartica.tangency import (
    SingularityProfile,
    TangencyLabel,
    classify_arrangement,
    classify_line,
    locate_sites,
    verify_bitangent_set,
)
from services.registry import (
    WITNESSES,
    ciani,
    dyck_field,
    dyck_lines,
    fermat,
    get_builtin,
    klein_lambda,
    klein_quartic,
    klein_lines,
    kk_field,
    kk_lines,
)


@pytest.mark.parametrize(
    "name, label",
    [
        ("witness-1111", TangencyLabel.TRANSVERSE),
        ("witness-211", TangencyLabel.SIMPLE_TANGENT),
        ("witness-22", TangencyLabel.BITANGENT),
        ("witness-31", TangencyLabel.FLEX),
        ("witness-4", TangencyLabel.HYPEROSCULATING),
    ],
)
def test_witness_contact(name, label):
    spec = WITNESSES[name]()
    assert classify_line(spec.quartic, spec.lines[0]).label == label


def test_component_line(qq):
    x, y, z = (HomPoly.variable(qq, v) for v in "xyz")
    Q = x * (y ** 3 + z ** 3 + x ** 3)
    assert classify_line(Q, ProjLine.of(qq, (1, 0, 0))).label == TangencyLabel.COMPONENT
    with pytest.raises(NonReducedError):
        classify_arrangement(Q, [ProjLine.of(qq, (1, 0, 0))])


def test_dyck_bitangents_have_twelve_hyperflexes():
    report = verify_bitangent_set(fermat(dyck_field()), dyck_lines())
    assert report.passed
    assert (report.bitangent_count, report.h) == (16, 12)
    assert report.census() == (32, 12)


def test_kk_bitangents_have_twelve_hyperflexes():
    report = verify_bitangent_set(ciani(kk_field(), 3), kk_lines(), threads=2)
    assert report.passed
    assert report.h == 12


def test_klein_bitangents():
    _, verified = klein_lambda()
    assert verified
    report = verify_bitangent_set(klein_quartic(), klein_lines())
    assert report.passed
    assert report.h == 0
    assert report.census() == (56, 0)


def test_bitangent_failures_are_reported():
    lines = list(dyck_lines())
    Q = ciani(dyck_field(), 1)
    report = verify_bitangent_set(Q, lines)
    assert not report.passed
    assert report.failures


def test_verify_needs_28_lines(fermat_qq, qq):
    with pytest.raises(InputError):
        verify_bitangent_set(fermat_qq, [ProjLine.of(qq, (0, 0, 1))])


def test_five_concurrent_lines_unsupported(qq):
    lines = [ProjLine.of(qq, (1, a, 0)) for a in range(5)]
    with pytest.raises(UnsupportedSingularityError):
        classify_arrangement(None, lines)


def test_repeated_line_is_non_reduced(qq):
    lines = [ProjLine.of(qq, (1, 0, 0)), ProjLine.of(qq, (2, 0, 0))]
    with pytest.raises(NonReducedError):
        classify_arrangement(None, lines)


@pytest.mark.parametrize(
    "name, tau",
    [("witness-1111", 4), ("witness-22", 6), ("witness-211", 5), ("witness-31", 6),
     ("witness-4", 7)],
)
def test_witness_profiles(name, tau):
    spec = WITNESSES[name]()
    assert classify_arrangement(spec.quartic, spec.lines).tau == tau


@pytest.mark.parametrize(
    "name, expected",
    [
        ("qk-octic", SingularityProfile(n4=1, t2=8)),
        ("dl-septic", SingularityProfile(n3=1, t7=3)),
        ("kl-octic", SingularityProfile(n4=1, t2=4, t7=2)),
        ("q1-octic", SingularityProfile(n4=1, t7=4)),
        ("h-arrangement-1", SingularityProfile(n4=1, t7=5, n2=4)),
        ("g-arrangement-1-1-5", SingularityProfile(n4=1, t7=6, n2=9)),
        ("c3-dodecic", SingularityProfile(n4=2, t7=8, n2=16)),
    ],
)
def test_arrangement_profiles(name, expected):
    spec = get_builtin(name)
    profile = classify_arrangement(spec.quartic, spec.lines, threads=2)
    assert profile == expected


def test_profile_tau_values():
    assert SingularityProfile(n4=1, t2=8).tau == 33
    assert SingularityProfile(n3=1, t7=3).tau == 25
    assert SingularityProfile(n4=1, t2=4, t7=2).tau == 35
    assert SingularityProfile.from_types(["A1", "A1", "X9"]).to_dict()["n2"] == 2
    with pytest.raises(UnsupportedSingularityError):
        SingularityProfile.from_types(["E6"])


def test_sites_on_curve(qq):
    # x + y + z meets x^4 + y^4 + z^4 in two tacnodes
    spec = WITNESSES["witness-22"]()
    sites = locate_sites(spec.quartic, spec.lines)
    assert sorted(s.kind for s in sites) == ["A3", "A3"]
    assert all(s.point is None and s.on_quartic for s in sites)
