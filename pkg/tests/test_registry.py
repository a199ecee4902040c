"""Built-in curves and their JSON form"""

import pytest

from quartica.errors import InputError, UnknownBuiltinError
from quartica.serialization import CurveSpecModel, parse_curve_json
from services.registry import (
    HYPERFLEX_GROUPS,
    c_dodecic,
    get_builtin,
    h_arrangement,
    kk_constants,
    klein_lambda,
    klein_lambda_candidates,
    list_builtins,
    other_hyperflex_lines,
    reference_points,
    table_lines,
)


def test_fields_contain_needed_constants():
    c = kk_constants()
    assert c["i"] * c["i"] == -1
    assert c["r"] * c["r"] == 5


def test_klein_lambda_is_verified():
    lam, verified = klein_lambda()
    assert verified
    assert lam in klein_lambda_candidates()
    assert lam * lam + 3 * lam + 18 == 0


def test_every_fixed_name_resolves():
    for name in list_builtins():
        if name.startswith(("h-arrangement-", "g-arrangement-", "ciani:")):
            continue
        spec = get_builtin(name)
        assert spec.degree > 0


@pytest.mark.parametrize(
    "name, degree, n_lines",
    [
        ("kl-octic", 8, 4),
        ("dl-septic", 7, 3),
        ("qk-octic", 8, 4),
        ("q2-octic", 8, 4),
        ("h-arrangement-9", 9, 5),
        ("g-arrangement-3-2-7", 10, 6),
        ("c2-dodecic", 12, 8),
        ("klein-bitangents", 28, 28),
        ("dyck", 32, 28),
        ("ciani:-3/2", 4, 0),
    ],
)
def test_degrees(name, degree, n_lines):
    spec = get_builtin(name)
    assert spec.degree == degree
    assert len(spec.lines) == n_lines


def test_line_labels_follow_table_numbers():
    assert get_builtin("qk-octic").labels() == ["l1", "l2", "l4", "l16"]
    assert get_builtin("h-arrangement-1").labels() == ["l25", "l26", "l27", "l28", "l1"]
    assert c_dodecic(1).labels()[-1] == "l4"


def test_hyperflex_groups():
    assert other_hyperflex_lines(2) == (13, 14, 23, 24, 25, 26, 27, 28)
    assert all(len(g) == 4 for g in HYPERFLEX_GROUPS.values())
    assert h_arrangement(16).labels()[:4] == ["l1", "l2", "l3", "l4"]


@pytest.mark.parametrize(
    "name",
    ["nope", "h-arrangement-0", "h-arrangement-25", "g-arrangement-1-5-2",
     "g-arrangement-4-1-2", "g-arrangement-1-2", "q4-octic"],
)
def test_unknown_names(name):
    with pytest.raises(UnknownBuiltinError):
        get_builtin(name)


def test_bad_ciani_parameter():
    with pytest.raises(InputError):
        get_builtin("ciani:abc")


def test_tables_and_reference_points():
    assert len(table_lines("Klein-Table")) == 28
    assert len(reference_points("dyck")) == 15
    assert len(reference_points("kk-bitangents")) == 9
    assert reference_points("fermat") is None
    with pytest.raises(UnknownBuiltinError):
        table_lines("fermat")


@pytest.mark.parametrize("name", ["dyck", "kl-octic", "witness-31", "ciani:7"])
def test_json_roundtrip(name):
    spec = get_builtin(name)
    text = CurveSpecModel.from_curve_spec(spec).model_dump_json()
    back = parse_curve_json(text)
    assert back.field == spec.field
    assert back.quartic == spec.quartic
    assert back.lines == spec.lines
    assert back.labels() == spec.labels()
