"""Numeric bitangent search and matching against exact tables"""

import mpmath
import pytest

from quartica.bitangents import (
    NumericLine,
    find_bitangents_numeric,
    line_distance,
    match_lines,
    quartic_from_numeric,
    random_change,
    random_quartic,
    square_residual,
)
from quartica.errors import InputError
from quartica.linalg import determinant
from quartica.numberfield import NumberField
from quartica.polyring import HomPoly
from services.registry import ciani, klein_quartic, table_lines


def _numeric(line, scale=1):
    return NumericLine(tuple(c.embed_numeric(30) * scale for c in line.coords), 0.0, "A")


def test_line_distance():
    u = (mpmath.mpc(1), mpmath.mpc(2), mpmath.mpc(0, 1))
    v = tuple(3 * c for c in u)
    assert line_distance(u, v) < 1e-25
    assert line_distance(u, (mpmath.mpc(0), mpmath.mpc(0), mpmath.mpc(1))) > 0.1
    assert line_distance(u, (mpmath.mpc(0),) * 3) == float("inf")


def test_square_residual():
    square = [mpmath.mpc(c) for c in (1, 0, 2, 0, 1)]
    assert square_residual(square) < 1e-25
    assert square_residual([mpmath.mpc(c) for c in (1, 0, 0, 0, 1)]) == 1
    assert square_residual([mpmath.mpc(c) for c in (1, 0, 0, 0, 0)]) is None


def test_quartic_from_numeric():
    Q = quartic_from_numeric({(4, 0, 0): 1.5, (0, 4, 0): 1, (0, 0, 4): 1})
    assert Q.field.is_rational
    Qi = quartic_from_numeric({(4, 0, 0): 1, (0, 4, 0): 1j, (0, 0, 4): 1})
    assert Qi.field.label == "Q(i)"
    assert Qi.terms[(0, 4, 0)] == Qi.field.gen()
    with pytest.raises(InputError):
        quartic_from_numeric({(3, 0, 0): 1})


def test_random_inputs_are_seeded():
    assert random_quartic(7) == random_quartic(7)
    assert random_quartic(7) != random_quartic(8)
    m = random_change(3)
    nf = NumberField.rationals()
    det = determinant([[nf(v) for v in row] for row in m], nf.zero(), nf.one())
    assert not det.is_zero()


def test_rejects_non_quartic(qq):
    cubic = HomPoly(qq, 3, {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1})
    with pytest.raises(InputError):
        find_bitangents_numeric(cubic)


def test_match_lines_against_exact_table():
    table = table_lines("dyck-table")
    found = [_numeric(ln, scale=mpmath.mpc(2, -1)) for ln in reversed(table)]
    match = match_lines(found, table, tol=1e-12)
    assert match.complete
    assert {(i, j) for i, j, _ in match.pairs} == {(27 - j, j) for j in range(28)}


def test_match_lines_reports_missing():
    table = table_lines("kk-table")
    found = [_numeric(ln) for ln in table[:27]]
    match = match_lines(found, table)
    assert not match.complete
    assert match.unmatched_table == [27]
    assert match.to_dict()["unmatched_table"] == [28]


@pytest.mark.slow
def test_fermat_matches_dyck_table(fermat_qq, config):
    search = find_bitangents_numeric(fermat_qq, config)
    assert search.count == 28
    assert match_lines(search.lines, table_lines("dyck-table"), tol=1e-8).complete


@pytest.mark.slow
def test_ciani_three_matches_kk_table(qq, config):
    search = find_bitangents_numeric(ciani(qq, 3), config)
    assert search.count == 28
    assert max(ln.residual for ln in search.lines) <= config.tol
    assert match_lines(search.lines, table_lines("kk-table"), tol=1e-8).complete


@pytest.mark.slow
def test_klein_quartic_matches_klein_table(config):
    search = find_bitangents_numeric(klein_quartic(), config)
    assert match_lines(search.lines, table_lines("klein-table"), tol=1e-8).complete


@pytest.mark.slow
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_random_quartics_have_28_bitangents(seed, config):
    search = find_bitangents_numeric(random_quartic(seed), config)
    assert search.count == 28
    assert all(ln.residual <= config.tol for ln in search.lines)
