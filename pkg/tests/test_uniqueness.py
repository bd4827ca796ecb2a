import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weylab.errors import EqualParamsRequired, NoMatch
from weylab.lsystem import LSystemParams, donoghue_transform, mu_alpha, xi_parameter
from weylab.mobius import INF, angle_distance, chordal_distance
from weylab.potential import Potential
from weylab.uniqueness import (DISTINCT, EQUAL, MATCH_GRID, SAME_MAIN_OPERATOR,
                               find_donoghue_alpha, impedance_match, shares_main_operator)
from weylab.weyl import m_inf_values

NU_HALF = Potential.bessel(0.5)
NU_3HALF = Potential.bessel(1.5)


def test_match_grid():
    assert MATCH_GRID.size == 28 and np.all(MATCH_GRID.imag >= 0.5)


def test_equal_identical_systems():
    s = LSystemParams(NU_3HALF, 0.0, 1j)
    rep = impedance_match(s, s)
    assert rep.verdict == EQUAL and rep.max_residual == 0.0


def test_distinct_potentials():
    rep = impedance_match(LSystemParams(NU_HALF, 0.0, 1j), LSystemParams(NU_3HALF, 0.0, 1j))
    assert rep.verdict == DISTINCT and rep.max_residual > 0.1


def test_equal_requires_same_parameters():
    with pytest.raises(EqualParamsRequired):
        impedance_match(LSystemParams(NU_3HALF, 0.0, 1j), LSystemParams(NU_3HALF, INF, 1j))


def test_table_of_same_potential_is_equal():
    xs = np.geomspace(1.0, 400.0, 2000)
    table = Potential.table(xs, 2.0 / xs ** 2, tail=0.0)
    rep = impedance_match(LSystemParams(table, 0.0, 1j), LSystemParams(NU_3HALF, 0.0, 1j),
                          tol=1e-4)
    assert rep.verdict == EQUAL


def _samples(values):
    return list(zip(MATCH_GRID, values))


def test_find_alpha_examples():
    m = m_inf_values(NU_3HALF, MATCH_GRID)
    assert find_donoghue_alpha(_samples(-m), _samples(1 / m)) == pytest.approx(math.pi)
    assert find_donoghue_alpha(_samples(-m), _samples(-m)) == math.pi / 2
    v2 = donoghue_transform(-m, math.pi / 3)
    assert angle_distance(find_donoghue_alpha(_samples(-m), _samples(v2)), math.pi / 3) < 1e-10


def test_find_alpha_no_match():
    m1 = m_inf_values(NU_3HALF, MATCH_GRID)
    m2 = m_inf_values(NU_HALF, MATCH_GRID)
    with pytest.raises(NoMatch):
        find_donoghue_alpha(_samples(-m1), _samples(-m2))


def test_find_alpha_input_checks():
    s = _samples(np.ones(MATCH_GRID.size))
    with pytest.raises(ValueError):
        find_donoghue_alpha(s[:2], s[:2])
    with pytest.raises(ValueError):
        find_donoghue_alpha(s, s[:-1])
    with pytest.raises(ValueError):
        find_donoghue_alpha(s[:3], [(z + 1, v) for z, v in s[:3]])


def test_shares_main_operator_examples():
    rep = shares_main_operator(LSystemParams(NU_3HALF, 0.0, 1j), LSystemParams(NU_3HALF, INF, 1j))
    assert rep.verdict == SAME_MAIN_OPERATOR and rep.mu_check
    assert rep.alpha == pytest.approx(math.pi)
    rep = shares_main_operator(LSystemParams(NU_3HALF, 1.0, 1j), LSystemParams(NU_3HALF, 0.0, 1j))
    assert rep.verdict == SAME_MAIN_OPERATOR and rep.mu_check
    assert rep.alpha == pytest.approx(math.pi / 4)
    rep = shares_main_operator(LSystemParams(NU_HALF, 1.0, 1j), LSystemParams(NU_3HALF, 1.0, 1j))
    assert rep.verdict == DISTINCT


def test_different_h_is_distinct():
    rep = shares_main_operator(LSystemParams(NU_3HALF, 0.0, 1j),
                               LSystemParams(NU_3HALF, 0.0, 0.5 + 1j))
    assert rep.verdict == DISTINCT


def test_report_json_fields():
    rep = shares_main_operator(LSystemParams(NU_3HALF, 0.0, 1j), LSystemParams(NU_3HALF, INF, 1j))
    assert set(rep.to_dict()) == {"verdict", "alpha", "mu_check", "max_residual", "grid_size"}


@settings(max_examples=40, deadline=None)
@given(st.floats(-10, 10), st.floats(-2, 2), st.floats(0.2, 2),
       st.floats(1e-3, math.pi))
def test_round_trip(mu, re_h, im_h, alpha):
    h = complex(re_h, im_h)
    a = LSystemParams(NU_3HALF, mu, h)
    b = LSystemParams(NU_3HALF, mu_alpha(mu, h, alpha), h)
    rep = shares_main_operator(a, b)
    assert rep.verdict == SAME_MAIN_OPERATOR and rep.mu_check
    assert angle_distance(rep.alpha, alpha) < 1e-8


@settings(max_examples=20, deadline=None)
@given(st.floats(-10, 10), st.floats(0.05, math.pi - 0.05))
def test_symmetry_of_shared_operator(mu, alpha):
    a = LSystemParams(NU_3HALF, mu, 1j)
    b = LSystemParams(NU_3HALF, mu_alpha(mu, 1j, alpha), 1j)
    ab, ba = shares_main_operator(a, b), shares_main_operator(b, a)
    assert ab.verdict == ba.verdict == SAME_MAIN_OPERATOR
    assert angle_distance(ab.alpha + ba.alpha, math.pi) < 1e-8


@settings(max_examples=20, deadline=None)
@given(st.floats(-10, 10))
def test_alpha_pi_gives_duality_pair(mu):
    assert chordal_distance(mu_alpha(mu, 1j, math.pi), xi_parameter(mu, 1j)) < 1e-12
