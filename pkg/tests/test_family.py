import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from invlimit.errors import CaseError, DomainError, ParameterError
from invlimit.family import (
    CASE1,
    CASE2,
    CASE3A,
    CASE3B,
    OUTSIDE,
    UnimodalMap,
    apply,
    branch_inverse,
    census_agrees,
    conjugator,
    d_sequence,
    iterate,
    load_preset,
    normal_form,
    parse_preset,
    period_census,
    reference,
    tail_endpoint_a,
)


def test_reference_cases():
    assert reference("case1").case.kind == CASE1
    assert reference("case2").case.kind == CASE2
    assert reference("case3a").case.kind == CASE3A
    assert reference("case3b").case.kind == CASE3B


def test_case3a_landmarks():
    lm = reference("case3a").landmarks
    assert lm.omega0 == pytest.approx(0.2, abs=1e-14)
    assert lm.w1 == pytest.approx(0.04870890834888984, abs=1e-12)
    assert lm.w2 == pytest.approx(0.3340962358442229, abs=1e-12)
    assert lm.cycle_multiplier == pytest.approx(-0.84172, abs=1e-5)


def test_case3b_d_values():
    d = d_sequence(reference("case3b"), 4)
    assert d[0] == pytest.approx(0.39)
    assert d[1] == pytest.approx(9 / 70, abs=1e-12)
    assert d[2] == pytest.approx(0.09, abs=1e-12)
    assert d[3] == pytest.approx(d[1], abs=1e-12)


def test_parameter_violations():
    with pytest.raises(ParameterError):
        UnimodalMap(1.2, 1.0, 0.0, -1.0)
    with pytest.raises(ParameterError):
        UnimodalMap(0.5, 1.0, 0.0, 1.0)
    with pytest.raises(ParameterError):
        UnimodalMap(0.5, 1.0, -3.0, -1.0)  # pole of f0 inside [0, rho]


def test_apply_endpoints_and_domain():
    m = reference("case3a")
    assert apply(m, 0.0) == pytest.approx(m.rho1)
    assert apply(m, m.rho) == 0.0
    assert apply(m, 1.0) == 1.0
    with pytest.raises(DomainError):
        apply(m, 1.5)
    xs = np.linspace(0, 1, 11)
    assert np.allclose(apply(m, xs), [apply(m, float(x)) for x in xs])


def test_outside_family():
    # repelling 2-cycle
    m = UnimodalMap(0.3, 1.0, -2.0, -1.5)
    assert m.case.kind == OUTSIDE
    assert "repelling" in m.case.diagnostic


def test_tail_endpoint_case1():
    ta = tail_endpoint_a(reference("case1"), 50)
    assert ta.value == -0.5
    assert ta.remainder < 1e-20
    assert tail_endpoint_a(reference("case2")).value == -math.inf
    with pytest.raises(CaseError):
        tail_endpoint_a(reference("case3a"))


def test_census_case2_interval():
    m = reference("case2")
    c = period_census(m)
    assert set(c.detected_periods) == {1, 2}
    assert any(p == 2 and hi - lo > 0.4 for (lo, hi), p in c.periodic_intervals)
    assert census_agrees(m.case, c)


def test_census_case3b_period4():
    c = period_census(reference("case3b"))
    assert c.max_period == 4


def test_conjugator_needs_case2():
    with pytest.raises(CaseError):
        conjugator(reference("case1"))


def test_conjugator_normal_form_and_homeomorphism():
    m = UnimodalMap(0.4, 1.0, 0.5, -1.0)
    h = conjugator(m)
    xs = np.linspace(0, 1, 301)
    assert np.max(np.abs(h.g(xs) - normal_form(m.rho)(xs))) <= 1e-10
    assert np.all(np.diff(h.h(xs)) > 0)
    assert np.max(np.abs(h.h_inv(h.h(xs)) - xs)) <= 1e-12


def test_preset_files(tmp_path):
    p = tmp_path / "x.txt"
    p.write_text("# comment\nrho = 0.3\nδ = 1\ngamma=-2\nalpha = -1.2\n", encoding="utf-8")
    assert load_preset(p).params == (0.3, 1.0, -2.0, -1.2)
    with pytest.raises(ValueError):
        parse_preset("rho = 0.3\n")
    with pytest.raises(ValueError):
        parse_preset("rho 0.3\n")


@st.composite
def maps(draw):
    rho = draw(st.floats(0.1, 0.9))
    delta = draw(st.floats(0.5, 2.5))
    gamma = draw(st.floats(-0.9 * delta / rho, 2.0))
    alpha = draw(st.floats(-0.98 * delta / rho, -0.02))
    return UnimodalMap(rho, delta, gamma, alpha)


@settings(max_examples=100, deadline=None)
@given(maps(), st.floats(0.0, 1.0), st.integers(0, 1))
def test_branch_inverse_roundtrip(m, t, branch):
    y = t * (m.rho1 if branch == 0 else 1.0)
    x = branch_inverse(m, branch, y)
    assert (x <= m.rho) if branch == 0 else (x >= m.rho)
    assert abs(apply(m, x) - y) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(maps(), st.floats(0.0, 1.0))
def test_map_stays_in_unit_interval(m, x):
    y = iterate(m, x, 5)
    assert 0.0 <= y <= 1.0


@settings(max_examples=100, deadline=None)
@given(maps())
def test_omega0_is_fixed(m):
    lm = m.landmarks
    assert abs(apply(m, lm.omega0) - lm.omega0) <= 1e-12
    assert 0.0 <= lm.omega0 < m.rho
