import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from invlimit.errors import AllPointsFixed, PoleError, SingularTransformError
from invlimit.moebius import (
    IDENTITY,
    MoebiusTransform,
    compose,
    derivative_at,
    evaluate,
    fixed_points,
    invert,
    is_involution,
)

coef = st.floats(-3.0, 3.0, allow_nan=False)


def transforms():
    return st.tuples(coef, coef, coef, coef).filter(lambda t: abs(t[0] * t[3] - t[1] * t[2]) > 0.05)


def test_normalized_coefficients():
    m = MoebiusTransform(4.0, 2.0, 0.0, 2.0)
    assert max(abs(v) for v in (m.a, m.b, m.c, m.d)) == 1.0
    assert m(1.0) == pytest.approx(3.0)


def test_singular_rejected():
    with pytest.raises(SingularTransformError):
        MoebiusTransform(1.0, 2.0, 2.0, 4.0)
    with pytest.raises(SingularTransformError):
        MoebiusTransform(0.0, 0.0, 0.0, 0.0)


def test_pole_raises():
    m = MoebiusTransform(1.0, 0.0, 1.0, -0.5)
    assert m.pole() == pytest.approx(0.5)
    with pytest.raises(PoleError):
        evaluate(m, 0.5)
    with pytest.raises(PoleError):
        evaluate(m, np.array([0.0, 0.5]))


def test_compose_order():
    double = MoebiusTransform(2.0, 0.0, 0.0, 1.0)
    plus_one = MoebiusTransform(1.0, 1.0, 0.0, 1.0)
    assert compose(double, plus_one)(1.0) == pytest.approx(4.0)
    assert compose(plus_one, double)(1.0) == pytest.approx(3.0)


def test_fixed_points_quadratic_and_linear():
    m = MoebiusTransform(0.0, 1.0, 1.0, 0.0)  # 1/x, fixed at -1 and 1
    assert fixed_points(m) == pytest.approx([-1.0, 1.0])
    assert fixed_points(MoebiusTransform(2.0, -1.0, 0.0, 1.0)) == pytest.approx([1.0])
    assert fixed_points(MoebiusTransform(1.0, 1.0, 0.0, 1.0)) == []
    with pytest.raises(AllPointsFixed):
        fixed_points(IDENTITY)


def test_involution():
    assert is_involution(MoebiusTransform(0.0, 1.0, 1.0, 0.0))
    assert not is_involution(MoebiusTransform(2.0, 0.0, 0.0, 1.0))


@settings(max_examples=200, deadline=None)
@given(transforms(), st.floats(-2.0, 2.0))
def test_inverse_roundtrip(t, x):
    m = MoebiusTransform(*t)
    assume(abs(m.c * x + m.d) > 0.05)
    y = m(x)
    mi = invert(m)
    assume(abs(mi.c * y + mi.d) > 0.05 and abs(y) < 1e3)
    assert mi(y) == pytest.approx(x, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(transforms(), st.floats(-2.0, 2.0))
def test_derivative_matches_difference(t, x):
    m = MoebiusTransform(*t)
    assume(abs(m.c * x + m.d) > 0.1)
    h = 1e-6
    fd = (m(x + h) - m(x - h)) / (2 * h)
    assert derivative_at(m, x) == pytest.approx(fd, rel=1e-4, abs=1e-6)


@settings(max_examples=200, deadline=None)
@given(transforms())
def test_fixed_points_are_fixed(t):
    m = MoebiusTransform(*t)
    try:
        roots = fixed_points(m)
    except AllPointsFixed:
        return
    for r in roots:
        assert abs(m(r) - r) <= 1e-9
