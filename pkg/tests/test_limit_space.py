import pytest
from hypothesis import given, settings, strategies as st

from invlimit.codes import Tail, TypeCode, enumerate_types, t_alt, t_inf, t_k, t_n
from invlimit.errors import DepthExhausted, ImageError, InadmissibleCode
from invlimit.family import apply, reference
from invlimit.limit_space import (
    brick_interval,
    compatibility_error,
    decode_point,
    nested_interval,
    same_point,
    shift,
    unshift,
)


def test_tail_sets():
    m = reference("case3a")
    b = brick_interval(m, t_alt(1))
    assert b.lo == b.hi == pytest.approx(m.landmarks.w1)
    m1 = reference("case1")
    assert brick_interval(m1, t_inf()).lo == pytest.approx(m1.landmarks.omega0)
    b3 = brick_interval(reference("case3b"), t_alt(0))
    assert (b3.lo, b3.hi) == pytest.approx((0.3, 0.39))


def test_line_brick_t0_and_t1():
    m = reference("case3a")
    b0 = brick_interval(m, t_n(0))
    assert (b0.lo, b0.hi) == (0.0, 1.0)
    b1 = brick_interval(m, t_n(1))
    assert (b1.lo, b1.hi) == pytest.approx((0.0, m.rho1))


def test_inadmissible_brick_is_empty():
    with pytest.raises(InadmissibleCode):
        brick_interval(reference("case3a"), TypeCode("110", Tail.ALL_ONES))


def test_nested_interval_matches_brick():
    m = reference("case3a")
    for code in (t_n(3), t_k(0, 2)):
        b = brick_interval(m, code)
        nb = nested_interval(m, code, depth=60)
        assert nb.converged
        assert nb.lo == pytest.approx(b.lo, abs=1e-9)
        assert nb.hi == pytest.approx(b.hi, abs=1e-9)


def test_decode_rejects_outside_head():
    m = reference("case3a")
    with pytest.raises(ImageError):
        decode_point(m, 0.9, t_n(1))


def test_shift_unshift_roundtrip():
    m = reference("case3b")
    p = decode_point(m, 0.05, t_n(4), depth=12)
    q = unshift(m, shift(m, p))
    assert q.code == p.code
    assert same_point(p, q, 1e-12)
    with pytest.raises(DepthExhausted):
        unshift(m, decode_point(m, 0.05, t_n(4), depth=0))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["case1", "case2", "case3a", "case3b"]), st.integers(0, 30), st.floats(0.0, 1.0))
def test_decoded_threads_are_compatible(name, idx, t):
    m = reference(name)
    code = enumerate_types(m.case, 31)[idx]
    b = brick_interval(m, code)
    p = decode_point(m, b.lo + t * (b.hi - b.lo), code, depth=20)
    assert compatibility_error(m, p) <= 1e-12
    q = shift(m, p)
    assert q.x0 == apply(m, p.x0)
    assert compatibility_error(m, q) <= 1e-12
