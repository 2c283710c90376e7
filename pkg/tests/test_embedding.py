import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from invlimit.codes import t_alt, t_inf
from invlimit.embedding import Embedding, ExtendedCoord, Sheet, embedding_for
from invlimit.errors import CaseError, MembershipError, OutOfRange
from invlimit.family import UnimodalMap, d_sequence, reference
from invlimit.limit_space import decode_point, same_point


def test_case1_line_left_end():
    E = embedding_for(reference("case1"))
    assert E.a == -0.5
    p = E.decode_line(E.a)
    assert p.code == t_inf()
    with pytest.raises(OutOfRange):
        E.decode_line(-0.6)
    with pytest.raises(OutOfRange):
        E.decode_line(1.5)


def test_outside_has_no_embedding():
    with pytest.raises(CaseError):
        Embedding(UnimodalMap(0.3, 1.0, -2.0, -1.5))


def test_line_bricks_are_glued_in_order():
    for name in ("case1", "case2", "case3a", "case3b"):
        E = embedding_for(reference(name))
        assert E.line[0].image == (0.0, 1.0)
        for a, b in zip(E.line, E.line[1:40]):
            assert a.image[0] == pytest.approx(b.image[1], abs=1e-12)


def test_case3a_arc_limits():
    E = embedding_for(reference("case3a"))
    assert E.a_inf == pytest.approx(-0.5364, abs=1e-4)
    assert E.b_inf == pytest.approx(0.6755, abs=1e-4)
    p = decode_point(E.map, E.map.landmarks.w1, t_alt(1))
    assert E.encode(p) == ExtendedCoord(Sheet.ARC_INF, E.a_inf)


def test_arc_brick_lengths_are_d():
    m = reference("case3a")
    E = embedding_for(m)
    d = d_sequence(m, 12)
    for b in E.theta[1][:6] + E.theta[0][:6]:
        lo, hi = b.image
        assert hi - lo == pytest.approx(d[b.d_index], abs=1e-12)


def test_line_point_not_on_arc():
    E = embedding_for(reference("case3a"))
    with pytest.raises(MembershipError):
        E.theta_coord(E.decode_line(0.5))


def test_model_coordinate_dimensions():
    assert len(embedding_for(reference("case1")).model_coordinates(ExtendedCoord(Sheet.LINE, 0.2))) == 1
    assert len(embedding_for(reference("case2")).model_coordinates(ExtendedCoord(Sheet.LINE, -3.0))) == 2
    assert len(embedding_for(reference("case3b")).model_coordinates(ExtendedCoord(Sheet.ARC_MINUS, 0.05))) == 3


def test_neighborhood_base_of_arc_point():
    E = embedding_for(reference("case3a"))
    nb = E.neighborhood_base(ExtendedCoord(Sheet.ARC_INF, 0.1), N=3, eps=0.01, count=4)
    assert nb.line_pieces
    assert all(piece.index > 3 for piece in nb.line_pieces)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["case1", "case2", "case3a", "case3b"]), st.floats(0.0, 1.0))
def test_line_encode_decode_roundtrip(name, t):
    E = embedding_for(reference(name))
    lo = E.a if E.a is not None else E.line_range()[0]
    y = lo + t * (1.0 - lo)
    p = E.decode_line(y, depth=16)
    c = E.encode(p)
    assert c.value == pytest.approx(y, abs=1e-12)
    q = E.decode(c, depth=16)
    assert same_point(p, q, 1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 1.0))
def test_case3b_arc_roundtrip(t):
    E = embedding_for(reference("case3b"))
    lo, hi = E.theta_range()
    v = lo + t * (hi - lo)
    c = E.encode(E.decode(ExtendedCoord(Sheet.ARC_INF, v), depth=8))
    assert c.sheet is Sheet.ARC_INF
    assert c.value == pytest.approx(v, abs=1e-12)


def test_model_chart_separates_line_points():
    E = embedding_for(reference("case3a"))
    ys = np.linspace(E.line_range()[0], 1.0, 400)
    pts = {tuple(round(v, 12) for v in E.model_coordinates(ExtendedCoord(Sheet.LINE, float(y)))) for y in ys}
    assert len(pts) == len(ys)
