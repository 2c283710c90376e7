import pytest
from hypothesis import given, strategies as st

from invlimit.codes import (
    Tail,
    TypeCode,
    brick_index,
    enumerate_types,
    format_code,
    identify,
    is_admissible,
    parse_code,
    t_alt,
    t_inf,
    t_k,
    t_n,
    t_nk,
)
from invlimit.family import CASE1, CASE3A, reference


def test_canonical_form():
    assert TypeCode("0011", Tail.ALL_ONES) == TypeCode("00", Tail.ALL_ONES)
    assert TypeCode("1010", Tail.ALL_ZEROS) == TypeCode("101", Tail.ALL_ZEROS)
    assert TypeCode("10", Tail.ALT10) == TypeCode("", Tail.ALT10)
    assert TypeCode("0", Tail.ALT10) == TypeCode("", Tail.ALT01)


def test_parse_and_format():
    c = parse_code("1010.0^∞")
    assert c == t_k(1, 2)
    assert parse_code("00.1^inf") == t_n(2)
    assert parse_code(format_code(t_alt(0))) == t_alt(0)
    with pytest.raises(ValueError):
        parse_code("0101")
    with pytest.raises(ValueError):
        parse_code("01.2^inf")


def test_families():
    assert identify(t_n(3)).kind == "T"
    assert identify(t_inf()).kind == "Tinf"
    assert identify(t_nk(1, 5, 2)) == identify(TypeCode("10100", Tail.ALL_ONES))
    assert identify(t_nk(0, 5, 2)).kind == "T0"
    assert identify(t_k(1, 3)).kind == "Tk1"
    assert identify(t_k(0, 3)).kind == "Tk0"
    assert identify(TypeCode("0110", Tail.ALL_ONES)).kind == "other"


def test_t_nk_domain():
    with pytest.raises(ValueError):
        t_nk(1, 3, 2)
    with pytest.raises(ValueError):
        t_nk(0, 4, 2)
    assert identify(t_nk(1, 4, 2)).kind == "T1"


def test_admissibility():
    assert is_admissible(CASE1, t_n(5))
    assert not is_admissible(CASE1, t_k(1, 1))
    assert is_admissible(CASE3A, t_nk(1, 6, 2))
    assert not is_admissible(CASE3A, TypeCode("110", Tail.ALL_ONES))
    assert not is_admissible(CASE3A, TypeCode("001", Tail.ALL_ZEROS))
    assert is_admissible(CASE3A, t_alt(1))


def test_case3_ordering_clusters():
    types = enumerate_types(CASE3A, 20)
    assert types[:2] == [t_n(0), t_n(1)]
    assert len(set(types)) == 20
    assert all(is_admissible(CASE3A, t) for t in types)
    for i, t in enumerate(types):
        assert brick_index(reference("case3a").case, t) == i


@given(st.text("01", max_size=12), st.sampled_from(list(Tail)), st.integers(0, 30))
def test_canonicalization_preserves_word(prefix, tail, n):
    raw = prefix + "".join(str(tail.at(k)) for k in range(40))
    assert TypeCode(prefix, tail).at(n) == int(raw[n])


@given(st.text("01", max_size=12), st.sampled_from(list(Tail)))
def test_drop_first_prepend(prefix, tail):
    c = TypeCode(prefix, tail)
    assert c.prepend(c.at(0)).drop_first() == c
    assert c.drop_first().prepend(c.at(0)) == c
