import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genlift.field import (
    GF,
    _poly_is_irreducible,
    field_for_q,
    make_field,
)

FIELD_SIZES = [5, 7, 9, 13, 16]


def axioms_hold(f: GF, a: int, b: int, c: int) -> bool:
    if f.add(a, b) != f.add(b, a):
        return False
    if f.mul(a, b) != f.mul(b, a):
        return False
    if f.add(f.add(a, b), c) != f.add(a, f.add(b, c)):
        return False
    if f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c)):
        return False
    if f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c)):
        return False
    if f.add(a, f.neg(a)) != f.zero:
        return False
    if a != f.zero and f.mul(a, f.inv(a)) != f.one:
        return False
    return True


@pytest.mark.parametrize("q", FIELD_SIZES)
def test_field_axioms_random_triples(q):
    # 10^4 seeded random triples per field
    f = field_for_q(q)
    rng = random.Random(q * 7919)
    for _ in range(10_000):
        a, b, c = rng.randrange(q), rng.randrange(q), rng.randrange(q)
        assert axioms_hold(f, a, b, c)


@given(st.sampled_from(FIELD_SIZES), st.data())
@settings(max_examples=200, deadline=None)
def test_field_table_matches_scalar_path(q, data):
    f = field_for_q(q)
    a = data.draw(st.integers(0, q - 1))
    b = data.draw(st.integers(0, q - 1))
    assert f.add(a, b) == f._add_scalar(a, b)
    assert f.mul(a, b) == f._mul_scalar(a, b)
    assert f.neg(a) == f._neg_scalar(a)


def test_modulus_is_lex_least_irreducible():
    for p, k in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)]:
        f = make_field(p, k)
        poly = list(f.modulus) + [1]
        assert _poly_is_irreducible(poly, p)
        # every lex-smaller candidate must be reducible
        me = f.from_coeffs(f.modulus)
        for code in range(me):
            cand = list(f.coeffs(code)) + [1]
            assert not _poly_is_irreducible(cand, p)


def test_known_moduli():
    assert make_field(3, 2).modulus == (1, 0)  # x^2 + 1
    assert make_field(2, 2).modulus == (1, 1)  # x^2 + x + 1


def test_encoding_round_trip():
    f = make_field(3, 2)
    for a in f.elements():
        assert f.from_coeffs(f.coeffs(a)) == a
    # int order is lex order on coefficient vectors
    assert f.coeffs(0) == (0, 0)
    assert f.coeffs(1) == (0, 1)
    assert f.coeffs(3) == (1, 0)


def test_char_p_constants():
    f9 = field_for_q(9)
    assert f9.one == 3 and f9.two == 6
    f4 = field_for_q(4)
    assert f4.two == f4.zero  # characteristic 2
    f5 = field_for_q(5)
    assert (f5.one, f5.two, f5.minus_one) == (1, 2, 4)


def test_gf9_arithmetic():
    f = field_for_q(9)  # modulus x^2 + 1
    x = f.from_coeffs((0, 1))
    x1 = f.add(x, f.one)
    # (x+1)^2 = x^2 + 2x + 1 = 2x mod (x^2+1)
    assert f.mul(x1, x1) == f.from_coeffs((0, 2))
    assert f.mul(x, x) == f.neg(f.one)


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13])
def test_square_census_odd_q(q):
    f = field_for_q(q)
    squares = {a for a in f.elements() if f.is_square(a)}
    assert len(squares) == (q + 1) // 2
    assert all(f.mul(a, a) in squares for a in f.elements())


def test_squares_plus_two():
    f = field_for_q(13)
    s = f.squares_plus_two()
    assert s == {1, 2, 3, 5, 6, 11, 12}
    assert 4 not in s
    f5 = field_for_q(5)
    assert f5.squares_plus_two() == {1, 2, 3}


def test_format_element():
    f = field_for_q(9)
    assert f.format_element(f.zero) == "0"
    assert f.format_element(f.one) == "1"
    assert f.format_element(f.from_coeffs((0, 1))) == "x"
    assert f.format_element(f.from_coeffs((1, 2))) == "1+2*x"
    assert field_for_q(7).format_element(4) == "4"


def test_rejections():
    with pytest.raises(ValueError):
        make_field(4, 1)
    with pytest.raises(ValueError):
        field_for_q(6)
    with pytest.raises(ValueError):
        make_field(2, 20)  # over the size bound
    with pytest.raises(ZeroDivisionError):
        field_for_q(5).inv(0)


def test_make_field_deterministic():
    assert make_field(3, 2) is make_field(3, 2)
    assert field_for_q(9) == make_field(3, 2)
