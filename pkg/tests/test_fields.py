import pytest

from flatlands.fields import (
    field_make,
    NotPrimePower,
    OrderTooLarge,
    MAX_ORDER,
    _factor_prime_power,
)

PRIME_POWERS = [q for q in range(2, MAX_ORDER + 1) if _factor_prime_power(q)]


def test_supported_orders():
    assert PRIME_POWERS == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25,
                            27, 29, 31, 32]


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_field_axioms_exhaustive(q):
    f = field_make(q)
    els = range(q)
    for a in els:
        assert f.add(a, 0) == a
        assert f.mul(a, 1) == a
        assert f.mul(a, 0) == 0
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
    for a in els:
        for b in els:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            assert f.sub(f.add(a, b), b) == a
    # associativity and distributivity over all triples
    for a in els:
        for b in els:
            for c in els:
                assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_no_zero_divisors(q):
    f = field_make(q)
    for a in range(1, q):
        for b in range(1, q):
            assert f.mul(a, b) != 0


def test_gf4_sample_products():
    f = field_make(4)
    # elements: 0, 1, x (=2), x+1 (=3); x^2 = x + 1
    assert f.mul(2, 2) == 3
    assert f.mul(2, 3) == 1
    assert f.add(2, 3) == 1


def test_determinism():
    a = field_make(9)
    b = field_make(9)
    assert a.add_table == b.add_table
    assert a.mul_table == b.mul_table


def test_errors():
    with pytest.raises(NotPrimePower):
        field_make(6)
    with pytest.raises(NotPrimePower):
        field_make(12)
    with pytest.raises(NotPrimePower):
        field_make(1)
    with pytest.raises(OrderTooLarge):
        field_make(37)
    with pytest.raises(ZeroDivisionError):
        field_make(5).inv(0)
