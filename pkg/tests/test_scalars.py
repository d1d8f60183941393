import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from looptl.errors import PoleAtSpecialValue
from looptl.scalars import (RationalFunc, SpecialField, minimal_polynomial,
                            quantum_int, serialize_scalar, special_weight,
                            specialize, to_float)


def test_quantum_integers_generic():
    d = to_float(quantum_int(2), d=1.75)
    assert d == pytest.approx(1.75)
    # [3] = d^2 - 1, [4] = d^3 - 2d
    assert to_float(quantum_int(3), d=2.0) == pytest.approx(3.0)
    assert to_float(quantum_int(4), d=2.0) == pytest.approx(4.0)


@pytest.mark.parametrize("ell", [1, 2, 3, 4, 5, 6])
def test_minimal_polynomial_has_special_weight_root(ell):
    poly = minimal_polynomial(ell)
    x = 2.0 * math.cos(math.pi / (ell + 2))
    acc = 0.0
    for c in reversed(poly):
        acc = acc * x + c
    assert abs(acc) < 1e-9
    assert poly[-1] == 1  # monic


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_special_field_weight(ell):
    field = SpecialField(ell)
    assert float(field.delta) == pytest.approx(
        2.0 * math.cos(math.pi / (ell + 2)))
    assert float(special_weight(ell)) == pytest.approx(float(field.delta))


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_quantum_int_vanishes_at_level(ell):
    field = SpecialField(ell)
    assert field.quantum_int(ell + 2) == field.zero
    assert field.quantum_int(ell + 1) != field.zero


@given(st.lists(st.fractions(min_value=-5, max_value=5), min_size=1,
                max_size=3),
       st.lists(st.fractions(min_value=-5, max_value=5), min_size=1,
                max_size=3))
@settings(max_examples=60, deadline=None)
def test_field_ring_axioms(ca, cb):
    field = SpecialField(3)
    a = field.element(ca)
    b = field.element(cb)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + field.one) == a * b + a
    if b != field.zero:
        assert (a / b) * b == a


def test_field_inverse_exact():
    field = SpecialField(2)
    x = field.delta + field.one
    assert x * (field.one / x) == field.one


def test_specialize_rational_function():
    # [3] = d^2 - 1 specializes to 1 at ell = 2 (d = sqrt 2)
    val = specialize(quantum_int(3), 2)
    assert val == SpecialField(2).one


def test_specialize_pole():
    # [4] = d^3 - 2d vanishes at ell = 2, so [2]/[4] has a pole there
    with pytest.raises(PoleAtSpecialValue):
        specialize(quantum_int(2) / quantum_int(4), 2)


def test_serialize_roundtrip_strings():
    field = SpecialField(3)
    assert serialize_scalar(field.one) == "1"
    s = serialize_scalar(field.delta)
    assert "delta" in s
    assert serialize_scalar(Fraction(3, 4)) == "3/4"
