import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.exceptions import ParameterError
from src.field import SUPPORTED_Q, gf_add, gf_div, gf_inv, gf_mul, gf_pow
from src.field.factory import FieldFactory


def elements(q):
    return st.integers(min_value=0, max_value=(1 << q) - 1)


@st.composite
def field_and_elements(draw, count=3):
    q = draw(st.sampled_from(SUPPORTED_Q))
    return FieldFactory.create_field(q), [draw(elements(q)) for _ in range(count)]


@settings(max_examples=300)
@given(field_and_elements())
def test_field_axioms(data):
    f, (a, b, c) = data
    assert gf_add(a, b, f) == gf_add(b, a, f)
    assert gf_add(a, a, f) == 0
    assert gf_mul(a, b, f) == gf_mul(b, a, f)
    assert gf_mul(gf_mul(a, b, f), c, f) == gf_mul(a, gf_mul(b, c, f), f)
    assert gf_mul(a, gf_add(b, c, f), f) == gf_add(gf_mul(a, b, f), gf_mul(a, c, f), f)
    assert gf_mul(a, 1, f) == a
    assert gf_mul(a, 0, f) == 0


@settings(max_examples=200)
@given(field_and_elements(count=2))
def test_inverse_and_division(data):
    f, (a, b) = data
    if a == 0:
        with pytest.raises(ParameterError):
            gf_inv(a, f)
        return
    assert gf_mul(a, gf_inv(a, f), f) == 1
    assert gf_mul(gf_div(b, a, f), a, f) == b
    assert gf_pow(a, f.order - 1, f) == 1


def test_known_products():
    gf4 = FieldFactory.create_field(2)
    assert gf4.mul(2, 2) == 3  # x * x = x + 1
    assert gf4.mul(2, 3) == 1
    assert gf4.inv(2) == 3

    gf256 = FieldFactory.create_field(8)
    assert gf256.mul(2, 0x80) == 0x1D
    assert gf256.mul(0, 0x53) == 0


def test_binary_field_is_bit_arithmetic():
    gf2 = FieldFactory.create_field(1)
    assert [gf2.mul(a, b) for a in (0, 1) for b in (0, 1)] == [0, 0, 0, 1]
    assert gf2.add(1, 1) == 0
    assert gf2.inv(1) == 1


def test_out_of_range_element_rejected():
    gf4 = FieldFactory.create_field(2)
    with pytest.raises(ParameterError):
        gf4.add(4, 1)
    with pytest.raises(ParameterError):
        gf4.mul(1, 7)


def test_unsupported_q_rejected():
    with pytest.raises(ParameterError):
        FieldFactory.create_field(5)


def test_fields_are_shared_per_q():
    assert FieldFactory.create_field(8) is FieldFactory.create_field(8)
    assert FieldFactory.supported_q() == (1, 2, 3, 4, 8)


def test_mul_scalar_matches_scalar_products(field):
    values = np.arange(min(field.order, 256), dtype=np.uint8)
    if field.q == 1:
        values = np.array([0, 1, 1, 0], dtype=np.uint8)
    for s in (0, 1, field.order - 1):
        scaled = field.mul_scalar(values, s)
        assert scaled.tolist() == [field.mul(int(v), s) for v in values]


def test_axpy_is_addition_of_scaled_vector(field):
    x = np.array([1, 0, 1, 1], dtype=np.uint8)
    y = np.array([0, 1, 1, 0], dtype=np.uint8)
    s = field.order - 1
    expected = [field.add(int(a), field.mul(s, int(b))) for a, b in zip(y, x)]
    assert field.axpy(y, s, x).tolist() == expected
