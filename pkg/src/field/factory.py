from functools import lru_cache

from src.exceptions import ParameterError
from . import FieldSpec, SUPPORTED_Q
from .binary_field import BinaryField
from .extension_field import ExtensionField

# Conventional network-coding choices; statistics do not depend on them.
REDUCTION_POLYNOMIALS = {
    2: 0b111,         # x^2 + x + 1
    3: 0b1011,        # x^3 + x + 1
    4: 0b10011,       # x^4 + x + 1
    8: 0b100011101,   # x^8 + x^4 + x^3 + x^2 + 1
}


@lru_cache(maxsize=None)
def _build_field(q: int) -> FieldSpec:
    if q == 1:
        return BinaryField()
    return ExtensionField(q, REDUCTION_POLYNOMIALS[q])


class FieldFactory:
    """Factory class for GF(2^q) instances, one shared instance per q"""

    @staticmethod
    def create_field(q: int) -> FieldSpec:
        if q not in SUPPORTED_Q:
            raise ParameterError(f"q must be one of {SUPPORTED_Q}, got {q}")
        return _build_field(q)

    @staticmethod
    def supported_q() -> tuple:
        return SUPPORTED_Q


def gf_add(a: int, b: int, field: FieldSpec) -> int:
    return field.add(a, b)


def gf_mul(a: int, b: int, field: FieldSpec) -> int:
    return field.mul(a, b)


def gf_inv(a: int, field: FieldSpec) -> int:
    return field.inv(a)


def gf_div(a: int, b: int, field: FieldSpec) -> int:
    return field.div(a, b)


def gf_pow(a: int, exponent: int, field: FieldSpec) -> int:
    return field.pow(a, exponent)
