from abc import ABC, abstractmethod

import numpy as np

from src.exceptions import ParameterError

SUPPORTED_Q = (1, 2, 3, 4, 8)


class FieldSpec(ABC):
    """Abstract base class for GF(2^q) arithmetic.

    Instances are immutable once built and may be shared between workers.
    Elements are plain ints in [0, 2^q); vectors are numpy uint8 arrays.
    """

    def __init__(self, q: int, reduction_poly: int):
        if q not in SUPPORTED_Q:
            raise ParameterError(f"q must be one of {SUPPORTED_Q}, got {q}")
        self.q = q
        self.reduction_poly = reduction_poly
        self.order = 1 << q

    def check(self, a: int) -> int:
        """Validate that ``a`` is an element of this field"""
        if not 0 <= a < self.order:
            raise ParameterError(f"element {a} is outside GF(2^{self.q})")
        return a

    def add(self, a: int, b: int) -> int:
        """Characteristic-2 addition (also subtraction)"""
        return self.check(a) ^ self.check(b)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, b)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, exponent: int) -> int:
        result = 1
        base = self.check(a)
        while exponent > 0:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def elements(self) -> range:
        return range(self.order)

    def nonzero_elements(self) -> range:
        return range(1, self.order)

    def axpy(self, y: np.ndarray, s: int, x: np.ndarray) -> np.ndarray:
        """Return y + s*x element-wise"""
        return np.bitwise_xor(y, self.mul_scalar(x, s))

    @abstractmethod
    def mul(self, a: int, b: int) -> int:
        """Field multiplication"""
        pass

    @abstractmethod
    def inv(self, a: int) -> int:
        """Multiplicative inverse of a non-zero element"""
        pass

    @abstractmethod
    def mul_scalar(self, vec: np.ndarray, s: int) -> np.ndarray:
        """Multiply every symbol of ``vec`` by the scalar ``s``"""
        pass

    def __repr__(self) -> str:
        return f"{type(self).__name__}(q={self.q}, poly={self.reduction_poly:#x})"


from .factory import FieldFactory, gf_add, gf_mul, gf_inv, gf_div, gf_pow  # noqa: E402
