import numpy as np

from src.exceptions import ParameterError
from . import FieldSpec


class BinaryField(FieldSpec):
    """GF(2) as plain bit arithmetic, no tables"""

    def __init__(self):
        super().__init__(q=1, reduction_poly=0b11)

    def mul(self, a: int, b: int) -> int:
        return self.check(a) & self.check(b)

    def inv(self, a: int) -> int:
        if self.check(a) == 0:
            raise ParameterError("zero has no multiplicative inverse")
        return 1

    def mul_scalar(self, vec: np.ndarray, s: int) -> np.ndarray:
        # Payload bytes pack eight GF(2) symbols each; scaling by 1 is the identity.
        if self.check(s) == 0:
            return np.zeros_like(vec)
        return vec.copy()
