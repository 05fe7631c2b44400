import logging

import numpy as np

from src.exceptions import ParameterError
from . import FieldSpec

logger = logging.getLogger(__name__)


class ExtensionField(FieldSpec):
    """GF(2^q), q > 1, with log/antilog tables built once per instance"""

    def __init__(self, q: int, reduction_poly: int):
        super().__init__(q=q, reduction_poly=reduction_poly)
        if reduction_poly.bit_length() != q + 1:
            raise ParameterError(f"reduction polynomial {reduction_poly:#x} is not of degree {q}")
        self._group_order = self.order - 1
        self._exp, self._log = self._build_tables()
        logger.debug("Built log/antilog tables for GF(2^%d)", q)

    def _build_tables(self):
        n = self._group_order
        # Doubled antilog table so log[a] + log[b] never needs a modulo.
        exp = np.zeros(2 * n, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        value = 1
        for i in range(n):
            exp[i] = value
            if i > 0 and value == 1:
                raise ParameterError(
                    f"x does not generate GF(2^{self.q}) under {self.reduction_poly:#x}"
                )
            log[value] = i
            value <<= 1
            if value & self.order:
                value ^= self.reduction_poly
        exp[n:] = exp[:n]
        exp.setflags(write=False)
        log.setflags(write=False)
        return exp, log

    def mul(self, a: int, b: int) -> int:
        if self.check(a) == 0 or self.check(b) == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if self.check(a) == 0:
            raise ParameterError("zero has no multiplicative inverse")
        return int(self._exp[self._group_order - self._log[a]])

    def mul_scalar(self, vec: np.ndarray, s: int) -> np.ndarray:
        if self.check(s) == 0:
            return np.zeros_like(vec)
        if s == 1:
            return vec.copy()
        out = self._exp[self._log[vec] + self._log[s]].astype(vec.dtype)
        out[vec == 0] = 0
        return out
