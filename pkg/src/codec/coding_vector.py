from dataclasses import dataclass, field as dataclass_field
from typing import Optional, Sequence, Tuple

import numpy as np

from src.exceptions import ParameterError
from src.field import FieldSpec


@dataclass(frozen=True, eq=False)
class CodingVector:
    """Length-k coefficient vector with exactly w non-zero entries"""

    coefficients: np.ndarray
    support: Tuple[int, ...] = dataclass_field(default=())

    def __post_init__(self):
        coefficients = np.asarray(self.coefficients, dtype=np.uint8)
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)
        support = tuple(int(i) for i in np.flatnonzero(coefficients))
        if self.support and tuple(sorted(self.support)) != support:
            raise ParameterError("support does not match the non-zero coefficients")
        object.__setattr__(self, "support", support)

    @property
    def k(self) -> int:
        return len(self.coefficients)

    @property
    def w(self) -> int:
        return len(self.support)

    def as_bitmask(self) -> int:
        """Support as an int bitset (bit i set for column i), used for GF(2)"""
        mask = 0
        for i in self.support:
            mask |= 1 << i
        return mask

    @classmethod
    def from_support(cls, k: int, support: Sequence[int],
                     coefficients: Optional[Sequence[int]] = None) -> "CodingVector":
        if len(set(support)) != len(support):
            raise ParameterError("support indices must be distinct")
        if any(not 0 <= i < k for i in support):
            raise ParameterError(f"support indices must lie in [0, {k})")
        values = np.zeros(k, dtype=np.uint8)
        if coefficients is None:
            coefficients = [1] * len(support)
        if any(c == 0 for c in coefficients):
            raise ParameterError("supported coefficients must be non-zero")
        values[list(support)] = coefficients
        return cls(values)


def generate_coding_vector(k: int, w: int, field: FieldSpec, rng: np.random.Generator,
                           columns: Optional[Sequence[int]] = None) -> CodingVector:
    """Draw a uniform w-subset of the columns and non-zero coefficients on it.

    ``columns`` restricts the support to a column window (default: all k).
    """
    pool = np.arange(k) if columns is None else np.asarray(columns)
    if w < 1 or w > len(pool):
        raise ParameterError(f"density w={w} must satisfy 1 <= w <= {len(pool)}")
    support = rng.choice(pool, size=w, replace=False)
    values = np.zeros(k, dtype=np.uint8)
    if field.q == 1:
        values[support] = 1
    else:
        values[support] = rng.integers(1, field.order, size=w)
    return CodingVector(values)
