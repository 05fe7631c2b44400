import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Set

import numpy as np

from src.exceptions import NotDecodableError, ParameterError
from src.field import FieldSpec
from .coding_vector import CodingVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IngestOutcome:
    innovative: bool
    rank_after: int
    covered_after: int


class DecoderState:
    """Incremental Gaussian elimination over GF(2^q).

    Rows are kept in echelon form keyed by pivot column, each pivot entry
    normalised to 1. GF(2) rows are int bitsets; other fields use uint8
    arrays. ``covered`` is the union of received supports before
    elimination, so rank <= len(covered) <= k always holds.
    """

    def __init__(self, k: int, field: FieldSpec):
        if k < 1:
            raise ParameterError(f"generation size must be positive, got {k}")
        self.k = k
        self.field = field
        self.covered: Set[int] = set()
        self.op_count = 0
        self.received = 0
        self._binary = field.q == 1
        self._rows: Dict[int, object] = {}
        self._payloads: Dict[int, Optional[np.ndarray]] = {}
        self._coefficients_only = False

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def c(self) -> int:
        return len(self.covered)

    @property
    def is_complete(self) -> bool:
        return self.rank == self.k

    @property
    def rows(self) -> List[np.ndarray]:
        """Stored rows in pivot order as coefficient arrays"""
        return [self._as_array(self._rows[p]) for p in sorted(self._rows)]

    def _as_array(self, row) -> np.ndarray:
        if not self._binary:
            return row.copy()
        out = np.zeros(self.k, dtype=np.uint8)
        for i in range(self.k):
            if (row >> i) & 1:
                out[i] = 1
        return out

    def _check_vector(self, vector: CodingVector):
        if vector.k != self.k:
            raise ParameterError(f"coding vector has length {vector.k}, decoder expects {self.k}")

    def _reduce(self, vector: CodingVector, payload: Optional[np.ndarray]):
        """Eliminate ``vector`` against stored rows.

        Returns (residual, payload, pivot, ops); pivot is None when the
        residual is zero.
        """
        ops = 0
        if self._binary:
            bits = vector.as_bitmask()
            while bits:
                pivot = (bits & -bits).bit_length() - 1
                row = self._rows.get(pivot)
                if row is None:
                    return bits, payload, pivot, ops
                bits ^= row
                if payload is not None:
                    payload = np.bitwise_xor(payload, self._payloads[pivot])
                ops += 1
            return bits, payload, None, ops

        residual = vector.coefficients.copy()
        while True:
            nonzero = np.flatnonzero(residual)
            if nonzero.size == 0:
                return residual, payload, None, ops
            pivot = int(nonzero[0])
            row = self._rows.get(pivot)
            if row is None:
                return residual, payload, pivot, ops
            factor = int(residual[pivot])
            residual = self.field.axpy(residual, factor, row)
            if payload is not None:
                payload = self.field.axpy(payload, factor, self._payloads[pivot])
            ops += 1

    def is_innovative(self, vector: CodingVector) -> bool:
        """Whether ``vector`` would raise the rank, without storing it"""
        self._check_vector(vector)
        _, _, pivot, _ = self._reduce(vector, None)
        return pivot is not None

    def ingest(self, vector: CodingVector, payload: Optional[np.ndarray] = None) -> IngestOutcome:
        self._check_vector(vector)
        self.received += 1
        self.covered.update(vector.support)
        if payload is None:
            self._coefficients_only = True
        else:
            payload = np.asarray(payload, dtype=np.uint8).copy()

        residual, payload, pivot, ops = self._reduce(vector, payload)
        self.op_count += ops
        if pivot is None:
            return IngestOutcome(False, self.rank, self.c)

        if not self._binary:
            lead = int(residual[pivot])
            if lead != 1:
                scale = self.field.inv(lead)
                residual = self.field.mul_scalar(residual, scale)
                if payload is not None:
                    payload = self.field.mul_scalar(payload, scale)
                self.op_count += 1
        self._rows[pivot] = residual
        self._payloads[pivot] = payload
        return IngestOutcome(True, self.rank, self.c)

    def decode(self) -> List[np.ndarray]:
        """Back-substitute a full-rank system and return the k source payloads"""
        if self.rank < self.k:
            raise NotDecodableError(f"rank {self.rank} < k={self.k}")
        if self._coefficients_only:
            raise NotDecodableError("decoder ran in coefficient-only mode, no payloads to recover")

        rows = dict(self._rows)
        payloads = dict(self._payloads)
        for pivot in range(self.k - 1, -1, -1):
            row = rows[pivot]
            if self._binary:
                above = row & ~((1 << (pivot + 1)) - 1)
                while above:
                    col = (above & -above).bit_length() - 1
                    payloads[pivot] = np.bitwise_xor(payloads[pivot], payloads[col])
                    above &= above - 1
                    self.op_count += 1
                rows[pivot] = 1 << pivot
            else:
                for col in np.flatnonzero(row[pivot + 1:]) + pivot + 1:
                    factor = int(row[col])
                    payloads[pivot] = self.field.axpy(payloads[pivot], factor, payloads[col])
                    self.op_count += 1
                unit = np.zeros(self.k, dtype=np.uint8)
                unit[pivot] = 1
                rows[pivot] = unit
        logger.debug("Decoded generation k=%d after %d received vectors", self.k, self.received)
        return [payloads[p] for p in range(self.k)]

    def copy(self) -> "DecoderState":
        clone = DecoderState(self.k, self.field)
        clone.covered = set(self.covered)
        clone.op_count = self.op_count
        clone.received = self.received
        clone._rows = {p: (r if self._binary else r.copy()) for p, r in self._rows.items()}
        clone._payloads = dict(self._payloads)
        clone._coefficients_only = self._coefficients_only
        return clone


def decoder_ingest(state: DecoderState, vector: CodingVector,
                   payload: Optional[np.ndarray] = None) -> IngestOutcome:
    return state.ingest(vector, payload)


def decode_generation(state: DecoderState) -> List[np.ndarray]:
    return state.decode()
