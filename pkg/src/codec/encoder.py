import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from src.exceptions import EncodingError, ParameterError
from src.field import FieldSpec
from .coding_vector import CodingVector, generate_coding_vector

logger = logging.getLogger(__name__)


def symbol_limit(field: FieldSpec) -> int:
    """Largest payload symbol value plus one.

    GF(2) and GF(2^8) payloads are raw bytes; the small fields carry one
    field element per byte.
    """
    return 256 if field.q in (1, 8) else field.order


@dataclass
class Generation:
    """Block of k source packets coded together"""

    packets: List[np.ndarray]

    def __post_init__(self):
        if not self.packets:
            raise ParameterError("a generation needs at least one packet")
        self.packets = [np.asarray(p, dtype=np.uint8) for p in self.packets]
        lengths = {len(p) for p in self.packets}
        if len(lengths) != 1:
            raise EncodingError(f"payload lengths differ within the generation: {sorted(lengths)}")

    @property
    def k(self) -> int:
        return len(self.packets)

    @property
    def payload_length(self) -> int:
        return len(self.packets[0])

    @classmethod
    def random(cls, k: int, payload_length: int, field: FieldSpec,
               rng: np.random.Generator) -> "Generation":
        limit = symbol_limit(field)
        return cls([rng.integers(0, limit, size=payload_length, dtype=np.uint8) for _ in range(k)])


def encode(generation: Generation, vector: CodingVector, field: FieldSpec) -> np.ndarray:
    """Symbol-wise linear combination of the supported packets"""
    if vector.k != generation.k:
        raise EncodingError(f"coding vector has length {vector.k}, generation has k={generation.k}")
    limit = symbol_limit(field)
    payload = np.zeros(generation.payload_length, dtype=np.uint8)
    for index in vector.support:
        packet = generation.packets[index]
        if limit < 256 and packet.size and int(packet.max()) >= limit:
            raise EncodingError(f"packet {index} holds symbols outside GF(2^{field.q})")
        payload = field.axpy(payload, int(vector.coefficients[index]), packet)
    return payload


class Encoder:
    """Source side of a generation: draws sparse vectors and codes payloads"""

    def __init__(self, generation: Generation, field: FieldSpec, rng: np.random.Generator):
        self.generation = generation
        self.field = field
        self.rng = rng
        self.sent = 0

    def next_packet(self, w: int) -> Tuple[CodingVector, np.ndarray]:
        vector = generate_coding_vector(self.generation.k, w, self.field, self.rng)
        self.sent += 1
        return vector, encode(self.generation, vector, self.field)
