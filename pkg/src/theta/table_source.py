import csv
import logging
from collections import defaultdict
from typing import Dict, Iterable, List, Tuple

import numpy as np

from models import ThetaSample
from src.exceptions import FitError, ParameterError, UnsupportedParametersError
from . import ThetaSource
from .regression import fit_gamma

logger = logging.getLogger(__name__)

THETA_TABLE_HEADER = ['q', 'w', 'c', 'r', 'trials', 'estimate', 'stderr']


def read_theta_table(path: str) -> List[ThetaSample]:
    """Load oracle samples written by ``fit-theta``"""
    samples = []
    with open(path, newline='') as f:
        reader = csv.DictReader(f)
        missing = set(THETA_TABLE_HEADER[:6]) - set(reader.fieldnames or [])
        if missing:
            raise ParameterError(f"theta table {path} lacks columns: {sorted(missing)}")
        for row in reader:
            trials = int(row['trials'])
            samples.append(ThetaSample(
                q=int(row['q']), w=int(row['w']), c=int(row['c']), r=int(row['r']),
                trials=trials, dependent_count=int(round(float(row['estimate']) * trials)),
            ))
    return samples


class TableThetaSource(ThetaSource):
    """Dependence probabilities measured by the Monte Carlo oracle.

    Exact (c, r) hits are returned as measured. Other points use a
    power law whose exponent is fitted per c and linearly interpolated
    across c.
    """

    def __init__(self, w: int, q: int, samples: Iterable[ThetaSample]):
        super().__init__(w=w, q=q)
        self.samples = [s for s in samples if s.w == w and s.q == q]
        self._exact: Dict[Tuple[int, int], float] = {(s.c, s.r): s.estimate for s in self.samples}
        self._gamma_c, self._gamma = self._fit_gammas()
        self._warned = False

    @classmethod
    def from_csv(cls, path: str, w: int, q: int) -> "TableThetaSource":
        return cls(w, q, read_theta_table(path))

    def _fit_gammas(self):
        by_c = defaultdict(list)
        for s in self.samples:
            by_c[s.c].append(s)
        cs, gammas = [], []
        for c in sorted(by_c):
            try:
                gammas.append(fit_gamma(by_c[c], min_points=1))
                cs.append(c)
            except FitError:
                logger.debug("No informative samples at c=%d for q=%d, w=%d", c, self.q, self.w)
        return np.array(cs, dtype=float), np.array(gammas, dtype=float)

    def covered_values(self) -> List[int]:
        return sorted({c for c, _ in self._exact})

    def theta(self, r: int, c: int) -> float:
        if not 1 <= r <= c:
            raise ParameterError(f"need 1 <= r <= c, got r={r}, c={c}")
        if r == c:
            return 1.0
        hit = self._exact.get((c, r))
        if hit is not None:
            return hit
        if self._gamma.size == 0:
            raise UnsupportedParametersError(
                f"theta table has no entry for (c={c}, r={r}) and nothing to interpolate from"
            )
        if not self._warned and (c < self._gamma_c[0] or c > self._gamma_c[-1]):
            logger.warning("theta table covers c in [%d, %d]; clamping gamma outside that range",
                           self._gamma_c[0], self._gamma_c[-1])
            self._warned = True
        gamma = float(np.interp(c, self._gamma_c, self._gamma))
        return (r / c) ** gamma

    def validate_for(self, k: int):
        if not self.samples:
            raise UnsupportedParametersError(f"theta table holds no samples for q={self.q}, w={self.w}")
        if self.w > k:
            raise UnsupportedParametersError(f"density w={self.w} exceeds k={k}")

    def get_source_name(self) -> str:
        return "table"
