"""Density selection for Tunable Sparse Network Coding.

The encoder knows the decoder state (r, c) and picks the sparsest density
whose expected cost to raise the rank by one, 1 / (1 - p_rc(0, 0)), stays
under a threshold.
"""
import math
from typing import Dict, Optional, Sequence

from src.exceptions import ParameterError
from src.model.transitions import column_step_probabilities
from src.theta import ThetaSource
from src.theta.fitted_source import FittedThetaSource


def default_ladder(k: int) -> tuple:
    """3, 7, 15, ... (2^n - 1) up to k/2"""
    ladder = []
    w = 3
    while 2 * w <= k:
        ladder.append(w)
        w = 2 * w + 1
    return tuple(ladder) if ladder else ((3,) if k >= 3 else (1,))


class DensityAdvisor:
    """Expected per-rank cost of each candidate density, one theta source per w"""

    def __init__(self, k: int, q: int, sources: Optional[Dict[int, ThetaSource]] = None):
        self.k = k
        self.q = q
        self._sources = dict(sources or {})

    def source(self, w: int) -> ThetaSource:
        if w not in self._sources:
            self._sources[w] = FittedThetaSource(w, self.q)
        return self._sources[w]

    def stay_probability(self, r: int, c: int, w: int) -> float:
        if c < w:
            return 0.0
        same_columns = column_step_probabilities(c, self.k, w)[0]
        dependent = 1.0 if r == c else self.source(w).theta(r, c)
        return dependent * same_columns

    def rank_step_cost(self, r: int, c: int, w: int) -> float:
        stay = self.stay_probability(r, c, w)
        return math.inf if stay >= 1.0 else 1.0 / (1.0 - stay)

    def next_density(self, r: int, c: int, ladder: Sequence[int], threshold: float) -> int:
        return tsnc_next_density(self, r, c, ladder, threshold)


def tsnc_next_density(advisor: DensityAdvisor, r: int, c: int, ladder: Sequence[int],
                      threshold: float) -> int:
    """Smallest ladder density with cost <= threshold, else the largest"""
    if not ladder:
        raise ParameterError("TSNC ladder is empty")
    ordered = sorted(ladder)
    if r == 0:
        return ordered[0]
    for w in ordered:
        if advisor.rank_step_cost(r, c, w) <= threshold:
            return w
    return ordered[-1]
