from functools import lru_cache
from math import comb
from typing import List, Tuple

from src.theta import ThetaSource
from .state_space import MarkovState


@lru_cache(maxsize=None)
def column_step_probabilities(c: int, k: int, w: int) -> Tuple[float, ...]:
    """P(j new columns) for j = 0..w when a w-support is drawn with c columns covered.

    Hypergeometric: C(c, w - j) * C(k - c, j) / C(k, w); terms for
    unavailable columns vanish through the binomials.
    """
    total = comb(k, w)
    return tuple(comb(c, w - j) * comb(k - c, j) / total for j in range(w + 1))


def transition_probabilities(state: MarkovState, k: int, w: int,
                             theta: ThetaSource) -> List[Tuple[MarkovState, float]]:
    """Non-zero transitions out of a transient state.

    With j = 0 new columns the vector is dependent with probability theta
    (stay) and innovative otherwise; any new column always raises the rank.
    """
    r, c = state.r, state.c
    steps = column_step_probabilities(c, k, w)
    # r == c: the covered subspace is full, so any vector on it is dependent.
    dependent = 1.0 if r == c else theta.theta(r, c)
    out = []
    if steps[0] > 0.0:
        stay = dependent * steps[0]
        rise = steps[0] - stay
        if stay > 0.0:
            out.append((state, stay))
        if rise > 0.0:
            out.append((MarkovState(r + 1, c), rise))
    for j in range(1, w + 1):
        if steps[j] > 0.0:
            out.append((MarkovState(r + 1, c + j), steps[j]))
    return out
