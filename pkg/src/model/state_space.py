from dataclasses import dataclass
from typing import List

from src.exceptions import ParameterError, UnsupportedParametersError


@dataclass(frozen=True, order=True)
class MarkovState:
    r: int  # rank
    c: int  # covered columns

    def __str__(self) -> str:
        return f"({self.r},{self.c})"


def check_parameters(k: int, w: int, fit_range: bool = True):
    if k < 2:
        raise ParameterError(f"the chain needs k >= 2 for a transient state, got k={k}")
    if not 1 <= w <= k:
        raise ParameterError(f"need 1 <= w <= k, got w={w}, k={k}")
    if fit_range and not (3 <= w and 2 * w <= k):
        raise UnsupportedParametersError(
            f"fitted model is valid for 3 <= w <= k/2; got w={w}, k={k}"
        )


def build_state_space(k: int, w: int, fit_range: bool = True) -> List[MarkovState]:
    """Every feasible (r, c): transients by rank then coverage, absorbing (k, k) last.

    (1, w) is always first: the first packet covers exactly w columns.
    ``fit_range`` enforces the validity range of the fitted dependence model;
    callers with an explicit theta table pass False.
    """
    check_parameters(k, w, fit_range)
    states = []
    for r in range(1, k):
        for c in range(max(r, w), min(k, r * w) + 1):
            states.append(MarkovState(r, c))
    states.append(MarkovState(k, k))
    return states
