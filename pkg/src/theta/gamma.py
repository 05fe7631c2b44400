"""Power-law model of the linear-dependence probability.

theta(r, c) ~= (r / c) ** gamma(c), with gamma piecewise linear in c and
parameterised per field size q.
"""
from dataclasses import dataclass
from typing import Mapping, Optional

from src.exceptions import ParameterError, UnsupportedParametersError
from src.field import SUPPORTED_Q

# Slope of the w = 3 line beyond the breakpoint; shared by every q.
W3_TAIL_SLOPE = 0.3


@dataclass(frozen=True)
class ThetaFitParams:
    m_odd: float
    m_even: float
    m_w4: float
    b_w4: float
    c0: float

    def __post_init__(self):
        if min(self.m_odd, self.m_even, self.m_w4) <= 0:
            raise ParameterError("fit slopes must be positive")
        if self.c0 < 1:
            raise ParameterError("breakpoint c0 must be at least 1")


DEFAULT_FIT_PARAMS = {
    1: ThetaFitParams(m_odd=0.676, m_even=0.337, m_w4=0.337, b_w4=0.0, c0=17),
    2: ThetaFitParams(m_odd=1.367, m_even=1.367, m_w4=1.101, b_w4=3.817, c0=15),
    3: ThetaFitParams(m_odd=2.055, m_even=2.055, m_w4=1.417, b_w4=9.627, c0=12),
    4: ThetaFitParams(m_odd=2.738, m_even=2.738, m_w4=1.565, b_w4=17.298, c0=10),
    8: ThetaFitParams(m_odd=4.891, m_even=4.891, m_w4=1.491, b_w4=42.634, c0=6),
}


def params_for(q: int, params: Optional[Mapping[int, ThetaFitParams]] = None) -> ThetaFitParams:
    table = DEFAULT_FIT_PARAMS if params is None else params
    if q not in SUPPORTED_Q or q not in table:
        raise ParameterError(f"no dependence-fit parameters for q={q}")
    return table[q]


def gamma_w3(c: float, p: ThetaFitParams, continuous: bool = False) -> float:
    if c < p.c0:
        return p.m_odd * c
    if continuous:
        return p.m_odd * p.c0 + W3_TAIL_SLOPE * (c - p.c0)
    # As published; jumps down at c0 (see DESIGN.md).
    return W3_TAIL_SLOPE * (c - p.c0 * (1.0 - p.m_odd))


def gamma_of(c: int, w: int, q: int, params: Optional[Mapping[int, ThetaFitParams]] = None,
             continuous_w3: bool = False) -> float:
    """Exponent of the dependence power law for c covered columns"""
    p = params_for(q, params)
    if c < w:
        raise ParameterError(f"covered columns c={c} below density w={w}")
    if w < 3:
        raise UnsupportedParametersError(f"the fitted model has no parameters for w={w}")
    if w == 3:
        return gamma_w3(c, p, continuous_w3)
    if w == 4:
        return p.m_w4 * c + p.b_w4
    return (p.m_even if w % 2 == 0 else p.m_odd) * c


def theta_fit(r: int, c: int, w: int, q: int, params: Optional[Mapping[int, ThetaFitParams]] = None,
              continuous_w3: bool = False) -> float:
    """Fitted probability that a vector on the covered columns is dependent"""
    if not 1 <= r <= c:
        raise ParameterError(f"need 1 <= r <= c, got r={r}, c={c}")
    if r == c:
        return 1.0
    gamma = gamma_of(c, w, q, params, continuous_w3)
    return min(1.0, max(0.0, (r / c) ** gamma))
