from typing import Mapping, Optional

from src.exceptions import UnsupportedParametersError
from . import ThetaSource
from .gamma import ThetaFitParams, params_for, theta_fit


class FittedThetaSource(ThetaSource):
    """Power-law fit with per-q slopes (default: the published table)"""

    def __init__(self, w: int, q: int, params: Optional[Mapping[int, ThetaFitParams]] = None,
                 continuous_w3: bool = False):
        super().__init__(w=w, q=q)
        self.params = params
        self.continuous_w3 = continuous_w3
        params_for(q, params)

    def theta(self, r: int, c: int) -> float:
        return theta_fit(r, c, self.w, self.q, self.params, self.continuous_w3)

    def validate_for(self, k: int):
        if not 3 <= self.w or 2 * self.w > k:
            raise UnsupportedParametersError(
                f"fitted model is valid for 3 <= w <= k/2; got w={self.w}, k={k} "
                "(supply a theta table to go outside this range)"
            )

    def get_source_name(self) -> str:
        return "fitted-continuous" if self.continuous_w3 else "fitted"
