"""Regressions that turn dependence samples into gamma(c) and its slopes."""
import logging
from dataclasses import dataclass, asdict
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.exceptions import FitError
from .gamma import ThetaFitParams, W3_TAIL_SLOPE, gamma_w3

logger = logging.getLogger(__name__)


def fit_gamma_points(ratios: Sequence[float], estimates: Sequence[float], min_points: int = 3,
                     trials: Optional[Sequence[int]] = None) -> float:
    """Least-squares slope of log(estimate) against log(r/c), through the origin.

    Points with estimate 0 or 1 (or r == c) carry no information and are
    dropped. With ``trials`` each point is weighted by the inverse variance
    of log(estimate), n * p / (1 - p).
    """
    x = np.asarray(ratios, dtype=float)
    y = np.asarray(estimates, dtype=float)
    keep = (y > 0.0) & (y < 1.0) & (x > 0.0) & (x < 1.0)
    if int(keep.sum()) < min_points:
        raise FitError(f"need {min_points} samples with 0 < estimate < 1, got {int(keep.sum())}")
    lx = np.log(x[keep])
    ly = np.log(y[keep])
    if trials is None:
        weights = np.ones_like(lx)
    else:
        p = y[keep]
        weights = np.asarray(trials, dtype=float)[keep] * p / (1.0 - p)
    gamma = float(np.sum(weights * lx * ly) / np.sum(weights * lx * lx))
    return max(gamma, 0.0)


def fit_gamma(samples, min_points: int = 3) -> float:
    """Fit gamma for samples sharing (q, w, c), weighting each by its trial count"""
    if len({s.c for s in samples}) > 1:
        raise FitError("fit_gamma expects samples for a single c")
    return fit_gamma_points([s.r / s.c for s in samples], [s.estimate for s in samples], min_points,
                            trials=[s.trials for s in samples])


@dataclass
class SlopeFit:
    q: int
    w: int
    regime: str
    slope: float
    intercept: float = 0.0
    c0: Optional[float] = None
    slope_after: Optional[float] = None
    intercept_after: Optional[float] = None
    residual_rms: float = 0.0
    points: int = 0

    def to_dict(self) -> Dict:
        return asdict(self)

    def predict(self, c: float) -> float:
        if self.regime == 'two-segment' and c >= self.c0:
            return self.slope_after * c + self.intercept_after
        return self.slope * c + self.intercept


def _through_origin(c: np.ndarray, g: np.ndarray) -> Tuple[float, float]:
    slope = float(np.dot(c, g) / np.dot(c, c))
    sse = float(np.sum((g - slope * c) ** 2))
    return slope, sse


def _affine(c: np.ndarray, g: np.ndarray) -> Tuple[float, float, float]:
    if len(c) == 1:
        return 0.0, float(g[0]), 0.0
    slope, intercept = np.polyfit(c, g, 1)
    sse = float(np.sum((g - (slope * c + intercept)) ** 2))
    return float(slope), float(intercept), sse


def fit_slopes(gamma_points: Sequence[Tuple[float, float]], w: int, q: int) -> SlopeFit:
    """Regress gamma-hat against c in the regime that applies to w.

    w > 4 (and w < 3): line through the origin. w == 4: affine line.
    w == 3: a through-origin segment below c0 and an affine segment from c0
    on, with c0 chosen as the split of least squared error.
    """
    points = sorted((float(c), float(g)) for c, g in gamma_points)
    if len(points) < 2:
        raise FitError(f"need at least 2 (c, gamma) points, got {len(points)}")
    c = np.array([p[0] for p in points])
    g = np.array([p[1] for p in points])

    if w == 4:
        slope, intercept, sse = _affine(c, g)
        fit = SlopeFit(q, w, 'affine', slope, intercept, residual_rms=np.sqrt(sse / len(c)), points=len(c))
    elif w == 3:
        if len(points) < 3:
            raise FitError("the two-segment w=3 fit needs at least 3 points")
        best = None
        for split in range(1, len(c) - 1):
            m, sse_left = _through_origin(c[:split], g[:split])
            s, b, sse_right = _affine(c[split:], g[split:])
            sse = sse_left + sse_right
            if best is None or sse < best[0]:
                best = (sse, m, float(c[split]), s, b)
        sse, m, c0, s, b = best
        fit = SlopeFit(q, w, 'two-segment', m, 0.0, c0=c0, slope_after=s, intercept_after=b,
                       residual_rms=np.sqrt(sse / len(c)), points=len(c))
    else:
        slope, sse = _through_origin(c, g)
        fit = SlopeFit(q, w, 'through-origin', slope, residual_rms=np.sqrt(sse / len(c)), points=len(c))
    fit.residual_rms = float(fit.residual_rms)
    logger.info("Fitted %s slope for q=%d, w=%d: %.4f", fit.regime, q, w, fit.slope)
    return fit


def compare_w3_variants(gamma_points: Sequence[Tuple[float, float]], params: ThetaFitParams) -> Dict:
    """RMS distance of the published and continuous w=3 curves to gamma-hat"""
    if not gamma_points:
        raise FitError("no gamma points to compare")
    c = np.array([p[0] for p in gamma_points], dtype=float)
    g = np.array([p[1] for p in gamma_points], dtype=float)
    printed = np.array([gamma_w3(x, params, continuous=False) for x in c])
    continuous = np.array([gamma_w3(x, params, continuous=True) for x in c])
    rms_printed = float(np.sqrt(np.mean((printed - g) ** 2)))
    rms_continuous = float(np.sqrt(np.mean((continuous - g) ** 2)))
    return {
        'tail_slope': W3_TAIL_SLOPE,
        'rms_printed': rms_printed,
        'rms_continuous': rms_continuous,
        'better': 'printed' if rms_printed <= rms_continuous else 'continuous',
    }


def fit_params_from(fits: List[SlopeFit], base: ThetaFitParams) -> ThetaFitParams:
    """Overlay regressed slopes on a parameter record for one q"""
    values = asdict(base)
    for fit in fits:
        if fit.w == 3:
            values['m_odd'] = fit.slope
            values['c0'] = fit.c0
        elif fit.w == 4:
            values['m_w4'] = fit.slope
            values['b_w4'] = fit.intercept
        elif fit.w > 4:
            values['m_even' if fit.w % 2 == 0 else 'm_odd'] = fit.slope
    return ThetaFitParams(**values)
