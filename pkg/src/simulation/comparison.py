import logging
import math
from typing import Dict, Optional

import numpy as np

from models import ComparisonReport, ModelOutputs, SimStats
from src.exceptions import ComparisonError
from src.model.markov_chain import MarkovChain, apply_erasure, expected_transmissions
from src.theta import ThetaSource

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES = {
    'mean_relative_error': 0.008,
    'xi_mse': 2e-4,
    'delta_mse': 4e-4,
}


def _mse(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.mean((a - b) ** 2)) if a.size else 0.0


def compare_model_sim(model: ModelOutputs, sim: SimStats,
                      tolerances: Optional[Dict[str, float]] = None) -> ComparisonReport:
    """Relative error of the mean and MSE of the xi and delta curves"""
    limits = dict(DEFAULT_TOLERANCES)
    limits.update(tolerances or {})
    cfg = sim.config
    sim_params = (cfg.get('k'), cfg.get('w'), cfg.get('q'), float(cfg.get('loss_rate', 0.0)))
    model_params = (model.k, model.w, model.q, float(model.alpha))
    if cfg.get('policy', 'fixed') != 'fixed':
        raise ComparisonError("only fixed-density campaigns have a model counterpart")
    if sim_params[:3] != model_params[:3] or not math.isclose(sim_params[3], model_params[3], abs_tol=1e-12):
        raise ComparisonError(
            f"model (k, w, q, alpha)={model_params} does not match simulation {sim_params}"
        )

    relative = abs(model.expected_transmissions - sim.mean) / sim.mean

    sim_xi = {eps: value for eps, _, value in sim.xi_curve}
    xi_table = [
        {'epsilon': eps, 'N': n, 'model': value, 'simulation': sim_xi[eps]}
        for eps, n, value in model.xi_curve if eps in sim_xi
    ]
    sim_delta = dict(sim.delta_curve)
    bound = dict(model.lower_bound)
    delta_table = [
        {'r': r, 'model': value, 'simulation': sim_delta[r], 'lower_bound': bound.get(r, float('nan'))}
        for r, value in model.delta_curve if r in sim_delta
    ]
    if not xi_table or not delta_table:
        raise ComparisonError("model and simulation curves share no points")

    xi_mse = _mse([row['model'] for row in xi_table], [row['simulation'] for row in xi_table])
    delta_mse = _mse([row['model'] for row in delta_table], [row['simulation'] for row in delta_table])
    rows = []
    for metric, value, model_value, sim_value in (
        ('mean_relative_error', relative, model.expected_transmissions, sim.mean),
        ('xi_mse', xi_mse, None, None),
        ('delta_mse', delta_mse, None, None),
    ):
        rows.append({
            'metric': metric,
            'model': model_value,
            'simulation': sim_value,
            'value': value,
            'tolerance': limits[metric],
            'passed': bool(value <= limits[metric]),
        })
    report = ComparisonReport(
        k=model.k, w=model.w, q=model.q, alpha=model.alpha,
        mean_relative_error=relative, xi_mse=xi_mse, delta_mse=delta_mse,
        rows=rows, delta_table=delta_table, xi_table=xi_table,
    )
    logger.info("Comparison k=%d w=%d q=%d alpha=%.2f: rel=%.4f xi_mse=%.2e delta_mse=%.2e passed=%s",
                model.k, model.w, model.q, model.alpha, relative, xi_mse, delta_mse, report.passed)
    return report


def erasure_scaling(k: int, w: int, q: int, alpha: float, theta: Optional[ThetaSource] = None) -> float:
    """Ratio of expected transmissions with erasure probability alpha to the loss-free chain.

    Erasures only stretch every transition geometrically, so this is 1 / (1 - alpha).
    """
    chain = MarkovChain.build(k, w, q, theta)
    return expected_transmissions(apply_erasure(chain, alpha)) / expected_transmissions(chain)
