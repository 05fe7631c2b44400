from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Tuple
import math

from src.exceptions import ParameterError


@dataclass
class CampaignConfig:
    k: int
    w: Optional[int] = None
    q: int = 1
    loss_rate: float = 0.0
    runs: int = 10000
    seed: int = 1
    epsilon_max: int = 30
    policy: str = 'fixed'  # 'fixed' or 'tsnc'
    ladder: Optional[Tuple[int, ...]] = None
    tsnc_threshold: float = 1.1
    payload_length: int = 0
    threads: int = 1
    max_transmissions_factor: int = 100

    def validate(self):
        if self.k < 1:
            raise ParameterError(f"k must be positive, got {self.k}")
        if self.runs < 1:
            raise ParameterError(f"runs must be at least 1, got {self.runs}")
        if not 0.0 <= self.loss_rate < 1.0:
            raise ParameterError(f"loss rate must lie in [0, 1), got {self.loss_rate}")
        if self.policy not in ('fixed', 'tsnc'):
            raise ParameterError(f"unknown policy: {self.policy}")
        if self.policy == 'fixed':
            if self.w is None or not 1 <= self.w <= self.k:
                raise ParameterError(f"fixed policy needs 1 <= w <= k, got w={self.w}")
        elif self.ladder is not None:
            if not self.ladder:
                raise ParameterError("TSNC ladder is empty")
            if any(not 1 <= w <= self.k for w in self.ladder):
                raise ParameterError(f"ladder entries must lie in [1, {self.k}]")
        if self.q == 1 and self.k > 1:
            # Over GF(2) even-weight vectors span only the k-1 dimensional even-weight subspace.
            even = [self.w] if self.policy == 'fixed' else list(self.ladder or ())
            if any(w % 2 == 0 for w in even):
                raise ParameterError(
                    f"over GF(2) an even density never decodes (parity constraint); got {even} for k={self.k}"
                )
        if self.epsilon_max < 0:
            raise ParameterError("epsilon_max must be non-negative")
        if self.threads < 1:
            raise ParameterError("threads must be at least 1")
        return self

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['ladder'] = list(self.ladder) if self.ladder is not None else None
        return data


@dataclass
class GenerationTrace:
    total_transmissions: int
    rank_transmissions: List[int]  # index r: transmissions sent while the decoder held rank r
    visited: List[Tuple[int, int]]  # (r, c) reached after each innovative packet
    op_count: int
    op_count_at_rank: List[int]  # cumulative decoder operations when rank r+1 was reached
    densities: List[int]  # density used while the decoder held rank r

    @property
    def epsilon(self) -> int:
        return self.total_transmissions - len(self.rank_transmissions)


@dataclass
class SimStats:
    runs: int
    mean: float
    stddev: float
    stderr: float
    mean_op_count: float
    xi_curve: List[Tuple[int, int, float]]  # (epsilon, N, xi)
    delta_curve: List[Tuple[int, float]]  # (r, delta)
    op_count_curve: List[Tuple[int, float]]  # (r, mean cumulative ops)
    density_curve: List[Tuple[int, float]]  # (r, mean density)
    config: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'runs': self.runs,
            'mean': self.mean,
            'stddev': self.stddev,
            'stderr': self.stderr,
            'mean_op_count': self.mean_op_count,
            'config': self.config,
        }


@dataclass
class ModelOutputs:
    k: int
    w: int
    q: int
    alpha: float
    expected_transmissions: float
    xi_curve: List[Tuple[int, int, float]]  # (epsilon, N, xi)
    delta_curve: List[Tuple[int, float]]  # (r, delta)
    lower_bound: List[Tuple[int, float]]  # (r, bound)
    theta_source: str = 'fitted'
    chain_states: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k': self.k,
            'w': self.w,
            'q': self.q,
            'alpha': self.alpha,
            'theta_source': self.theta_source,
            'expected_transmissions': self.expected_transmissions,
            'chain_states': self.chain_states,
            'horizon': self.xi_curve[-1][1] if self.xi_curve else None,
        }


@dataclass
class ThetaSample:
    q: int
    w: int
    c: int
    r: int
    trials: int
    dependent_count: int

    @property
    def estimate(self) -> float:
        return self.dependent_count / self.trials

    @property
    def stderr(self) -> float:
        est = self.estimate
        return math.sqrt(est * (1.0 - est) / self.trials)

    def to_row(self) -> List[Any]:
        return [self.q, self.w, self.c, self.r, self.trials, self.estimate, self.stderr]


@dataclass
class ThetaGrid:
    samples: List[ThetaSample]
    skipped: List[Tuple[int, int]] = field(default_factory=list)  # (c, r) points synthesis could not reach


@dataclass
class ComparisonReport:
    k: int
    w: int
    q: int
    alpha: float
    mean_relative_error: float
    xi_mse: float
    delta_mse: float
    rows: List[Dict[str, Any]]  # one row per checked metric
    delta_table: List[Dict[str, Any]]
    xi_table: List[Dict[str, Any]]

    @property
    def passed(self) -> bool:
        return all(row['passed'] for row in self.rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k': self.k,
            'w': self.w,
            'q': self.q,
            'alpha': self.alpha,
            'mean_relative_error': self.mean_relative_error,
            'xi_mse': self.xi_mse,
            'delta_mse': self.delta_mse,
            'passed': self.passed,
            'checks': self.rows,
            'delta_table': self.delta_table,
            'xi_table': self.xi_table,
        }


@dataclass
class RunManifest:
    command: str
    config: Dict[str, Any]
    seed: Optional[int]
    version: str
    outputs: List[str]
    duration_seconds: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
