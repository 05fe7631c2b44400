"""Absorbing Markov chain of sparse network-coding decoding and its metrics.

Transient states are (r, c) pairs with (1, w) at index 0; the single
absorbing state (k, k) is kept out of Q and appears only through R. Rank
never decreases, so apart from self-loops no transient state is revisited.
"""
import logging
import math
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from models import ModelOutputs
from src.exceptions import ModelConstructionError, ParameterError
from src.theta import ThetaSource
from src.theta.fitted_source import FittedThetaSource
from .bounds import lower_bound_curve
from .state_space import MarkovState, build_state_space
from .transitions import transition_probabilities

logger = logging.getLogger(__name__)

ROW_SUM_TOLERANCE = 1e-12
XI_TOLERANCE = 1e-12
HORIZON_FACTOR = 20


class MarkovChain:
    """Canonical-form chain: Q over transients, R into (k, k)"""

    def __init__(self, k: int, w: int, q: int, states: List[MarkovState], Q: sparse.csr_matrix,
                 R: np.ndarray, alpha: float = 0.0, theta_source: str = 'fitted'):
        self.k = k
        self.w = w
        self.q = q
        self.states = tuple(states)
        self.absorbing = MarkovState(k, k)
        self.Q = Q
        self.R = R
        self.R.setflags(write=False)
        self.alpha = alpha
        self.theta_source = theta_source
        self._index: Dict[MarkovState, int] = {s: i for i, s in enumerate(self.states)}
        self._lu = None

    @property
    def n_transient(self) -> int:
        return len(self.states)

    @property
    def start(self) -> MarkovState:
        return self.states[0]

    def state_index(self, state: MarkovState) -> int:
        return self._index[state]

    def stay_probabilities(self) -> np.ndarray:
        return self.Q.diagonal()

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.Q.sum(axis=1)).ravel() + self.R

    def transition_rows(self) -> Iterator[Tuple[MarkovState, List[Tuple[MarkovState, float]]]]:
        """Each transient state with its non-zero outgoing transitions"""
        Q = self.Q
        for i, state in enumerate(self.states):
            lo, hi = Q.indptr[i], Q.indptr[i + 1]
            row = [(self.states[j], float(p)) for j, p in zip(Q.indices[lo:hi], Q.data[lo:hi])]
            if self.R[i] > 0.0:
                row.append((self.absorbing, float(self.R[i])))
            yield state, row

    def lu(self):
        """Cached sparse LU factorisation of I - Q"""
        if self._lu is None:
            system = (sparse.identity(self.n_transient, format='csc') - self.Q.tocsc())
            try:
                self._lu = splu(system)
            except RuntimeError as e:
                raise ModelConstructionError(f"I - Q is singular: {e}")
        return self._lu

    @classmethod
    def build(cls, k: int, w: int, q: int, theta: Optional[ThetaSource] = None,
              alpha: float = 0.0) -> "MarkovChain":
        if theta is None:
            theta = FittedThetaSource(w, q)
        theta.validate_for(k)
        fitted = isinstance(theta, FittedThetaSource)
        all_states = build_state_space(k, w, fit_range=fitted)
        transients = all_states[:-1]
        index = {s: i for i, s in enumerate(transients)}
        absorbing = all_states[-1]

        rows, cols, data = [], [], []
        R = np.zeros(len(transients))
        for i, state in enumerate(transients):
            for target, p in transition_probabilities(state, k, w, theta):
                if target == absorbing:
                    R[i] += p
                else:
                    j = index.get(target)
                    if j is None:
                        raise ModelConstructionError(f"transition {state} -> {target} leaves the state space")
                    rows.append(i)
                    cols.append(j)
                    data.append(p)
        Q = sparse.csr_matrix((data, (rows, cols)), shape=(len(transients), len(transients)))
        chain = cls(k, w, q, transients, Q, R, theta_source=theta.get_source_name())
        sums = chain.row_sums()
        worst = float(np.max(np.abs(sums - 1.0)))
        if worst > ROW_SUM_TOLERANCE:
            raise ModelConstructionError(f"transition rows do not sum to 1 (worst deviation {worst:.3e})")
        logger.debug("Built chain k=%d w=%d q=%d with %d transient states", k, w, q, len(transients))
        if alpha:
            chain = apply_erasure(chain, alpha)
        return chain


def build_chain(k: int, w: int, q: int, theta: Optional[ThetaSource] = None,
                alpha: float = 0.0) -> MarkovChain:
    return MarkovChain.build(k, w, q, theta, alpha)


def apply_erasure(chain: MarkovChain, alpha: float) -> MarkovChain:
    """Packet-erasure variant: Q' = (1 - alpha) Q + alpha I, R' = (1 - alpha) R"""
    if not 0.0 <= alpha < 1.0:
        raise ParameterError(f"erasure probability must lie in [0, 1), got {alpha}")
    if alpha == 0.0:
        return chain
    n = chain.n_transient
    Q = ((1.0 - alpha) * chain.Q + alpha * sparse.identity(n, format='csr')).tocsr()
    R = (1.0 - alpha) * chain.R
    combined = 1.0 - (1.0 - chain.alpha) * (1.0 - alpha)
    return MarkovChain(chain.k, chain.w, chain.q, list(chain.states), Q, R.copy(),
                       alpha=combined, theta_source=chain.theta_source)


def absorption_times(chain: MarkovChain) -> np.ndarray:
    """Expected transitions to absorption from every transient state, M = (I - Q)^-1 1"""
    M = chain.lu().solve(np.ones(chain.n_transient))
    if not np.all(np.isfinite(M)) or np.any(M < 0):
        raise ModelConstructionError("absorption times are not finite; (k, k) is not reachable")
    return M


def expected_transmissions(chain: MarkovChain) -> float:
    """Mean transmissions to decode, counting the first packet that creates (1, w).

    Under erasures that first packet also repeats geometrically, adding
    1 / (1 - alpha).
    """
    M = absorption_times(chain)
    return float(M[0] + 1.0 / (1.0 - chain.alpha))


def decoding_curve(chain: MarkovChain, n_max: Optional[int] = None,
                   tolerance: float = XI_TOLERANCE, horizon_factor: int = HORIZON_FACTOR) -> np.ndarray:
    """xi(N) for N = 0..n_max: probability the generation decodes within N transmissions.

    Transmission 1 creates the start state (after a geometric wait under
    erasures); later transmissions are chain transitions. Without ``n_max``
    the curve stops once 1 - xi < tolerance or at horizon_factor * k.
    """
    QT = chain.Q.T.tocsr()
    R = chain.R
    alpha = chain.alpha
    limit = n_max if n_max is not None else horizon_factor * chain.k
    xi = [0.0]
    occupancy = np.zeros(chain.n_transient)
    waiting = 1.0  # mass whose first packet has not yet arrived
    absorbed = 0.0
    for _ in range(limit):
        absorbed += float(R @ occupancy)
        occupancy = QT @ occupancy
        occupancy[0] += waiting * (1.0 - alpha)
        waiting *= alpha
        xi.append(min(absorbed, 1.0))
        if n_max is None and 1.0 - absorbed < tolerance:
            break
    else:
        if n_max is None and 1.0 - absorbed >= tolerance:
            logger.warning("xi curve truncated at N=%d with %.3e mass left", limit, 1.0 - absorbed)
    return np.array(xi)


def decoding_probability(chain: MarkovChain, N: int) -> float:
    if N < 0:
        raise ParameterError(f"transmission count must be non-negative, got {N}")
    return float(decoding_curve(chain, n_max=N)[N])


def absorption_pmf(chain: MarkovChain) -> np.ndarray:
    """P(decoding completes exactly at transmission N), from the xi curve"""
    return np.diff(decoding_curve(chain), prepend=0.0)


def visit_probabilities(chain: MarkovChain) -> np.ndarray:
    """Probability of ever occupying each transient state, starting from (1, w).

    Row 0 of H = (N - I) N_d^-1. Since only self-loops return to a state,
    N_d = 1 / (1 - diag Q); the start entry is 1 because it is occupied at
    the outset.
    """
    lu = chain.lu()
    unit = np.zeros(chain.n_transient)
    unit[0] = 1.0
    n_row = lu.solve(unit, trans='T')
    h = n_row * (1.0 - chain.stay_probabilities())
    h[0] = 1.0
    return np.clip(h, 0.0, 1.0)


def rank_increase_probability(chain: MarkovChain) -> np.ndarray:
    """delta(r) for r = 1..k-1 (array index r - 1)"""
    h = visit_probabilities(chain)
    leave = 1.0 - chain.stay_probabilities()
    delta = np.zeros(chain.k - 1)
    for i, state in enumerate(chain.states):
        delta[state.r - 1] += h[i] * leave[i]
    return delta


def rank_step_cost(chain: MarkovChain) -> np.ndarray:
    """Expected transmissions spent at each rank r = 1..k-1"""
    h = visit_probabilities(chain)
    leave = 1.0 - chain.stay_probabilities()
    cost = np.zeros(chain.k - 1)
    for i, state in enumerate(chain.states):
        cost[state.r - 1] += h[i] / leave[i]
    return cost


def summarize_chain(chain: MarkovChain, epsilon_max: int) -> ModelOutputs:
    """Model metrics in the shape the reports and comparisons consume"""
    k = chain.k
    xi = decoding_curve(chain, n_max=k + epsilon_max)
    delta = rank_increase_probability(chain)
    return ModelOutputs(
        k=k, w=chain.w, q=chain.q, alpha=chain.alpha,
        expected_transmissions=expected_transmissions(chain),
        xi_curve=[(eps, k + eps, float(xi[k + eps])) for eps in range(epsilon_max + 1)],
        delta_curve=[(r, float(delta[r - 1])) for r in range(1, k)],
        lower_bound=lower_bound_curve(k, chain.w),
        theta_source=chain.theta_source,
        chain_states=chain.n_transient,
    )


def mean_of_curve(xi: np.ndarray) -> float:
    """Mean absorption time implied by a xi curve"""
    pmf = np.diff(xi, prepend=0.0)
    return math.fsum(n * p for n, p in enumerate(pmf))
