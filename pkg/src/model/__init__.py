from .state_space import MarkovState, build_state_space
from .transitions import transition_probabilities, column_step_probabilities
from .bounds import lower_bound_innovative, lower_bound_curve
from .markov_chain import (
    MarkovChain, build_chain, apply_erasure, expected_transmissions, absorption_times,
    decoding_curve, decoding_probability, absorption_pmf, visit_probabilities,
    rank_increase_probability, rank_step_cost, summarize_chain, mean_of_curve,
)

__all__ = [
    'MarkovState', 'build_state_space', 'transition_probabilities', 'column_step_probabilities',
    'lower_bound_innovative', 'lower_bound_curve',
    'MarkovChain', 'build_chain', 'apply_erasure', 'expected_transmissions', 'absorption_times',
    'decoding_curve', 'decoding_probability', 'absorption_pmf', 'visit_probabilities',
    'rank_increase_probability', 'rank_step_cost', 'summarize_chain', 'mean_of_curve',
]
