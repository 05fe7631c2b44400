import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.exceptions import ModelConstructionError, ParameterError, UnsupportedParametersError
from src.model import (
    MarkovChain, MarkovState, absorption_pmf, apply_erasure, build_state_space,
    column_step_probabilities, decoding_curve, decoding_probability, expected_transmissions,
    lower_bound_curve, lower_bound_innovative, mean_of_curve, rank_increase_probability,
    rank_step_cost, summarize_chain, transition_probabilities, visit_probabilities,
)
from src.theta.fitted_source import FittedThetaSource


def feasible_states(k, w):
    return [(r, c) for r in range(1, k) for c in range(1, k + 1)
            if max(r, w) <= c <= min(k, r * w)]


def test_state_space_matches_brute_force():
    states = build_state_space(10, 3)
    assert states[0] == MarkovState(1, 3)
    assert states[-1] == MarkovState(10, 10)
    assert [(s.r, s.c) for s in states[:-1]] == feasible_states(10, 3)
    assert len(states) - 1 == 39
    assert MarkovState(2, 7) not in states
    assert [s for s in states if s.r == 1] == [MarkovState(1, 3)]


@pytest.mark.parametrize('k, w', [(10, 6), (10, 2), (16, 1)])
def test_state_space_outside_fit_range(k, w):
    with pytest.raises(UnsupportedParametersError):
        build_state_space(k, w)
    assert build_state_space(k, w, fit_range=False)[0] == MarkovState(1, w)


def exact_column_steps(c, k, w):
    """Count new columns over every w-support with columns 0..c-1 covered"""
    counts = [0] * (w + 1)
    for support in combinations(range(k), w):
        counts[sum(1 for i in support if i >= c)] += 1
    total = sum(counts)
    return [Fraction(n, total) for n in counts]


@pytest.mark.parametrize('c', range(3, 11))
def test_column_steps_match_enumeration(c):
    approx = column_step_probabilities(c, 10, 3)
    for p, exact in zip(approx, exact_column_steps(c, 10, 3)):
        assert math.isclose(p, float(exact), rel_tol=1e-12, abs_tol=1e-15)


def test_transitions_from_state_2_5(constant_theta):
    out = dict(transition_probabilities(MarkovState(2, 5), 10, 3, constant_theta(3, value=0.25)))
    assert out[MarkovState(2, 5)] == pytest.approx(0.25 * 10 / 120, abs=1e-15)
    assert out[MarkovState(3, 5)] == pytest.approx(0.75 * 10 / 120, abs=1e-15)
    assert out[MarkovState(3, 6)] == pytest.approx(50 / 120, abs=1e-15)
    assert out[MarkovState(3, 7)] == pytest.approx(50 / 120, abs=1e-15)
    assert out[MarkovState(3, 8)] == pytest.approx(10 / 120, abs=1e-15)
    assert sum(out.values()) == pytest.approx(1.0, abs=1e-12)


def test_full_coverage_has_no_column_moves(constant_theta):
    out = dict(transition_probabilities(MarkovState(7, 10), 10, 3, constant_theta(3, value=0.4)))
    assert set(out) == {MarkovState(7, 10), MarkovState(8, 10)}
    assert out[MarkovState(7, 10)] + out[MarkovState(8, 10)] == pytest.approx(1.0, abs=1e-15)


def test_column_dynamics_do_not_depend_on_theta(constant_theta):
    state = MarkovState(4, 9)
    low = transition_probabilities(state, 20, 4, constant_theta(4, value=0.1))
    high = transition_probabilities(state, 20, 4, constant_theta(4, value=0.9))

    def by_c(rows):
        totals = {}
        for target, p in rows:
            totals[target.c] = totals.get(target.c, 0.0) + p
        return totals

    a, b = by_c(low), by_c(high)
    assert a.keys() == b.keys()
    for c in a:
        assert a[c] == pytest.approx(b[c], abs=1e-15)


@settings(max_examples=25, deadline=None)
@given(data=st.data(), k=st.integers(min_value=6, max_value=40), q=st.sampled_from([1, 2, 3, 4, 8]))
def test_chain_rows_are_stochastic(data, k, q):
    w = data.draw(st.integers(min_value=3, max_value=k // 2))
    chain = MarkovChain.build(k, w, q)
    assert np.max(np.abs(chain.row_sums() - 1.0)) < 1e-12
    for state, row in chain.transition_rows():
        assert len(row) <= w + 2
        assert all(p > 0 for _, p in row)
    assert chain.start == MarkovState(1, w)


def test_fitted_model_rejects_density_above_half_k():
    with pytest.raises(UnsupportedParametersError):
        MarkovChain.build(10, 6, 1)


def test_build_rejects_rows_off_by_more_than_1e_12(constant_theta):
    # theta slightly above 1 leaves the stay mass unbalanced by about 1e-10
    with pytest.raises(ModelConstructionError):
        MarkovChain.build(16, 3, 1, constant_theta(3, value=1.0 + 1e-10))


@pytest.mark.parametrize('k, w', [(1, 1), (0, 1)])
def test_generation_needs_two_packets(constant_theta, k, w):
    with pytest.raises(ParameterError):
        build_state_space(k, w, fit_range=False)
    with pytest.raises(ParameterError):
        MarkovChain.build(k, w, 1, constant_theta(w))


@pytest.fixture(scope='module')
def chain_k16():
    return MarkovChain.build(16, 3, 1)


@pytest.mark.parametrize('alpha', [0.1, 0.2, 0.3])
def test_erasure_scales_expected_transmissions(chain_k16, alpha):
    erased = apply_erasure(chain_k16, alpha)
    assert np.max(np.abs(erased.row_sums() - 1.0)) < 1e-12
    assert expected_transmissions(erased) * (1 - alpha) == pytest.approx(
        expected_transmissions(chain_k16), rel=1e-9)


def test_erasure_shapes_self_loops(chain_k16):
    erased = apply_erasure(chain_k16, 0.25)
    assert erased.stay_probabilities() == pytest.approx(chain_k16.stay_probabilities() * 0.75 + 0.25)
    assert erased.R == pytest.approx(chain_k16.R * 0.75)
    assert erased.alpha == 0.25
    assert apply_erasure(chain_k16, 0.0) is chain_k16
    with pytest.raises(ParameterError):
        apply_erasure(chain_k16, 1.0)


def test_erasures_compose(chain_k16):
    twice = apply_erasure(apply_erasure(chain_k16, 0.5), 0.5)
    assert twice.alpha == pytest.approx(0.75)
    assert expected_transmissions(twice) == pytest.approx(4 * expected_transmissions(chain_k16), rel=1e-9)


def test_expected_transmissions_exceeds_k(chain_k16):
    assert expected_transmissions(chain_k16) > 16


def test_decoding_curve_properties(chain_k16):
    xi = decoding_curve(chain_k16)
    assert xi[15] == 0.0
    assert decoding_probability(chain_k16, 15) == 0.0
    assert np.all(np.diff(xi) >= -1e-15)
    assert 1.0 - xi[-1] < 1e-12
    assert mean_of_curve(xi) == pytest.approx(expected_transmissions(chain_k16), abs=1e-6)
    assert absorption_pmf(chain_k16).sum() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ParameterError):
        decoding_probability(chain_k16, -1)


def test_decoding_curve_with_erasures_keeps_mean():
    chain = MarkovChain.build(12, 3, 2, alpha=0.3)
    xi = decoding_curve(chain)
    assert mean_of_curve(xi) == pytest.approx(expected_transmissions(chain), abs=1e-6)


@pytest.mark.parametrize('k, w, q, alpha', [(16, 3, 1, 0.0), (20, 5, 2, 0.0), (16, 4, 8, 0.2)])
def test_one_state_visited_per_rank(k, w, q, alpha):
    chain = MarkovChain.build(k, w, q, alpha=alpha)
    h = visit_probabilities(chain)
    assert h[0] == 1.0
    assert np.all((h >= 0.0) & (h <= 1.0))
    ranks = np.array([s.r for s in chain.states])
    for r in range(1, k):
        assert h[ranks == r].sum() == pytest.approx(1.0, abs=1e-9)


def test_rank_increase_probability(chain_k16):
    delta = rank_increase_probability(chain_k16)
    assert len(delta) == 15
    assert delta[0] == pytest.approx(1.0 - chain_k16.stay_probabilities()[0], abs=1e-15)
    assert np.all((delta > 0.0) & (delta <= 1.0))
    # Spending 1/delta per rank on average, plus the first packet
    cost = rank_step_cost(chain_k16)
    assert cost.sum() + 1 == pytest.approx(expected_transmissions(chain_k16), rel=1e-9)


def test_lower_bound():
    assert lower_bound_innovative(64, 64, 0.5) == 0.0
    assert lower_bound_innovative(10, 64, 1.0) == 1.0
    assert lower_bound_innovative(0, 64, 3 / 64) == pytest.approx(0.9538, abs=1e-3)
    with pytest.raises(ParameterError):
        lower_bound_innovative(65, 64, 0.5)
    with pytest.raises(ParameterError):
        lower_bound_innovative(0, 64, 0.0)
    curve = lower_bound_curve(16, 3)
    assert [r for r, _ in curve] == list(range(1, 16))


def test_summary_matches_chain(chain_k16):
    summary = summarize_chain(chain_k16, epsilon_max=10)
    assert summary.expected_transmissions == expected_transmissions(chain_k16)
    assert [n for _, n, _ in summary.xi_curve] == list(range(16, 27))
    assert len(summary.delta_curve) == 15
    assert summary.chain_states == chain_k16.n_transient
    assert summary.to_dict()['horizon'] == 26


def test_continuous_w3_variant_is_named():
    chain = MarkovChain.build(40, 3, 1, FittedThetaSource(3, 1, continuous_w3=True))
    assert chain.theta_source == 'fitted-continuous'


@pytest.mark.published
@pytest.mark.parametrize('k, w, published', [
    (32, 7, 33.62), (32, 15, 33.58), (64, 7, 65.92), (64, 15, 65.62), (64, 31, 65.62),
    (128, 7, 131.22), (128, 15, 129.85), (128, 31, 129.85),
])
def test_published_mean_transmissions(k, w, published):
    assert expected_transmissions(MarkovChain.build(k, w, 1)) == pytest.approx(published, rel=0.01)


@pytest.mark.published
@pytest.mark.parametrize('k, published', [(32, 43.83), (64, 100.34), (128, 230.36)])
def test_continuous_w3_exponent_matches_published_means(k, published):
    chain = MarkovChain.build(k, 3, 1, FittedThetaSource(3, 1, continuous_w3=True))
    assert expected_transmissions(chain) == pytest.approx(published, rel=0.01)


@pytest.mark.published
def test_printed_w3_exponent_misses_at_k32():
    printed = expected_transmissions(MarkovChain.build(32, 3, 1))
    assert abs(printed - 43.83) / 43.83 > 0.01
