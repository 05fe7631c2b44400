import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from src.codec import (
    CodingVector, DecoderState, Encoder, Generation, decode_generation, decoder_ingest, encode,
    generate_coding_vector,
)
from src.exceptions import EncodingError, NotDecodableError, ParameterError
from src.field import SUPPORTED_Q
from src.field.factory import FieldFactory


@settings(max_examples=100, deadline=None)
@given(
    k=st.integers(min_value=1, max_value=64),
    data=st.data(),
    q=st.sampled_from(SUPPORTED_Q),
    seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
)
def test_coding_vector_has_exactly_w_nonzero_symbols(k, data, q, seed):
    w = data.draw(st.integers(min_value=1, max_value=k))
    f = FieldFactory.create_field(q)
    vector = generate_coding_vector(k, w, f, np.random.default_rng(seed))
    assert vector.k == k
    assert vector.w == w
    assert np.count_nonzero(vector.coefficients) == w
    assert int(vector.coefficients.max()) < f.order


def test_density_out_of_range_rejected(rng):
    f = FieldFactory.create_field(1)
    with pytest.raises(ParameterError):
        generate_coding_vector(8, 0, f, rng)
    with pytest.raises(ParameterError):
        generate_coding_vector(8, 9, f, rng)


def test_column_window_restricts_support(rng):
    f = FieldFactory.create_field(2)
    vector = generate_coding_vector(16, 3, f, rng, columns=[4, 5, 6, 7])
    assert set(vector.support) <= {4, 5, 6, 7}


def test_supports_are_uniform():
    f = FieldFactory.create_field(1)
    rng = np.random.default_rng(7)
    counts = {}
    for _ in range(120_000):
        support = tuple(sorted(generate_coding_vector(10, 3, f, rng).support))
        counts[support] = counts.get(support, 0) + 1
    assert len(counts) == 120
    assert chisquare(list(counts.values())).pvalue > 0.001


def test_from_support_rejects_zero_coefficient():
    with pytest.raises(ParameterError):
        CodingVector.from_support(4, [0, 1], [1, 0])


def test_dependent_vector_leaves_rank_but_extends_coverage():
    f = FieldFactory.create_field(1)
    state = DecoderState(4, f)
    first = decoder_ingest(state, CodingVector.from_support(4, [0, 1]))
    second = decoder_ingest(state, CodingVector.from_support(4, [1, 2]))
    third = decoder_ingest(state, CodingVector.from_support(4, [0, 2]))
    assert first.innovative and second.innovative
    assert not third.innovative
    # 1010 = 1100 + 0110; three distinct columns seen in total
    assert third.rank_after == 2
    assert third.covered_after == 3


def test_is_innovative_does_not_change_state():
    f = FieldFactory.create_field(2)
    state = DecoderState(4, f)
    state.ingest(CodingVector.from_support(4, [0, 1], [1, 2]))
    candidate = CodingVector.from_support(4, [0, 1], [2, 3])  # 2 * (1, 2) over GF(4)
    assert not state.is_innovative(candidate)
    assert state.is_innovative(CodingVector.from_support(4, [2, 3], [1, 1]))
    assert state.rank == 1 and state.received == 1


@settings(max_examples=50, deadline=None)
@given(
    q=st.sampled_from(SUPPORTED_Q),
    k=st.integers(min_value=2, max_value=24),
    seed=st.integers(min_value=0, max_value=10 ** 6),
    steps=st.integers(min_value=1, max_value=60),
)
def test_decoder_invariants(q, k, seed, steps):
    f = FieldFactory.create_field(q)
    rng = np.random.default_rng(seed)
    state = DecoderState(k, f)
    previous_rank = 0
    for _ in range(steps):
        w = int(rng.integers(1, k + 1))
        outcome = state.ingest(generate_coding_vector(k, w, f, rng))
        assert state.rank <= state.c <= k
        assert outcome.rank_after - previous_rank == int(outcome.innovative)
        previous_rank = outcome.rank_after
    for row in state.rows:
        assert row[np.flatnonzero(row)[0]] == 1


@pytest.mark.parametrize('q', [1, 2, 4, 8])
def test_decode_recovers_generation(q):
    f = FieldFactory.create_field(q)
    rng = np.random.default_rng(7)
    generation = Generation.random(8, 16, f, rng)
    encoder = Encoder(generation, f, rng)
    state = DecoderState(8, f)
    while not state.is_complete:
        vector, payload = encoder.next_packet(3)
        state.ingest(vector, payload)
    recovered = decode_generation(state)
    for original, decoded in zip(generation.packets, recovered):
        assert np.array_equal(original, decoded)
    assert encoder.sent == state.received


def test_encode_is_linear_combination_of_supported_packets():
    f = FieldFactory.create_field(2)
    generation = Generation([np.array([1, 2]), np.array([3, 0]), np.array([2, 2])])
    vector = CodingVector.from_support(3, [0, 2], [1, 2])
    expected = [f.add(1, f.mul(2, 2)), f.add(2, f.mul(2, 2))]
    assert encode(generation, vector, f).tolist() == expected


def test_decode_before_full_rank_fails(rng):
    f = FieldFactory.create_field(1)
    state = DecoderState(4, f)
    state.ingest(CodingVector.from_support(4, [0]), np.array([1], dtype=np.uint8))
    with pytest.raises(NotDecodableError):
        state.decode()


def test_coefficient_only_decoder_cannot_decode():
    f = FieldFactory.create_field(1)
    state = DecoderState(2, f)
    state.ingest(CodingVector.from_support(2, [0]))
    state.ingest(CodingVector.from_support(2, [1]))
    assert state.is_complete
    with pytest.raises(NotDecodableError):
        state.decode()


def test_encoding_errors():
    f = FieldFactory.create_field(2)
    with pytest.raises(EncodingError):
        Generation([np.zeros(3), np.zeros(4)])
    generation = Generation([np.array([7, 0]), np.array([1, 1])])
    with pytest.raises(EncodingError):
        encode(generation, CodingVector.from_support(2, [0]), f)
    with pytest.raises(EncodingError):
        encode(generation, CodingVector.from_support(3, [0]), f)


def test_copy_is_independent():
    f = FieldFactory.create_field(4)
    state = DecoderState(4, f)
    state.ingest(CodingVector.from_support(4, [0, 1], [3, 5]))
    clone = state.copy()
    clone.ingest(CodingVector.from_support(4, [2, 3], [1, 1]))
    assert state.rank == 1 and clone.rank == 2
    assert state.c == 2 and clone.c == 4
