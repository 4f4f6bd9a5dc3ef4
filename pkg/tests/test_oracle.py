import math

import numpy as np
import pytest
from scipy import stats

from src.models.labeling import Example, ProbabilityVector
from src.services.oracle_service import Oracle, UniformNoiseOracle, VectorOracle
from src.utils.exceptions import NoiseModelError
from src.utils.random_streams import derive_stream


def test_oracles_satisfy_protocol(uniform_oracle):
    vector = ProbabilityVector(probs=(0.2, 0.5, 0.3), correct_index=1)
    assert isinstance(uniform_oracle, Oracle)
    assert isinstance(VectorOracle(vector), Oracle)


def test_probability_vector_follows_true_label(uniform_oracle, example):
    vector = uniform_oracle.probability_vector(example)
    assert vector.correct_index == 3
    assert vector.q == pytest.approx(0.8)


def test_query_n_equals_consecutive_queries(uniform_oracle, example):
    first = derive_stream(8, 3)
    labels = [uniform_oracle.query(example, first) for _ in range(200)]

    tally = uniform_oracle.query_n(example, 200, derive_stream(8, 3))
    assert tally.counts == [labels.count(k) for k in range(10)]


def test_query_n_is_stream_linear(uniform_oracle, example):
    whole = uniform_oracle.query_n(example, 30, derive_stream(4, 4))

    split_stream = derive_stream(4, 4)
    head = uniform_oracle.query_n(example, 12, split_stream)
    tail = uniform_oracle.query_n(example, 18, split_stream)
    assert whole.counts == [a + b for a, b in zip(head.counts, tail.counts)]


def test_zero_noise_always_answers_true_label(example):
    oracle = UniformNoiseOracle(10, 0.0)
    stream = derive_stream(1, 0)
    assert {oracle.query(example, stream) for _ in range(500)} == {3}


@pytest.mark.parametrize("w", [0.2, 0.6])
def test_answer_frequencies_match_vector(w):
    oracle = UniformNoiseOracle(10, w)
    example = Example(id=5, true_label=7)
    n = 50_000
    tally = oracle.query_n(example, n, derive_stream(21, 5))
    for label, count in enumerate(tally.counts):
        p = 1.0 - w if label == 7 else w / 9
        sigma = math.sqrt(p * (1.0 - p) / n)
        assert abs(count / n - p) <= 4 * sigma


def test_vector_oracle_non_uniform_noise():
    vector = ProbabilityVector(probs=(0.1, 0.6, 0.3), correct_index=1)
    oracle = VectorOracle(vector)
    n = 40_000
    tally = oracle.query_n(Example(id=0, true_label=1), n, derive_stream(9, 9))
    for count, p in zip(tally.counts, vector.probs):
        assert abs(count / n - p) <= 4 * math.sqrt(p * (1.0 - p) / n)


def test_label_out_of_range(uniform_oracle, stream):
    with pytest.raises(NoiseModelError):
        uniform_oracle.query(Example(id=1, true_label=10), stream)


def test_query_n_requires_positive_count(uniform_oracle, example, stream):
    with pytest.raises(ValueError):
        uniform_oracle.query_n(example, 0, stream)


def test_successive_queries_are_independent():
    oracle = UniformNoiseOracle(4, 0.6)
    example = Example(id=0, true_label=0)
    stream = derive_stream(21, 0)
    answers = [oracle.query(example, stream) for _ in range(20_000)]

    table = np.zeros((4, 4), dtype=np.int64)
    for previous, current in zip(answers, answers[1:]):
        table[previous, current] += 1
    assert stats.chi2_contingency(table).pvalue > 0.001
