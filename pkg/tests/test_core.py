import threading

import numpy as np
import pytest
from scipy import stats

from src.models.labeling import BudgetLedger, ProbabilityVector, VoteTally
from src.utils.exceptions import BudgetExhaustedError, NoiseModelError
from src.utils.noise_model import make_uniform_noise_vector, max_uniform_noise
from src.utils.random_streams import derive_stream


class TestUniformNoiseVector:
    def test_ten_classes(self):
        vector = make_uniform_noise_vector(10, 0.2, 3)
        assert vector.probs[3] == pytest.approx(0.8)
        for k in range(10):
            if k != 3:
                assert vector.probs[k] == pytest.approx(0.2 / 9)
        assert sum(vector.probs) == pytest.approx(1.0, abs=1e-12)

    def test_zero_noise(self):
        vector = make_uniform_noise_vector(10, 0.0, 0)
        assert vector.probs == (1.0,) + (0.0,) * 9

    def test_binary_complement(self):
        vector = make_uniform_noise_vector(2, 0.4, 1)
        assert vector.probs == pytest.approx((0.4, 0.6))
        assert vector.q == pytest.approx(0.6)
        assert vector.w == pytest.approx(0.4)

    @pytest.mark.parametrize("l, w", [(10, 0.9), (10, 0.95), (2, 0.5), (10, -0.1)])
    def test_rejects_noise_outside_range(self, l, w):
        with pytest.raises(NoiseModelError):
            make_uniform_noise_vector(l, w, 0)

    def test_rejects_single_class(self):
        with pytest.raises(NoiseModelError):
            make_uniform_noise_vector(1, 0.0, 0)

    def test_rejects_bad_index(self):
        with pytest.raises(NoiseModelError):
            make_uniform_noise_vector(4, 0.1, 4)

    @pytest.mark.parametrize("l", [2, 3, 10, 50])
    def test_argmax_is_correct_index(self, l):
        w = max_uniform_noise(l) * 0.999
        for j in range(l):
            vector = make_uniform_noise_vector(l, w, j)
            assert int(np.argmax(vector.probs)) == j


class TestProbabilityVector:
    def test_rejects_tied_maximum(self):
        with pytest.raises(NoiseModelError):
            ProbabilityVector(probs=(0.4, 0.4, 0.2), correct_index=0)

    def test_rejects_wrong_sum(self):
        with pytest.raises(NoiseModelError):
            ProbabilityVector(probs=(0.5, 0.4), correct_index=0)

    def test_rejects_negative_entry(self):
        with pytest.raises(NoiseModelError):
            ProbabilityVector(probs=(1.1, -0.1), correct_index=0)

    def test_cumulative_ends_at_one(self):
        vector = ProbabilityVector(probs=(0.1, 0.7, 0.2), correct_index=1)
        assert vector.cumulative() == pytest.approx([0.1, 0.8, 1.0])


class TestVoteTally:
    def test_moments_follow_adds(self):
        tally = VoteTally.empty(4)
        tally.add(2)
        tally.add(2, times=3)
        tally.add(0)
        assert tally.counts == [1, 0, 4, 0]
        assert tally.total == 5
        assert tally.sum_squares == 17

    def test_from_labels(self):
        tally = VoteTally.from_labels(3, [0, 2, 2, 1, 2])
        assert tally.counts == [1, 1, 3]
        assert tally.max_labels() == [2]
        assert not tally.peaked

    def test_peaked_when_no_unique_mode(self):
        tally = VoteTally([0, 0, 5, 0, 0, 0, 0, 0, 5, 0])
        assert tally.max_labels() == [2, 8]
        assert tally.peaked

    def test_rejects_negative_counts(self):
        with pytest.raises(NoiseModelError):
            VoteTally([1, -1])


class TestBudgetLedger:
    def test_consume_and_remaining(self):
        ledger = BudgetLedger(10)
        ledger.consume(3)
        ledger.consume()
        assert ledger.consumed == 4
        assert ledger.remaining == 6
        assert ledger.fraction_consumed == pytest.approx(0.4)

    def test_overspend_is_an_error(self):
        ledger = BudgetLedger(5, consumed=4)
        with pytest.raises(BudgetExhaustedError) as info:
            ledger.consume(2)
        assert info.value.remaining == 1
        assert ledger.consumed == 4

    def test_invalid_state(self):
        with pytest.raises(ValueError):
            BudgetLedger(5, consumed=6)

    def test_snapshot_is_independent(self):
        ledger = BudgetLedger(10, consumed=2)
        copy = ledger.snapshot()
        copy.consume(5)
        assert ledger.consumed == 2
        assert copy.consumed == 7

    def test_concurrent_debits_never_exceed_budget(self):
        ledger = BudgetLedger(1000)
        accepted = []

        def worker():
            taken = 0
            while True:
                try:
                    ledger.consume(1)
                except BudgetExhaustedError:
                    break
                taken += 1
            accepted.append(taken)

        threads = [threading.Thread(target=worker) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sum(accepted) == 1000
        assert ledger.remaining == 0


class TestRandomStreams:
    def test_same_ids_same_draws(self):
        first = derive_stream(99, 7).random_n(100)
        second = derive_stream(99, 7).random_n(100)
        assert np.array_equal(first, second)

    def test_neighbour_streams_differ(self):
        first = derive_stream(99, 7).random_n(100)
        second = derive_stream(99, 8).random_n(100)
        assert not np.array_equal(first, second)

    def test_single_draws_match_vector_draws(self):
        stream = derive_stream(5, 1)
        singles = [stream.random() for _ in range(10)]
        assert np.array_equal(singles, derive_stream(5, 1).random_n(10))

    def test_pooled_streams_are_uniform(self):
        pooled = np.concatenate([derive_stream(2024, i).random_n(50) for i in range(1001)])
        observed, _ = np.histogram(pooled, bins=20, range=(0.0, 1.0))
        assert stats.chisquare(observed).pvalue > 0.001
