import numpy as np
import pytest
from scipy.spatial.distance import cdist

from nmqlle.utils import precision_at_k


def _exhaustive(Y, labels, returns):
    dist = cdist(Y, Y)
    per_query = []
    for i in range(Y.shape[0]):
        order = [j for j in np.lexsort((np.arange(Y.shape[0]), dist[i])) if j != i][:returns]
        per_query.append(np.mean(labels[order] == labels[i]))
    return np.asarray(per_query)


class TestPrecisionAtK:
    def test_single_class(self, rng):
        Y = rng.standard_normal((15, 3))
        mean, per_query = precision_at_k(Y, np.zeros(15, dtype=int), 5)
        assert mean == 1.0
        np.testing.assert_array_equal(per_query, 1.0)

    def test_separated_blobs(self, blobs):
        mean, _ = precision_at_k(blobs.features, blobs.labels, 9)
        assert mean == 1.0

    def test_matches_exhaustive_oracle(self):
        rng = np.random.default_rng(99)
        for _ in range(10):
            Y = rng.standard_normal((30, 4))
            labels = rng.integers(0, 3, 30)
            returns = int(rng.integers(1, 30))
            mean, per_query = precision_at_k(Y, labels, returns)
            expected = _exhaustive(Y, labels, returns)
            np.testing.assert_array_equal(per_query, expected)
            assert mean == float(expected.mean())

    def test_ties_use_index_order(self):
        Y = np.array([[0.0], [1.0], [-1.0], [1.0], [-1.0]])
        labels = np.array([0, 1, 0, 0, 0])
        _, per_query = precision_at_k(Y, labels, 1)
        # query 0 sees samples 1..4 at distance 1 and keeps sample 1
        assert per_query[0] == 0.0
        np.testing.assert_array_equal(per_query, _exhaustive(Y, labels, 1))

    def test_all_returns_counts_label_shares(self, rng):
        Y = rng.standard_normal((12, 2))
        labels = np.array([0] * 5 + [1] * 7)
        _, per_query = precision_at_k(Y, labels, 11)
        np.testing.assert_allclose(per_query, np.where(labels == 0, 4 / 11, 6 / 11))

    def test_invariant_to_isometry_and_scale(self, rng):
        Y = rng.standard_normal((40, 3))
        labels = rng.integers(0, 4, 40)
        Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        base, _ = precision_at_k(Y, labels, 6)
        moved, _ = precision_at_k(4.0 * Y @ Q + 2.0, labels, 6)
        assert base == moved

    def test_returns_out_of_range(self, rng):
        Y = rng.standard_normal((10, 2))
        with pytest.raises(ValueError):
            precision_at_k(Y, np.zeros(10), 10)
        with pytest.raises(ValueError):
            precision_at_k(Y, np.zeros(10), 0)
