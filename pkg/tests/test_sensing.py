"""Tests for sensing matrix construction and the measurement operation."""

import numpy as np
import pytest

from cstones.sensing import (
    GAUSSIAN,
    SUBSAMPLING,
    Measurement,
    SensingMatrix,
    gaussian_matrix,
    matrix_from_kind,
    measure,
    subsampling_matrix,
)


class TestGaussianMatrix:
    def test_deterministic_per_seed(self):
        a = gaussian_matrix(64, 128, seed=1)
        b = gaussian_matrix(64, 128, seed=1)
        np.testing.assert_array_equal(a.entries, b.entries)

    def test_entry_moments(self):
        # moment-statistics oracle over the 64*128 entries of one draw
        phi = gaussian_matrix(64, 128, seed=7)
        entries = phi.entries.ravel()
        sigma_mean = (1.0 / 8.0) / np.sqrt(entries.size)
        assert abs(entries.mean()) < 3.0 * sigma_mean
        assert abs(entries.var() - 1.0 / 64.0) < 0.1 / 64.0

    def test_scalar_case_matches_direct_draw(self):
        # variance parameter is 1/m = 1: identical to a unit normal draw
        phi = gaussian_matrix(1, 1, seed=5)
        expected = np.random.default_rng(5).normal(0.0, 1.0, size=(1, 1))
        np.testing.assert_array_equal(phi.entries, expected)

    def test_rejects_wide(self):
        with pytest.raises(ValueError):
            gaussian_matrix(10, 5, seed=0)


class TestSubsamplingMatrix:
    def test_square_is_permutation(self):
        phi = subsampling_matrix(8, 8, seed=3)
        x = np.arange(1.0, 9.0)
        y = measure(phi, x).values
        assert sorted(y) == sorted(x)
        # each row and column exactly one unit entry
        assert np.all(phi.entries.sum(axis=0) == 1)
        assert np.all(phi.entries.sum(axis=1) == 1)

    def test_picks_distinct_samples(self):
        phi = subsampling_matrix(3, 8, seed=11)
        x = np.arange(1.0, 9.0)
        y = measure(phi, x).values
        assert len(set(y)) == 3
        assert set(y) <= set(x)

    @pytest.mark.parametrize("m,n", [(1, 1), (2, 5), (5, 5), (7, 20)])
    def test_columns_have_at_most_one_nonzero(self, m, n):
        phi = subsampling_matrix(m, n, seed=m * 31 + n)
        nonzeros_per_col = np.count_nonzero(phi.entries, axis=0)
        assert np.all(nonzeros_per_col <= 1)

    def test_deterministic_per_seed(self):
        a = subsampling_matrix(5, 12, seed=4)
        b = subsampling_matrix(5, 12, seed=4)
        np.testing.assert_array_equal(a.entries, b.entries)

    def test_structure_validated_on_construction(self):
        bad = np.zeros((2, 4))
        bad[0, 0] = 1.0
        bad[1, 0] = 1.0  # duplicate selection
        with pytest.raises(ValueError):
            SensingMatrix(entries=bad, kind=SUBSAMPLING, seed=0)


class TestMeasure:
    def test_identity_returns_signal(self):
        phi = SensingMatrix(entries=np.eye(6), kind=SUBSAMPLING, seed=0)
        x = np.linspace(-1.0, 1.0, 6)
        np.testing.assert_array_equal(measure(phi, x).values, x)

    def test_hand_worked_2x2(self):
        phi = SensingMatrix(entries=np.array([[1.0, 1.0], [1.0, -1.0]]), kind=GAUSSIAN, seed=0)
        np.testing.assert_array_equal(measure(phi, np.array([3.0, 1.0])).values, [4.0, 2.0])

    def test_matches_naive_triple_loop(self):
        phi = gaussian_matrix(16, 32, seed=9)
        rng = np.random.default_rng(10)
        x = rng.normal(size=32)
        naive = np.zeros(16)
        for i in range(16):
            acc = 0.0
            for j in range(32):
                acc += phi.entries[i, j] * x[j]
            naive[i] = acc
        np.testing.assert_allclose(measure(phi, x).values, naive, rtol=1e-12)

    def test_linearity(self):
        phi = gaussian_matrix(16, 32, seed=13)
        rng = np.random.default_rng(14)
        x, y = rng.normal(size=32), rng.normal(size=32)
        a, b = 2.5, -0.75
        combined = measure(phi, a * x + b * y).values
        separate = a * measure(phi, x).values + b * measure(phi, y).values
        np.testing.assert_allclose(combined, separate, rtol=1e-12, atol=1e-12)

    def test_subsampling_preserves_values_exactly(self):
        phi = subsampling_matrix(10, 64, seed=21)
        x = np.random.default_rng(22).normal(size=64)
        y = measure(phi, x).values
        selected = phi.entries.argmax(axis=1)
        np.testing.assert_array_equal(y, x[selected])

    def test_dimension_mismatch_rejected(self):
        phi = gaussian_matrix(4, 8, seed=0)
        with pytest.raises(ValueError):
            measure(phi, np.ones(7))


class TestImmutability:
    def test_entries_are_read_only(self):
        phi = gaussian_matrix(4, 8, seed=0)
        with pytest.raises(ValueError):
            phi.entries[0, 0] = 1.0

    def test_measurement_values_read_only(self):
        meas = Measurement(values=np.ones(3), matrix_seed=0)
        with pytest.raises(ValueError):
            meas.values[0] = 2.0


class TestProvenance:
    def test_regenerable_from_tuple(self):
        phi = gaussian_matrix(12, 24, seed=42)
        again = matrix_from_kind(**phi.provenance())
        np.testing.assert_array_equal(phi.entries, again.entries)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            matrix_from_kind("fourier", 4, 8, 0)
