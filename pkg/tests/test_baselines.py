"""Tests for the reference recoverers and the dense grid oracle."""

import math

import numpy as np
import pytest

from cstones.baselines import (
    BompConfig,
    RedundantDftFrame,
    bomp_recover,
    grid_oracle,
    grid_oracle_batch,
    oracle_ls,
)
from cstones.estimator import amplitude_ls, build_atoms, estimate_sinusoid
from cstones.model import SignalModel, SinusoidParams, draw_model, sinusoid_samples, synthesize
from cstones.recovery import RecoveryConfig, recover
from cstones.sensing import SUBSAMPLING, SensingMatrix, gaussian_matrix, measure


def identity_phi(n):
    return SensingMatrix(entries=np.eye(n), kind=SUBSAMPLING, seed=0)


class TestRedundantDftFrame:
    def test_atom_count_and_spacing(self):
        frame = RedundantDftFrame(oversampling=5, n=128)
        assert frame.atom_count == 640
        assert frame.delta == pytest.approx(2.0 * math.pi / 640)

    def test_atoms_unit_norm(self):
        frame = RedundantDftFrame(oversampling=3, n=32)
        norms = np.linalg.norm(frame.atoms, axis=1)
        np.testing.assert_allclose(norms, np.ones(96), rtol=1e-12)

    def test_real_candidates_cover_half_circle(self):
        frame = RedundantDftFrame(oversampling=5, n=128)
        cand = frame.real_candidate_frequencies()
        assert cand[0] == 0.0
        assert cand[-1] == pytest.approx(math.pi)
        assert cand.size == 321  # cN/2 + 1


class TestGridOracle:
    def test_on_grid_tone_identity_matrix(self):
        phi = identity_phi(64)
        grid_size = 1001
        omegas = np.linspace(0.0, math.pi, grid_size)
        target = float(omegas[400])
        sin_w, _ = sinusoid_samples(target, 64)
        omega, s = grid_oracle(phi, sin_w, grid_size)
        assert omega == target
        assert s < 1e-18

    def test_exhaustive_full_scan(self):
        # invariant: no grid index attains a smaller error than the returned one
        phi = gaussian_matrix(16, 32, seed=1)
        r = np.random.default_rng(2).normal(size=16)
        grid_size = 257
        omega, s = grid_oracle(phi, r, grid_size)
        scan = []
        for w in np.linspace(0.0, math.pi, grid_size):
            _, _, s_w = amplitude_ls(build_atoms(phi, float(w)), r)
            scan.append(s_w)
        assert s <= min(scan) + 1e-12 * float(r @ r)

    def test_million_point_resolution(self):
        phi = gaussian_matrix(64, 128, seed=3)
        model = SignalModel((SinusoidParams(1.23456789, 1.0, 0.2),), 128)
        r = measure(phi, synthesize(model)).values
        omega, _ = grid_oracle(phi, r, 1_000_000)
        assert abs(omega - 1.23456789) <= math.pi / 1_000_000

    def test_zero_residual_rejected(self):
        with pytest.raises(ValueError):
            grid_oracle(gaussian_matrix(4, 8, seed=0), np.zeros(4), 100)

    def test_batch_matches_single(self):
        phi = gaussian_matrix(24, 48, seed=4)
        rng = np.random.default_rng(5)
        residuals = rng.normal(size=(24, 3))
        omegas, s_vals = grid_oracle_batch(phi, residuals, 2001)
        for col in range(3):
            w, s = grid_oracle(phi, residuals[:, col], 2001)
            assert omegas[col] == w
            assert s_vals[col] == s

    def test_estimator_never_beaten_by_dense_grid(self):
        # anti-drift check on well-separated single-tone residuals
        for seed in range(5):
            phi = gaussian_matrix(32, 64, seed=seed)
            model = draw_model(1, 64, 0.1, "sinu", seed=seed + 10)
            r = measure(phi, synthesize(model)).values
            out = estimate_sinusoid(phi, r)
            _, s_grid = grid_oracle(phi, r, 10 * 64)
            assert out.residual_sq <= s_grid + 1e-12


class TestOracleLs:
    def test_noiseless_exact_recovery(self):
        truth = draw_model(3, 128, math.pi / 128, "sinu", seed=6)
        x = synthesize(truth)
        phi = gaussian_matrix(64, 128, seed=7)
        m = measure(phi, x)
        fitted = oracle_ls(phi, m, truth.frequencies)
        err = np.linalg.norm(x - synthesize(fitted)) / np.linalg.norm(x)
        assert err < 1e-8

    def test_k1_identity_reduces_to_amplitude_ls(self):
        phi = identity_phi(64)
        model = SignalModel((SinusoidParams(0.8, 1.4, 1.1),), 64)
        m = measure(phi, synthesize(model))
        fitted = oracle_ls(phi, m, [0.8])
        a1, a2, _ = amplitude_ls(build_atoms(phi, 0.8), m.values)
        comp = fitted.components[0]
        assert comp.amplitude == pytest.approx(math.hypot(a1, a2), rel=1e-9)
        assert comp.phase == pytest.approx(math.atan2(a2, a1), abs=1e-9)

    def test_residual_orthogonal_to_atoms(self):
        truth = draw_model(3, 128, math.pi / 128, "freq", seed=8)
        x = synthesize(truth)
        phi = gaussian_matrix(64, 128, seed=9)
        m = measure(phi, x)
        fitted = oracle_ls(phi, m, truth.frequencies)
        resid = m.values - phi.entries @ synthesize(fitted)
        for w in truth.frequencies:
            atoms = build_atoms(phi, w)
            proj = atoms.a_omega.T @ resid
            assert np.linalg.norm(proj) / np.linalg.norm(m.values) < 1e-9

    def test_duplicate_frequencies_rejected(self):
        phi = gaussian_matrix(16, 32, seed=10)
        m = measure(phi, np.ones(32))
        with pytest.raises(ValueError):
            oracle_ls(phi, m, [0.5, 0.5])

    def test_too_many_components_rejected(self):
        phi = gaussian_matrix(4, 32, seed=11)
        m = measure(phi, np.ones(32))
        with pytest.raises(ValueError):
            oracle_ls(phi, m, [0.5, 1.0, 1.5])

    def test_dominates_greedy_recovery_under_noise(self):
        # genie-aided fit must beat the frequency-estimating recoverer on
        # average over paired noisy trials
        from cstones.model import NoiseSpec, add_noise

        oracle_errs, mds_errs = [], []
        for trial in range(30):
            truth = draw_model(3, 128, math.pi / 128, "freq", seed=300 + trial)
            s = synthesize(truth)
            x = add_noise(s, NoiseSpec(snr_db=20.0, seed=trial))
            phi = gaussian_matrix(64, 128, seed=400 + trial)
            m = measure(phi, x)
            fitted = oracle_ls(phi, m, truth.frequencies)
            oracle_errs.append(np.linalg.norm(x - synthesize(fitted)) / np.linalg.norm(x))
            rec = recover(phi, m, RecoveryConfig(k=3))
            mds_errs.append(np.linalg.norm(x - rec.signal) / np.linalg.norm(x))
        assert np.mean(oracle_errs) <= np.mean(mds_errs)


class TestBompRecover:
    def test_on_grid_tones_recovered_exactly(self):
        n = 128
        frame = RedundantDftFrame(oversampling=5, n=n)
        idx = (40, 120, 200)  # distinct frame grid points, well separated
        comps = tuple(
            SinusoidParams(float(frame.frequencies[i]), 1.0, 0.0) for i in idx
        )
        truth = SignalModel(comps, n)
        x = synthesize(truth)
        phi = gaussian_matrix(64, n, seed=12)
        m = measure(phi, x)
        fitted = bomp_recover(phi, m, BompConfig(k=3))
        err = np.linalg.norm(x - synthesize(fitted)) / np.linalg.norm(x)
        assert err < 1e-6

    def test_band_exclusion_enforced(self):
        truth = draw_model(3, 128, math.pi / 128, "freq", seed=13)
        phi = gaussian_matrix(64, 128, seed=14)
        m = measure(phi, synthesize(truth))
        cfg = BompConfig(k=3)
        fitted = bomp_recover(phi, m, cfg)
        freqs = np.sort(fitted.frequencies)
        assert np.all(np.diff(freqs) >= math.pi / 128 - 1e-12)

    def test_off_grid_worse_than_greedy_recovery(self):
        bomp_errs, mds_errs = [], []
        for trial in range(20):
            truth = draw_model(3, 128, math.pi / 128, "freq", seed=500 + trial)
            x = synthesize(truth)
            phi = gaussian_matrix(64, 128, seed=600 + trial)
            m = measure(phi, x)
            fitted = bomp_recover(phi, m, BompConfig(k=3))
            bomp_errs.append(np.linalg.norm(x - synthesize(fitted)) / np.linalg.norm(x))
            rec = recover(phi, m, RecoveryConfig(k=3))
            mds_errs.append(np.linalg.norm(x - rec.signal) / np.linalg.norm(x))
        assert np.mean(mds_errs) < np.mean(bomp_errs)
        # grid quantization floors the pursuit's error
        assert np.mean(bomp_errs) > 1e-4

    def test_zero_sparsity_empty_model(self):
        phi = gaussian_matrix(16, 32, seed=15)
        m = measure(phi, np.ones(32))
        fitted = bomp_recover(phi, m, BompConfig(k=0))
        assert fitted.k == 0
        np.testing.assert_array_equal(synthesize(fitted), np.zeros(32))

    def test_partial_model_when_bands_exhaust_grid(self):
        truth = draw_model(2, 32, math.pi / 32, "freq", seed=16)
        phi = gaussian_matrix(16, 32, seed=17)
        m = measure(phi, synthesize(truth))
        cfg = BompConfig(k=4, band_radius=2.0)  # two bands cover [0, pi]
        with pytest.warns(UserWarning, match="partial"):
            fitted = bomp_recover(phi, m, cfg)
        assert fitted.k < 4

    def test_config_validation(self):
        with pytest.raises(ValueError):
            BompConfig(k=-1)
        with pytest.raises(ValueError):
            BompConfig(k=1, band_radius=0.0)
