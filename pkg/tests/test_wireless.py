import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import crbgate as cg
from crbgate.wireless import frame_from_json, frame_to_json, read_measurements

from conftest import random_layout


def fd_jacobian(anchors, target, step=1e-5):
    """Central finite-difference oracle for the (x, y) RSS gradient."""
    cols = np.zeros((2, len(anchors)))
    for axis in range(2):
        hi = target.xy.copy()
        lo = target.xy.copy()
        hi[axis] += step
        lo[axis] -= step
        up = cg.predict_all(anchors, cg.TargetState(hi, target.z_fixed))
        dn = cg.predict_all(anchors, cg.TargetState(lo, target.z_fixed))
        cols[axis] = (up - dn) / (2.0 * step)
    return cols


class TestPredict:
    def test_reference_distances(self):
        # d = 1, 10, 100 m: one decade of distance per 10 B dBm.
        for d, expected in [(1.0, -45.0), (10.0, -65.0), (100.0, -85.0)]:
            a = cg.Anchor("a", (0.0, 0.0, 0.0), -45.0, -2.0)
            t = cg.TargetState((d, 0.0))
            assert cg.predict_rss(a, t) == pytest.approx(expected, abs=1e-12)

    def test_degenerate_distance(self):
        a = cg.Anchor("a", (0.0, 0.0, 0.0), -45.0, -2.0)
        with pytest.raises(cg.DegenerateDistance) as err:
            cg.predict_rss(a, cg.TargetState((0.005, 0.0)))
        assert err.value.anchor_id == "a"

    def test_elevated_anchor_uses_3d_distance(self):
        a = cg.Anchor("a", (0.0, 0.0, 3.0), -45.0, -2.0)
        t = cg.TargetState((4.0, 0.0))  # 3-4-5 triangle
        assert cg.predict_rss(a, t) == pytest.approx(-45.0 - 20.0 * math.log10(5.0))

    def test_predict_all_matches_scalar(self, rng):
        anchors = random_layout(rng, 8)
        t = cg.TargetState(rng.uniform(2, 8, size=2))
        vec = cg.predict_all(anchors, t)
        for i, a in enumerate(anchors):
            assert vec[i] == pytest.approx(cg.predict_rss(a, t), abs=1e-12)

    def test_symmetric_layout_equal_readings(self, square_anchors):
        center = cg.TargetState((5.0, 5.0))
        vec = cg.predict_all(square_anchors, center)
        assert np.ptp(vec) < 1e-12

    def test_monotone_in_distance_for_negative_b(self, rng):
        a = cg.Anchor("a", (0.0, 0.0, 0.0), -40.0, -2.5)
        ds = np.sort(rng.uniform(0.1, 50.0, size=40))
        rss = [cg.predict_rss(a, cg.TargetState((d, 0.0))) for d in ds]
        assert all(r1 > r2 for r1, r2 in zip(rss, rss[1:]))


class TestJacobian:
    def test_matches_finite_differences(self, rng):
        for _ in range(25):
            anchors = random_layout(rng, rng.integers(3, 12))
            target = cg.TargetState(rng.uniform(0, 10, size=2))
            dists = [
                np.linalg.norm(target.xyz - a.position) for a in anchors
            ]
            if min(dists) < 0.1:
                continue
            jac = cg.jacobian(anchors, target)
            ref = fd_jacobian(anchors, target)
            rel = np.abs(jac - ref).max() / np.abs(jac).max()
            assert rel < 1e-6

    def test_anchor_overhead_gives_zero_column(self):
        anchors = (
            cg.Anchor("up", (2.0, 3.0, 5.0), -45.0, -2.0),
            cg.Anchor("side", (0.0, 0.0, 0.0), -45.0, -2.0),
        )
        jac = cg.jacobian(anchors, cg.TargetState((2.0, 3.0)))
        assert np.abs(jac[:, 0]).max() == 0.0
        assert np.abs(jac[:, 1]).max() > 0.0

    def test_square_symmetry_columns_pairwise_opposite(self, square_anchors):
        jac = cg.jacobian(square_anchors, cg.TargetState((5.0, 5.0)))
        # Diagonally opposite corners pull in exactly opposite directions.
        assert np.allclose(jac[:, 0], -jac[:, 2], atol=1e-12)
        assert np.allclose(jac[:, 1], -jac[:, 3], atol=1e-12)


class TestNoiseInformation:
    def test_gaussian_closed_form(self):
        # bit-exact closed form, no Monte Carlo involved
        for sigma in (0.5, 2.0, 3.0, 7.0, 11.0):
            assert cg.noise_information(cg.GaussianNoise(sigma)) == 1.0 / (
                sigma * sigma
            )

    def test_empirical_wrapping_gaussian(self):
        sigma = 3.0
        noise = cg.EmpiricalNoise(
            log_density=lambda v: -0.5 * (v / sigma) ** 2
            - math.log(sigma * math.sqrt(2 * math.pi)),
            sampler=lambda rng, n: rng.normal(0.0, sigma, n),
        )
        est = cg.noise_information(noise, mc_samples=1_000_000, seed=3)
        assert est == pytest.approx(1.0 / 9.0, rel=0.02)

    def test_empirical_laplace(self):
        b = 2.0
        noise = cg.EmpiricalNoise(
            log_density=lambda v: -np.abs(v) / b - math.log(2 * b),
            sampler=lambda rng, n: rng.laplace(0.0, b, n),
        )
        est = cg.noise_information(noise, mc_samples=200_000, seed=5)
        assert est == pytest.approx(1.0 / b**2, rel=0.02)

    def test_analytic_score_supported(self):
        sigma = 2.0
        noise = cg.EmpiricalNoise(
            log_density=lambda v: -0.5 * (v / sigma) ** 2,
            sampler=lambda rng, n: rng.normal(0.0, sigma, n),
            score=lambda v: -v / sigma**2,
        )
        est = cg.noise_information(noise, mc_samples=400_000, seed=1)
        assert est == pytest.approx(0.25, rel=0.02)

    def test_non_finite_density_rejected(self):
        noise = cg.EmpiricalNoise(
            log_density=lambda v: np.where(np.abs(v) > 1, -np.inf, 0.0),
            sampler=lambda rng, n: rng.normal(0.0, 5.0, n),
        )
        with pytest.raises(cg.NonFiniteDensity):
            cg.noise_information(noise, mc_samples=1000, seed=0)


class TestSampling:
    def test_zero_noise_limit(self, square_anchors):
        t = cg.TargetState((3.0, 4.0))
        tiny = cg.GaussianNoise(1e-300)
        frame = cg.sample_measurements(square_anchors, t, tiny, seed=0)
        assert np.allclose(frame.rss, cg.predict_all(square_anchors, t), atol=1e-12)

    def test_same_seed_same_frame(self, square_anchors):
        t = cg.TargetState((3.0, 4.0))
        noise = cg.GaussianNoise(3.0)
        f1 = cg.sample_measurements(square_anchors, t, noise, 1.5, seed=42)
        f2 = cg.sample_measurements(square_anchors, t, noise, 1.5, seed=42)
        assert f1 == f2

    def test_mean_converges_to_prediction(self, square_anchors):
        # law of large numbers: mean of many frames approaches h(p)
        t = cg.TargetState((2.5, 7.0))
        sigma = 3.0
        noise = cg.GaussianNoise(sigma)
        m = 20_000
        acc = np.zeros(len(square_anchors))
        for seed in range(m):
            acc += cg.sample_measurements(square_anchors, t, noise, seed=seed).rss
        mean = acc / m
        tol = 3.0 * sigma / math.sqrt(m)
        assert np.abs(mean - cg.predict_all(square_anchors, t)).max() < tol


class TestValidation:
    def test_zero_b_rejected(self):
        with pytest.raises(cg.ValidationError):
            cg.Anchor("a", (0.0, 0.0, 0.0), -45.0, 0.0)

    def test_non_finite_position_rejected(self):
        with pytest.raises(cg.ValidationError):
            cg.Anchor("a", (math.nan, 0.0, 0.0), -45.0, -2.0)

    def test_duplicate_frame_ids_rejected(self):
        with pytest.raises(cg.ValidationError):
            cg.MeasurementFrame(0.0, (("a", -50.0), ("a", -51.0)))

    def test_gaussian_sigma_positive(self):
        with pytest.raises(cg.ValidationError):
            cg.GaussianNoise(0.0)

    @given(st.floats(min_value=0.02, max_value=1e4))
    def test_information_times_variance_is_one(self, sigma):
        info = cg.noise_information(cg.GaussianNoise(sigma))
        assert info == 1.0 / (sigma * sigma)
        # the product identity holds to the last ulp
        assert abs(info * (sigma * sigma) - 1.0) <= 2.3e-16


class TestMeasurementJsonl:
    def test_round_trip(self):
        frame = cg.MeasurementFrame(1.25, (("a0", -50.5), ("a1", -61.0)))
        assert frame_from_json(frame_to_json(frame)) == frame

    def test_read_lines(self):
        lines = [
            '{"t": 0.0, "rss": {"a0": -50.0, "a1": -60.0}}',
            "",
            '{"t": 0.5, "rss": {"a0": -51.0}}',
        ]
        frames = read_measurements(lines)
        assert len(frames) == 2
        assert frames[1].readings == (("a0", -51.0),)

    def test_bad_json_rejected(self):
        with pytest.raises(cg.ValidationError):
            read_measurements(["{not json"])
