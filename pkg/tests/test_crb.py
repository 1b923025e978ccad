import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import crbgate as cg

from conftest import random_layout


def chi2_cdf_2dof(x):
    return 1.0 - math.exp(-x / 2.0)


def chi2_quantile_by_bisection(alpha, lo=0.0, hi=200.0, iters=200):
    """Numeric inversion oracle of the 2-dof chi-squared CDF at 1 - alpha."""
    target = 1.0 - alpha
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if chi2_cdf_2dof(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def brute_force_fim(jac, i_v):
    """Column-by-column outer-product summation oracle."""
    out = np.zeros((2, 2))
    for i in range(jac.shape[1]):
        g = jac[:, i]
        out += i_v * np.outer(g, g)
    return out


def inverse_by_eig(m):
    """Independent inverse: eigendecomposition, reciprocal spectrum."""
    lam, vec = np.linalg.eigh(m)
    return vec @ np.diag(1.0 / lam) @ vec.T


def shoelace_area(poly):
    x = poly[:, 0]
    y = poly[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


class TestFim:
    def test_orthonormal_columns_give_identity(self):
        f = cg.fim(np.eye(2), 1.0)
        assert np.allclose(f.matrix, np.eye(2), atol=1e-15)

    def test_single_anchor_rank_one(self):
        j = np.array([[1.5], [-0.5]])
        f = cg.fim(j, 2.0)
        lam = f.eigenvalues()
        assert lam[0] == pytest.approx(0.0, abs=1e-12)
        assert lam[1] > 0

    def test_matches_brute_force_summation(self, rng):
        anchors = random_layout(rng, 32)
        target = cg.TargetState(rng.uniform(1, 9, size=2))
        jac = cg.jacobian(anchors, target)
        f = cg.fim(jac, 1.0 / 9.0)
        assert np.allclose(f.matrix, brute_force_fim(jac, 1.0 / 9.0), atol=1e-12)

    @given(st.integers(min_value=1, max_value=40), st.integers(min_value=0, max_value=2**31))
    def test_always_symmetric_psd(self, n, seed):
        rng = np.random.default_rng(seed)
        jac = rng.normal(size=(2, n))
        f = cg.fim(jac, float(rng.uniform(0.01, 10.0)))
        assert f.matrix[0, 1] == f.matrix[1, 0]
        assert f.eigenvalues().min() >= -1e-12 * np.trace(f.matrix)

    def test_rejects_nonpositive_information(self):
        with pytest.raises(cg.DomainError):
            cg.fim(np.eye(2), 0.0)


class TestCrb:
    def test_diagonal_inverse(self):
        f = cg.Fim2(np.diag([4.0, 1.0]))
        assert np.allclose(cg.crb(f), np.diag([0.25, 1.0]), atol=1e-15)

    def test_product_is_identity(self, rng):
        for _ in range(20):
            jac = rng.normal(size=(2, 8))
            f = cg.fim(jac, 0.7)
            assert np.abs(f.matrix @ cg.crb(f) - np.eye(2)).max() < 1e-10

    def test_matches_eig_inverse_oracle(self, rng):
        anchors = random_layout(rng, 32)
        f = cg.fim(cg.jacobian(anchors, cg.TargetState((4.0, 6.0))), 1.0 / 9.0)
        assert np.allclose(cg.crb(f), inverse_by_eig(f.matrix), atol=1e-12)

    def test_collinear_layout_singular(self):
        # anchors and target share the x axis: no cross-range information
        anchors = tuple(
            cg.Anchor(f"l{i}", (float(i), 0.0, 0.0), -45.0, -2.0)
            for i in range(1, 6)
        )
        f = cg.fim(cg.jacobian(anchors, cg.TargetState((8.0, 0.0))), 1.0)
        lam = np.linalg.eigvalsh(f.matrix)  # independent rank check
        assert lam[0] < 1e-12 * lam[1]
        with pytest.raises(cg.SingularFim):
            cg.crb(f)


class TestBestRmse:
    def test_identity(self):
        assert cg.best_rmse(cg.Fim2(np.eye(2))) == pytest.approx(math.sqrt(2.0))

    def test_scales_linearly_with_sigma(self, rng):
        jac = rng.normal(size=(2, 16))
        base = cg.best_rmse(cg.fim(jac, 1.0))
        quartered = cg.best_rmse(cg.fim(jac, 0.25))
        assert quartered == pytest.approx(2.0 * base, rel=1e-12)

    def test_matches_trace_oracle(self, rng):
        anchors = random_layout(rng, 32)
        f = cg.fim(cg.jacobian(anchors, cg.TargetState((5.0, 5.0))), 1.0 / 4.0)
        oracle = math.sqrt(np.trace(inverse_by_eig(f.matrix)))
        assert cg.best_rmse(f) == pytest.approx(oracle, rel=1e-10)


class TestChi2Quantile:
    def test_alpha_05(self):
        oracle = chi2_quantile_by_bisection(0.05)
        assert oracle == pytest.approx(5.991464547107982, abs=1e-9)
        assert cg.chi2_quantile(0.05) == pytest.approx(oracle, abs=1e-9)

    def test_exp_minus_one_gives_two(self):
        assert cg.chi2_quantile(math.exp(-1.0)) == pytest.approx(2.0, abs=1e-14)

    def test_alpha_half(self):
        assert cg.chi2_quantile(0.5) == pytest.approx(1.3862943611198906, abs=1e-12)
        assert cg.chi2_quantile(0.5) == pytest.approx(
            chi2_quantile_by_bisection(0.5), abs=1e-9
        )

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, 1.7])
    def test_domain(self, alpha):
        with pytest.raises(cg.DomainError):
            cg.chi2_quantile(alpha)


class TestConfidenceEllipse:
    def test_isotropic_radius(self):
        c = 1.0 / 4.0  # isotropic information -> circle of radius sqrt(chi2/c)
        e = cg.confidence_ellipse((1.0, 2.0), cg.Fim2(c * np.eye(2)), 0.05)
        pts = e.boundary(64)
        radii = np.linalg.norm(pts - np.array([1.0, 2.0]), axis=1)
        expected = math.sqrt(cg.chi2_quantile(0.05) / c)
        assert np.allclose(radii, expected, rtol=1e-12)

    def test_unit_information_radius(self):
        e = cg.confidence_ellipse((0.0, 0.0), cg.Fim2(np.eye(2)), 0.05)
        r = np.linalg.norm(e.boundary(8), axis=1)
        assert np.allclose(r, 2.4477468306808161, rtol=1e-10)

    def test_lower_alpha_larger_area(self, rng):
        f = cg.fim(rng.normal(size=(2, 6)), 1.0)
        areas = [
            cg.confidence_ellipse((0, 0), f, a).area for a in (0.5, 0.2, 0.05, 0.01)
        ]
        assert all(a1 < a2 for a1, a2 in zip(areas, areas[1:]))

    def test_boundary_on_level_set(self, rng):
        f = cg.fim(rng.normal(size=(2, 5)), 2.0)
        e = cg.confidence_ellipse((3.0, -1.0), f, 0.1)
        for p in e.boundary(33):
            assert e.quadratic_form(p) == pytest.approx(e.threshold, rel=1e-9)

    def test_boundary_counterclockwise(self, rng):
        f = cg.fim(rng.normal(size=(2, 7)), 1.3)
        poly = cg.confidence_ellipse((0.0, 0.0), f, 0.05).boundary(64)
        assert shoelace_area(poly) > 0

    def test_polygon_area_converges(self, rng):
        f = cg.fim(rng.normal(size=(2, 9)), 0.5)
        e = cg.confidence_ellipse((1.0, 1.0), f, 0.05)
        poly = e.boundary(4096)
        assert shoelace_area(poly) == pytest.approx(e.area, rel=1e-3)

    def test_contains_center_and_boundary(self, rng):
        f = cg.fim(rng.normal(size=(2, 6)), 1.0)
        e = cg.confidence_ellipse((2.0, 2.0), f, 0.05)
        assert e.contains((2.0, 2.0))
        for p in e.boundary(16):
            assert e.contains(p)

    def test_twice_major_axis_outside(self):
        f = cg.Fim2(np.diag([1.0, 4.0]))
        e = cg.confidence_ellipse((0.0, 0.0), f, 0.05)
        semi_major = math.sqrt(e.threshold / 1.0)
        assert not e.contains((2.0 * semi_major, 0.0))
        assert e.quadratic_form((2.0 * semi_major, 0.0)) == pytest.approx(
            4.0 * e.threshold
        )

    def test_rotation_invariance_of_membership(self, rng):
        f = cg.fim(rng.normal(size=(2, 6)), 1.0)
        center = rng.normal(size=2)
        x = rng.normal(size=2)
        theta = 0.83
        rot = np.array(
            [
                [math.cos(theta), -math.sin(theta)],
                [math.sin(theta), math.cos(theta)],
            ]
        )
        e = cg.confidence_ellipse(center, f, 0.05)
        e_rot = cg.confidence_ellipse(
            rot @ center, cg.Fim2(rot @ f.matrix @ rot.T), 0.05
        )
        assert e.quadratic_form(x) == pytest.approx(
            e_rot.quadratic_form(rot @ x), rel=1e-9
        )

    def test_singular_information_rejected(self):
        singular = cg.Fim2(np.array([[1.0, 0.0], [0.0, 0.0]]))
        with pytest.raises(cg.SingularFim):
            cg.confidence_ellipse((0.0, 0.0), singular, 0.05)

    def test_json_round_trip(self, rng):
        f = cg.fim(rng.normal(size=(2, 6)), 1.0)
        e = cg.confidence_ellipse((1.0, -2.0), f, 0.05)
        e2 = cg.ellipse_from_json(cg.ellipse_to_json(e))
        assert np.allclose(e2.center, e.center)
        assert np.allclose(e2.fim.matrix, e.fim.matrix)
        assert e2.threshold == e.threshold
