import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdap.core import (
    DEFAULT_RIDGE,
    Direction,
    GaussianPairModel,
    LabeledDataset,
    OneDimParams,
    estimate_model,
    pooled_covariance,
    project_params,
)
from qdap.exceptions import DimensionError, EstimationError
from qdap.simulation import sample


class TestGaussianPairModel:
    def test_dimension_checks(self):
        with pytest.raises(DimensionError):
            GaussianPairModel(np.zeros(2), np.zeros(3), np.eye(2), np.eye(2))
        with pytest.raises(DimensionError):
            GaussianPairModel(np.zeros(2), np.zeros(2), np.eye(3), np.eye(2))

    def test_rejects_asymmetric(self):
        s = np.array([[1.0, 0.5], [0.4, 1.0]])
        with pytest.raises(ValueError):
            GaussianPairModel(np.zeros(2), np.zeros(2), s, np.eye(2))

    def test_immutable(self):
        m = GaussianPairModel(np.zeros(2), np.ones(2), np.eye(2), np.eye(2))
        with pytest.raises(ValueError):
            m.mu0[0] = 3.0


class TestLabeledDataset:
    def test_counts(self):
        d = LabeledDataset(np.zeros((5, 2)), [0, 1, 1, 0, 1])
        assert (d.n0, d.n1, d.n, d.p) == (2, 3, 5, 2)

    def test_bad_labels(self):
        with pytest.raises(ValueError):
            LabeledDataset(np.zeros((3, 2)), [0, 1, 2])


class TestDirection:
    def test_normalized(self):
        d = Direction([3.0, 4.0])
        np.testing.assert_allclose(d.v, [0.6, 0.8])
        assert abs(np.linalg.norm(d.v) - 1) < 1e-12

    def test_projective_equality(self):
        assert Direction([1.0, 2.0]) == Direction([-2.0, -4.0])
        assert Direction([1.0, 0.0]) != Direction([1.0, 1e-3])

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            Direction([0.0, 0.0])

    def test_angle(self):
        assert Direction([1, 0]).angle([0, 1]) == pytest.approx(math.pi / 2)
        assert Direction([1, 0]).angle([-1, 1e-9]) == pytest.approx(1e-9, rel=1e-6)


class TestEstimateModel:
    def test_two_point_moments(self):
        data = LabeledDataset.from_classes([[0, 0], [2, 0]], [[0, 1], [0, 3]])
        m = estimate_model(data)
        np.testing.assert_allclose(m.mu0, [1, 0])
        np.testing.assert_allclose(m.mu1, [0, 2])
        np.testing.assert_allclose(m.sigma0, np.diag([2, 0]) + DEFAULT_RIDGE * np.eye(2))
        np.testing.assert_allclose(m.sigma1, np.diag([0, 2]) + DEFAULT_RIDGE * np.eye(2))

    def test_no_ridge_when_well_conditioned(self, rng):
        data = LabeledDataset.from_classes(rng.standard_normal((30, 2)), rng.standard_normal((30, 2)))
        m = estimate_model(data)
        np.testing.assert_allclose(m.sigma0, np.cov(data.class_rows(0), rowvar=False))

    def test_single_observation_class(self):
        data = LabeledDataset.from_classes([[0.0, 1.0]], [[0, 1], [0, 3]])
        with pytest.raises(EstimationError):
            estimate_model(data)

    def test_law_of_large_numbers_model1(self, models):
        data = sample(models[1], 10_000, seed=1)
        m = estimate_model(data)
        assert np.linalg.norm(m.mu1 - np.ones(50) / 3) < 0.1

    def test_ridge_floor(self, rng):
        # rank-deficient: 3 points in 5 dimensions
        data = LabeledDataset.from_classes(rng.standard_normal((3, 5)), rng.standard_normal((3, 5)))
        m = estimate_model(data)
        for s in m.covariances():
            assert np.linalg.eigvalsh(s)[0] >= DEFAULT_RIDGE - 1e-12

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_row_permutation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        data = LabeledDataset.from_classes(rng.standard_normal((8, 3)), rng.standard_normal((9, 3)) + 1)
        perm = rng.permutation(data.n)
        a, b = estimate_model(data), estimate_model(data.subset(perm))
        for u, v in zip((a.mu0, a.mu1, a.sigma0, a.sigma1), (b.mu0, b.mu1, b.sigma0, b.sigma1)):
            np.testing.assert_allclose(u, v, atol=1e-12)


class TestProjectParams:
    def test_coordinate_projection(self):
        p = 4
        m = GaussianPairModel(np.zeros(p), np.ones(p), np.eye(p), np.eye(p))
        assert project_params(m, Direction(np.eye(p)[0])) == OneDimParams(0, 1, 1, 1)

    def test_model4_along_ones(self, models):
        got = project_params(models[4], Direction(np.ones(50)))
        assert got.m0 == pytest.approx(0, abs=1e-12)
        assert got.m1 == pytest.approx(0, abs=1e-12)
        assert got.s0 == pytest.approx(1)
        assert got.s1 == pytest.approx(math.sqrt(101))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_sign_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        a0, a1 = rng.standard_normal((2, 3, 3))
        m = GaussianPairModel(rng.standard_normal(3), rng.standard_normal(3),
                              a0 @ a0.T + np.eye(3), a1 @ a1.T + np.eye(3))
        d = Direction(rng.standard_normal(3))
        u, v = project_params(m, d), project_params(m, -d)
        assert v.m0 == pytest.approx(-u.m0) and v.m1 == pytest.approx(-u.m1)
        assert v.s0 == pytest.approx(u.s0) and v.s1 == pytest.approx(u.s1)

    def test_dimension_mismatch(self, models):
        with pytest.raises(DimensionError):
            project_params(models[1], Direction([1.0, 0.0]))


class TestPooledCovariance:
    def test_equal(self):
        s = np.array([[2.0, 0.3], [0.3, 1.0]])
        np.testing.assert_allclose(pooled_covariance(GaussianPairModel([0, 0], [1, 1], s, s)), s)

    def test_scalar_multiples(self):
        m = GaussianPairModel([0, 0], [1, 1], np.eye(2), 3 * np.eye(2))
        np.testing.assert_allclose(pooled_covariance(m), 2 * np.eye(2))

    def test_model3(self, models):
        s = pooled_covariance(models[3])
        assert np.allclose(np.diag(s), 2.0)
        assert np.allclose(s[~np.eye(50, dtype=bool)], 1.0)
