import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from energystudio.exceptions import PreconditionError
from energystudio.measures.clouds import make_centred_cloud, make_rng, pole_measure, shift_cloud
from energystudio.measures.moments import first_moment, sinh_moment, tail_mass
from energystudio.measures.schemas import DiscreteMeasure


class TestMakeRng:
    def test_reproducible(self):
        np.testing.assert_array_equal(make_rng(3).normal(size=5), make_rng(3).normal(size=5))

    def test_seed_sequences_are_independent(self):
        first = make_rng(np.random.SeedSequence([1, 0])).uniform(size=4)
        second = make_rng(np.random.SeedSequence([1, 1])).uniform(size=4)
        assert not np.array_equal(first, second)


class TestCentredCloud:
    @given(
        dim=st.integers(2, 4),
        n=st.integers(1, 200),
        seed=st.integers(0, 2**31 - 1),
        random_weights=st.booleans(),
    )
    @settings(max_examples=40, deadline=None)
    def test_tangent_mean_vanishes(self, dim, n, seed, random_weights):
        cloud = make_centred_cloud(dim, 1.0, n, seed, random_weights=random_weights)
        assert cloud.centred
        assert cloud.total_mass == pytest.approx(1.0)
        scale = max(1.0, float(np.sum(cloud.weights * cloud.radii)))
        assert np.linalg.norm(cloud.weights @ cloud.log_points) <= 1e-12 * scale

    def test_reproducible(self):
        first = make_centred_cloud(3, 1.0, 50, seed=11, random_weights=True)
        second = make_centred_cloud(3, 1.0, 50, seed=11, random_weights=True)
        np.testing.assert_array_equal(first.log_points, second.log_points)
        np.testing.assert_array_equal(first.weights, second.weights)

    def test_total_mass(self):
        cloud = make_centred_cloud(2, 0.5, 10, seed=1, total_mass=3.0)
        assert cloud.total_mass == pytest.approx(3.0)

    def test_empty_cloud(self):
        with pytest.raises(PreconditionError, match="at least one point"):
            make_centred_cloud(2, 1.0, 0, seed=0)

    def test_false_centring_flag(self):
        with pytest.raises(ValueError, match="centred"):
            DiscreteMeasure(
                dim=2, curvature=1.0, log_points=np.array([[1.0, 0.0]]), weights=np.array([1.0]), centred=True
            )


class TestShiftCloud:
    def test_shift_clears_flag(self):
        cloud = make_centred_cloud(2, 1.0, 20, seed=5)
        shifted = shift_cloud(cloud, np.array([2.0, 0.0]))
        assert not shifted.centred
        np.testing.assert_allclose(shifted.weights @ shifted.log_points, [2.0, 0.0], atol=1e-12)

    def test_offset_shape(self):
        with pytest.raises(PreconditionError, match="shape"):
            shift_cloud(make_centred_cloud(2, 1.0, 5, seed=5), np.zeros(3))


class TestDiscreteMoments:
    def test_pole_measure(self):
        pole = pole_measure(3, 1.0)
        assert first_moment(pole) == 0.0
        assert sinh_moment(pole, 2.0) == 0.0
        assert tail_mass(pole, 0.0) == 1.0

    def test_sinh_moment_of_single_point(self):
        point = DiscreteMeasure(dim=2, curvature=1.0, log_points=np.array([[0.0, 2.0]]), weights=np.array([0.5]))
        assert sinh_moment(point, 3.0) == pytest.approx(0.5 * np.sinh(2.0) ** 3)

    def test_pairwise_angles(self):
        cloud = DiscreteMeasure(
            dim=2, curvature=1.0, log_points=np.array([[1.0, 0.0], [0.0, 2.0], [-3.0, 0.0]]), weights=np.ones(3)
        )
        angles = cloud.pairwise_angles()
        assert angles[0, 1] == pytest.approx(np.pi / 2)
        assert angles[0, 2] == pytest.approx(np.pi)
        np.testing.assert_allclose(np.diag(angles), 0.0, atol=1e-12)
