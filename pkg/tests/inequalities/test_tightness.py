import numpy as np
import pytest

from energystudio.exceptions import GrowthConditionRefusal, PreconditionError
from energystudio.geometry.manifold import ModelManifold
from energystudio.inequalities.tightness import energy_lower_bound_check, tightness_tail_bound
from energystudio.measures.clouds import make_centred_cloud, shift_cloud
from energystudio.measures.radial import uniform_ball
from energystudio.measures.schemas import Potential


@pytest.fixture
def ball():
    return uniform_ball(ModelManifold(dim=2, curvature=1.0), 1.0, 512)


@pytest.fixture
def cloud():
    return make_centred_cloud(dim=2, c=1.0, n=80, seed=3, scale=0.8)


class TestTailBound:
    def test_outside_support(self, ball):
        tail = tightness_tail_bound(ball, 3.0, 1.0, 2.0)
        assert tail.tail_mass == 0.0
        assert tail.holds

    @pytest.mark.parametrize("R", [0.1, 0.5, 0.9])
    def test_inside_support(self, ball, R):
        tail = tightness_tail_bound(ball, 3.0, 1.0, R)
        assert 0 < tail.tail_mass < 1
        assert tail.holds

    def test_discrete_measure(self, cloud):
        for R in (0.2, 1.0, 2.0):
            assert tightness_tail_bound(cloud, 2.0, 1.0, R).holds

    def test_zero_radius(self, ball):
        tail = tightness_tail_bound(ball, 3.0, 1.0, 0.0)
        assert tail.bound == np.inf
        assert tail.holds


class TestEnergyLowerBound:
    def test_cloud(self, cloud):
        h = Potential(kind="sinh_power", lam=3.0, c=1.0)
        result = energy_lower_bound_check(cloud, 0.5, h, lam=3.0, c_m=1.0)
        assert result.holds
        assert result.energy >= result.bound
        assert result.gamma1 > 0
        assert result.C2_tilde == pytest.approx(result.gamma1 * result.gamma1_tilde / 4.0)
        assert result.tail_monotone

    def test_slow_potential_is_refused(self, cloud):
        with pytest.raises(GrowthConditionRefusal) as excinfo:
            energy_lower_bound_check(cloud, 0.5, Potential(kind="log1p"), lam=3.0, c_m=1.0)
        assert excinfo.value.theorem

    def test_uncentred_measure(self, cloud):
        h = Potential(kind="sinh_power", lam=3.0, c=1.0)
        with pytest.raises(PreconditionError, match="centred"):
            energy_lower_bound_check(shift_cloud(cloud, np.array([0.5, 0.0])), 0.5, h, 3.0, 1.0)

    def test_scale_below_curvature(self):
        mu = make_centred_cloud(dim=2, c=2.0, n=10, seed=0)
        h = Potential(kind="sinh_power", lam=3.0, c=1.0)
        with pytest.raises(PreconditionError, match="below the curvature"):
            energy_lower_bound_check(mu, 0.5, h, 3.0, 1.0)

    def test_gamma_factor_range(self, cloud):
        h = Potential(kind="sinh_power", lam=3.0, c=1.0)
        with pytest.raises(PreconditionError, match="factor"):
            energy_lower_bound_check(cloud, 0.5, h, 3.0, 1.0, gamma1_factor=1.0)
