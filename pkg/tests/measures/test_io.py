import numpy as np
import pytest

from energystudio.geometry.manifold import ModelManifold
from energystudio.geometry.schemas import CurvatureProfile
from energystudio.measures.clouds import make_centred_cloud
from energystudio.measures.io import (
    load_potential,
    load_profile,
    read_discrete_measure_csv,
    read_radial_density_csv,
    save_potential,
    save_profile,
    write_discrete_measure_csv,
    write_radial_density_csv,
)
from energystudio.measures.radial import bump_mixture
from energystudio.measures.schemas import Potential
from energystudio.tables import read_table


@pytest.fixture
def manifold():
    return ModelManifold(dim=3, curvature=1.0)


class TestDensityTables:
    def test_round_trip(self, manifold, tmp_path):
        rho = bump_mixture(manifold, [1.0], [0.4], [1.0], r_max=3.0, n=64)
        path = write_radial_density_csv(rho, tmp_path / "density.csv", footer=["status=converged"])
        restored = read_radial_density_csv(path, manifold)
        np.testing.assert_array_equal(restored.r_grid, rho.r_grid)
        np.testing.assert_array_equal(restored.values, rho.values)
        _, footer = read_table(path)
        assert footer == ["status=converged"]

    def test_identical_inputs_give_identical_files(self, manifold, tmp_path):
        rho = bump_mixture(manifold, [1.0], [0.4], [1.0], r_max=3.0, n=64)
        write_radial_density_csv(rho, tmp_path / "a.csv")
        write_radial_density_csv(rho, tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_wrong_columns(self, manifold, tmp_path):
        (tmp_path / "bad.csv").write_text("x,y\n0,1\n1,1\n")
        with pytest.raises(ValueError, match="r,rho"):
            read_radial_density_csv(tmp_path / "bad.csv", manifold)

    def test_missing_file(self, manifold, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_radial_density_csv(tmp_path / "absent.csv", manifold)


class TestCloudTables:
    def test_round_trip(self, tmp_path):
        cloud = make_centred_cloud(3, 0.5, 25, seed=2, random_weights=True)
        path = write_discrete_measure_csv(cloud, tmp_path / "cloud.csv")
        restored = read_discrete_measure_csv(path, curvature=0.5, centred=True)
        np.testing.assert_array_equal(restored.log_points, cloud.log_points)
        np.testing.assert_array_equal(restored.weights, cloud.weights)

    def test_header(self, tmp_path):
        (tmp_path / "cloud.csv").write_text("w,a,b\n1,0,0\n")
        with pytest.raises(ValueError, match="columns"):
            read_discrete_measure_csv(tmp_path / "cloud.csv", curvature=1.0)


class TestJson:
    def test_potential(self, tmp_path):
        h = Potential(kind="sinh_power", lam=3.0, c=2.0)
        save_potential(h, tmp_path / "h.json")
        assert load_potential(tmp_path / "h.json").model_dump() == h.model_dump()

    def test_profile(self, tmp_path):
        profile = CurvatureProfile(kind="power", k=2.0, floor=1.0, monotone_nondecreasing=True)
        save_profile(profile, tmp_path / "c.json")
        assert load_profile(tmp_path / "c.json").model_dump() == profile.model_dump()


class TestPotential:
    def test_values(self):
        assert Potential(kind="sinh_power", lam=3.0, c=1.0)(1.0) == pytest.approx(np.sinh(1.0) ** 3)
        assert Potential(kind="log1p")(np.e - 1.0) == pytest.approx(1.0)
        assert Potential(kind="zero")(5.0) == 0.0
        assert Potential(kind="power", beta=2.0)(3.0) == pytest.approx(4.5)

    def test_singular_at_origin(self):
        assert Potential(kind="log").singular_at_origin
        assert Potential(kind="power", beta=-1.0).singular_at_origin
        assert not Potential(kind="log1p").singular_at_origin

    def test_from_config(self):
        h = Potential.from_config({"kind": "sinh_power", "lam": "3", "c": "1", "nondecreasing": "yes"})
        assert h.growth_exponent == 3.0
        assert h.nondecreasing

    def test_missing_exponent(self):
        with pytest.raises(ValueError, match="'lam' key"):
            Potential(kind="exp_rate")

    def test_log_evaluate_without_overflow(self):
        h = Potential(kind="exp_rate", lam=2.0, c=1.0)
        assert h.log_evaluate(1000.0) == pytest.approx(2000.0)
