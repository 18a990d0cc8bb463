import math

import numpy as np
import pytest

from haps_cellswitch import propagation as prop
from haps_cellswitch.propagation import LinkCondition

GRID = np.arange(10.0, 91.0, 1.0)


def test_tables_load_with_expected_shape():
    tables = prop.ntn_tables()
    assert set(tables) == {
        "los_probability.urban", "los_probability.rural", "clutter_loss.urban", "clutter_loss.rural",
    }
    for angles, values in tables.values():
        assert list(angles) == list(range(10, 91, 10))
        assert np.all(values >= 0)


class TestNtnLosProbability:
    def test_urban_zenith(self):
        assert prop.los_probability_ntn(90.0, "urban") >= 0.98

    def test_rural_above_urban_at_10(self):
        assert prop.los_probability_ntn(10.0, "rural") >= prop.los_probability_ntn(10.0, "urban")

    def test_table_points_and_interpolation(self):
        assert prop.los_probability_ntn(80.0) == pytest.approx(0.968)
        assert prop.los_probability_ntn(85.0) == pytest.approx((0.968 + 0.992) / 2)

    def test_clamped_outside_range(self):
        assert prop.los_probability_ntn(2.0) == prop.los_probability_ntn(10.0)

    @pytest.mark.parametrize("env", ["urban", "rural"])
    def test_bounded_and_non_decreasing(self, env):
        p = prop.los_probability_ntn(GRID, env)
        assert np.all((p >= 0) & (p <= 1))
        assert np.all(np.diff(p) >= 0)


class TestTnLosProbability:
    def test_short_range(self):
        assert prop.los_probability_tn(0.0) == 1.0
        assert prop.los_probability_tn(18.0) == 1.0

    def test_200m(self):
        # 18/200 + exp(-200/36) * (1 - 18/200), mpmath: 0.0935179873...
        assert prop.los_probability_tn(200.0) == pytest.approx(0.09351798732692025, rel=1e-12)

    def test_non_increasing(self):
        p = prop.los_probability_tn(np.linspace(0, 1000, 2001))
        assert np.all(np.diff(p) <= 1e-15)


class TestFspl:
    def test_anchor(self):
        assert prop.fspl(1.0, 1.0) == pytest.approx(32.45)

    def test_20km(self):
        assert prop.fspl(20_000.0, 2.5) == pytest.approx(126.42940008672038, rel=1e-12)

    def test_doubling(self):
        assert prop.fspl(200.0, 2.5) - prop.fspl(100.0, 2.5) == pytest.approx(20 * math.log10(2))

    def test_rejects_zero_distance(self):
        with pytest.raises(ValueError):
            prop.fspl(0.0, 2.5)


class TestClutter:
    def test_los_is_zero(self):
        assert np.all(prop.clutter_loss_ntn(GRID, True) == 0.0)

    def test_nlos_zenith_is_table_minimum(self):
        _, values = prop.ntn_tables()["clutter_loss.urban"]
        assert prop.clutter_loss_ntn(90.0, False) == values.min() == 25.5

    def test_urban_non_increasing(self):
        cl = prop.clutter_loss_ntn(GRID, False, "urban")
        assert np.all(np.diff(cl) <= 0)
        assert cl[0] >= cl[-1]

    def test_rural_low_angle_above_zenith(self):
        # the rural column is not monotone in the source table, only its ends are ordered
        assert prop.clutter_loss_ntn(10.0, False, "rural") >= prop.clutter_loss_ntn(90.0, False, "rural")


class TestScintillation:
    def test_reference_frequency(self):
        assert prop.scintillation_loss(4.0) == pytest.approx(1.1 / math.sqrt(2), rel=1e-12)

    def test_2_5_ghz(self):
        assert prop.scintillation_loss(2.5) == pytest.approx(1.574191856159852, rel=1e-12)

    def test_boundary(self):
        prop.scintillation_loss(6.0)
        with pytest.raises(ValueError):
            prop.scintillation_loss(6.1)


class TestNtnPathLoss:
    def test_zenith_los(self):
        pl = prop.path_loss_ntn(90.0, 20_000.0, LinkCondition(True, 0.0), 2.5)
        assert pl == pytest.approx(128.00359194288023, rel=1e-12)

    def test_nlos_not_below_los(self):
        los = prop.path_loss_ntn(GRID, 20_000.0, LinkCondition(np.ones_like(GRID, bool), 0.0), 2.5)
        nlos = prop.path_loss_ntn(GRID, 20_000.0, LinkCondition(np.zeros_like(GRID, bool), 0.0), 2.5)
        assert np.all(nlos >= los)

    def test_shadow_is_additive(self):
        base = prop.path_loss_ntn(60.0, 20_000.0, LinkCondition(False, 0.0), 2.5)
        assert prop.path_loss_ntn(60.0, 20_000.0, LinkCondition(False, 6.0), 2.5) == pytest.approx(base + 6.0)


class TestTnPathLoss:
    dz = 8.5

    def geometry(self, d3):
        d3 = np.asarray(d3, float)
        return np.sqrt(d3**2 - self.dz**2), d3

    def test_los_100m(self):
        # 32.4 + 21 log10(100) + 20 log10(2.5), below the 150.1 m breakpoint
        d2, d3 = self.geometry(100.0)
        assert prop.path_loss_tn(d2, d3, LinkCondition(True, 0.0), 2.5) == pytest.approx(82.35880017344075, rel=1e-12)

    def test_nlos_100m(self):
        d2, d3 = self.geometry(100.0)
        assert prop.path_loss_tn(d2, d3, LinkCondition(False, 0.0), 2.5) == pytest.approx(101.4761221847144, rel=1e-12)

    def test_breakpoint(self):
        assert prop.breakpoint_distance(2.5) == pytest.approx(150.10384283916842, rel=1e-12)

    def test_nlos_dominates_los(self):
        d2, d3 = self.geometry(np.linspace(10, 5000, 3000))
        assert np.all(prop.umi_nlos(d2, d3, 2.5) >= prop.umi_los(d2, d3, 2.5))

    @pytest.mark.parametrize("los", [True, False])
    def test_increasing_in_distance(self, los):
        d2, d3 = self.geometry(np.linspace(10, 5000, 3000))
        pl = prop.path_loss_tn(d2, d3, LinkCondition(np.full(d3.shape, los), 0.0), 2.5)
        assert np.all(np.diff(pl) > 0)

    def test_rejects_sub_metre(self):
        with pytest.raises(ValueError):
            prop.path_loss_tn(0.0, 0.5, LinkCondition(True, 0.0), 2.5)


class TestReceivedPower:
    def test_haps(self):
        rx = prop.received_power(prop.HAPS_RF, 128.0)
        assert rx == pytest.approx(-35.8)

    def test_cancellation(self):
        rf = prop.RfParams(20.0, 3.0, 1.0)
        assert prop.received_power(rf, 24.0) == 0.0

    def test_sc(self):
        assert prop.received_power(prop.SC_RF, 100.0) == pytest.approx(-63.0)

    def test_rejects_high_carrier(self):
        with pytest.raises(ValueError):
            prop.RfParams(1.0, 1.0, 0.0, carrier_ghz=28.0)


class TestSampling:
    def test_certain_los(self):
        cond = prop.sample_link_condition(np.ones(1000), "haps", np.random.default_rng(1))
        assert cond.los.all()

    def test_certain_nlos(self):
        cond = prop.sample_link_condition(np.zeros(1000), "sc", np.random.default_rng(1))
        assert not cond.los.any()

    def test_frequency(self):
        cond = prop.sample_link_condition(np.full(100_000, 0.7), "sc", np.random.default_rng(7))
        assert abs(cond.los.mean() - 0.7) < 0.01

    @pytest.mark.parametrize("tier,p,sigma", [("haps", 1.0, 4.0), ("haps", 0.0, 6.0), ("sc", 1.0, 4.0),
                                              ("sc", 0.0, 6.0)])
    def test_shadow_statistics(self, tier, p, sigma):
        cond = prop.sample_link_condition(np.full(100_000, p), tier, np.random.default_rng(11))
        assert abs(cond.shadow_db.mean()) < 0.05
        assert cond.shadow_db.std() == pytest.approx(sigma, rel=0.02)

    def test_scalar_input(self):
        cond = prop.sample_link_condition(0.5, "haps", np.random.default_rng(0))
        assert isinstance(cond.los, bool) and isinstance(cond.shadow_db, float)


@pytest.mark.parametrize("theta", [30.0, 60.0, 89.0])
def test_sampled_mean_matches_blend(theta):
    p = prop.los_probability_ntn(theta)
    cond = prop.sample_link_condition(np.full(100_000, p), "haps", np.random.default_rng(int(theta)))
    sampled = prop.path_loss_ntn(theta, 20_000.0, LinkCondition(cond.los, 0.0), 2.5).mean()
    pl_los = prop.path_loss_ntn(theta, 20_000.0, LinkCondition(True, 0.0), 2.5)
    pl_nlos = prop.path_loss_ntn(theta, 20_000.0, LinkCondition(False, 0.0), 2.5)
    assert abs(sampled - prop.blended_path_loss(p, pl_los, pl_nlos)) < 0.1
