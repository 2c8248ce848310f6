"""Tests for bandwidth extraction and damping optimization."""

import numpy as np
import pytest

from modeconv.analysis import (
    ConverterFamily,
    branch_count,
    efficiency_curve,
    efficiency_map,
    high_efficiency_intervals,
    max_bandwidth,
    optimize_kappa,
)
from modeconv.converter import ResonantParams, efficiency_closed_form, resonant_network
from modeconv.scattering import transmission_grid


def resonant(kappa):
    return resonant_network(ResonantParams(1.0, 1.0, kappa, kappa))


def test_family_builders():
    fam = ConverterFamily(kind="resonant", g=1.0)
    net = fam.build(2.0)
    assert net.labels == ("a", "c", "b")
    assert tuple(net.damping) == (2.0, 0.0, 2.0)
    det = ConverterFamily(kind="detuned", g=1.0, delta_mu=3.0).build(0.5)
    assert det.coupling[1, 1] == 3.0
    two = ConverterFamily(kind="two_mode", g=0.1).build(0.2)
    assert two.labels == ("a", "b")
    with pytest.raises(ValueError):
        ConverterFamily(kind="nope").build(1.0)


def test_efficiency_curve_values():
    net = resonant(2.6)
    grid = np.linspace(-2.0, 2.0, 101)
    curve = efficiency_curve(net, "a", "b", grid)
    direct = np.abs(transmission_grid(net, grid, "a", "b")) ** 2
    assert np.abs(curve.etas - direct).max() < 1e-14
    with pytest.raises(ValueError):
        efficiency_curve(net, "a", "b", grid[::-1])


class TestIntervals:
    def test_triple_branch_structure_at_matching(self):
        # kappa = 2g: three maxima at omega = 0, +/-g; threshold 0.99 cuts
        # three separate intervals whose endpoints are known to 1e-8
        report = high_efficiency_intervals(resonant(2.0), "a", "b", 0.99, (-3.0, 3.0), 4001)
        assert report.threshold == 0.99
        assert len(report.intervals) == 3
        lo, mid, hi = report.intervals
        assert abs(lo.lo + 1.088428613) < 1e-7
        assert abs(lo.hi + 0.878119032) < 1e-7
        assert abs(mid.lo + 0.210309581) < 1e-7
        assert abs(mid.hi - 0.210309581) < 1e-7
        assert abs(hi.lo - 0.878119032) < 1e-7
        assert abs(hi.hi - 1.088428613) < 1e-7
        assert abs(report.max_width - 0.420619162) < 1e-7
        assert max_bandwidth(resonant(2.0), "a", "b", 0.99, (-3.0, 3.0)) == report.max_width

    def test_flat_top_merged_interval(self):
        report = high_efficiency_intervals(resonant(2.6), "a", "b", 0.999, (-3.0, 3.0), 4001)
        assert len(report.intervals) == 1
        assert abs(report.max_width - 1.318723019) < 1e-6

    def test_refined_edges_sit_on_threshold(self):
        report = high_efficiency_intervals(resonant(2.6), "a", "b", 0.99, (-3.0, 3.0), 4001)
        for iv in report.intervals:
            for edge in (iv.lo, iv.hi):
                assert abs(efficiency_closed_form(edge, 1.0, 2.6) - 0.99) < 1e-8

    def test_interval_clipped_at_scan_boundary(self):
        # a scan window cutting through the passband leaves the boundary as an
        # interval edge rather than refining past it
        report = high_efficiency_intervals(resonant(2.6), "a", "b", 0.99, (0.0, 3.0), 2001)
        assert len(report.intervals) == 1
        assert report.intervals[0].lo == 0.0

    def test_side_unity_points_survive_extreme_thresholds(self):
        # kappa = 2.6 still touches eta = 1 at omega = 0 and two side points,
        # so even a near-one threshold keeps three slivers of passband
        report = high_efficiency_intervals(resonant(2.6), "a", "b", 0.9999999, (-3.0, 3.0), 4001)
        assert len(report.intervals) == 3
        for iv in report.intervals:
            assert iv.width < 0.02

    def test_no_intervals_when_curve_stays_below_threshold(self):
        report = high_efficiency_intervals(resonant(2.6), "a", "b", 0.9999999, (2.0, 3.0), 2001)
        assert report.intervals == ()
        assert report.max_width == 0.0

    def test_parameter_validation(self):
        net = resonant(2.0)
        for bad in (0.0, 1.0, -0.5, 1.5):
            with pytest.raises(ValueError):
                high_efficiency_intervals(net, "a", "b", bad, (-1.0, 1.0), 101)
        with pytest.raises(ValueError):
            high_efficiency_intervals(net, "a", "b", 0.9, (1.0, -1.0), 101)
        with pytest.raises(ValueError):
            high_efficiency_intervals(net, "a", "b", 0.9, (-np.inf, 1.0), 101)


def test_branch_count_transition():
    fam = ConverterFamily(kind="resonant")
    assert branch_count(fam.build(2.0), "a", "b", 0.99, (-3.0, 3.0)) == 3
    assert branch_count(fam.build(2.6), "a", "b", 0.99, (-3.0, 3.0)) == 1


def test_efficiency_map_matches_rows():
    fam = ConverterFamily(kind="resonant")
    kappas = np.array([1.0, 2.0, 3.0])
    omegas = np.linspace(-2.0, 2.0, 21)
    emap = efficiency_map(fam, kappas, omegas)
    assert emap.etas.shape == (3, 21)
    row = np.abs(transmission_grid(fam.build(2.0), omegas, "a", "b")) ** 2
    assert np.abs(emap.etas[1] - row).max() < 1e-14


class TestOptimizeKappa:
    def test_resonant_optimum(self):
        fam = ConverterFamily(kind="resonant")
        kappa_star, width_star = optimize_kappa(fam, 0.99, (0.1, 8.0))
        # the width-vs-kappa curve jumps where the three branches merge;
        # the optimum sits just above the merge near kappa = 2.2746
        assert abs(kappa_star - 2.274578) < 1e-3
        assert abs(width_star - 1.941235) < 1e-5

    def test_works_with_plain_builder_function(self):
        def build(kappa):
            return resonant(kappa)

        kappa_star, width_star = optimize_kappa(build, 0.99, (0.1, 8.0))
        assert abs(width_star - 1.941235) < 1e-5

    def test_degenerate_range(self):
        fam = ConverterFamily(kind="resonant")
        kappa_star, width_star = optimize_kappa(fam, 0.99, (2.6, 2.6))
        assert kappa_star == 2.6
        assert abs(width_star - 1.596649817) < 1e-6

    def test_range_validation(self):
        fam = ConverterFamily(kind="resonant")
        with pytest.raises(ValueError):
            optimize_kappa(fam, 0.99, (2.0, 1.0))
        with pytest.raises(ValueError):
            optimize_kappa(fam, 0.99, (0.0, 1.0))
        with pytest.raises(ValueError):
            optimize_kappa(fam, 1.5, (0.1, 1.0))
