"""Tests for the box-counting dimension estimator."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fracsurf.boxdim import (
    ScaleSchedule,
    box_count_graph,
    dim_graph,
    dim_sample,
    estimate_dim,
)
from fracsurf.field import (
    Domain1D,
    Domain2D,
    GridSample,
    LineSample,
    Polynomial2,
    ShenSeries1,
    Trig2,
    lift_sum,
    sample,
    sample1,
)

SQ = Domain2D(0.0, 1.0, 0.0, 1.0)
UNIT = Domain1D(0.0, 1.0)


def test_hand_counts_on_flat_and_tilted_graphs():
    flat = sample(Polynomial2(SQ, [[2.0]]), 17, 17)
    # zero oscillation: one box per column of cells
    assert box_count_graph(flat, 0.5) == 4
    assert box_count_graph(flat, 0.25) == 16
    ramp = sample(Polynomial2(SQ, [[0.0], [1.0]]), 17, 17)   # f = x
    # osc = 0.5 per half-width cell: ceil(0.5/0.5) + 1 = 2 boxes per cell
    assert box_count_graph(ramp, 0.5) == 8


def test_hand_count_line_sample():
    xs = np.linspace(0.0, 1.0, 9)
    line = LineSample(UNIT, 9, 2.0 * xs)     # slope 2
    # per half-interval: osc 1.0, ceil(1.0/0.5) + 1 = 3
    assert box_count_graph(line, 0.5) == 6


def test_counts_nondecreasing_under_halving():
    rng = np.random.default_rng(11)
    grid = GridSample(SQ, 65, 65, rng.standard_normal((65, 65)))
    counts = [box_count_graph(grid, 1.0 / 2 ** k) for k in range(1, 5)]
    assert all(b >= a for a, b in zip(counts, counts[1:]))


def test_exact_power_law_recovered():
    schedule = ScaleSchedule.dyadic(1.0, 2, 6)
    counts = [s ** -1.5 for s in schedule.deltas]
    est = estimate_dim(schedule, counts)
    assert est.slope == pytest.approx(1.5, abs=1e-12)
    assert est.r2 == pytest.approx(1.0, abs=1e-12)
    assert est.ci_half_width == pytest.approx(0.0, abs=1e-10)


def test_estimate_requires_enough_scales():
    with pytest.raises(ValueError):
        estimate_dim([0.5, 0.25], [10, 20])
    with pytest.raises(ValueError):
        estimate_dim([0.5, 0.25, 0.125], [10, 20])


def test_schedule_validation():
    with pytest.raises(ValueError):
        ScaleSchedule((0.5, 0.5, 0.25))
    with pytest.raises(ValueError):
        ScaleSchedule((0.25, 0.5, 0.125))
    with pytest.raises(ValueError):
        ScaleSchedule.dyadic(1.0, 5, 4)
    sched = ScaleSchedule.dyadic(2.0, 1, 3)
    assert_allclose(sched.deltas, [1.0, 0.5, 0.25])


def test_misaligned_delta_rejected():
    grid = sample(Polynomial2(SQ, [[1.0]]), 9, 9)
    with pytest.raises(ValueError):
        box_count_graph(grid, 0.3)          # does not divide the width
    with pytest.raises(ValueError):
        box_count_graph(grid, 1.0 / 16.0)   # cells thinner than the samples


def test_smooth_graph_calibration():
    est = dim_graph(Trig2(SQ, [(0.7, 1, 1, 0.2, 0.5)]), resolution=513)
    assert 1.95 <= est.slope <= 2.05
    assert est.r2 > 0.999


def test_rough_line_graph_calibration():
    w = ShenSeries1(UNIT, 0.5, 4, "cos")
    est = dim_graph(w, resolution=65537)
    assert abs(est.slope - 1.5) <= 0.15


def test_subschedule_robustness():
    line = sample1(ShenSeries1(UNIT, 0.5, 4, "cos"), 65537)
    full = dim_sample(line)
    lo = dim_sample(line, ScaleSchedule.dyadic(1.0, 4, 9))
    hi = dim_sample(line, ScaleSchedule.dyadic(1.0, 9, 14))
    assert abs(lo.slope - full.slope) <= 0.1
    assert abs(hi.slope - full.slope) <= 0.1


def test_noise_simulation_ci_coverage():
    # synthetic power-law counts with lognormal noise: the 95% CI from the
    # regression should cover the true exponent in at least 90 of 100 trials
    schedule = ScaleSchedule.dyadic(1.0, 2, 8)
    log_inv = np.log(1.0 / np.asarray(schedule.deltas))
    true_d = 1.7
    hits = 0
    rng = np.random.default_rng(2024)
    for _ in range(100):
        noise = rng.normal(0.0, 0.05, log_inv.size)
        counts = np.exp(true_d * log_inv + 2.0 + noise)
        est = estimate_dim(schedule, counts)
        if abs(est.slope - true_d) <= est.ci_half_width:
            hits += 1
    assert hits >= 90


def test_dim_sample_needs_square_domain_for_default_schedule():
    wide = Domain2D(0.0, 2.0, 0.0, 1.0)
    grid = sample(Polynomial2(wide, [[1.0]]), 129, 129)
    with pytest.raises(ValueError):
        dim_sample(grid)
    est = dim_sample(grid, ScaleSchedule((0.25, 0.125, 0.0625)))
    assert est.slope == pytest.approx(2.0, abs=0.1)


def test_lift_adds_one_to_line_dimension():
    w = ShenSeries1(UNIT, 0.5, 4, "cos")
    line = dim_graph(w, resolution=65537)
    lifted = dim_graph(lift_sum(w, UNIT), resolution=1025)
    assert abs(lifted.slope - (line.slope + 1.0)) <= 0.2
