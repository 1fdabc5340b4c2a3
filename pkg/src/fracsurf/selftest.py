"""Packaged invariant suite behind ``fracsurf selftest``.

A compact mirror of the library's acceptance surface: one seeded solver
case with the fixed-point, interpolation, and contraction-rate checks, the
operator and Bernstein identities, the dimension-estimator calibration,
the approximation constructors, the LP certificates, the finite-section
property checks, and one dimension-formula experiment.  The full-size
versions live in the test suite; this one is sized to run in seconds.

Everything here is deterministic (fixed seeds, no clocks, no paths), so
the report dict serializes to the same bytes on every run.

The dimension-formula experiment uses Hoelder-witness constants for the
sigma = 0.5 lifted series that were measured offline on desk-scale grids
(upper constants on 513^2 samples with lag cap 0.05, the lower oscillation
constant over dyadic windows of a 65537-point trace).  The scale factor
0.1 sits at about 0.8 of the admissibility bound those constants give;
the solver re-estimates the surface constant and re-checks the bound on
every run.
"""

from __future__ import annotations

import numpy as np

from . import __version__, approx, boxdim, fif, mvops
from .bernstein import bernstein_apply, bernstein_norm_probe
from .field import (AffineCombination2, Constant2, Domain1D, Domain2D,
                    Polynomial2, ShenSeries1, Shifted2, Trig2, lift_sum,
                    sample, sample1, seeded_trig_field2)

SQUARE = Domain2D(0.0, 1.0, 0.0, 1.0)
UNIT = Domain1D(0.0, 1.0)

# Measured offline for the sigma = 0.5 Shen lift (lambda = 1/2, b = 4, cos);
# see the module docstring.
WITNESS = fif.HolderWitness(sigma=0.5, K_germ=7.9162, K_base=2.1126,
                            k_lower=2.7652, delta0=0.05, K_surface=None)
EXPERIMENT_ALPHA = 0.1
EXPERIMENT_CELLS = 4
EXPERIMENT_REFINEMENT = 256

__all__ = ["run_selftest"]


def _shen_lift():
    return lift_sum(ShenSeries1(UNIT, 0.5, 4, "cos"), UNIT)


def _check_surface_solver():
    tol = 1e-10
    germ = seeded_trig_field2(SQUARE, 101)
    alpha = AffineCombination2(
        [Trig2(SQUARE, [(0.2, 2, 1, 0.4, 1.1)])], [1.0], offset=0.3)
    net = fif.make_net(SQUARE, 2, 2)
    surface = fif.fractal_operator(germ, alpha, net, deg=(4, 4),
                                   refinement=32, tol=tol)
    bound = tol / (1.0 - surface.alpha_sup)
    grid = surface.values.values
    germ_grid = sample(germ, grid.shape[1], grid.shape[0]).values
    node_gap = float(np.max(np.abs(
        grid[::32, ::32] - germ_grid[::32, ::32])))
    ratios = [b / a for a, b in zip(surface.deltas, surface.deltas[1:])
              if a > 0.0]
    max_ratio = max(ratios) if ratios else 0.0

    zero_alpha = fif.fractal_operator(germ, Constant2(SQUARE, 0.0), net,
                                      deg=(4, 4), refinement=32, tol=tol)
    alpha_zero_gap = float(np.max(np.abs(zero_alpha.values.values - germ_grid)))

    same_base = fif.solve_fractal_surface(fif.FractalSurfaceSpec(
        germ=germ, base=germ, alpha=alpha, net=net, refinement=32, tol=tol))
    base_equals_germ_gap = float(np.max(np.abs(
        same_base.values.values - germ_grid)))

    passed = (surface.residual <= bound
              and node_gap <= 10.0 * tol
              and max_ratio <= surface.alpha_sup + 1e-12
              and alpha_zero_gap <= 1e-12
              and base_equals_germ_gap <= 10.0 * tol)
    return {
        "name": "surface solver",
        "passed": passed,
        "residual": surface.residual,
        "residualBound": bound,
        "nodeGap": node_gap,
        "maxContractionRatio": max_ratio,
        "alphaSup": surface.alpha_sup,
        "alphaZeroGap": alpha_zero_gap,
        "baseEqualsGermGap": base_equals_germ_gap,
    }


def _check_operator_identities():
    tol = 1e-10
    net = fif.make_net(SQUARE, 2, 2)
    one = Constant2(SQUARE, 1.0)
    constant_gap = 0.0
    for a in (-0.6, 0.6):
        surface = fif.fractal_operator(one, Constant2(SQUARE, a), net,
                                       deg=(4, 4), refinement=32, tol=tol)
        constant_gap = max(constant_gap, float(np.max(np.abs(
            surface.values.values - 1.0))))

    f = seeded_trig_field2(SQUARE, 7)
    g = seeded_trig_field2(SQUARE, 8)
    alpha = Constant2(SQUARE, 0.4)

    def solve(field):
        return fif.fractal_operator(field, alpha, net, deg=(4, 4),
                                    refinement=32, tol=tol).values.values

    combo = AffineCombination2([f, g], [2.0, 3.0])
    linearity_gap = float(np.max(np.abs(
        solve(combo) - 2.0 * solve(f) - 3.0 * solve(g))))

    surface = fif.fractal_operator(f, alpha, net, deg=(4, 4),
                                   refinement=32, tol=tol)
    pert = fif.perturbation_check(f, alpha, (4, 4), surface)

    passed = (constant_gap <= 1e-10 and linearity_gap <= 10.0 * tol
              and pert.holds)
    return {
        "name": "operator identities",
        "passed": passed,
        "constantGap": constant_gap,
        "linearityGap": linearity_gap,
        "perturbationMargin": pert.margin,
    }


def _check_bernstein():
    rng = np.random.default_rng(2026)
    xs = rng.uniform(0.0, 1.0, 10000)
    ys = rng.uniform(0.0, 1.0, 10000)
    one = bernstein_apply(Constant2(SQUARE, 1.0), (8, 8))
    constant_gap = float(np.max(np.abs(one._eval(xs, ys) - 1.0)))
    plane = Polynomial2(SQUARE, [[0.25, -1.0], [2.0, 0.0]])
    image = bernstein_apply(plane, (8, 8))
    linear_gap = float(np.max(np.abs(
        image._eval(xs, ys) - plane._eval(xs, ys))))
    probes = [seeded_trig_field2(SQUARE, s) for s in (31, 32, 33)]
    norm_probe = bernstein_norm_probe(probes, deg=(8, 8))
    passed = (constant_gap <= 1e-12 and linear_gap <= 1e-12
              and norm_probe <= 1.0 + 1e-9)
    return {
        "name": "bernstein operator",
        "passed": passed,
        "constantGap": constant_gap,
        "linearGap": linear_gap,
        "normProbe": norm_probe,
    }


def _check_dimension_calibration():
    smooth = boxdim.dim_graph(
        Trig2(SQUARE, [(0.7, 1, 1, 0.2, 0.5)]), resolution=513)
    line = boxdim.dim_graph(ShenSeries1(UNIT, 0.5, 4, "cos"),
                            resolution=65537)
    lifted = boxdim.dim_graph(_shen_lift(), resolution=1025)
    passed = (1.95 <= smooth.slope <= 2.05
              and abs(line.slope - 1.5) <= 0.15
              and abs(lifted.slope - (line.slope + 1.0)) <= 0.2)
    return {
        "name": "dimension calibration",
        "passed": passed,
        "smoothSlope": smooth.slope,
        "lineSlope": line.slope,
        "liftSlope": lifted.slope,
    }


def _check_approximants():
    epsilon = 0.2
    target = Shifted2(Trig2(SQUARE, [(0.8, 1, 1, 0.3, 0.7)]), 0.85)
    seed = _shen_lift()
    req = approx.ApproxRequest(target, epsilon, seed)
    f257 = sample(target, 257, 257).values

    def err(built):
        return float(np.max(np.abs(
            sample(target, 1025, 1025).values
            - sample(built, 1025, 1025).values)))

    dense = approx.dense_approximant(req)
    dense_err = err(dense)
    nonneg = approx.nonnegative_approximant(req)
    nonneg_err = err(nonneg)
    nonneg_min = float(np.min(sample(nonneg, 257, 257).values))
    below = approx.lower_approximant(req)
    below_err = err(below)
    below_excess = float(np.max(sample(below, 257, 257).values - f257))
    passed = (max(dense_err, nonneg_err, below_err) < epsilon * 1.05
              and nonneg_min >= 0.0 and below_excess <= 0.0)
    return {
        "name": "approximants",
        "passed": passed,
        "epsilon": epsilon,
        "denseError": dense_err,
        "nonnegError": nonneg_err,
        "nonnegMin": nonneg_min,
        "belowError": below_err,
        "belowExcess": below_excess,
    }


def _check_lp_certificates():
    bowl = Polynomial2(SQUARE, [[0.0, 0.0, 1.0], [0.0] * 3, [1.0, 0.0, 0.0]])
    ramp = Polynomial2(SQUARE, [[0.0], [1.0]])
    ones = approx.make_basis([Constant2(SQUARE, 1.0)])
    pair = approx.make_basis([Constant2(SQUARE, 1.0), ramp])
    sol_bowl = approx.best_one_sided_below(bowl, ones)
    sol_one = approx.best_one_sided_below(Constant2(SQUARE, 1.0), ones)
    sol_ramp = approx.best_one_sided_below(ramp, pair)
    repeat = approx.best_one_sided_below(ramp, pair)
    deterministic = (sol_ramp.coefficients == repeat.coefficients
                     and sol_ramp.objective == repeat.objective)
    gaps = (abs(sol_bowl.objective - 0.0), abs(sol_one.objective - 1.0),
            abs(sol_ramp.objective - 0.5))
    worst_violation = max(sol_bowl.max_violation, sol_one.max_violation,
                          sol_ramp.max_violation)
    passed = (max(gaps) <= 1e-9 and worst_violation <= 1e-9 and deterministic)
    return {
        "name": "lp certificates",
        "passed": passed,
        "objectiveGaps": list(gaps),
        "worstViolation": worst_violation,
        "deterministic": deterministic,
    }


def _check_multivalued():
    f = seeded_trig_field2(SQUARE, 7)
    g = seeded_trig_field2(SQUARE, 11)
    w = seeded_trig_field2(SQUARE, 13, amplitude=0.5)
    sel = mvops.FamilySelector(vary="degree", domain=SQUARE)
    process = mvops.check_process(sel, f)
    lipschitz = mvops.check_lipschitz(sel, f, g)
    net = fif.make_net(SQUARE, 2, 2)
    norm = mvops.norm_bound_check(net, (4, 4), 0.5, [f, g, w])
    continuity = mvops.continuity_probe(sel, f, w, count=4)
    spread = mvops.family_spread(sel, f)
    passed = (process.passed and lipschitz.passed and norm.passed
              and continuity.passed and spread > 100.0 * sel.tol)
    return {
        "name": "multi-valued properties",
        "passed": passed,
        "processWorstMargin": process.worst_margin,
        "lipschitzWorstMargin": lipschitz.worst_margin,
        "normWorstMargin": norm.worst_margin,
        "continuityWorstMargin": continuity.worst_margin,
        "familySpread": spread,
    }


def _check_dimension_experiment():
    report = fif.dim_formula_experiment(
        WITNESS, _shen_lift(), EXPERIMENT_CELLS, EXPERIMENT_ALPHA,
        EXPERIMENT_REFINEMENT, deg=(3, 3))
    passed = report.r2 >= 0.97 and 2.0 <= report.estimate <= 3.0
    return {
        "name": "dimension-formula experiment",
        "passed": passed,
        "estimate": report.estimate,
        "target": report.target,
        "gap": report.gap,
        "r2": report.r2,
        "alphaUsed": report.alpha_used,
        "alphaBound": report.alpha_bound,
        "surfaceConstant": report.surface_constant,
        "scales": list(report.scales),
        "counts": list(report.counts),
    }


def run_selftest() -> dict:
    """Run every packaged check; the result serializes deterministically."""
    checks = [
        _check_surface_solver(),
        _check_operator_identities(),
        _check_bernstein(),
        _check_dimension_calibration(),
        _check_approximants(),
        _check_lp_certificates(),
        _check_multivalued(),
        _check_dimension_experiment(),
    ]
    return {
        "suite": "fracsurf selftest",
        "version": __version__,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
    }
