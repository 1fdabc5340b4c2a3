"""Tests for the rough-approximant constructions and the one-sided LP."""

import numpy as np
import pytest

from fracsurf.approx import (
    ApproxRequest,
    best_one_sided_below,
    convex_approximant,
    dense_approximant,
    lower_approximant,
    make_basis,
    nonnegative_approximant,
    upper_approximant,
)
from fracsurf.errors import ApproximationError, NumericError, UnboundedError
from fracsurf.field import (
    AffineCombination2,
    Domain1D,
    Domain2D,
    Polynomial2,
    ShenSeries1,
    Shifted2,
    Trig2,
    lift_sum,
    sample,
    sup_norm,
)

SQ = Domain2D(0.0, 1.0, 0.0, 1.0)
UNIT = Domain1D(0.0, 1.0)


def rough_seed():
    return lift_sum(ShenSeries1(UNIT, 0.5, 4, "cos"), UNIT)


def mild_target():
    return Trig2(SQ, [(0.8, 1, 1, 0.3, 0.7)])


def grid_gap(f, g, res=513):
    return float(np.max(np.abs(sample(f, res, res).values
                               - sample(g, res, res).values)))


class TestDenseApproximant:

    def test_stays_within_epsilon(self):
        req = ApproxRequest(mild_target(), 0.2, rough_seed(),
                            norm_resolution=513)
        out = dense_approximant(req)
        assert grid_gap(out, req.target) < 0.2
        info = out.build_info
        assert set(info) == {"degree", "smooth_gap", "seed_coefficient",
                             "epsilon"}
        assert info["smooth_gap"] < 0.1
        assert info["seed_coefficient"] > 0.0

    def test_seed_contribution_is_half_budget(self):
        seed = rough_seed()
        req = ApproxRequest(mild_target(), 0.2, seed, norm_resolution=513)
        out = dense_approximant(req)
        coeff = out.build_info["seed_coefficient"]
        assert coeff * sup_norm(seed, 513) == pytest.approx(0.1, rel=1e-14)

    def test_exhausted_schedule_reports_best_gap(self):
        req = ApproxRequest(rough_seed(), 0.01, mild_target(),
                            degree_schedule=(2, 4), norm_resolution=513)
        with pytest.raises(ApproximationError) as exc:
            dense_approximant(req)
        assert exc.value.best_achieved > 0.005

    def test_request_validation(self):
        seed = rough_seed()
        with pytest.raises(ValueError):
            ApproxRequest(mild_target(), 0.0, seed)
        with pytest.raises(ValueError):
            ApproxRequest(mild_target(), -0.1, seed)
        other = Trig2(Domain2D(0.0, 2.0, 0.0, 1.0), [(1.0, 1, 1, 0.0, 0.0)])
        with pytest.raises(ValueError):
            ApproxRequest(other, 0.1, seed)
        with pytest.raises(ValueError):
            ApproxRequest(mild_target(), 0.1, seed, degree_schedule=(4, 4))

    def test_vanishing_seed_rejected(self):
        req = ApproxRequest(mild_target(), 0.1, Polynomial2(SQ, [[0.0]]),
                            norm_resolution=129)
        with pytest.raises(ValueError):
            dense_approximant(req)


class TestOneSidedVariants:

    def test_nonnegative_clears_zero_on_grid(self):
        target = Shifted2(mild_target(), 0.85)
        req = ApproxRequest(target, 0.2, rough_seed(), norm_resolution=513)
        out = nonnegative_approximant(req)
        vals = sample(out, 513, 513).values
        assert vals.min() >= 0.0
        assert grid_gap(out, target) < 0.2
        assert out.build_info["shift"] == 0.1

    def test_nonnegative_rejects_negative_target(self):
        req = ApproxRequest(mild_target(), 0.2, rough_seed(),
                            norm_resolution=129)
        with pytest.raises(ValueError):
            nonnegative_approximant(req)

    def test_lower_stays_below(self):
        target = mild_target()
        req = ApproxRequest(target, 0.2, rough_seed(), norm_resolution=513)
        out = lower_approximant(req)
        diff = (sample(out, 513, 513).values
                - sample(target, 513, 513).values)
        assert diff.max() <= 0.0
        assert diff.min() > -0.2

    def test_upper_stays_above(self):
        target = mild_target()
        req = ApproxRequest(target, 0.2, rough_seed(), norm_resolution=513)
        out = upper_approximant(req)
        diff = (sample(out, 513, 513).values
                - sample(target, 513, 513).values)
        assert diff.min() >= 0.0
        assert diff.max() < 0.2


class TestConvexApproximant:

    def test_bilinear_derivative_case(self):
        # target x^2 y^2 vanishes on the x=0 and y=0 edges; its (1,1)
        # derivative 4xy is bilinear, which the Bernstein image reproduces
        target = Polynomial2(SQ, [[0, 0, 0], [0, 0, 0], [0, 0, 1]])
        deriv = Polynomial2(SQ, [[0, 0], [0, 4.0]])
        out = convex_approximant(target, deriv, 1, 1, 0.1, rough_seed(),
                                 norm_resolution=513)
        assert grid_gap(out, target) < 0.1
        edge = sample(out, 257, 257).values
        assert np.abs(edge[0, :]).max() < 1e-9
        assert np.abs(edge[:, 0]).max() < 1e-9
        info = out.build_info
        assert info["orders"] == (1, 1)
        assert info["scaled_epsilon"] == pytest.approx(0.1)

    def test_edge_violation_rejected(self):
        target = Shifted2(mild_target(), 2.0)     # nonzero along both edges
        deriv = Polynomial2(SQ, [[0.0]])
        with pytest.raises(ValueError):
            convex_approximant(target, deriv, 1, 1, 0.1, rough_seed())

    def test_order_validation(self):
        target = Polynomial2(SQ, [[0, 0], [0, 1.0]])
        deriv = Polynomial2(SQ, [[1.0]])
        with pytest.raises(ValueError):
            convex_approximant(target, deriv, 0, 1, 0.1, rough_seed())
        with pytest.raises(ValueError):
            convex_approximant(target, deriv, 1, 1, -0.1, rough_seed())


class TestBasisAndLP:

    def test_basis_integrals(self):
        one = Polynomial2(SQ, [[1.0]])
        x = Polynomial2(SQ, [[0.0], [1.0]])
        basis = make_basis([one, x])
        np.testing.assert_allclose(basis.integrals, [1.0, 0.5], atol=1e-12)

    def test_near_dependent_basis_rejected(self):
        one = Polynomial2(SQ, [[1.0]])
        copy = AffineCombination2([one], [1.0 + 1e-9])
        with pytest.raises(ValueError):
            make_basis([one, copy])

    def test_constant_span_certificates(self):
        one = Polynomial2(SQ, [[1.0]])
        basis = make_basis([one])
        bowl = Polynomial2(SQ, [[0, 0, 1.0], [0, 0, 0], [1.0, 0, 0]])
        sol = best_one_sided_below(bowl, basis)
        assert sol.objective == pytest.approx(0.0, abs=1e-9)
        assert sol.coefficients[0] == pytest.approx(0.0, abs=1e-9)
        assert sol.max_violation <= sol.feas_tol

        flat = Polynomial2(SQ, [[1.0]])
        sol = best_one_sided_below(flat, basis)
        assert sol.objective == pytest.approx(1.0, abs=1e-9)
        assert sol.coefficients[0] == pytest.approx(1.0, abs=1e-9)

    def test_recovers_member_of_span(self):
        one = Polynomial2(SQ, [[1.0]])
        x = Polynomial2(SQ, [[0.0], [1.0]])
        sol = best_one_sided_below(x, make_basis([one, x]))
        assert sol.objective == pytest.approx(0.5, abs=1e-9)
        np.testing.assert_allclose(sol.coefficients, [0.0, 1.0], atol=1e-9)

    def test_shifted_domain_constant_span(self):
        wide = Domain2D(1.0, 3.0, 0.0, 2.0)
        one = Polynomial2(wide, [[1.0]])
        x = Polynomial2(wide, [[0.0], [1.0]])
        sol = best_one_sided_below(x, make_basis([one]))
        # best constant below x on [1,3] is 1; integral of 1 over the box is 4
        assert sol.objective == pytest.approx(4.0, abs=1e-8)
        assert sol.coefficients[0] == pytest.approx(1.0, abs=1e-9)

    def test_objective_monotone_in_grid(self):
        one = Polynomial2(SQ, [[1.0]])
        basis = make_basis([one])
        f = Polynomial2(SQ, [[0.0841], [-0.58], [1.0]])   # (x - 0.29)^2
        fine = best_one_sided_below(f, basis, grid_res=33)
        coarse = best_one_sided_below(f, basis, grid_res=17)
        assert coarse.objective >= fine.objective - 1e-12

    def test_unbounded_between_nodes(self):
        # zero at every constraint node yet positive integral: nothing
        # stops the coefficient from growing
        ripple = AffineCombination2(
            [Trig2(SQ, [(1.0, 64, 0, np.pi / 2, np.pi / 2)])],
            [-1.0], offset=1.0)
        basis = make_basis([ripple])
        flat = Polynomial2(SQ, [[1.0]])
        with pytest.raises(UnboundedError):
            best_one_sided_below(flat, basis)

    def test_lp_validation(self):
        one = Polynomial2(SQ, [[1.0]])
        basis = make_basis([one])
        with pytest.raises(ValueError):
            best_one_sided_below(Polynomial2(SQ, [[1.0]]), basis, grid_res=8)
        other = Polynomial2(Domain2D(0.0, 2.0, 0.0, 1.0), [[1.0]])
        with pytest.raises(ValueError):
            best_one_sided_below(other, basis)

    def test_determinism(self):
        one = Polynomial2(SQ, [[1.0]])
        x = Polynomial2(SQ, [[0.0], [1.0]])
        y = Polynomial2(SQ, [[0.0, 1.0]])
        basis = make_basis([one, x, y])
        target = mild_target()
        a = best_one_sided_below(target, basis)
        b = best_one_sided_below(target, basis)
        assert np.array_equal(a.coefficients, b.coefficients)
        assert a.objective == b.objective
