"""Tests for the field catalog and sampling helpers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from fracsurf.errors import DomainError, NumericError
from fracsurf.field import (
    AffineCombination1,
    AffineCombination2,
    Constant1,
    Constant2,
    CumulativeIntegral2,
    Domain1D,
    Domain2D,
    GridSample,
    Lifted2,
    MWSeries1,
    Polynomial1,
    Polynomial2,
    SampledGrid2,
    ShenSeries1,
    Shifted2,
    Trig1,
    Trig2,
    cumulative_integral2,
    iterated_integral,
    lift_sum,
    mixed_partial,
    mixed_partial_mn,
    sample,
    sample1,
    seeded_trig_field1,
    seeded_trig_field2,
    sup_norm,
)

UNIT = Domain1D(0.0, 1.0)
SQ = Domain2D(0.0, 1.0, 0.0, 1.0)


def test_domain_validation():
    with pytest.raises(ValueError):
        Domain1D(1.0, 1.0)
    with pytest.raises(ValueError):
        Domain2D(0.0, 1.0, 2.0, 1.0)
    assert Domain2D(0.0, 2.0, -1.0, 3.0).width_x == 2.0
    assert Domain2D(0.0, 2.0, -1.0, 3.0).width_y == 4.0


def test_out_of_domain_evaluation_raises():
    f = Polynomial2(SQ, [[1.0]])
    with pytest.raises(DomainError):
        f(1.5, 0.5)
    with pytest.raises(DomainError):
        f(0.5, -0.5)
    # a hair outside is tolerated (floating slack), well outside is not
    assert f(1.0 + 1e-12, 0.5) == 1.0


def test_polynomial_and_trig_values():
    p = Polynomial2(SQ, [[1.0, 2.0], [3.0, 0.0]])   # 1 + 2y + 3x
    assert p(0.0, 0.0) == 1.0
    assert p(1.0, 1.0) == 6.0
    t = Trig1(UNIT, [(2.0, 1, 0.0)])                # 2 sin(pi t)
    assert_allclose(t(0.5), 2.0)
    assert_allclose(t(0.0), 0.0, atol=1e-15)
    t2 = Trig2(SQ, [(1.0, 1, 1, 0.0, 0.0)])         # sin(pi x) sin(pi y)
    assert_allclose(t2(0.5, 0.5), 1.0)


def test_grid_sample_orientation():
    # values[j, k] must hold f(x_k, y_j)
    f = Polynomial2(SQ, [[0.0, 10.0], [1.0, 0.0]])  # x + 10 y
    gs = sample(f, 3, 5)
    assert gs.values.shape == (5, 3)
    assert gs.values[0, 2] == pytest.approx(1.0)       # x=1, y=0
    assert gs.values[4, 0] == pytest.approx(10.0)      # x=0, y=1
    assert_allclose(gs.x_nodes(), [0.0, 0.5, 1.0])
    assert gs.y_nodes().shape == (5,)


def test_grid_sample_rejects_bad_shape():
    with pytest.raises(ValueError):
        GridSample(SQ, 3, 3, np.zeros((3, 4)))
    with pytest.raises(NumericError):
        GridSample(SQ, 2, 2, np.array([[1.0, 2.0], [np.nan, 0.0]]))


def test_shen_series_truncation_and_target():
    w = ShenSeries1(UNIT, 0.5, 4, "cos", tol=1e-10)
    assert w.sigma == pytest.approx(0.5)
    assert w.graph_dimension_target() == pytest.approx(1.5)
    # truncation error: compare against a longer expansion
    longer = ShenSeries1(UNIT, 0.5, 4, "cos", tol=1e-14)
    xs = np.linspace(0.0, 1.0, 1001)
    gap = np.max(np.abs(longer._eval(xs) - w._eval(xs)))
    assert gap <= 1e-10


def test_shen_series_requires_admissible_parameters():
    with pytest.raises(ValueError):
        ShenSeries1(UNIT, 1.5, 4)
    with pytest.raises(ValueError):
        ShenSeries1(UNIT, 0.5, 1)
    # lam * b <= 1 has no fractal regime to target
    flat = ShenSeries1(UNIT, 0.2, 4)
    with pytest.raises(ValueError):
        flat.graph_dimension_target()


def test_mw_series_theta_modes():
    zero = MWSeries1(UNIT, 0.5, 3, theta="zero")
    rand1 = MWSeries1(UNIT, 0.5, 3, theta="random", seed=4)
    rand2 = MWSeries1(UNIT, 0.5, 3, theta="random", seed=4)
    xs = np.linspace(0.0, 1.0, 101)
    assert np.all(np.isfinite(zero._eval(xs)))
    assert_allclose(rand1._eval(xs), rand2._eval(xs))
    rand3 = MWSeries1(UNIT, 0.5, 3, theta="random", seed=5)
    assert np.max(np.abs(rand1._eval(xs) - rand3._eval(xs))) > 0.0


def test_lift_sum_is_w_plus_y():
    w = Polynomial1(UNIT, [0.0, 2.0])    # 2x
    lifted = lift_sum(w, Domain1D(0.0, 3.0))
    assert lifted.domain == Domain2D(0.0, 1.0, 0.0, 3.0)
    assert lifted(0.5, 2.0) == pytest.approx(3.0)
    assert isinstance(lifted, Lifted2)


def test_cumulative_integral_exact_on_bilinear():
    # integrand c + ax + by + dxy integrates exactly under trapezoid;
    # the table read-out is bilinear, so exactness holds at quadrature
    # nodes (multiples of 1/512 here) and degrades to O(h^2) between them
    g = Polynomial2(SQ, [[1.0, 2.0], [3.0, 4.0]])
    G = cumulative_integral2(g)
    # int_0^x int_0^y (1 + 2t + 3s + 4st) dt ds, s in x, t in y
    def exact(x, y):
        return x * y + x * y ** 2 + 1.5 * x ** 2 * y + x ** 2 * y ** 2
    for x, y in [(0.25, 0.75), (1.0, 1.0), (0.5, 0.25)]:
        assert G(x, y) == pytest.approx(exact(x, y), abs=1e-12)
    assert G(0.3, 0.7) == pytest.approx(exact(0.3, 0.7), abs=1e-4)
    assert G(0.0, 0.9) == 0.0
    assert G(0.9, 0.0) == 0.0


def test_iterated_integral_order_two():
    one = Constant2(SQ, 1.0)
    G = iterated_integral(one, 2, 1)
    # int twice in x, once in y: x^2 y / 2
    assert G(1.0, 1.0) == pytest.approx(0.5, abs=1e-10)
    assert G(0.5, 1.0) == pytest.approx(0.125, abs=1e-10)
    with pytest.raises(ValueError):
        iterated_integral(one, 0, 1)


def test_mixed_partial_of_product():
    f = Polynomial2(SQ, [[0.0, 0.0], [0.0, 1.0]])   # xy
    assert mixed_partial(f, (0.4, 0.6)) == pytest.approx(1.0, rel=1e-6)
    g = Polynomial2(SQ, [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    # D^(2,2) of x^2 y^2 = 4
    assert mixed_partial_mn(g, (0.5, 0.5), 2, 2) == pytest.approx(4.0, rel=1e-5)


def test_mixed_partial_stencil_must_fit():
    f = Polynomial2(SQ, [[0.0, 0.0], [0.0, 1.0]])
    with pytest.raises(DomainError):
        mixed_partial(f, (0.0, 0.5))


def test_affine_combination_requires_common_domain():
    other = Domain2D(0.0, 2.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        AffineCombination2([Constant2(SQ, 1.0), Constant2(other, 1.0)],
                           [1.0, 1.0])
    combo = AffineCombination2([Constant2(SQ, 2.0)], [3.0], offset=-1.0)
    assert combo(0.1, 0.9) == pytest.approx(5.0)


def test_shifted_field():
    s = Shifted2(Constant2(SQ, 1.5), -0.5)
    assert s(0.3, 0.3) == pytest.approx(1.0)


def test_sampled_grid_reproduces_nodes_and_interpolates():
    f = Polynomial2(SQ, [[0.0, 1.0], [1.0, 1.0]])   # y + x + xy, bilinear
    gs = sample(f, 5, 5)
    back = SampledGrid2(gs)
    xs = np.linspace(0.0, 1.0, 17)
    for x in xs:
        for y in (0.1, 0.62):
            assert back(x, y) == pytest.approx(f(x, y), abs=1e-12)


def test_seeded_fields_deterministic():
    a = seeded_trig_field2(SQ, 42)
    b = seeded_trig_field2(SQ, 42)
    c = seeded_trig_field2(SQ, 43)
    gs_a = sample(a, 33, 33).values
    assert np.array_equal(gs_a, sample(b, 33, 33).values)
    assert np.max(np.abs(gs_a - sample(c, 33, 33).values)) > 0.0
    line = seeded_trig_field1(UNIT, 7, amplitude=2.0)
    assert np.all(np.isfinite(sample1(line, 65).values))


def test_sup_norm_monotone_under_nesting():
    f = Trig2(SQ, [(1.0, 3, 2, 0.4, 0.9)])
    coarse = sup_norm(f, 257)
    fine = sup_norm(f, 513)      # 257-grid nodes are a subset
    assert fine >= coarse


@given(st.integers(min_value=2, max_value=40), st.integers(min_value=2, max_value=40))
@settings(max_examples=25, deadline=None)
def test_sample_shape_contract(nx, ny):
    gs = sample(Constant2(SQ, 1.0), nx, ny)
    assert gs.values.shape == (ny, nx)
    assert np.all(gs.values == 1.0)


@given(st.lists(st.floats(min_value=-2.0, max_value=2.0), min_size=1, max_size=4),
       st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=50, deadline=None)
def test_trig1_bounded_by_amplitude_sum(amps, t):
    terms = [(a, k + 1, 0.3 * k) for k, a in enumerate(amps)]
    f = Trig1(UNIT, terms)
    assert abs(f(t)) <= sum(abs(a) for a in amps) + 1e-12
