"""Tests for the tensor-product Bernstein operator."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.special import binom

from fracsurf.bernstein import (
    MAX_DEGREE,
    BernsteinImage2,
    bernstein_apply,
    bernstein_basis,
    bernstein_norm_probe,
)
from fracsurf.field import (
    Constant2,
    Domain2D,
    Polynomial2,
    Trig2,
    sample,
    seeded_trig_field2,
    sup_norm,
)

SQ = Domain2D(0.0, 1.0, 0.0, 1.0)


def direct_image(f, m, n, x, y):
    """Reference double sum with explicit binomials (slow, independent of
    the recurrence the library uses)."""
    d = f.domain
    tx = (x - d.a) / d.width_x
    ty = (y - d.c) / d.width_y
    total = 0.0
    for i in range(m + 1):
        bx = binom(m, i) * tx ** i * (1.0 - tx) ** (m - i)
        for j in range(n + 1):
            by = binom(n, j) * ty ** j * (1.0 - ty) ** (n - j)
            xi = d.a + d.width_x * i / m
            yj = d.c + d.width_y * j / n
            total += f(xi, yj) * bx * by
    return total


def test_basis_rows_sum_to_one():
    t = np.linspace(0.0, 1.0, 57)
    for k in (1, 5, 32):
        rows = bernstein_basis(k, t)
        assert rows.shape == (57, k + 1)
        assert_allclose(rows.sum(axis=1), 1.0, atol=5e-15)
        assert np.all(rows >= 0.0)


def test_basis_endpoints_are_one_hot():
    rows = bernstein_basis(7, np.array([0.0, 1.0]))
    expected0 = np.zeros(8)
    expected0[0] = 1.0
    expected1 = np.zeros(8)
    expected1[7] = 1.0
    assert_allclose(rows[0], expected0)
    assert_allclose(rows[1], expected1)


def test_image_matches_direct_double_sum():
    f = seeded_trig_field2(SQ, 12)
    image = bernstein_apply(f, (6, 9))
    rng = np.random.default_rng(99)
    for _ in range(25):
        x, y = rng.uniform(0.0, 1.0, 2)
        assert image(x, y) == pytest.approx(direct_image(f, 6, 9, x, y),
                                            abs=1e-12)


def test_image_on_shifted_domain():
    dom = Domain2D(-1.0, 3.0, 2.0, 5.0)
    f = Polynomial2(dom, [[0.5, 1.0], [2.0, 0.0]])
    image = bernstein_apply(f, (4, 4))
    for x, y in [(-1.0, 2.0), (3.0, 5.0), (0.7, 3.3)]:
        assert image(x, y) == pytest.approx(direct_image(f, 4, 4, x, y),
                                            abs=1e-12)


def test_fixes_constants_and_planes():
    one = bernstein_apply(Constant2(SQ, 1.0), (8, 8))
    plane = Polynomial2(SQ, [[0.25, -1.0], [2.0, 0.0]])
    plane_img = bernstein_apply(plane, (5, 7))
    rng = np.random.default_rng(7)
    xs = rng.uniform(0.0, 1.0, 200)
    ys = rng.uniform(0.0, 1.0, 200)
    assert np.max(np.abs(one._eval(xs, ys) - 1.0)) <= 1e-13
    assert np.max(np.abs(plane_img._eval(xs, ys) - plane._eval(xs, ys))) <= 1e-13


def test_lattice_interpolation_at_corners():
    f = seeded_trig_field2(SQ, 3)
    image = bernstein_apply(f, (5, 5))
    for x, y in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]:
        assert image(x, y) == pytest.approx(f(x, y), abs=1e-14)


def test_sup_error_decreases_with_degree():
    f = Trig2(SQ, [(1.0, 2, 1, 0.3, 0.8)])
    errs = []
    for deg in (10, 20, 40):
        image = bernstein_apply(f, (deg, deg))
        gap = sample(f, 257, 257).values - sample(image, 257, 257).values
        errs.append(np.max(np.abs(gap)))
    assert errs[0] > errs[1] > errs[2]


def test_degree_cap_and_validation():
    f = Constant2(SQ, 1.0)
    with pytest.raises(ValueError):
        bernstein_apply(f, (0, 4))
    with pytest.raises(ValueError):
        bernstein_apply(f, (MAX_DEGREE + 1, 4))
    img = bernstein_apply(f, (MAX_DEGREE, 1))
    assert img(0.5, 0.5) == pytest.approx(1.0)


def test_norm_probe_contract():
    probes = [seeded_trig_field2(SQ, s) for s in (1, 2, 3)]
    value = bernstein_norm_probe(probes, deg=(8, 8))
    assert value <= 1.0 + 1e-9
    with pytest.raises(ValueError):
        bernstein_norm_probe([])
    with pytest.raises(ValueError):
        bernstein_norm_probe([Constant2(SQ, 0.0)])


def test_image_is_a_field_with_lattice():
    f = seeded_trig_field2(SQ, 5)
    image = BernsteinImage2(f, 3, 4)
    assert image.lattice.shape == (5, 4)
    assert image.kind == "bernstein-image"
    # lattice[j, i] holds f at (x_i, y_j)
    assert image.lattice[2, 1] == pytest.approx(f(1.0 / 3.0, 2.0 / 4.0))


@given(st.integers(min_value=1, max_value=64))
@settings(max_examples=30, deadline=None)
def test_partition_of_unity_any_degree(k):
    t = np.linspace(0.0, 1.0, 33)
    rows = bernstein_basis(k, t)
    assert np.max(np.abs(rows.sum(axis=1) - 1.0)) <= 1e-12


@given(st.floats(min_value=0.0, max_value=1.0),
       st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=40, deadline=None)
def test_image_within_lattice_range(x, y):
    # positivity + partition of unity pins the image inside the lattice range
    f = seeded_trig_field2(SQ, 21)
    image = bernstein_apply(f, (6, 6))
    lo, hi = image.lattice.min(), image.lattice.max()
    assert lo - 1e-12 <= image(x, y) <= hi + 1e-12
