"""Scalar fields on intervals and rectangles.

Every other module consumes the field catalog defined here: polynomials and
trigonometric sums, Weierstrass-type series, Lipschitz lifts w(x)+y,
cumulative/iterated integrals, grid-backed fields with bilinear read-out, and
affine combinations of all of the above.  Fields come from this closed set of
constructors (no arbitrary code injection) so they stay serializable and
deterministic: the same inputs give bit-identical output within one build.

Fields are immutable after construction and evaluate through numpy
broadcasting, so ``f(xs[None, :], ys[:, None])`` fills a grid in one call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import DomainError, NumericError

Array = np.ndarray

TWO_PI = 2.0 * math.pi

# Default sampling density for sup-norm estimates (per axis).
SUP_NORM_RESOLUTION = 1025
# Default internal quadrature grid for cumulative integrals (per axis).
QUADRATURE_RESOLUTION = 513
# Default relative finite-difference step (times the domain width per axis).
FD_RELATIVE_STEP = 1e-3

__all__ = [
    "Domain1D",
    "Domain2D",
    "GridSample",
    "LineSample",
    "Field1D",
    "Field2D",
    "Constant1",
    "Constant2",
    "Polynomial1",
    "Polynomial2",
    "Trig1",
    "Trig2",
    "ShenSeries1",
    "MWSeries1",
    "Lifted2",
    "CumulativeIntegral2",
    "IteratedIntegral2",
    "SampledGrid2",
    "AffineCombination1",
    "AffineCombination2",
    "Shifted1",
    "Shifted2",
    "sample",
    "sample1",
    "lift_sum",
    "cumulative_integral2",
    "iterated_integral",
    "mixed_partial",
    "mixed_partial_mn",
    "sup_norm",
    "seeded_trig_field1",
    "seeded_trig_field2",
]


# --------------------------------------------------------------------------
# Domains

@dataclass(frozen=True)
class Domain1D:
    """Closed interval [a, b]."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("domain endpoints must be finite")
        if not self.a < self.b:
            raise ValueError(f"domain requires a < b, got [{self.a}, {self.b}]")

    @property
    def width(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class Domain2D:
    """Closed rectangle [a, b] x [c, d]."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for v in (self.a, self.b, self.c, self.d):
            if not math.isfinite(v):
                raise ValueError("domain endpoints must be finite")
        if not (self.a < self.b and self.c < self.d):
            raise ValueError(
                f"domain requires a < b and c < d, got "
                f"[{self.a}, {self.b}] x [{self.c}, {self.d}]"
            )

    @property
    def width_x(self) -> float:
        return self.b - self.a

    @property
    def width_y(self) -> float:
        return self.d - self.c

    @property
    def interval_x(self) -> Domain1D:
        return Domain1D(self.a, self.b)

    @property
    def interval_y(self) -> Domain1D:
        return Domain1D(self.c, self.d)


def _check_range(name, t, lo, hi, width):
    # Allow a hair of slack so round-tripped boundary points do not trip.
    slack = 1e-9 * width
    t = np.asarray(t, dtype=float)
    if np.any(t < lo - slack) or np.any(t > hi + slack):
        bad = t[(t < lo - slack) | (t > hi + slack)]
        raise DomainError(
            f"{name}={float(bad.flat[0]):g} outside [{lo:g}, {hi:g}]",
            point=float(bad.flat[0]),
        )
    return t


# --------------------------------------------------------------------------
# Samples

@dataclass(frozen=True)
class GridSample:
    """Uniform rectangular sample of a 2D field.

    ``values`` has shape (ny, nx): row j holds f(x_0..x_{nx-1}, y_j) with
    x_k = a + k(b-a)/(nx-1), so the flattened array is row-major with x
    varying fastest.
    """

    domain: Domain2D
    nx: int
    ny: int
    values: Array

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("GridSample needs nx, ny >= 2")
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.ny, self.nx):
            raise ValueError(
                f"values shape {v.shape} does not match (ny, nx)=({self.ny}, {self.nx})"
            )
        if not np.all(np.isfinite(v)):
            j, k = np.argwhere(~np.isfinite(v))[0]
            raise NumericError(
                "non-finite sample value",
                point=(self.x_nodes()[k], self.y_nodes()[j]),
            )
        object.__setattr__(self, "values", v)

    def x_nodes(self) -> Array:
        return np.linspace(self.domain.a, self.domain.b, self.nx)

    def y_nodes(self) -> Array:
        return np.linspace(self.domain.c, self.domain.d, self.ny)


@dataclass(frozen=True)
class LineSample:
    """Uniform sample of a 1D field (graph lives in the plane)."""

    domain: Domain1D
    n: int
    values: Array

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("LineSample needs n >= 2")
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.n,):
            raise ValueError(f"values shape {v.shape} does not match (n,)=({self.n},)")
        if not np.all(np.isfinite(v)):
            k = int(np.argwhere(~np.isfinite(v))[0])
            raise NumericError("non-finite sample value", point=self.x_nodes()[k])
        object.__setattr__(self, "values", v)

    def x_nodes(self) -> Array:
        return np.linspace(self.domain.a, self.domain.b, self.n)


# --------------------------------------------------------------------------
# Field base classes

class Field1D:
    """Scalar field on an interval; subclasses implement _eval."""

    kind = "abstract"

    def __init__(self, domain: Domain1D):
        self.domain = domain

    def _eval(self, x):
        raise NotImplementedError

    def __call__(self, x):
        x = _check_range("x", x, self.domain.a, self.domain.b, self.domain.width)
        out = self._eval(x)
        if np.ndim(out) == 0:
            return float(out)
        return out


class Field2D:
    """Scalar field on a rectangle; subclasses implement _eval."""

    kind = "abstract"

    def __init__(self, domain: Domain2D):
        self.domain = domain

    def _eval(self, x, y):
        raise NotImplementedError

    def __call__(self, x, y):
        d = self.domain
        x = _check_range("x", x, d.a, d.b, d.width_x)
        y = _check_range("y", y, d.c, d.d, d.width_y)
        out = self._eval(x, y)
        if np.ndim(out) == 0:
            return float(out)
        return out


# --------------------------------------------------------------------------
# Elementary kinds

class Constant1(Field1D):
    kind = "constant"

    def __init__(self, domain, value):
        super().__init__(domain)
        self.value = float(value)

    def _eval(self, x):
        return np.full(np.shape(x), self.value)


class Constant2(Field2D):
    kind = "constant"

    def __init__(self, domain, value):
        super().__init__(domain)
        self.value = float(value)

    def _eval(self, x, y):
        shape = np.broadcast_shapes(np.shape(x), np.shape(y))
        return np.full(shape, self.value)


class Polynomial1(Field1D):
    """sum_i coeffs[i] * x**i."""

    kind = "polynomial"

    def __init__(self, domain, coeffs):
        super().__init__(domain)
        self.coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if self.coeffs.ndim != 1:
            raise ValueError("1D polynomial needs a flat coefficient array")

    def _eval(self, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs)


class Polynomial2(Field2D):
    """sum_{i,j} coeffs[i, j] * x**i * y**j."""

    kind = "polynomial"

    def __init__(self, domain, coeffs):
        super().__init__(domain)
        self.coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if self.coeffs.ndim != 2:
            raise ValueError("2D polynomial needs a 2D coefficient array")

    def _eval(self, x, y):
        # polyval2d wants equal shapes, so broadcast explicitly.
        xb, yb = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        return np.polynomial.polynomial.polyval2d(xb, yb, self.coeffs)


class Trig1(Field1D):
    """sum of amp * sin(pi*k*t + phase) with t the normalized coordinate.

    t = (x - a)/(b - a), so on [0, 1] a term (1, 1, 0) is sin(pi x).
    """

    kind = "trig"

    def __init__(self, domain, terms):
        super().__init__(domain)
        self.terms = tuple((float(a), float(k), float(p)) for a, k, p in terms)
        if not self.terms:
            raise ValueError("trig field needs at least one term")

    def _eval(self, x):
        t = (np.asarray(x, float) - self.domain.a) / self.domain.width
        out = np.zeros(np.shape(t))
        for amp, k, phase in self.terms:
            out = out + amp * np.sin(math.pi * k * t + phase)
        return out


class Trig2(Field2D):
    """sum of amp * sin(pi*kx*tx + px) * sin(pi*ky*ty + py), normalized coords."""

    kind = "trig"

    def __init__(self, domain, terms):
        super().__init__(domain)
        self.terms = tuple(
            (float(a), float(kx), float(ky), float(px), float(py))
            for a, kx, ky, px, py in terms
        )
        if not self.terms:
            raise ValueError("trig field needs at least one term")

    def _eval(self, x, y):
        d = self.domain
        tx = (np.asarray(x, float) - d.a) / d.width_x
        ty = (np.asarray(y, float) - d.c) / d.width_y
        out = np.zeros(np.broadcast_shapes(np.shape(tx), np.shape(ty)))
        for amp, kx, ky, px, py in self.terms:
            out = out + amp * (
                np.sin(math.pi * kx * tx + px) * np.sin(math.pi * ky * ty + py)
            )
        return out


# --------------------------------------------------------------------------
# Base waves for the Weierstrass-type series

def _wave_cos(t):
    return np.cos(TWO_PI * np.mod(t, 1.0))


def _wave_tri(t):
    # 1-periodic triangle wave with range [-1, 1]; Lipschitz constant 4.
    return 1.0 - 4.0 * np.abs(np.mod(t, 1.0) - 0.5)


# name -> (callable, sup, Lipschitz constant)
BASE_WAVES = {
    "cos": (_wave_cos, 1.0, TWO_PI),
    "tri": (_wave_tri, 1.0, 4.0),
}


def _get_wave(name):
    try:
        return BASE_WAVES[name]
    except KeyError:
        raise ValueError(f"unknown base wave {name!r}; choose from {sorted(BASE_WAVES)}")


class ShenSeries1(Field1D):
    """Geometric Weierstrass-type series sum_n lam**n * phi(b**n * x).

    The sum is truncated at the first index n0 whose geometric tail
    lam**n0 * sup|phi| / (1 - lam) drops below ``tol``, which bounds the
    omitted remainder by ``tol`` at every point.  With lam * b > 1 the graph
    has box-counting dimension 2 + log(lam)/log(b); ``graph_dimension_target``
    exposes that value.
    """

    kind = "weierstrass-shen"

    def __init__(self, domain, lam, b, phi="cos", tol=1e-10):
        super().__init__(domain)
        lam = float(lam)
        if not 0.0 < lam < 1.0:
            raise ValueError(f"lambda must lie in (0, 1), got {lam}")
        b = int(b)
        if b < 2:
            raise ValueError(f"b must be an integer >= 2, got {b}")
        if not tol > 0:
            raise ValueError("tol must be positive")
        self.lam = lam
        self.b = b
        self.phi_name = phi
        self.tol = float(tol)
        wave, sup, _ = _get_wave(phi)
        self._wave = wave
        # Smallest n0 with lam**n0 * sup / (1 - lam) <= tol.
        n0 = math.ceil(math.log(self.tol * (1.0 - lam) / sup) / math.log(lam))
        self.n_terms = max(1, n0)

    @property
    def sigma(self) -> float:
        """Holder exponent -log(lam)/log(b) of the series."""
        return -math.log(self.lam) / math.log(self.b)

    def graph_dimension_target(self) -> float:
        """2 + log(lam)/log(b); requires the fractal regime lam*b > 1."""
        if not self.lam * self.b > 1.0:
            raise ValueError(
                "dimension formula needs lam*b > 1, got "
                f"lam={self.lam}, b={self.b}"
            )
        return 2.0 + math.log(self.lam) / math.log(self.b)

    def _eval(self, x):
        x = np.asarray(x, float)
        out = np.zeros(np.shape(x))
        scale = 1.0
        freq = 1.0
        for _ in range(self.n_terms):
            out = out + scale * self._wave(freq * x)
            scale *= self.lam
            freq *= self.b
        return out


class MWSeries1(Field1D):
    """Two-sided phase-shifted series sum_n b**(-alpha*n) * [phi(b**n x + theta_n) - phi(theta_n)].

    Truncated symmetrically: the positive-n tail is geometric with ratio
    b**(-alpha) and bound 2*sup|phi|; the negative-n tail is geometric with
    ratio b**(-(1-alpha)) and bound Lip(phi)*max(|a|,|b|) (the terms vanish
    linearly as b**n x -> 0).  Both tails are below ``tol`` at the cutoffs.
    Phases are all zero or seeded pseudo-random in [0, 1).
    """

    kind = "weierstrass-mw"

    def __init__(self, domain, alpha_exp, b, phi="cos", theta="zero", seed=0, tol=1e-10):
        super().__init__(domain)
        alpha_exp = float(alpha_exp)
        if not 0.0 < alpha_exp < 1.0:
            raise ValueError(f"alphaExp must lie in (0, 1), got {alpha_exp}")
        b = float(b)
        if not b > 1.0:
            raise ValueError(f"b must exceed 1, got {b}")
        if theta not in ("zero", "random"):
            raise ValueError(f"theta mode must be 'zero' or 'random', got {theta!r}")
        if not tol > 0:
            raise ValueError("tol must be positive")
        self.alpha_exp = alpha_exp
        self.b = b
        self.phi_name = phi
        self.theta_mode = theta
        self.seed = int(seed)
        self.tol = float(tol)
        wave, sup, lip = _get_wave(phi)
        self._wave = wave

        def cutoff(ratio, amp):
            # Smallest k >= 1 with amp * ratio**k / (1 - ratio) <= tol.
            if amp <= tol * (1.0 - ratio):
                return 1
            k = math.log(self.tol * (1.0 - ratio) / amp) / math.log(ratio)
            return max(1, math.ceil(k))

        x_max = max(abs(domain.a), abs(domain.b))
        self.n_pos = cutoff(b ** (-alpha_exp), 2.0 * sup)
        self.n_neg = cutoff(b ** (-(1.0 - alpha_exp)), lip * max(x_max, 1e-300))
        ns = np.arange(-self.n_neg, self.n_pos)
        if theta == "random":
            rng = np.random.default_rng(self.seed)
            thetas = rng.random(ns.size)
        else:
            thetas = np.zeros(ns.size)
        self._ns = ns
        self._thetas = thetas

    def _eval(self, x):
        x = np.asarray(x, float)
        out = np.zeros(np.shape(x))
        for n, theta in zip(self._ns, self._thetas):
            weight = self.b ** (-self.alpha_exp * n)
            out = out + weight * (
                self._wave(self.b ** float(n) * x + theta) - self._wave(theta)
            )
        return out


# --------------------------------------------------------------------------
# Composite kinds

class Lifted2(Field2D):
    """h(x, y) = w(x) + y for a 1D field w; the graph dimension lifts by one."""

    kind = "lift-sum"

    def __init__(self, w: Field1D, domain_j: Domain1D):
        super().__init__(Domain2D(w.domain.a, w.domain.b, domain_j.a, domain_j.b))
        self.w = w

    def _eval(self, x, y):
        return self.w._eval(np.asarray(x, float)) + np.asarray(y, float)


def _bilinear(domain: Domain2D, values: Array, x, y):
    """Bilinear read-out of a uniform (ny, nx) value grid."""
    ny, nx = values.shape
    tx = (np.asarray(x, float) - domain.a) / domain.width_x * (nx - 1)
    ty = (np.asarray(y, float) - domain.c) / domain.width_y * (ny - 1)
    i0 = np.clip(np.floor(tx).astype(int), 0, nx - 2)
    j0 = np.clip(np.floor(ty).astype(int), 0, ny - 2)
    wx = tx - i0
    wy = ty - j0
    i0, j0, wx, wy = np.broadcast_arrays(i0, j0, wx, wy)
    v00 = values[j0, i0]
    v01 = values[j0, i0 + 1]
    v10 = values[j0 + 1, i0]
    v11 = values[j0 + 1, i0 + 1]
    lo = (1.0 - wx) * v00 + wx * v01
    hi = (1.0 - wx) * v10 + wx * v11
    return (1.0 - wy) * lo + wy * hi


class CumulativeIntegral2(Field2D):
    """f(x, y) = integral of g over [a, x] x [c, y].

    Computed once on an internal quadrature grid by composite trapezoidal
    accumulation along each axis, then read out bilinearly.  The output is
    exactly zero along x = a and y = c.  Trapezoid accumulation is exact for
    bilinear integrands, and the bilinear read-out is exact whenever the
    accumulated grid is itself bilinear between nodes.
    """

    kind = "cumulative-integral"

    def __init__(self, g: Field2D, resolution: int = QUADRATURE_RESOLUTION):
        super().__init__(g.domain)
        if resolution < 2:
            raise ValueError("quadrature resolution must be >= 2")
        self.g = g
        self.resolution = int(resolution)
        xs = np.linspace(g.domain.a, g.domain.b, self.resolution)
        ys = np.linspace(g.domain.c, g.domain.d, self.resolution)
        gv = np.asarray(g._eval(xs[None, :], ys[:, None]), float)
        gv = np.broadcast_to(gv, (self.resolution, self.resolution))
        if not np.all(np.isfinite(gv)):
            j, k = np.argwhere(~np.isfinite(gv))[0]
            raise NumericError("non-finite integrand value", point=(xs[k], ys[j]))
        acc = cumulative_trapezoid(gv, x=xs, axis=1, initial=0.0)
        acc = cumulative_trapezoid(acc, x=ys, axis=0, initial=0.0)
        self._grid = acc

    def _eval(self, x, y):
        return _bilinear(self.domain, self._grid, x, y)


class IteratedIntegral2(Field2D):
    """m-fold cumulative integral in x composed with n-fold in y.

    With m = n = 1 the result is identical to CumulativeIntegral2.
    """

    kind = "iterated-integral"

    def __init__(self, h: Field2D, m: int, n: int, resolution: int = QUADRATURE_RESOLUTION):
        super().__init__(h.domain)
        if m < 1 or n < 1:
            raise ValueError("iterated integral needs m, n >= 1")
        if resolution < 2:
            raise ValueError("quadrature resolution must be >= 2")
        self.h = h
        self.m = int(m)
        self.n = int(n)
        self.resolution = int(resolution)
        xs = np.linspace(h.domain.a, h.domain.b, self.resolution)
        ys = np.linspace(h.domain.c, h.domain.d, self.resolution)
        hv = np.asarray(h._eval(xs[None, :], ys[:, None]), float)
        hv = np.broadcast_to(hv, (self.resolution, self.resolution)).copy()
        if not np.all(np.isfinite(hv)):
            j, k = np.argwhere(~np.isfinite(hv))[0]
            raise NumericError("non-finite integrand value", point=(xs[k], ys[j]))
        for _ in range(self.m):
            hv = cumulative_trapezoid(hv, x=xs, axis=1, initial=0.0)
        for _ in range(self.n):
            hv = cumulative_trapezoid(hv, x=ys, axis=0, initial=0.0)
        self._grid = hv

    def _eval(self, x, y):
        return _bilinear(self.domain, self._grid, x, y)


class SampledGrid2(Field2D):
    """Field backed by a GridSample with bilinear read-out between nodes."""

    kind = "sampled-grid"

    def __init__(self, grid: GridSample):
        super().__init__(grid.domain)
        self.grid = grid

    def _eval(self, x, y):
        return _bilinear(self.domain, self.grid.values, x, y)


def _same_domain(d1, d2):
    return d1 == d2


class AffineCombination1(Field1D):
    kind = "affine-combination"

    def __init__(self, fields, coeffs, offset=0.0):
        if not fields:
            raise ValueError("affine combination needs at least one field")
        if len(fields) != len(coeffs):
            raise ValueError("fields and coeffs must have equal length")
        for f in fields[1:]:
            if not _same_domain(f.domain, fields[0].domain):
                raise ValueError("affine combination requires a common domain")
        super().__init__(fields[0].domain)
        self.fields = tuple(fields)
        self.coeffs = tuple(float(c) for c in coeffs)
        self.offset = float(offset)

    def _eval(self, x):
        out = np.full(np.shape(x), self.offset)
        for c, f in zip(self.coeffs, self.fields):
            out = out + c * f._eval(x)
        return out


class AffineCombination2(Field2D):
    """offset + sum_k coeffs[k] * fields[k](x, y), all on one domain."""

    kind = "affine-combination"

    def __init__(self, fields, coeffs, offset=0.0):
        if not fields:
            raise ValueError("affine combination needs at least one field")
        if len(fields) != len(coeffs):
            raise ValueError("fields and coeffs must have equal length")
        for f in fields[1:]:
            if not _same_domain(f.domain, fields[0].domain):
                raise ValueError("affine combination requires a common domain")
        super().__init__(fields[0].domain)
        self.fields = tuple(fields)
        self.coeffs = tuple(float(c) for c in coeffs)
        self.offset = float(offset)

    def _eval(self, x, y):
        shape = np.broadcast_shapes(np.shape(x), np.shape(y))
        out = np.full(shape, self.offset)
        for c, f in zip(self.coeffs, self.fields):
            out = out + c * f._eval(x, y)
        return out


class Shifted1(Field1D):
    kind = "constant-shift"

    def __init__(self, base, shift):
        super().__init__(base.domain)
        self.base = base
        self.shift = float(shift)

    def _eval(self, x):
        return self.base._eval(x) + self.shift


class Shifted2(Field2D):
    """base(x, y) + shift."""

    kind = "constant-shift"

    def __init__(self, base, shift):
        super().__init__(base.domain)
        self.base = base
        self.shift = float(shift)

    def _eval(self, x, y):
        return self.base._eval(x, y) + self.shift


# --------------------------------------------------------------------------
# Operations

def sample(field: Field2D, nx: int, ny: int) -> GridSample:
    """Evaluate ``field`` on a uniform nx-by-ny grid.

    Parameters
    ----------
    field : Field2D
    nx, ny : int
        Point counts per axis, both >= 2.

    Returns
    -------
    GridSample
        Row-major values with x varying fastest.

    Raises
    ------
    NumericError
        If any evaluation is non-finite; carries the offending point.
    """
    if nx < 2 or ny < 2:
        raise ValueError("sample needs nx, ny >= 2")
    d = field.domain
    xs = np.linspace(d.a, d.b, nx)
    ys = np.linspace(d.c, d.d, ny)
    v = np.asarray(field._eval(xs[None, :], ys[:, None]), float)
    v = np.broadcast_to(v, (ny, nx))
    return GridSample(d, nx, ny, v.copy())


def sample1(field: Field1D, n: int) -> LineSample:
    """Evaluate a 1D field on a uniform n-point grid."""
    if n < 2:
        raise ValueError("sample1 needs n >= 2")
    d = field.domain
    xs = np.linspace(d.a, d.b, n)
    v = np.asarray(field._eval(xs), float)
    v = np.broadcast_to(v, (n,))
    return LineSample(d, n, v.copy())


def lift_sum(w: Field1D, domain_j: Domain1D) -> Field2D:
    """Return h(x, y) = w(x) + y on w.domain x domain_j."""
    return Lifted2(w, domain_j)


def cumulative_integral2(g: Field2D, resolution: int = QUADRATURE_RESOLUTION) -> Field2D:
    """Return f(x, y) = integral of g over [a, x] x [c, y] (trapezoid grid)."""
    return CumulativeIntegral2(g, resolution)


def iterated_integral(h: Field2D, m: int, n: int,
                      resolution: int = QUADRATURE_RESOLUTION) -> Field2D:
    """Apply the cumulative integral m times in x and n times in y."""
    return IteratedIntegral2(h, m, n, resolution)


def mixed_partial(f: Field2D, p, h=None) -> float:
    """Central-difference estimate of the (1,1) mixed partial at p.

    Parameters
    ----------
    f : Field2D
    p : (x, y) pair, at distance >= h from the boundary per axis.
    h : float or (hx, hy), optional
        Defaults to 1e-3 times the domain width per axis.

    Returns
    -------
    float
        [f(x+hx,y+hy) - f(x+hx,y-hy) - f(x-hx,y+hy) + f(x-hx,y-hy)] / (4 hx hy).
    """
    return mixed_partial_mn(f, p, 1, 1, h)


def mixed_partial_mn(f: Field2D, p, m: int, n: int, h=None) -> float:
    """Central-difference estimate of D^(m,n) f at p.

    Uses the binomial-weighted central stencil of width m (resp. n) per axis;
    for m = n = 1 this is the classic four-point cross difference.
    """
    if m < 1 or n < 1:
        raise ValueError("derivative orders must be >= 1")
    d = f.domain
    if h is None:
        hx = FD_RELATIVE_STEP * d.width_x
        hy = FD_RELATIVE_STEP * d.width_y
    elif np.ndim(h) == 0:
        hx = hy = float(h)
    else:
        hx, hy = (float(h[0]), float(h[1]))
    if hx <= 0 or hy <= 0:
        raise ValueError("steps must be positive")
    x, y = float(p[0]), float(p[1])
    rx = 0.5 * m * hx
    ry = 0.5 * n * hy
    if not (d.a + rx <= x <= d.b - rx and d.c + ry <= y <= d.d - ry):
        raise DomainError(
            f"point ({x:g}, {y:g}) closer than the stencil radius to the boundary",
            point=(x, y),
        )
    xs = x + (0.5 * m - np.arange(m + 1)) * hx
    ys = y + (0.5 * n - np.arange(n + 1)) * hy
    wx = np.array([(-1.0) ** i * math.comb(m, i) for i in range(m + 1)])
    wy = np.array([(-1.0) ** j * math.comb(n, j) for j in range(n + 1)])
    vals = np.asarray(f._eval(xs[None, :], ys[:, None]), float)
    vals = np.broadcast_to(vals, (n + 1, m + 1))
    total = float(wy @ vals @ wx)
    return total / (hx ** m * hy ** n)


def sup_norm(field, resolution: int = SUP_NORM_RESOLUTION) -> float:
    """Max |field| over a uniform sample; a lower estimate of the sup-norm.

    ``resolution`` is the point count per axis (2D fields sample a
    resolution-squared grid).  Estimates are nondecreasing under nested
    refinement resolution -> 2*resolution - 1.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2 per axis")
    if isinstance(field, Field1D):
        return float(np.max(np.abs(sample1(field, resolution).values)))
    return float(np.max(np.abs(sample(field, resolution, resolution).values)))


# --------------------------------------------------------------------------
# Seeded catalog helpers

def seeded_trig_field1(domain: Domain1D, seed: int, terms: int = 3,
                       amplitude: float = 1.0) -> Trig1:
    """Deterministic pseudo-random trig field: integer frequencies 1..4,
    uniform phases, amplitudes normalized so their absolute sum is ``amplitude``."""
    rng = np.random.default_rng(seed)
    amps = rng.uniform(-1.0, 1.0, terms)
    amps *= amplitude / max(np.sum(np.abs(amps)), 1e-12)
    ks = rng.integers(1, 5, terms)
    phases = rng.uniform(0.0, TWO_PI, terms)
    return Trig1(domain, list(zip(amps, ks.astype(float), phases)))


def seeded_trig_field2(domain: Domain2D, seed: int, terms: int = 3,
                       amplitude: float = 1.0) -> Trig2:
    """2D analogue of seeded_trig_field1."""
    rng = np.random.default_rng(seed)
    amps = rng.uniform(-1.0, 1.0, terms)
    amps *= amplitude / max(np.sum(np.abs(amps)), 1e-12)
    kxs = rng.integers(1, 5, terms).astype(float)
    kys = rng.integers(1, 5, terms).astype(float)
    pxs = rng.uniform(0.0, TWO_PI, terms)
    pys = rng.uniform(0.0, TWO_PI, terms)
    return Trig2(domain, list(zip(amps, kxs, kys, pxs, pys)))
