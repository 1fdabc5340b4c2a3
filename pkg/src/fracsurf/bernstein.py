"""Tensor-product Bernstein operator on rectangle fields.

The operator samples a field at the uniform (m+1)-by-(n+1) lattice and
returns the polynomial that blends those samples with Bernstein weights per
axis.  It is positive, fixes constants, reproduces linear functions, never
amplifies the sup-norm, and reproduces the four corner values exactly.
"""

from __future__ import annotations

import numpy as np

from .field import Array, Field2D, SUP_NORM_RESOLUTION, sup_norm

MAX_DEGREE = 512

__all__ = ["MAX_DEGREE", "bernstein_basis", "BernsteinImage2",
           "bernstein_apply", "bernstein_norm_probe"]


def bernstein_basis(k: int, t: Array) -> Array:
    """All k+1 Bernstein basis polynomials of degree k at points t in [0, 1].

    Returns shape (len(t), k+1), column i holding C(k,i) t^i (1-t)^(k-i).
    Built by the degree-raising recurrence (no binomial coefficients), which
    keeps every entry in [0, 1] and the row sums within a few ulps of 1; rows
    at t=0 and t=1 are exactly one-hot.
    """
    if k < 0:
        raise ValueError("basis degree must be >= 0")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.ndim != 1:
        raise ValueError("basis points must be a flat array")
    omt = 1.0 - t
    b = np.ones((t.size, 1))
    for level in range(1, k + 1):
        nb = np.empty((t.size, level + 1))
        nb[:, 0] = omt * b[:, 0]
        nb[:, level] = t * b[:, level - 1]
        if level > 1:
            nb[:, 1:level] = omt[:, None] * b[:, 1:level] + t[:, None] * b[:, :level - 1]
        b = nb
    return b


class BernsteinImage2(Field2D):
    """The polynomial image of a field under the (m, n) Bernstein operator."""

    kind = "bernstein-image"

    def __init__(self, base: Field2D, m: int, n: int):
        if m < 1 or n < 1:
            raise ValueError(f"degrees must be >= 1, got ({m}, {n})")
        if m > MAX_DEGREE or n > MAX_DEGREE:
            raise ValueError(
                f"degrees capped at {MAX_DEGREE} per axis, got ({m}, {n})")
        super().__init__(base.domain)
        self.base = base
        self.m = int(m)
        self.n = int(n)
        d = base.domain
        xs = np.linspace(d.a, d.b, self.m + 1)
        ys = np.linspace(d.c, d.d, self.n + 1)
        lat = np.asarray(base._eval(xs[None, :], ys[:, None]), float)
        # lattice[j, i] = base(x_i, y_j), shape (n+1, m+1)
        self.lattice = np.broadcast_to(lat, (self.n + 1, self.m + 1)).copy()

    def _tx(self, x):
        d = self.domain
        return np.clip((np.asarray(x, float) - d.a) / d.width_x, 0.0, 1.0)

    def _ty(self, y):
        d = self.domain
        return np.clip((np.asarray(y, float) - d.c) / d.width_y, 0.0, 1.0)

    def _eval(self, x, y):
        xs = np.asarray(x, float)
        ys = np.asarray(y, float)
        separable = (
            xs.ndim == 2 and ys.ndim == 2
            and xs.shape[0] == 1 and ys.shape[1] == 1
        )
        if separable:
            # Outer-product grid: two small basis matrices and one matmul.
            bx = bernstein_basis(self.m, self._tx(xs[0, :]))
            by = bernstein_basis(self.n, self._ty(ys[:, 0]))
            return by @ self.lattice @ bx.T
        shape = np.broadcast_shapes(xs.shape, ys.shape)
        xb = np.broadcast_to(xs, shape).ravel()
        yb = np.broadcast_to(ys, shape).ravel()
        bx = bernstein_basis(self.m, self._tx(xb))
        by = bernstein_basis(self.n, self._ty(yb))
        out = np.einsum("pj,ji,pi->p", by, self.lattice, bx)
        return out.reshape(shape)


def bernstein_apply(f: Field2D, deg) -> BernsteinImage2:
    """Apply the tensor Bernstein operator of degrees deg=(m, n) to f.

    Samples f only at the (m+1)(n+1) lattice nodes.  Degrees above
    MAX_DEGREE per axis are rejected.
    """
    m, n = int(deg[0]), int(deg[1])
    return BernsteinImage2(f, m, n)


def bernstein_norm_probe(probes, deg=(8, 8),
                         resolution: int = SUP_NORM_RESOLUTION) -> float:
    """Max over probes of sup_norm(Bf) / sup_norm(f) at the given degrees.

    Positivity plus constant fixation force the true ratio <= 1; the sampled
    estimate can only round that off, so the result stays below 1 + 1e-9.
    Probes with vanishing sup-norm estimate are rejected.
    """
    probes = list(probes)
    if not probes:
        raise ValueError("need at least one probe field")
    worst = 0.0
    for f in probes:
        denom = sup_norm(f, resolution)
        if denom == 0.0:
            raise ValueError("probe field is identically zero on the sample grid")
        num = sup_norm(bernstein_apply(f, deg), resolution)
        worst = max(worst, num / denom)
    return worst
