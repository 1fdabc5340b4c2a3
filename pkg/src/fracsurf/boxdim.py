"""Box-counting dimension of function graphs.

Counting uses the column formula: partition the domain into delta-cells,
and for each cell stack ceil(osc/delta) + 1 boxes, where osc is the spread
of the sampled values over the closed cell (boundary samples shared with
the neighbors).  That is exact for graphs of continuous functions and needs
no voxel marking.  Counts are nondecreasing as delta halves because the
spread over a cell is at most the summed spreads over its children.

The slope of log N against log(1/delta) over a dyadic scale schedule is the
dimension estimate, reported with ordinary-least-squares diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .field import Field1D, Field2D, GridSample, LineSample, sample, sample1

# Dyadic defaults: 2**k cells per axis, k in the inclusive range below.
DYADIC_2D = (3, 9)
DYADIC_1D = (4, 14)
# Default sampling resolutions used by dim_graph (points per axis).
RESOLUTION_2D = 2049
RESOLUTION_1D = 65537
# A delta must divide the domain width this tightly to count as aligned.
ALIGN_TOL = 1e-12
# Minimum sample intervals per delta-cell per axis.
MIN_FILL = 3

__all__ = [
    "ScaleSchedule",
    "DimensionEstimate",
    "box_count_graph",
    "estimate_dim",
    "dim_sample",
    "dim_graph",
]


@dataclass(frozen=True)
class ScaleSchedule:
    """Strictly decreasing cell sizes used for one regression."""

    deltas: tuple

    def __post_init__(self):
        d = tuple(float(v) for v in self.deltas)
        if len(d) < 3:
            raise ValueError("need at least 3 scales")
        if any(v <= 0 for v in d):
            raise ValueError("scales must be positive")
        if any(d[i + 1] >= d[i] for i in range(len(d) - 1)):
            raise ValueError("scales must be strictly decreasing")
        object.__setattr__(self, "deltas", d)

    @classmethod
    def dyadic(cls, width: float, k_min: int, k_max: int) -> "ScaleSchedule":
        """Scales width/2**k for k = k_min..k_max inclusive."""
        if k_max < k_min:
            raise ValueError("k_max must be >= k_min")
        return cls(tuple(width / 2 ** k for k in range(k_min, k_max + 1)))


@dataclass(frozen=True)
class DimensionEstimate:
    """OLS fit of log N(delta) against log(1/delta)."""

    scales: tuple
    counts: tuple
    slope: float
    intercept: float
    r2: float
    ci_half_width: float


def _cells_along(width: float, delta: float, n_points: int, axis: str) -> int:
    ncells = int(round(width / delta))
    if ncells < 1 or abs(width - ncells * delta) > ALIGN_TOL * max(1.0, width):
        raise ValueError(
            f"delta {delta:g} does not divide the {axis} width {width:g}")
    if (n_points - 1) % ncells != 0:
        raise ValueError(
            f"delta {delta:g} is not aligned with the {axis} sample grid "
            f"({n_points} points, {ncells} cells)")
    if (n_points - 1) // ncells < MIN_FILL:
        raise ValueError(
            f"sample too coarse for delta {delta:g}: need at least "
            f"{MIN_FILL} intervals per cell on the {axis} axis")
    return ncells


def _block_extrema(values, ncells, axis):
    """Per-closed-cell max and min along one axis (boundary samples shared)."""
    v = np.moveaxis(values, axis, -1)
    per = (v.shape[-1] - 1) // ncells
    body = v[..., :-1].reshape(v.shape[:-1] + (ncells, per))
    right = v[..., per::per]
    vmax = np.maximum(body.max(axis=-1), right)
    vmin = np.minimum(body.min(axis=-1), right)
    return np.moveaxis(vmax, -1, axis), np.moveaxis(vmin, -1, axis)


def box_count_graph(sampled, delta: float) -> int:
    """Number of delta-boxes meeting the sampled graph (column formula).

    ``sampled`` is a GridSample (surface graph in 3-space) or a LineSample
    (curve graph in the plane).  delta must divide the domain width(s) and
    leave at least 3 sample intervals per cell per axis.
    """
    delta = float(delta)
    if not delta > 0:
        raise ValueError("delta must be positive")
    if isinstance(sampled, GridSample):
        d = sampled.domain
        ncx = _cells_along(d.width_x, delta, sampled.nx, "x")
        ncy = _cells_along(d.width_y, delta, sampled.ny, "y")
        vmax, vmin = _block_extrema(sampled.values, ncx, axis=1)
        vmax, _ = _block_extrema(vmax, ncy, axis=0)
        _, vmin = _block_extrema(vmin, ncy, axis=0)
        osc = vmax - vmin
    elif isinstance(sampled, LineSample):
        ncx = _cells_along(sampled.domain.width, delta, sampled.n, "x")
        vmax, vmin = _block_extrema(sampled.values, ncx, axis=0)
        osc = vmax - vmin
    else:
        raise TypeError("sampled must be a GridSample or a LineSample")
    return int(np.sum(np.ceil(osc / delta).astype(np.int64) + 1))


def estimate_dim(scales, counts) -> DimensionEstimate:
    """OLS regression of log counts on log(1/delta) with a 95% half-width."""
    if isinstance(scales, ScaleSchedule):
        deltas = scales.deltas
    else:
        deltas = tuple(float(v) for v in scales)
    counts = tuple(
        int(v) if float(v).is_integer() else float(v) for v in counts)
    if len(deltas) != len(counts):
        raise ValueError("scales and counts must have equal length")
    if len(deltas) < 3:
        raise ValueError("need at least 3 scales")
    if any(c <= 0 for c in counts):
        raise ValueError("counts must be positive")
    x = np.log(1.0 / np.asarray(deltas))
    y = np.log(np.asarray(counts, dtype=float))
    fit = stats.linregress(x, y)
    if not math.isfinite(fit.slope):
        raise ValueError("regression slope is not finite")
    half = float(stats.t.ppf(0.975, len(deltas) - 2) * fit.stderr)
    return DimensionEstimate(
        scales=deltas,
        counts=counts,
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r2=float(fit.rvalue) ** 2,
        ci_half_width=half,
    )


def _default_schedule(sampled) -> ScaleSchedule:
    """Largest dyadic sub-range of the defaults this sample can support."""
    if isinstance(sampled, GridSample):
        k_lo, k_hi = DYADIC_2D
        width = sampled.domain.width_x
        spans = (sampled.nx - 1, sampled.ny - 1)
    else:
        k_lo, k_hi = DYADIC_1D
        width = sampled.domain.width
        spans = (sampled.n - 1,)
    ks = [
        k for k in range(k_lo, k_hi + 1)
        if all(s % 2 ** k == 0 and s // 2 ** k >= MIN_FILL for s in spans)
    ]
    if len(ks) < 3:
        raise ValueError(
            "sample resolution supports fewer than 3 dyadic scales; "
            "pass an explicit schedule")
    return ScaleSchedule.dyadic(width, min(ks), max(ks))


def dim_sample(sampled, schedule: ScaleSchedule | None = None) -> DimensionEstimate:
    """Count boxes at every scheduled scale and regress.

    With no schedule, uses the dyadic default trimmed to what the sample
    resolution supports.  2D samples must have equal widths per axis for the
    shared cubic delta (the dyadic defaults only make sense there).
    """
    if isinstance(sampled, GridSample):
        d = sampled.domain
        if schedule is None and abs(d.width_x - d.width_y) > ALIGN_TOL * max(
                1.0, d.width_x):
            raise ValueError(
                "default schedule needs a square domain; pass an explicit one")
    if schedule is None:
        schedule = _default_schedule(sampled)
    counts = [box_count_graph(sampled, delta) for delta in schedule.deltas]
    return estimate_dim(schedule, counts)


def dim_graph(field, schedule: ScaleSchedule | None = None,
              resolution: int | None = None) -> DimensionEstimate:
    """Sample a field and estimate its graph's box dimension.

    resolution is the point count per axis; defaults to 2049 for rectangle
    fields and 65537 for interval fields.
    """
    if isinstance(field, Field2D):
        res = RESOLUTION_2D if resolution is None else int(resolution)
        sampled = sample(field, res, res)
    elif isinstance(field, Field1D):
        res = RESOLUTION_1D if resolution is None else int(resolution)
        sampled = sample1(field, res)
    else:
        raise TypeError("field must be a Field1D or a Field2D")
    return dim_sample(sampled, schedule)
