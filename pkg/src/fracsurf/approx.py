"""Dimension-aware approximation on rectangles.

Three epsilon-driven constructors (dense, nonnegative, one-sided-below)
follow the same recipe: smooth the target with the lowest-degree Bernstein
polynomial that lands within eps/2, then add a scaled fractal seed whose
sup-norm contribution is exactly eps/2.  The seed keeps its graph roughness
(adding a Lipschitz function does not move the box-counting estimate), so
the output approximates the target while inheriting the seed's dimension.
A fourth constructor handles mixed-monotone (convexity-type) targets by
approximating the given mixed derivative and integrating it back.

Best one-sided approximation from below over a small basis is solved as a
linear program on a constraint grid (a grid relaxation of the continuum
problem) with the bundled deterministic simplex.  The mirrored
from-above problem is omitted; it is the same program with f negated.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np
from scipy.integrate import trapezoid

from .bernstein import MAX_DEGREE, bernstein_apply
from .errors import ApproximationError, NumericError
from .field import (
    AffineCombination2,
    Field2D,
    Shifted2,
    SUP_NORM_RESOLUTION,
    iterated_integral,
    sample,
    sup_norm,
)
from .simplex import solve_lp_max

DEGREE_SCHEDULE = (2, 4, 8, 16, 32, 64, 128, 256, 512)
LP_GRID_RES = 33
LP_FEAS_TOL = 1e-9
GRAM_COND_LIMIT = 1e10
EDGE_TOL = 1e-9

__all__ = [
    "ApproxRequest",
    "BasisSet",
    "OneSidedSolution",
    "dense_approximant",
    "nonnegative_approximant",
    "lower_approximant",
    "upper_approximant",
    "convex_approximant",
    "make_basis",
    "best_one_sided_below",
]


@dataclass(frozen=True)
class ApproxRequest:
    """Target field, accuracy budget, and the fractal seed to blend in.

    The seed must be a nonvanishing catalog field on the target's domain
    (typically a lifted Weierstrass-type series or a solved fractal surface
    wrapped as a grid field); its graph dimension is what the output
    inherits.  degree_schedule is the Bernstein ladder tried in order.
    """

    target: Field2D
    epsilon: float
    seed: Field2D
    degree_schedule: tuple = DEGREE_SCHEDULE
    norm_resolution: int = SUP_NORM_RESOLUTION

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.target.domain != self.seed.domain:
            raise ValueError("seed and target must share a domain")
        degs = tuple(int(d) for d in self.degree_schedule)
        if not degs or any(d < 1 or d > MAX_DEGREE for d in degs):
            raise ValueError(f"degrees must lie in 1..{MAX_DEGREE}")
        if any(b <= a for a, b in zip(degs, degs[1:])):
            raise ValueError("degree schedule must increase")
        object.__setattr__(self, "degree_schedule", degs)
        if self.norm_resolution < 2:
            raise ValueError("norm_resolution must be >= 2")


def _fit_bernstein(target, half_eps, schedule, res):
    """Lowest scheduled degree whose Bernstein image is within half_eps
    of the target on the decision grid (strictly)."""
    f_grid = sample(target, res, res).values
    best_gap = np.inf
    for deg in schedule:
        smooth = bernstein_apply(target, (deg, deg))
        gap = float(np.max(np.abs(f_grid - sample(smooth, res, res).values)))
        if gap < half_eps:
            return smooth, gap, deg
        best_gap = min(best_gap, gap)
    raise ApproximationError(
        f"degree schedule exhausted at gap {best_gap:.3e} "
        f"(needed < {half_eps:.3e})",
        best_achieved=best_gap)


def dense_approximant(req: ApproxRequest) -> Field2D:
    """Approximant within epsilon of the target carrying the seed's roughness.

    Returns the exact affine combination g + (eps/(2*|seed|)) * seed, where g
    is the fitted Bernstein image; the sampled distance to the target stays
    below epsilon on the decision grid.  The result carries a ``build_info``
    dict (degree, smooth gap, seed coefficient).

    Raises
    ------
    ApproximationError
        No scheduled degree reaches eps/2; carries the best gap achieved.
    """
    res = req.norm_resolution
    seed_sup = sup_norm(req.seed, res)
    if seed_sup == 0.0:
        raise ValueError("seed field vanishes on the sample grid")
    smooth, gap, deg = _fit_bernstein(
        req.target, 0.5 * req.epsilon, req.degree_schedule, res)
    coeff = req.epsilon / (2.0 * seed_sup)
    out = AffineCombination2([smooth, req.seed], [1.0, coeff])
    out.build_info = {
        "degree": deg,
        "smooth_gap": gap,
        "seed_coefficient": coeff,
        "epsilon": req.epsilon,
    }
    return out


def nonnegative_approximant(req: ApproxRequest) -> Field2D:
    """Nonnegative approximant within epsilon of a nonnegative target.

    Builds the dense approximant at half the budget and lifts it by eps/2,
    which clears the target from below at every decision-grid node.
    """
    res = req.norm_resolution
    f_min = float(np.min(sample(req.target, res, res).values))
    if f_min < -1e-12:
        raise ValueError(
            f"target dips to {f_min:.3e} on the check grid; "
            "nonnegative approximation needs f >= 0")
    half = ApproxRequest(req.target, 0.5 * req.epsilon, req.seed,
                         req.degree_schedule, req.norm_resolution)
    near = dense_approximant(half)
    out = Shifted2(near, 0.5 * req.epsilon)
    out.build_info = dict(near.build_info, shift=0.5 * req.epsilon,
                          epsilon=req.epsilon)
    return out


def lower_approximant(req: ApproxRequest) -> Field2D:
    """Approximant within epsilon that never exceeds the target (grid-checked)."""
    half = ApproxRequest(req.target, 0.5 * req.epsilon, req.seed,
                         req.degree_schedule, req.norm_resolution)
    near = dense_approximant(half)
    out = Shifted2(near, -0.5 * req.epsilon)
    out.build_info = dict(near.build_info, shift=-0.5 * req.epsilon,
                          epsilon=req.epsilon)
    return out


def upper_approximant(req: ApproxRequest) -> Field2D:
    """Mirror of lower_approximant: stays at or above the target."""
    half = ApproxRequest(req.target, 0.5 * req.epsilon, req.seed,
                         req.degree_schedule, req.norm_resolution)
    near = dense_approximant(half)
    out = Shifted2(near, 0.5 * req.epsilon)
    out.build_info = dict(near.build_info, shift=0.5 * req.epsilon,
                          epsilon=req.epsilon)
    return out


def convex_approximant(target: Field2D, mixed_deriv: Field2D, m: int, n: int,
                       epsilon: float, seed: Field2D,
                       degree_schedule=DEGREE_SCHEDULE,
                       norm_resolution: int = SUP_NORM_RESOLUTION) -> Field2D:
    """Approximant preserving the sign of the order-(m, n) mixed derivative.

    The caller supplies the target's mixed derivative as a field (nothing is
    differentiated symbolically here).  The derivative is approximated to
    epsilon scaled down by the domain-width powers, then integrated back m
    times in x and n times in y.  Needs the target to vanish on the x=a and
    y=c edges, as the integral representation does.
    """
    if m < 1 or n < 1:
        raise ValueError("derivative orders must be >= 1")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    d = target.domain
    edge = np.linspace(0.0, 1.0, 257)
    left = np.abs(np.asarray(
        target._eval(np.full(257, d.a), d.c + edge * d.width_y), float))
    bottom = np.abs(np.asarray(
        target._eval(d.a + edge * d.width_x, np.full(257, d.c)), float))
    worst_edge = max(float(np.max(left)), float(np.max(bottom)))
    if worst_edge > EDGE_TOL:
        raise ValueError(
            f"target must vanish on the x=a and y=c edges "
            f"(found {worst_edge:.3e})")
    scaled = epsilon / (d.width_x ** m * d.width_y ** n)
    near = dense_approximant(ApproxRequest(
        mixed_deriv, scaled, seed, degree_schedule, norm_resolution))
    out = iterated_integral(near, m, n)
    out.build_info = dict(near.build_info, orders=(m, n),
                          scaled_epsilon=scaled, epsilon=epsilon)
    return out


# --------------------------------------------------------------------------
# Best one-sided approximation from below

@dataclass(frozen=True)
class BasisSet:
    """Basis fields with precomputed rectangle integrals.

    Independence is certified at construction: the Gram matrix of grid
    samples must have condition number below 1e10.
    """

    fields: tuple
    integrals: tuple
    resolution: int


def make_basis(fields, resolution: int = 129) -> BasisSet:
    """Build a BasisSet, integrating each field by the trapezoid rule."""
    fields = tuple(fields)
    if not fields:
        raise ValueError("basis needs at least one field")
    dom = fields[0].domain
    for g in fields[1:]:
        if g.domain != dom:
            raise ValueError("basis fields must share a domain")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    xs = np.linspace(dom.a, dom.b, resolution)
    ys = np.linspace(dom.c, dom.d, resolution)
    grids = [sample(g, resolution, resolution).values for g in fields]
    integrals = tuple(
        float(trapezoid(trapezoid(v, xs, axis=1), ys)) for v in grids)
    flat = np.stack([v.ravel() for v in grids])
    gram = flat @ flat.T
    cond = float(np.linalg.cond(gram))
    if not cond < GRAM_COND_LIMIT:
        raise ValueError(
            f"basis is numerically dependent (Gram condition {cond:.3e})")
    return BasisSet(fields=fields, integrals=integrals, resolution=resolution)


@dataclass(frozen=True)
class OneSidedSolution:
    """LP optimum for best approximation from below on the constraint grid."""

    coefficients: tuple
    objective: float
    grid_resolution: int
    max_violation: float
    feas_tol: float


def best_one_sided_below(target: Field2D, basis: BasisSet,
                         grid_res: int = LP_GRID_RES,
                         feas_tol: float = LP_FEAS_TOL) -> OneSidedSolution:
    """Maximize the integral of a basis combination staying below the target.

    The continuum constraint h <= f is relaxed to the nodes of a uniform
    grid_res-by-grid_res grid, so coarser grids can only enlarge the
    feasible set (objective nondecreasing as the grid coarsens).  Free
    coefficients are split into positive and negative parts for the
    simplex; Bland's rule keeps the optimum deterministic.

    Raises
    ------
    UnboundedError
        The basis can grow without touching the target on the grid.
    """
    if grid_res < 16:
        raise ValueError("grid_res must be >= 16 per axis")
    for g in basis.fields:
        if g.domain != target.domain:
            raise ValueError("basis and target domains differ")
    n = len(basis.fields)
    columns = [
        sample(g, grid_res, grid_res).values.ravel() for g in basis.fields]
    lhs_pos = np.stack(columns, axis=1)
    rhs = sample(target, grid_res, grid_res).values.ravel()
    # c free: write c = u - v with u, v >= 0.
    lhs = np.hstack([lhs_pos, -lhs_pos])
    weights = np.asarray(basis.integrals)
    split_obj = np.concatenate([weights, -weights])
    z, _ = solve_lp_max(split_obj, lhs, rhs)
    coeffs = z[:n] - z[n:]
    objective = float(weights @ coeffs)
    violation = float(np.max(lhs_pos @ coeffs - rhs))
    if violation > feas_tol:
        raise NumericError(
            f"simplex returned an infeasible point (violation {violation:.3e})")
    return OneSidedSolution(
        coefficients=tuple(float(c) for c in coeffs),
        objective=objective,
        grid_resolution=grid_res,
        max_violation=violation,
        feas_tol=feas_tol,
    )
