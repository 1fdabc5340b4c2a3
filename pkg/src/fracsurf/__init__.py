"""Fractal interpolation surfaces on rectangles, with Bernstein smoothing,
box-counting dimension estimation, and constrained polynomial approximation."""

from .errors import (
    FracsurfError,
    DomainError,
    NumericError,
    AdmissibilityError,
    ConvergenceError,
    ApproximationError,
    UnboundedError,
    InfeasibleError,
    SpecError,
)
from .field import (
    Domain1D,
    Domain2D,
    GridSample,
    LineSample,
    sample,
    sample1,
    lift_sum,
    cumulative_integral2,
    iterated_integral,
    mixed_partial,
    mixed_partial_mn,
    sup_norm,
)
from .bernstein import bernstein_apply, bernstein_norm_probe
from .fif import (
    FractalSurface,
    FractalSurfaceSpec,
    Net,
    fractal_operator,
    make_net,
    solve_fractal_surface,
)
from .boxdim import ScaleSchedule, dim_graph, dim_sample, estimate_dim
from .approx import (
    ApproxRequest,
    best_one_sided_below,
    dense_approximant,
    lower_approximant,
    make_basis,
    nonnegative_approximant,
    upper_approximant,
)
from .mvops import FamilySelector, PropertyReport

__version__ = "0.1.0"
