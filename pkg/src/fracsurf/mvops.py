"""Finite-section property checks for families of surface operators.

A family selector enumerates related fractal-surface operators that differ
in exactly one knob: the base smoothing degree, the constant scale factor,
or the net density.  Each check solves the relevant surfaces and reports
signed margins against a claimed inequality.  Margins are in value units;
a report passes when the worst margin stays above ``-num_tol``, with
``num_tol`` pinned to ten times the solver tolerance.

These are finite-section computations: every norm is a max over the solver
grid and every family is a finite list of members, so a passing report is
evidence for the inequality on those sections, not a proof over the whole
function space.  The claimed bounds themselves (homogeneity, the Lipschitz
constant (1+q)/(1-q), the selection norm bound 1 + 2q/(1-q)) are exact for
the ideal operators, which is why honest margins hover at rounding level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import (AffineCombination2, Constant2, Domain2D, Field2D,
                    SampledGrid2, sample)
from .fif import DEFAULT_TOL, FractalSurface, Net, fractal_operator, make_net

PROBE_RESOLUTION = 257
DEFAULT_LAMBDAS = (0.5, 2.0, 7.0)
MAX_SCALE_PROBES = 16
MAX_BASE_DEGREE = 8

__all__ = [
    "FamilyMember",
    "FamilySelector",
    "PropertyReport",
    "solve_member",
    "check_process",
    "check_lipschitz",
    "norm_bound_check",
    "continuity_probe",
    "family_spread",
]


@dataclass(frozen=True)
class FamilyMember:
    """One operator in a family: germ -> solved fractal surface."""

    label: str
    degree: tuple
    alpha: float
    n_cells: int


@dataclass(frozen=True)
class FamilySelector:
    """Enumerates a one-knob family of surface operators.

    vary picks the knob: "degree" walks the base smoothing degrees,
    "scale" walks constant scale factors, "net" walks net densities.
    The other two knobs stay at their fixed_* values.  q caps |alpha|
    for every member and feeds the Lipschitz and norm-bound constants.
    """

    vary: str
    domain: Domain2D
    q: float = 0.5
    degrees: tuple = ((1, 1), (2, 2), (4, 4), (8, 8))
    alpha_values: tuple = None
    net_sizes: tuple = (2, 4, 8)
    fixed_degree: tuple = (4, 4)
    fixed_alpha: float = 0.3
    fixed_net: int = 2
    refinement: int = 32
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.vary not in ("degree", "scale", "net"):
            raise ValueError("vary must be 'degree', 'scale', or 'net'")
        if not 0.0 < self.q < 1.0:
            raise ValueError("q must lie in (0, 1)")
        degrees = tuple((int(m), int(n)) for m, n in self.degrees)
        for m, n in degrees + (tuple(int(v) for v in self.fixed_degree),):
            if not (1 <= m <= MAX_BASE_DEGREE and 1 <= n <= MAX_BASE_DEGREE):
                raise ValueError(
                    f"base degrees must lie in 1..{MAX_BASE_DEGREE}")
        object.__setattr__(self, "degrees", degrees)
        alphas = self.alpha_values
        if alphas is None:
            alphas = (-self.q, -self.q / 2.0, 0.0, self.q / 2.0, self.q)
        alphas = tuple(float(a) for a in alphas)
        if not alphas or len(alphas) > MAX_SCALE_PROBES:
            raise ValueError(
                f"scale probes must number 1..{MAX_SCALE_PROBES}")
        for a in alphas + (float(self.fixed_alpha),):
            if abs(a) > self.q:
                raise ValueError(f"scale factor {a} exceeds the cap q={self.q}")
        object.__setattr__(self, "alpha_values", alphas)
        sizes = tuple(int(v) for v in self.net_sizes)
        if not sizes or any(v < 2 for v in sizes):
            raise ValueError("net sizes must be integers >= 2")
        object.__setattr__(self, "net_sizes", sizes)
        if int(self.fixed_net) < 2:
            raise ValueError("fixed_net must be >= 2")
        if self.refinement < 1:
            raise ValueError("refinement must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def members(self):
        """The family, in deterministic order."""
        fixed_deg = tuple(int(v) for v in self.fixed_degree)
        if self.vary == "degree":
            return tuple(
                FamilyMember(f"deg{m}x{n}", (m, n), float(self.fixed_alpha),
                             int(self.fixed_net))
                for m, n in self.degrees)
        if self.vary == "scale":
            return tuple(
                FamilyMember(f"scale{a:+.4f}", fixed_deg, a,
                             int(self.fixed_net))
                for a in self.alpha_values)
        return tuple(
            FamilyMember(f"net{v}", fixed_deg, float(self.fixed_alpha), v)
            for v in self.net_sizes)

    @property
    def lipschitz_constant(self):
        """Certified Lipschitz constant (1+q)/(1-q) for every member."""
        return (1.0 + self.q) / (1.0 - self.q)

    @property
    def num_tol(self):
        return 10.0 * self.tol


@dataclass(frozen=True)
class PropertyReport:
    """Margins from one finite-section check.

    worst_margin is the most adverse signed margin over all probes; the
    check passes when it stays above -num_tol.  records holds one dict
    per probe with the member label and the quantities behind its margin.
    """

    property_name: str
    probes: int
    worst_margin: float
    passed: bool
    records: tuple
    num_tol: float
    note: str = "finite-section evidence"


def _finish(name, records, num_tol):
    margins = [r["margin"] for r in records]
    worst = float(min(margins))
    return PropertyReport(
        property_name=name,
        probes=len(records),
        worst_margin=worst,
        passed=worst >= -num_tol,
        records=tuple(records),
        num_tol=num_tol,
    )


def solve_member(sel: FamilySelector, member: FamilyMember,
                 germ: Field2D) -> FractalSurface:
    """Run one family member on a germ."""
    if germ.domain != sel.domain:
        raise ValueError("germ domain does not match the selector domain")
    net = make_net(sel.domain, member.n_cells, member.n_cells)
    alpha = Constant2(sel.domain, member.alpha)
    return fractal_operator(germ, alpha, net, deg=member.degree,
                            refinement=sel.refinement, tol=sel.tol)


def _member_grid(sel, member, f):
    res_x = sel.refinement * member.n_cells + 1
    return sample(f, res_x, res_x).values


def check_process(sel: FamilySelector, germ: Field2D,
                  lambdas=DEFAULT_LAMBDAS) -> PropertyReport:
    """Homogeneity margins: solving a scaled germ against scaling the solution.

    For each member and each factor, margin = -max|surface(lam*f) -
    lam*surface(f)| on the solver grid.  The zero germ maps to the zero
    surface exactly, and lam = 1 reproduces the base solve bit for bit
    (the solver is deterministic), so those probes cost nothing.
    """
    lambdas = tuple(float(v) for v in lambdas)
    if not lambdas:
        raise ValueError("need at least one scaling factor")
    records = []
    for member in sel.members():
        base = solve_member(sel, member, germ).values.values
        for lam in lambdas:
            scaled_germ = AffineCombination2([germ], [lam])
            scaled = solve_member(sel, member, scaled_germ).values.values
            diff = float(np.max(np.abs(scaled - lam * base)))
            records.append({
                "member": member.label,
                "factor": lam,
                "diff": diff,
                "margin": -diff,
            })
    return _finish("process", records, sel.num_tol)


def check_lipschitz(sel: FamilySelector, f: Field2D,
                    g: Field2D) -> PropertyReport:
    """Lipschitz margins: output gap against (1+q)/(1-q) times the input gap.

    Margins are L*|f-g| - |Ff-Fg| with both sup-norms taken on the member's
    solver grid, so the claim being checked is the discrete one the solver
    actually resolves.  Each record carries the achieved ratio (None when
    the inputs coincide on that grid); the tightest ratio over the family
    is the interesting number.
    """
    probe = np.abs(sample(f, PROBE_RESOLUTION, PROBE_RESOLUTION).values
                   - sample(g, PROBE_RESOLUTION, PROBE_RESOLUTION).values)
    if float(np.max(probe)) == 0.0:
        raise ValueError("fields coincide on the probe grid; pick f != g")
    lcap = sel.lipschitz_constant
    records = []
    for member in sel.members():
        sf = solve_member(sel, member, f).values.values
        sg = solve_member(sel, member, g).values.values
        lhs = float(np.max(np.abs(sf - sg)))
        denom = float(np.max(np.abs(
            _member_grid(sel, member, f) - _member_grid(sel, member, g))))
        ratio = lhs / denom if denom > 0.0 else None
        records.append({
            "member": member.label,
            "output_gap": lhs,
            "input_gap": denom,
            "ratio": ratio,
            "margin": lcap * denom - lhs,
        })
    return _finish("lipschitz", records, sel.num_tol)


def norm_bound_check(net: Net, degree, q: float, probe_fields,
                     alpha_values=None, refinement: int = 32,
                     tol: float = DEFAULT_TOL) -> PropertyReport:
    """Selection norm bound: some scale factor keeps |surface| <= bound * |germ|.

    For each probe germ the best (smallest) ratio |surface|/|germ| over the
    scale factors is taken; the margin is 1 + 2q/(1-q) minus the worst such
    best ratio.  The factor list must contain 0, whose member reproduces
    the germ itself, so the check exercises the selection argument rather
    than a single lucky operator.
    """
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie in (0, 1)")
    if alpha_values is None:
        alpha_values = (-q, -q / 2.0, 0.0, q / 2.0, q)
    alpha_values = tuple(float(a) for a in alpha_values)
    if not any(a == 0.0 for a in alpha_values):
        raise ValueError("scale factor list must include 0")
    if len(alpha_values) > MAX_SCALE_PROBES:
        raise ValueError(f"scale probes must number <= {MAX_SCALE_PROBES}")
    for a in alpha_values:
        if abs(a) > q:
            raise ValueError(f"scale factor {a} exceeds the cap q={q}")
    probe_fields = tuple(probe_fields)
    if not probe_fields:
        raise ValueError("need at least one probe germ")
    bound = 1.0 + 2.0 * q / (1.0 - q)
    num_tol = 10.0 * tol
    res_x = refinement * net.cells_x + 1
    res_y = refinement * net.cells_y + 1
    records = []
    for idx, germ in enumerate(probe_fields):
        germ_sup = float(np.max(np.abs(sample(germ, res_x, res_y).values)))
        if germ_sup == 0.0:
            raise ValueError(f"probe germ {idx} vanishes on the solver grid")
        best_ratio = np.inf
        worst_ratio = 0.0
        best_alpha = None
        for a in alpha_values:
            surface = fractal_operator(
                germ, Constant2(net.domain, a), net, deg=degree,
                refinement=refinement, tol=tol)
            ratio = float(np.max(np.abs(surface.values.values))) / germ_sup
            worst_ratio = max(worst_ratio, ratio)
            if ratio < best_ratio:
                best_ratio = ratio
                best_alpha = a
        records.append({
            "member": f"probe{idx}",
            "best_ratio": best_ratio,
            "best_alpha": best_alpha,
            "worst_ratio": worst_ratio,
            "margin": bound - best_ratio,
        })
    return _finish("norm-bound", records, num_tol)


def continuity_probe(sel: FamilySelector, f: Field2D, w: Field2D,
                     count: int = 8) -> PropertyReport:
    """Continuity along f + w/k: gaps bounded by L times the input gap and
    nonincreasing in k.

    Two margin kinds enter one report: per step, L*|f_k - f| minus the
    output gap; per consecutive pair, the decrease of the output gap.
    """
    if count < 2:
        raise ValueError("need at least two steps")
    w_probe = float(np.max(np.abs(
        sample(w, PROBE_RESOLUTION, PROBE_RESOLUTION).values)))
    if w_probe == 0.0:
        raise ValueError("perturbation field vanishes; the probe is vacuous")
    lcap = sel.lipschitz_constant
    records = []
    for member in sel.members():
        base = solve_member(sel, member, f).values.values
        w_grid = np.abs(_member_grid(sel, member, w))
        prev_gap = None
        for k in range(1, count + 1):
            fk = AffineCombination2([f, w], [1.0, 1.0 / k])
            sk = solve_member(sel, member, fk).values.values
            gap = float(np.max(np.abs(sk - base)))
            denom = float(np.max(w_grid)) / k
            records.append({
                "member": member.label,
                "step": k,
                "output_gap": gap,
                "input_gap": denom,
                "margin": lcap * denom - gap,
            })
            if prev_gap is not None:
                records.append({
                    "member": member.label,
                    "step": k,
                    "kind": "monotone",
                    "margin": prev_gap - gap,
                })
            prev_gap = gap
    return _finish("continuity", records, sel.num_tol)


def family_spread(sel: FamilySelector, germ: Field2D) -> float:
    """Largest pointwise gap between any two members' surfaces for one germ.

    Surfaces on different nets are compared through bilinear reads on a
    common probe grid.  A clearly positive spread is the witness that the
    family is genuinely multi-valued: one germ, several surfaces.
    """
    members = sel.members()
    if len(members) < 2:
        raise ValueError("need at least two members to measure spread")
    grids = []
    for member in members:
        surface = solve_member(sel, member, germ)
        field = SampledGrid2(surface.values)
        grids.append(sample(field, PROBE_RESOLUTION, PROBE_RESOLUTION).values)
    spread = 0.0
    for i in range(len(grids)):
        for j in range(i + 1, len(grids)):
            spread = max(spread, float(np.max(np.abs(grids[i] - grids[j]))))
    return spread
