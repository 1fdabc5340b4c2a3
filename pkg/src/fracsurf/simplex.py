"""Small dense two-phase simplex solver.

Solves max c.z subject to A z <= b, z >= 0 with Bland's smallest-index rule
for both the entering and the leaving choice, which makes every run fully
deterministic and cycle-free.  Rows with negative right-hand side get a
phase-1 artificial variable.  The problems here are tiny (a few thousand
constraints, a handful of structural variables), so a full tableau is fine.
"""

from __future__ import annotations

import numpy as np

from .errors import InfeasibleError, UnboundedError

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-9
MAX_PIVOTS = 200000

__all__ = ["solve_lp_max"]


def _pivot(tableau, basis, row, col):
    piv = tableau[row] / tableau[row, col]
    factors = tableau[:, col].copy()
    tableau -= np.outer(factors, piv)
    tableau[row] = piv
    basis[row] = col


def _iterate(tableau, basis, obj_row, allowed_cols, label):
    """Run Bland pivots until no entering column improves the objective."""
    for _ in range(MAX_PIVOTS):
        entering = -1
        for j in allowed_cols:
            if obj_row[j] > PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return
        rows = np.where(tableau[:, entering] > PIVOT_TOL)[0]
        if rows.size == 0:
            raise UnboundedError(f"{label}: objective unbounded above")
        ratios = tableau[rows, -1] / tableau[rows, entering]
        best = ratios.min()
        # Bland tie-break: among minimal ratios, leave the smallest basis index.
        tied = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        leave = tied[np.argmin([basis[i] for i in tied])]
        factor = obj_row[entering]
        piv_row = tableau[leave] / tableau[leave, entering]
        _pivot(tableau, basis, leave, entering)
        obj_row -= factor * piv_row
    raise RuntimeError(f"{label}: pivot limit exceeded")


def solve_lp_max(obj, lhs, rhs):
    """Maximize obj.z over {A z <= b, z >= 0}; returns (z, objective value).

    Raises UnboundedError when the objective is unbounded above and
    InfeasibleError when no nonnegative point satisfies the constraints.
    """
    obj = np.asarray(obj, dtype=float)
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    n_rows, n_vars = lhs.shape
    if obj.shape != (n_vars,) or rhs.shape != (n_rows,):
        raise ValueError("inconsistent LP shapes")

    neg = rhs < 0
    n_art = int(neg.sum())
    n_real = n_vars + n_rows  # structural + slack
    tableau = np.zeros((n_rows, n_real + n_art + 1))
    tableau[:, :n_vars] = lhs
    tableau[:, n_vars:n_real] = np.eye(n_rows)
    tableau[:, -1] = rhs
    basis = [n_vars + i for i in range(n_rows)]

    if n_art:
        art = n_real
        for i in np.where(neg)[0]:
            tableau[i] *= -1.0
            tableau[i, art] = 1.0
            basis[i] = art
            art += 1
        # Phase 1: maximize minus the artificial sum, priced out over the basis.
        obj_row = np.zeros(n_real + n_art + 1)
        obj_row[n_real:n_real + n_art] = -1.0
        for i in np.where(neg)[0]:
            obj_row += tableau[i]
        allowed = range(n_real + n_art)
        _iterate(tableau, basis, obj_row, allowed, "phase 1")
        art_rows = [i for i in range(n_rows) if basis[i] >= n_real]
        if sum(tableau[i, -1] for i in art_rows) > FEAS_TOL:
            raise InfeasibleError("constraints admit no nonnegative point")
        # Drive leftover zero-level artificials out; drop redundant rows.
        drop = []
        for i in art_rows:
            cols = np.where(np.abs(tableau[i, :n_real]) > PIVOT_TOL)[0]
            if cols.size:
                _pivot(tableau, basis, i, int(cols[0]))
            else:
                drop.append(i)
        if drop:
            keep = [i for i in range(n_rows) if i not in drop]
            tableau = tableau[keep]
            basis = [basis[i] for i in keep]
        tableau = np.delete(tableau, np.s_[n_real:n_real + n_art], axis=1)

    obj_row = np.zeros(n_real + 1)
    obj_row[:n_vars] = obj
    for i, bi in enumerate(basis):
        if bi < n_vars and obj[bi] != 0.0:
            obj_row -= obj[bi] * tableau[i]
    _iterate(tableau, basis, obj_row, range(n_real), "phase 2")

    z = np.zeros(n_vars)
    for i, bi in enumerate(basis):
        if bi < n_vars:
            z[bi] = tableau[i, -1]
    return z, float(obj @ z)
