# one_sided_lp.py
#
# Best approximation from below as a linear program: among all combinations
# of the basis functions that sit under the target on a constraint grid,
# pick the one with the largest integral.
#
# Run with:
#   python demos/one_sided_lp.py

from fracsurf.approx import best_one_sided_below, make_basis
from fracsurf.field import Domain2D, Polynomial2, Trig2

domain = Domain2D(0.0, 1.0, 0.0, 1.0)
one = Polynomial2(domain, [[1.0]])
x = Polynomial2(domain, [[0.0], [1.0]])
y = Polynomial2(domain, [[0.0, 1.0]])

# warm-up: target inside the span comes back exactly
sol = best_one_sided_below(x, make_basis([one, x]))
print("target x over span{1, x}:")
print(f"  coefficients {tuple(round(c, 9) for c in sol.coefficients)}, "
      f"objective {sol.objective:.6f} (integral of x itself)")
print()

# a curved target over an affine span: the LP finds the tight plane
bowl = Polynomial2(domain, [[0.0, 0.0, 1.0], [0, 0, 0], [1.0, 0, 0]])
sol = best_one_sided_below(bowl, make_basis([one, x, y]))
print("target x^2 + y^2 over span{1, x, y}:")
print(f"  coefficients {tuple(round(c, 6) for c in sol.coefficients)}")
print(f"  objective    {sol.objective:.6f}")
print(f"  max violation {sol.max_violation:.2e} "
      f"(feasibility tolerance {sol.feas_tol:.0e})")
print()

wave = Trig2(domain, [(0.5, 1, 1, 0.2, 0.4)])
sol = best_one_sided_below(wave, make_basis([one, x, y]))
print("target a trig wave over span{1, x, y}:")
print(f"  coefficients {tuple(round(c, 6) for c in sol.coefficients)}")
print(f"  objective    {sol.objective:.6f}")
