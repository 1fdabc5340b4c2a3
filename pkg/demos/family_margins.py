# family_margins.py
#
# Treat the surface solver as a family of maps (one per configuration) and
# measure the margins behind its structural properties: positive scaling
# commutes through, and output gaps stay under (1+q)/(1-q) times the input
# gap for scale values capped at q.
#
# Run with:
#   python demos/family_margins.py

from fracsurf.field import Domain2D, seeded_trig_field2
from fracsurf.mvops import FamilySelector, check_lipschitz, check_process

domain = Domain2D(0.0, 1.0, 0.0, 1.0)
sel = FamilySelector("degree", domain, q=0.5,
                     degrees=((1, 1), (2, 2), (4, 4), (8, 8)),
                     refinement=32)

f = seeded_trig_field2(domain, 7)
g = seeded_trig_field2(domain, 8)

process = check_process(sel, f)
print(f"process check over {process.probes} probes: "
      f"worst margin {process.worst_margin:.3e} "
      f"({'pass' if process.passed else 'FAIL'})")
for rec in process.records[:4]:
    print(f"  {rec['member']:>8} lambda={rec['factor']:<4} "
          f"diff {rec['diff']:.3e}")
print("  ...")
print()

lip = check_lipschitz(sel, f, g)
print(f"Lipschitz check, cap (1+q)/(1-q) = {sel.lipschitz_constant}:")
for rec in lip.records:
    print(f"  {rec['member']:>8} ratio {rec['ratio']:.4f} "
          f"margin {rec['margin']:.4f}")
print(f"worst margin {lip.worst_margin:.4f} "
      f"({'pass' if lip.passed else 'FAIL'})")
