# dimension_sweep.py
#
# Box-counting calibration on Weierstrass-type series.  For the series with
# ratio lam and frequency base b the graph's expected scaling exponent is
# 2 + log(lam)/log(b), so sweeping lam at fixed b should trace a line.
#
# Run with:
#   python demos/dimension_sweep.py          (about half a minute)

from fracsurf.boxdim import dim_graph
from fracsurf.field import Domain1D, ShenSeries1, lift_sum

import math

unit = Domain1D(0.0, 1.0)
b = 4
resolution = 2 ** 18 + 1

print(f"1D series graphs, b={b}, {resolution} samples")
print(f"{'lam':>6} {'expected':>9} {'estimated':>10} {'r2':>8}")
for lam in (0.3, 0.4, 0.5, 0.6, 0.7):
    w = ShenSeries1(unit, lam, b, "cos")
    est = dim_graph(w, resolution=resolution)
    expected = 2.0 + math.log(lam) / math.log(b)
    print(f"{lam:>6.2f} {expected:>9.4f} {est.slope:>10.4f} {est.r2:>8.5f}")

print()
print("Lifting w(x) to the surface w(x)+y adds one to the exponent:")
w = ShenSeries1(unit, 0.5, b, "cos")
line = dim_graph(w, resolution=resolution)
surface = dim_graph(lift_sum(w, unit), resolution=1025)
print(f"  line 1D estimate    {line.slope:.4f}")
print(f"  lifted 2D estimate  {surface.slope:.4f}   (1D + 1 = "
      f"{line.slope + 1.0:.4f})")
