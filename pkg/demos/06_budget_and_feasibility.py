"""Power bookkeeping and the tile-size limits of the element-sum engine."""

import warnings

import numpy as np

from risscatter import PowerBudget
from risscatter.array import ElementPattern, feasibility_check

print("lossy single-mode reflector:")
b = PowerBudget.complete(0.0, (0.97,))
print(f"  tau = {b.tau:.2f}, S^2 = {b.s_squared:.2f}, residual {b.residual:.1e}")

print("target diffuse fraction of 0.3 on a lossless reflector:")
b = PowerBudget.with_diffuse(0.1, (0.9,), 0.3)
print(f"  Rayleigh factor re-solved to R = {b.rayleigh:.4f}, residual {b.residual:.1e}")

print("over-unity coefficients are accepted with a warning:")
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    PowerBudget.complete(0.17, (0.76, 0.17))
for w in caught:
    print(f"  warning: {w.message}")

print("tile-size checks (edge in wavelengths):")
for kind, alpha in (("huygens", 0.0), ("lambertian", 0.0), ("lambertian", 0.7)):
    pattern = ElementPattern(kind, alpha)
    for delta in (0.3, 0.45, 0.49, 0.55):
        found = feasibility_check(pattern, delta, 1.0)
        text = ", ".join(f"{v.code}{' (hard)' if v.hard else ''}" for v in found) or "ok"
        print(f"  {kind:>10} alpha={alpha:.1f} delta={delta:.2f}: {text}")
print(f"directivity by quadrature: huygens {ElementPattern().directivity_quadrature():.6f}, "
      f"lambertian {ElementPattern('lambertian').directivity_quadrature():.6f}")
