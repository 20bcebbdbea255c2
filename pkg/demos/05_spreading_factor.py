"""Near-field plateau and far-field 1/r decay along a steered beam.

The locally averaged amplitude is nearly flat close to the panel and falls
as 1/r beyond the Fraunhofer distance.
"""

import numpy as np

from risscatter.scan import spreading_sweep
from risscatter.scenario import bundled_scenarios, load_scenario

sc = load_scenario(next(p for p in bundled_scenarios() if p.stem == "spreading_factor"))
s = sc.scan
res = spreading_sweep(sc.scene, np.radians(s["theta_deg"]), s["r_min_m"], s["r_max_m"], s["samples"],
                      s["window_wavelengths"] * sc.scene.wave.wavelength)
print(f"near-zone slope {res.near_slope:+.3f}, far-zone slope {res.far_slope:+.3f}")
print(f"-3 dB transition at {res.transition:.1f} m; Fraunhofer distance {res.fraunhofer:.1f} m")
for r, a in zip(res.distances[::5], res.mean_amplitude[::5]):
    print(f"  r = {r:8.2f} m  mean |E| = {20 * np.log10(a):7.2f} dBV/m")
