"""Steer a normally incident plane wave to 60 degrees with a phase gradient.

Both engines are run on the same 20-wavelength panel and the far-zone cut is
printed around the design direction.
"""

import numpy as np

from risscatter import ModulationProfile, PlaneWave, PowerBudget, RisPanel, WaveSpec, gradient_profile
from risscatter.scan import Scene, pattern_cut

wave = WaveSpec.from_ghz(3.0)
lam = wave.wavelength
panel = RisPanel.from_size(20 * lam, 20 * lam, 0.49 * lam)
incident = PlaneWave.from_angles(wave, 1.0, 0.0, (0, 1, 0))
profile = ModulationProfile((gradient_profile(0.0, np.radians(60), wave.wavenumber),))
scene = Scene(wave, panel, incident, profile, PowerBudget(0.0, (1.0,)))

print(f"panel {panel.counts[0]} x {panel.counts[1]} tiles, Fraunhofer distance "
      f"{panel.fraunhofer_distance(lam):.1f} m")
angles = np.radians(np.arange(50.0, 70.01, 0.25))
for engine in ("integral", "array"):
    cut = pattern_cut(scene, 200.0, angles, engine=engine)
    i = int(np.argmax(cut.magnitude))
    print(f"{engine:>8}: peak {cut.db[i]:6.2f} dBV/m at {np.degrees(angles[i]):.2f} deg")
    for a, db in zip(np.degrees(angles[::8]), cut.db[::8]):
        print(f"          {a:6.2f} deg  {db:7.2f} dBV/m")
