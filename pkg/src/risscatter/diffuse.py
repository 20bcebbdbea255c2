"""Incoherent Lambertian diffuse scattering (effective-roughness lobe).

Each tile scatters ``S^2`` of the power it intercepts into a cosine lobe::

    |E_s(P)|^2 = sum_tiles S^2 |E_i|^2 cos(theta_i) cos(theta_s) dS / (pi r_s^2)

so that the hemispherical integral of ``|E_s|^2 r^2 / (2 eta)`` returns
``S^2 |E_i|^2 cos(theta_i) dS / (2 eta)`` per tile.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RisPanel, check_front
from .errors import DomainError
from .incident import IncidentWave, incidence_angles
from .parallel import block_size, map_points


@dataclass(frozen=True)
class DiffuseConfig:
    s_squared: float = 0.0
    lobe: str = "lambertian"
    combination: str = "power-sum"

    def __post_init__(self):
        if not 0.0 <= self.s_squared <= 1.0:
            raise DomainError("s_squared must lie in [0, 1]")
        if self.lobe != "lambertian" or self.combination != "power-sum":
            raise DomainError("only the lambertian lobe with power-sum combination is supported")


def diffuse_intensity(panel: RisPanel, wave: IncidentWave, s_squared: float, points, threads=None):
    """Diffuse ``|E_s|^2`` (V^2/m^2) at one or many points."""
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = pts.reshape(-1, 3)
    if s_squared == 0 or panel.n_tiles == 0 or len(pts) == 0:
        if len(pts):
            check_front(panel, pts)
        out = np.zeros(len(pts))
        return float(out[0]) if single else out
    check_front(panel, pts)
    centers = panel.tile_centers
    cos_i = np.cos(incidence_angles(wave, panel))
    e2 = np.abs(wave.scalar(centers)) ** 2
    w = np.ascontiguousarray(s_squared * e2 * cos_i * panel.tile_area / np.pi)[None, :]
    n = panel.n_hat

    def block_fn(block):
        dx = block[:, 0:1] - centers[None, :, 0]
        dy = block[:, 1:2] - centers[None, :, 1]
        dz = block[:, 2:3] - centers[None, :, 2]
        r2 = dx * dx + dy * dy + dz * dz
        cos_s = np.clip((dx * n[0] + dy * n[1] + dz * n[2]) / np.sqrt(r2), 0.0, None)
        return (w * cos_s / r2).sum(axis=-1)

    out = map_points(block_fn, pts, block_size(panel.n_tiles), threads)
    return float(out[0]) if single else out
