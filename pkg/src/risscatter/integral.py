"""Radiation-integral engine (physical optics with generalized image currents).

The panel is replaced by tangential surface sources built from the incident
field and the modulation coefficient ``Gamma``::

    J = (1 + Gamma) (H_i x n)           M = (1 - Gamma) (n x E_i)
    E_a = -(1 - Gamma)/2 * E_i,tan      H_a = (1 + Gamma)/2 * H_i,tan

and the reradiated field is the tile-center midpoint sum of the radiative
(1/r) part of the free-space radiation integrals. Two algebraically identical
routes are provided: one from the Huygens source ``(E_a, H_a)`` and one from
the currents ``(J, M)``; tests check that they agree.

Source arrays may carry leading "stack" axes, e.g. one source per mode, in
which case fields come back with the same leading axes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import REACTIVE_ZONE_WAVELENGTHS, RisPanel, WaveSpec, check_front, tangential_project
from .errors import ReactiveNearFieldWarning
from .incident import IncidentWave, eval_E, eval_H, incidence_angles
from .modulation import ModulationProfile
from .parallel import block_size, map_points


@dataclass(frozen=True, eq=False)
class SurfaceSource:
    """Per-tile Huygens source ``(E_a, H_a)``; arrays have shape (..., n_tiles, 3)."""

    e_a: np.ndarray
    h_a: np.ndarray
    panel: RisPanel
    wave: WaveSpec

    @property
    def centers(self) -> np.ndarray:
        return self.panel.tile_centers

    @property
    def tile_area(self) -> float:
        return self.panel.tile_area


@dataclass(frozen=True, eq=False)
class SurfaceCurrents:
    """Per-tile equivalent currents ``J`` (A/m) and ``M`` (V/m)."""

    j: np.ndarray
    m: np.ndarray
    panel: RisPanel
    wave: WaveSpec


def _gamma_tiles(panel: RisPanel, profile) -> np.ndarray:
    if isinstance(profile, ModulationProfile):
        return profile.tile_gamma(panel)
    g = np.asarray(profile, dtype=complex)
    return np.broadcast_to(g, g.shape[:-1] + (panel.n_tiles,)) if g.ndim else np.full(panel.n_tiles, g)


def _incident_on_tiles(wave: IncidentWave, panel: RisPanel):
    if panel.n_tiles:
        incidence_angles(wave, panel)  # raises on back-illumination
    pts = panel.tile_centers
    return eval_E(wave, pts), eval_H(wave, pts)


def surface_currents(wave: IncidentWave, panel: RisPanel, profile) -> SurfaceCurrents:
    """Equivalent currents on every tile for a profile or per-tile Gamma array."""
    g = _gamma_tiles(panel, profile)[..., None]
    e_i, h_i = _incident_on_tiles(wave, panel)
    n = panel.n_hat
    j = (1.0 + g) * np.cross(h_i, n)
    m = (1.0 - g) * np.cross(n, e_i)
    return SurfaceCurrents(j, m, panel, wave.wave)


def huygens_source(wave: IncidentWave, panel: RisPanel, profile) -> SurfaceSource:
    """RIS-modified Huygens source on every tile."""
    g = _gamma_tiles(panel, profile)[..., None]
    e_i, h_i = _incident_on_tiles(wave, panel)
    n = panel.n_hat
    e_t = tangential_project(e_i, n)
    h_t = tangential_project(h_i, n)
    return SurfaceSource(-(1.0 - g) / 2.0 * e_t, (1.0 + g) / 2.0 * h_t, panel, wave.wave)


def split_sources(wave: IncidentWave, panel: RisPanel, mode_gammas: np.ndarray) -> SurfaceSource:
    """Stacked sources: the Gamma-independent induction part, then one per mode.

    The integral formulation is affine in Gamma; summing the stack over its
    first axis reproduces :func:`huygens_source` for ``sum(mode_gammas)``.
    """
    e_i, h_i = _incident_on_tiles(wave, panel)
    n = panel.n_hat
    e_t = tangential_project(e_i, n) / 2.0
    h_t = tangential_project(h_i, n) / 2.0
    g = np.asarray(mode_gammas, dtype=complex).reshape(-1, panel.n_tiles)[..., None]
    e_a = np.concatenate([-e_t[None], g * e_t[None]], axis=0)
    h_a = np.concatenate([h_t[None], g * h_t[None]], axis=0)
    return SurfaceSource(e_a, h_a, panel, wave.wave)


def _geometry(block: np.ndarray, centers: np.ndarray):
    """Unit vectors tile->point and distances, each component shaped (B, T)."""
    dx = block[:, 0:1] - centers[None, :, 0]
    dy = block[:, 1:2] - centers[None, :, 1]
    dz = block[:, 2:3] - centers[None, :, 2]
    r = np.sqrt(dx * dx + dy * dy + dz * dz)
    return dx / r, dy / r, dz / r, r


def _far_geometry(block: np.ndarray, panel: RisPanel):
    """Fraunhofer geometry: common direction, distance from the panel center, phase offsets."""
    d = block - panel.origin
    dist = np.linalg.norm(d, axis=1)
    rhat = d / dist[:, None]
    offs = panel.tile_centers - panel.origin
    shift = rhat @ offs.T  # (B, T)
    ones = np.ones_like(shift)
    return rhat[:, 0:1] * ones, rhat[:, 1:2] * ones, rhat[:, 2:3] * ones, dist[:, None] - shift, dist[:, None] * ones


def _warn_reactive(panel: RisPanel, pts: np.ndarray, wave: WaveSpec):
    h = check_front(panel, pts)
    close = int(np.count_nonzero(h < REACTIVE_ZONE_WAVELENGTHS * wave.wavelength))
    if close:
        warnings.warn(f"reactive-near-field: {close} point(s) closer than 3 wavelengths to the panel",
                      ReactiveNearFieldWarning, stacklevel=3)


def _evaluate(kernel, panel: RisPanel, wave: WaveSpec, a: np.ndarray, b: np.ndarray, points,
              threads=None, far: bool = False) -> np.ndarray:
    """Shared driver: ``kernel(rx, ry, rz, coef, a, b)`` returns three (..., B) arrays."""
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = pts.reshape(-1, 3)
    stack = a.shape[:-2]
    if len(pts) == 0 or panel.n_tiles == 0:
        out = np.zeros(stack + (len(pts), 3), dtype=complex)
        return out[..., 0, :] if single else out
    _warn_reactive(panel, pts, wave)
    k, lam = wave.wavenumber, wave.wavelength
    centers = panel.tile_centers
    ds = panel.tile_area
    # component arrays with the tile axis last: (..., 1, T)
    ax, ay, az = (np.ascontiguousarray(a[..., c])[..., None, :] for c in range(3))
    bx, by, bz = (np.ascontiguousarray(b[..., c])[..., None, :] for c in range(3))
    far_limit = 10.0 * panel.fraunhofer_distance(lam)

    def block_fn(block):
        if far and np.all(np.linalg.norm(block - panel.origin, axis=1) > far_limit):
            rx, ry, rz, phase_r, amp_r = _far_geometry(block, panel)
        else:
            rx, ry, rz, phase_r = _geometry(block, centers)
            amp_r = phase_r
        coef = np.exp(-1j * k * phase_r) / amp_r * ds
        fx, fy, fz = kernel(rx, ry, rz, coef, (ax, ay, az), (bx, by, bz), k, lam, wave.eta)
        return np.stack([fx, fy, fz], axis=-1)

    n_src = int(np.prod(stack)) if stack else 1
    out = map_points(block_fn, pts, block_size(panel.n_tiles, n_src), threads, axis=len(stack))
    return out[..., 0, :] if single else out


def _huygens_e_kernel(rx, ry, rz, coef, v, w, k, lam, eta):
    # j exp(-jkr)/(lambda r) [ rhat x (v x rhat) + rhat x w ],  v = eta n x H_a,  w = E_a x n
    vx, vy, vz = v
    wx, wy, wz = w
    vr = vx * rx + vy * ry + vz * rz
    c = 1j * coef / lam
    fx = (c * (vx - vr * rx + (ry * wz - rz * wy))).sum(axis=-1)
    fy = (c * (vy - vr * ry + (rz * wx - rx * wz))).sum(axis=-1)
    fz = (c * (vz - vr * rz + (rx * wy - ry * wx))).sum(axis=-1)
    return fx, fy, fz


def _current_kernel(rx, ry, rz, coef, p, q, k, lam, scale_p, sign_q):
    # -jk G [ scale_p (p - (p.rhat) rhat) + sign_q * q x rhat ],  G = coef / (4 pi)
    px, py, pz = p
    qx, qy, qz = q
    pr = px * rx + py * ry + pz * rz
    c = -1j * k * coef / (4.0 * np.pi)
    fx = (c * (scale_p * (px - pr * rx) + sign_q * (qy * rz - qz * ry))).sum(axis=-1)
    fy = (c * (scale_p * (py - pr * ry) + sign_q * (qz * rx - qx * rz))).sum(axis=-1)
    fz = (c * (scale_p * (pz - pr * rz) + sign_q * (qx * ry - qy * rx))).sum(axis=-1)
    return fx, fy, fz


def reradiate_E(source: SurfaceSource, points, threads=None, far: bool = False) -> np.ndarray:
    """Reradiated E field (V/m) from a Huygens source at one or many points.

    ``far=True`` switches to the Fraunhofer kernel for point blocks farther
    than ten Fraunhofer distances from the panel center.
    """
    n = source.panel.n_hat
    v = source.wave.eta * np.cross(n, source.h_a)
    w = np.cross(source.e_a, n)
    return _evaluate(_huygens_e_kernel, source.panel, source.wave, v, w, points, threads, far)


def reradiate_E_currents(currents: SurfaceCurrents, points, threads=None) -> np.ndarray:
    """Reradiated E field computed directly from ``(J, M)``."""
    eta = currents.wave.eta

    def kernel(rx, ry, rz, coef, p, q, k, lam, _eta):
        return _current_kernel(rx, ry, rz, coef, p, q, k, lam, eta, 1.0)

    return _evaluate(kernel, currents.panel, currents.wave, currents.j, currents.m, points, threads)


def reradiate_H(currents: SurfaceCurrents, points, threads=None) -> np.ndarray:
    """Reradiated H field (A/m) from ``(J, M)``."""
    eta = currents.wave.eta

    def kernel(rx, ry, rz, coef, p, q, k, lam, _eta):
        return _current_kernel(rx, ry, rz, coef, p, q, k, lam, 1.0 / eta, -1.0)

    return _evaluate(kernel, currents.panel, currents.wave, currents.m, currents.j, points, threads)
