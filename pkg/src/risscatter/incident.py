"""Incident illumination: uniform plane waves and far-field spherical sources."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RisPanel, WaveSpec, unit
from .errors import BackIlluminationError, ContractError, DomainError

_TOL = 1e-12


def _unit3(v, name):
    a = np.asarray(v, dtype=float)
    if a.shape != (3,) or abs(np.linalg.norm(a) - 1.0) > _TOL:
        raise ContractError(f"{name} must be a 3-component unit vector")
    return tuple(float(c) for c in a)


@dataclass(frozen=True)
class PlaneWave:
    """``E = E0 exp(j chi0) exp(-j k k_hat . r) p_hat`` (phase reference at the origin)."""

    wave: WaveSpec
    amplitude: float
    direction: tuple[float, float, float]
    polarization: tuple[float, float, float]
    phase: float = 0.0

    def __post_init__(self):
        k = _unit3(self.direction, "propagation direction")
        p = _unit3(self.polarization, "polarization")
        if abs(np.dot(k, p)) > _TOL:
            raise ContractError("polarization must be orthogonal to the propagation direction")
        object.__setattr__(self, "direction", k)
        object.__setattr__(self, "polarization", p)

    @classmethod
    def from_angles(cls, wave: WaveSpec, amplitude: float, theta: float, polarization,
                    phi: float = 0.0, panel: RisPanel | None = None, phase: float = 0.0) -> "PlaneWave":
        """Plane wave arriving at polar angle ``theta`` off the panel normal.

        The propagation direction is ``sin(theta)cos(phi) x' + sin(theta)sin(phi) y'
        - cos(theta) n``. The polarization is orthogonalised against it and
        normalised.
        """
        panel = panel or RisPanel((0.0, 0.0), 1.0)
        k = (np.sin(theta) * np.cos(phi) * panel.x_hat + np.sin(theta) * np.sin(phi) * panel.y_hat
             - np.cos(theta) * panel.n_hat)
        k = unit(k)
        p = np.asarray(polarization, dtype=float)
        p = unit(p - (p @ k) * k)
        return cls(wave, amplitude, tuple(k), tuple(p), phase)

    @property
    def k_hat(self) -> np.ndarray:
        return np.asarray(self.direction)

    @property
    def p_hat(self) -> np.ndarray:
        return np.asarray(self.polarization)

    def scalar(self, points) -> np.ndarray:
        """Complex amplitude along ``p_hat`` at the points."""
        pts = np.asarray(points, dtype=float)
        return self.amplitude * np.exp(1j * self.phase) * np.exp(-1j * self.wave.wavenumber * (pts @ self.k_hat))

    def local_direction(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return np.broadcast_to(self.k_hat, pts.shape).copy()

    def describe(self) -> dict:
        return {
            "type": "plane",
            "amplitude_Vpm": self.amplitude,
            "direction": list(self.direction),
            "polarization": list(self.polarization),
            "phase_rad": self.phase,
        }


@dataclass(frozen=True)
class SphericalSource:
    """Far-field transmitter: ``E = sqrt(eta Pt Gt / 2 pi) exp(j chi0) exp(-j k r) / r p_hat``.

    The polarization ``p_hat`` is carried unchanged to every observation point.
    """

    wave: WaveSpec
    eirp: float  # P_t * G_t in watts
    position: tuple[float, float, float]
    polarization: tuple[float, float, float]
    phase: float = 0.0

    def __post_init__(self):
        if not self.eirp > 0:
            raise DomainError("P_t * G_t must be positive")
        object.__setattr__(self, "polarization", _unit3(self.polarization, "polarization"))
        object.__setattr__(self, "position", tuple(float(c) for c in np.asarray(self.position, dtype=float)))

    @property
    def p_hat(self) -> np.ndarray:
        return np.asarray(self.polarization)

    @property
    def field_constant(self) -> float:
        """``sqrt(eta Pt Gt / 2 pi)``, the field magnitude at 1 m (V)."""
        return float(np.sqrt(self.wave.eta / (2.0 * np.pi) * self.eirp))

    def _distances(self, points):
        d = np.asarray(points, dtype=float) - np.asarray(self.position)
        r = np.linalg.norm(d, axis=-1)
        if np.any(r == 0):
            raise DomainError("field point coincides with the source phase center")
        return d, r

    def scalar(self, points) -> np.ndarray:
        _, r = self._distances(points)
        return self.field_constant * np.exp(1j * self.phase) * np.exp(-1j * self.wave.wavenumber * r) / r

    def local_direction(self, points) -> np.ndarray:
        d, r = self._distances(points)
        return d / r[..., None]

    def describe(self) -> dict:
        return {
            "type": "spherical",
            "eirp_W": self.eirp,
            "position_m": list(self.position),
            "polarization": list(self.polarization),
            "phase_rad": self.phase,
        }


IncidentWave = PlaneWave | SphericalSource


def eval_E(wave: IncidentWave, points) -> np.ndarray:
    """Incident electric field (V/m), shape ``points.shape``."""
    a = wave.scalar(points)
    return np.asarray(a)[..., None] * wave.p_hat


def eval_H(wave: IncidentWave, points) -> np.ndarray:
    """Incident magnetic field ``(1/eta) k_hat x E`` (A/m)."""
    e = eval_E(wave, points)
    return np.cross(wave.local_direction(points), e) / wave.wave.eta


def incidence_angles(wave: IncidentWave, panel: RisPanel, points=None) -> np.ndarray:
    """Angle between ``-k_hat`` and the panel normal at each tile (or given point)."""
    pts = panel.tile_centers if points is None else np.asarray(points, dtype=float)
    c = -(wave.local_direction(pts) @ panel.n_hat)
    if np.any(c < 0):
        raise BackIlluminationError("back-illumination: incident wave reaches the panel from behind")
    return np.arccos(np.clip(c, -1.0, 1.0))


def incidence_angle(wave: IncidentWave, panel: RisPanel, tile: int) -> float:
    """Incidence angle at tile index ``tile``."""
    return float(incidence_angles(wave, panel, panel.tile_centers[tile])[()])
