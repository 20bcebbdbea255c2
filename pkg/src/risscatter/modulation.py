"""Macroscopic spatial modulation coefficient of the panel.

``Gamma(x', y') = R * sum_n sqrt(m_n) * A_n(x', y') * exp(j chi_n(x', y'))``

Profiles are callables over panel coordinates plus a per-panel cache of
tile-center samples, so that every engine sees bit-identical values.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .core import RisPanel
from .errors import DomainError

ProfileFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _ones(x, y):
    return np.ones(np.broadcast(np.asarray(x), np.asarray(y)).shape)


def _zeros(x, y):
    return np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)


@dataclass(frozen=True, eq=False)
class Mode:
    """One reradiated mode: weight ``m``, amplitude map ``A`` and phase map ``chi``."""

    weight: float
    amplitude: ProfileFn = _ones
    phase: ProfileFn = _zeros
    label: str = "mode"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.weight < 0:
            raise DomainError("mode weight must be non-negative")

    def shape(self, x, y) -> np.ndarray:
        """Unweighted modulation ``A * exp(j chi)``."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.asarray(self.amplitude(x, y), dtype=float) * np.exp(1j * np.asarray(self.phase(x, y), dtype=float))

    def mean_square_amplitude(self, panel: RisPanel) -> float:
        """Tile-resolution surface average of ``A^2`` (1 for a normalised mode)."""
        uv = panel.tile_local
        a = np.asarray(self.amplitude(uv[:, 0], uv[:, 1]), dtype=float)
        return float(np.mean(np.broadcast_to(a, uv[:, 0].shape) ** 2))

    def describe(self) -> dict:
        return {"label": self.label, "weight": self.weight, **self.params}


@dataclass(eq=False)
class ModulationProfile:
    """Set of modes sharing one Rayleigh factor.

    ``half_extents``, when given, bounds the domain of :meth:`gamma`.
    """

    modes: tuple[Mode, ...] = ()
    rayleigh: float = 1.0
    half_extents: tuple[float, float] | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.modes = tuple(self.modes)

    def mode_gamma(self, n: int, x, y) -> np.ndarray:
        m = self.modes[n]
        return self.rayleigh * np.sqrt(m.weight) * m.shape(x, y)

    def gamma(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.half_extents is not None:
            hx, hy = self.half_extents
            tol = 1e-9 * max(hx, hy, 1.0)
            if np.any(np.abs(x) > hx + tol) or np.any(np.abs(y) > hy + tol):
                raise DomainError("point outside the panel extents")
        g = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for n in range(len(self.modes)):
            g = g + self.mode_gamma(n, x, y)
        return complex(g) if g.ndim == 0 else g

    def samples(self, panel: RisPanel) -> np.ndarray:
        """Per-mode tile-center samples, shape (n_modes, n_tiles); cached per panel."""
        key = (panel.half_extents, panel.counts)
        hit = self._cache.get(key)
        if hit is None:
            uv = panel.tile_local
            hit = np.zeros((len(self.modes), len(uv)), dtype=complex)
            for n in range(len(self.modes)):
                hit[n] = np.broadcast_to(self.mode_gamma(n, uv[:, 0], uv[:, 1]), (len(uv),))
            hit.setflags(write=False)
            self._cache[key] = hit
        return hit

    def tile_gamma(self, panel: RisPanel) -> np.ndarray:
        """Total Gamma at the tile centers."""
        s = self.samples(panel)
        return s.sum(axis=0) if len(s) else np.zeros(panel.n_tiles, dtype=complex)

    def describe(self) -> dict:
        return {"rayleigh": self.rayleigh, "modes": [m.describe() for m in self.modes]}


def gamma(profile: ModulationProfile, x, y):
    """Evaluate the modulation coefficient of ``profile`` at panel coordinates."""
    return profile.gamma(x, y)


def constant_mode(weight: float, phase: float = 0.0, label: str = "constant") -> Mode:
    """Spatially uniform mode, e.g. the specular (PO) mode with ``chi = 0``."""
    return Mode(weight, _ones, lambda x, y: np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, phase),
                label, {"phase_rad": phase})


def gradient_profile(theta_i: float, theta_r: float, k: float, weight: float = 1.0) -> Mode:
    """Linear phase gradient ``chi = k (sin(theta_i) - sin(theta_r)) x'``.

    Steers a plane wave arriving along ``sin(theta_i) x' - cos(theta_i) n``
    into the direction ``sin(theta_r) x' + cos(theta_r) n``.
    """
    if abs(theta_i) >= np.pi / 2 or abs(theta_r) >= np.pi / 2:
        raise DomainError("gradient angles must satisfy |theta| < pi/2")
    slope = k * (np.sin(theta_i) - np.sin(theta_r))
    return Mode(
        weight,
        _ones,
        lambda x, y: slope * np.asarray(x, dtype=float) + 0.0 * np.asarray(y, dtype=float),
        "gradient",
        {"theta_i_rad": theta_i, "theta_r_rad": theta_r, "slope_rad_per_m": slope},
    )


def focus_profile(theta_i: float, z0: float, k: float, weight: float = 1.0) -> Mode:
    """Reflecting lens ``chi = k sqrt(x'^2 + y'^2 + z0^2) - k sin(theta_i) x'``.

    The focus sits ``|z0|`` in front of the panel center. The linear term
    compensates a plane wave arriving along ``-sin(theta_i) x' - cos(theta_i) n``.
    """
    if z0 == 0:
        raise DomainError("focal distance z0 must be non-zero")
    s = np.sin(theta_i)

    def phase(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return k * np.sqrt(x * x + y * y + z0 * z0) - k * s * x

    return Mode(weight, _ones, phase, "focus", {"theta_i_rad": theta_i, "z0_m": z0})


def multimode_profile(entries: Sequence[tuple[float, float]], theta_i: float, k: float,
                      rayleigh: float = 1.0, half_extents=None) -> ModulationProfile:
    """Plane-wave modes, one gradient per ``(m_n, theta_r_n)`` entry."""
    modes = []
    for m, theta_r in entries:
        if m < 0:
            raise DomainError("mode weights must be non-negative")
        modes.append(gradient_profile(theta_i, theta_r, k, weight=m))
    return ModulationProfile(tuple(modes), rayleigh, half_extents)


def table_mode(points, values, label: str = "custom-table", weight: float = 1.0) -> Mode:
    """Mode interpolated from scattered samples of a complex coefficient.

    Linear interpolation inside the convex hull of ``points`` and nearest
    neighbour outside it.
    """
    from scipy.interpolate import LinearNDInterpolator, NearestNDInterpolator

    pts = np.asarray(points, dtype=float)
    vals = np.asarray(values, dtype=complex)
    lin = LinearNDInterpolator(pts, vals)
    near = NearestNDInterpolator(pts, vals)

    def f(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        out = lin(x, y)
        bad = ~np.isfinite(out)
        if np.any(bad):
            out = np.where(bad, near(x, y), out)
        return out

    return Mode(weight, lambda x, y: np.abs(f(x, y)), lambda x, y: np.angle(f(x, y)), label, {"samples": len(pts)})


def read_gamma_table(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a CSV of ``x', y', Re(Gamma), Im(Gamma)`` rows (header optional)."""
    rows = []
    with open(Path(path), newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].lstrip().startswith("#"):
                continue
            try:
                rows.append([float(v) for v in rec[:4]])
            except ValueError:
                if rows:
                    raise
                continue  # header
    if not rows:
        raise DomainError(f"no Gamma samples in {path}")
    a = np.asarray(rows)
    return a[:, :2], a[:, 2] + 1j * a[:, 3]
