"""Antenna-array engine: the panel as a grid of reradiating aperture elements.

Each tile reradiates a spherical wavelet shaped by a power pattern ``f(theta)``
and weighted by the tile's modulation coefficient ``Gamma``. The general
element field is::

    dE = lambda/(2 pi) / sqrt(2 I_f) * Gamma * E_inc(tile)
         * sqrt(f(theta_i)) * sqrt(f(theta_m)) * exp(-j k r_m) / r_m * p_m

with ``I_f = int_0^{pi/2} f(theta) sin(theta) dtheta``. For the Huygens pattern
the closed form with coefficient ``3 lambda / (16 pi)`` is used by default::

    dE = Gamma * E_inc(tile) * 3 lambda/(16 pi) * (1 + cos theta_i)(1 + cos theta_m)
         * exp(-j k r_m) / r_m * p_m

``E_inc(tile)`` is the complex incident amplitude at the tile center, which
carries the ``exp(-j k r_i) / r_i`` factor of a spherical source or the phase
ramp of a plane wave. ``Gamma`` already contains ``R sqrt(m_n)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate

from .core import RisPanel, check_front
from .errors import DomainError, FeasibilityError, FeasibilityWarning
from .incident import IncidentWave, incidence_angles
from .modulation import ModulationProfile
from .parallel import block_size, map_points

DELTA_MAX = 0.5
DELTA_MIN = 1.0 / (2.0 * np.sqrt(np.pi))  # ~0.282
LAMBERTIAN_DELTA_MIN = 1.0 / np.sqrt(2.0 * np.pi)  # ~0.399
LAMBERTIAN_ALPHA_MAX = np.pi / 2.0 - 1.0  # ~0.571
HUYGENS_DELTA_MIN = 0.5 * np.sqrt(3.0 / np.pi)  # ~0.4886

DEFAULT_HUYGENS_EDGE = 0.49  # tile edge in wavelengths


@dataclass(frozen=True)
class ElementPattern:
    """Element power pattern: ``lambertian`` ``cos(theta)^alpha`` or ``huygens`` ``((1+cos)/2)^2``."""

    kind: str = "huygens"
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in ("lambertian", "huygens"):
            raise DomainError(f"unknown element pattern {self.kind!r}")
        if self.alpha < 0:
            raise DomainError("alpha must be non-negative")

    @property
    def max_angle(self) -> float:
        return np.pi / 2 if self.kind == "lambertian" else np.pi

    def value(self, theta):
        return pattern_value(self, theta)

    def value_cos(self, c):
        """Pattern as a function of ``cos(theta)``; negative cosines give 0 for lambertian."""
        c = np.asarray(c, dtype=float)
        if self.kind == "huygens":
            return ((1.0 + c) / 2.0) ** 2
        return np.clip(c, 0.0, None) ** self.alpha

    @property
    def directivity(self) -> float:
        return 2.0 * (self.alpha + 1.0) if self.kind == "lambertian" else 3.0

    @cached_property
    def norm_integral(self) -> float:
        return norm_integral(self)

    def directivity_quadrature(self) -> float:
        """``4 pi / integral of f over its support``, by adaptive quadrature."""
        val, _ = integrate.quad(lambda t: self.value_cos(np.cos(t)) * np.sin(t), 0.0, self.max_angle,
                                epsabs=0.0, epsrel=1e-12, limit=200)
        return 2.0 / val

    def describe(self) -> dict:
        return {"kind": self.kind, "alpha": self.alpha}


def pattern_value(pattern: ElementPattern, theta):
    """Element power pattern at polar angle ``theta`` (radians)."""
    t = np.asarray(theta, dtype=float)
    if np.any(t < 0) or np.any(t > pattern.max_angle + 1e-12):
        raise DomainError(f"theta outside [0, {pattern.max_angle:.6g}] for {pattern.kind} pattern")
    v = pattern.value_cos(np.cos(t))
    return float(v) if v.ndim == 0 else v


def norm_integral(pattern: ElementPattern) -> float:
    """``int_0^{pi/2} f(theta) sin(theta) dtheta`` by adaptive quadrature."""
    val, _ = integrate.quad(lambda t: pattern.value_cos(np.cos(t)) * np.sin(t), 0.0, np.pi / 2,
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return float(val)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    hard: bool = False


def feasibility_check(pattern: ElementPattern, tile_edge: float, wavelength: float) -> list[Violation]:
    """Physical-consistency bounds on the tile size ``delta = tile_edge / lambda``.

    Returns an empty list when every bound holds. Only ``grating-lobes`` is a
    hard violation.
    """
    if not tile_edge > 0:
        raise DomainError("tile edge must be positive")
    d = tile_edge / wavelength
    out = []
    if d > DELTA_MAX:
        out.append(Violation("grating-lobes", f"delta={d:.4f} > 0.5: tile edge exceeds lambda/2", hard=True))
    if d < DELTA_MIN:
        out.append(Violation("directivity-floor", f"delta={d:.4f} < {DELTA_MIN:.4f}: element directivity below 1"))
    if pattern.kind == "lambertian":
        if d < LAMBERTIAN_DELTA_MIN:
            out.append(Violation("lambertian-aperture",
                                 f"delta={d:.4f} < {LAMBERTIAN_DELTA_MIN:.4f} for the lambertian pattern"))
        if pattern.alpha > LAMBERTIAN_ALPHA_MAX:
            out.append(Violation("lambertian-alpha",
                                 f"alpha={pattern.alpha:.4f} > {LAMBERTIAN_ALPHA_MAX:.4f} (directivity above pi)"))
    else:
        if d < HUYGENS_DELTA_MIN:
            out.append(Violation("huygens-aperture",
                                 f"delta={d:.4f} < {HUYGENS_DELTA_MIN:.4f} for the huygens pattern"))
    return out


def enforce_feasibility(pattern: ElementPattern, panel: RisPanel, wavelength: float, quiet: bool = False):
    """Raise on a hard violation of the actual tile pitch, warn on the rest."""
    if panel.n_tiles == 0:
        return []
    viol = feasibility_check(pattern, max(panel.pitch), wavelength)
    hard = [v for v in viol if v.hard]
    if hard:
        raise FeasibilityError(hard[0].message)
    if not quiet:
        for v in viol:
            warnings.warn(v.message, FeasibilityWarning, stacklevel=3)
    return viol


def reflected_polarization(p_hat, n_hat) -> np.ndarray:
    """Locally specular polarization: tangential part kept, normal part flipped."""
    p = np.asarray(p_hat, dtype=float)
    n = np.asarray(n_hat, dtype=float)
    q = p - 2.0 * (p @ n)[..., None] * n if p.ndim > 1 else p - 2.0 * (p @ n) * n
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def _closed_form(pattern: ElementPattern, form: str | None) -> bool:
    if form is None:
        return pattern.kind == "huygens"
    if form not in ("general", "closed"):
        raise DomainError(f"unknown element-field form {form!r}")
    if form == "closed" and pattern.kind != "huygens":
        raise DomainError("the closed form exists only for the huygens pattern")
    return form == "closed"


def tile_coefficients(panel: RisPanel, wave: IncidentWave, gammas, pattern: ElementPattern,
                      form: str | None = None) -> np.ndarray:
    """Observation-independent factor of every tile, shape (..., n_tiles)."""
    lam = wave.wave.wavelength
    g = np.asarray(gammas, dtype=complex)
    a = wave.scalar(panel.tile_centers)
    cos_i = np.cos(incidence_angles(wave, panel))
    # The factor j is the phase of aperture radiation; it aligns the wavelets
    # with the radiation-integral engine and leaves every magnitude unchanged.
    if _closed_form(pattern, form):
        return 1j * g * a * (3.0 * lam / (16.0 * np.pi)) * (1.0 + cos_i)
    amp = lam / (2.0 * np.pi) / np.sqrt(2.0 * pattern.norm_integral)
    return 1j * g * a * amp * np.sqrt(pattern.value_cos(cos_i))


def array_field(panel: RisPanel, wave: IncidentWave, gammas, pattern: ElementPattern, points,
                form: str | None = None, threads=None, magnetic: bool = False) -> np.ndarray:
    """Sum of element wavelets over all tiles (fixed tile order).

    ``gammas`` is a per-tile array, optionally with leading stack axes (e.g.
    one row per mode). Returns E (V/m), or H (A/m) with ``magnetic=True`` from
    the local plane-wave relation ``dH = r_m x dE / eta``.
    """
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = pts.reshape(-1, 3)
    g = np.asarray(gammas, dtype=complex)
    if g.ndim == 0:
        g = np.full(panel.n_tiles, g)
    stack = g.shape[:-1]
    if len(pts) == 0 or panel.n_tiles == 0:
        out = np.zeros(stack + (len(pts), 3), dtype=complex)
        return out[..., 0, :] if single else out
    check_front(panel, pts)
    k = wave.wave.wavenumber
    eta = wave.wave.eta
    closed = _closed_form(pattern, form)
    coef = np.ascontiguousarray(tile_coefficients(panel, wave, g, pattern, form))[..., None, :]
    p_m = reflected_polarization(np.broadcast_to(wave.p_hat, (panel.n_tiles, 3)), panel.n_hat)
    pmx, pmy, pmz = (np.ascontiguousarray(p_m[:, c]) for c in range(3))
    centers = panel.tile_centers
    n = panel.n_hat

    def block_fn(block):
        dx = block[:, 0:1] - centers[None, :, 0]
        dy = block[:, 1:2] - centers[None, :, 1]
        dz = block[:, 2:3] - centers[None, :, 2]
        r = np.sqrt(dx * dx + dy * dy + dz * dz)
        cos_m = (dx * n[0] + dy * n[1] + dz * n[2]) / r
        shape = (1.0 + cos_m) if closed else np.sqrt(pattern.value_cos(cos_m))
        s = coef * (shape * np.exp(-1j * k * r) / r)
        if magnetic:
            rx, ry, rz = dx / r, dy / r, dz / r
            fx = (s * (ry * pmz - rz * pmy)).sum(axis=-1) / eta
            fy = (s * (rz * pmx - rx * pmz)).sum(axis=-1) / eta
            fz = (s * (rx * pmy - ry * pmx)).sum(axis=-1) / eta
        else:
            fx = (s * pmx).sum(axis=-1)
            fy = (s * pmy).sum(axis=-1)
            fz = (s * pmz).sum(axis=-1)
        return np.stack([fx, fy, fz], axis=-1)

    n_src = int(np.prod(stack)) if stack else 1
    out = map_points(block_fn, pts, block_size(panel.n_tiles, n_src), threads, axis=len(stack))
    return out[..., 0, :] if single else out


def _profile_gammas(panel: RisPanel, profile) -> np.ndarray:
    if isinstance(profile, ModulationProfile):
        return profile.tile_gamma(panel)
    return np.asarray(profile, dtype=complex)


def element_field(panel: RisPanel, tile: int | tuple[int, int], wave: IncidentWave, profile,
                  pattern: ElementPattern, point, form: str | None = None) -> np.ndarray:
    """Field of a single tile, addressed by flat index or ``(u, v)`` indices."""
    if isinstance(tile, tuple):
        tile = tile[0] * panel.counts[1] + tile[1]
    g_all = np.broadcast_to(_profile_gammas(panel, profile), (panel.n_tiles,))
    g = np.zeros(panel.n_tiles, dtype=complex)
    g[tile] = g_all[tile]
    return array_field(panel, wave, g, pattern, point, form)


def total_field(panel: RisPanel, wave: IncidentWave, profile, pattern: ElementPattern, points,
                form: str | None = None, threads=None, check: bool = True) -> np.ndarray:
    """Reradiated E field of the whole panel at one or many points."""
    if check:
        enforce_feasibility(pattern, panel, wave.wave.wavelength)
    return array_field(panel, wave, _profile_gammas(panel, profile), pattern, points, form, threads)


def closed_form_factor(theta_i: float, theta_m: float, wavelength: float) -> float:
    """Huygens closed-form angular coefficient ``3 lambda/(16 pi) (1+cos ti)(1+cos tm)``."""
    # the symmetric product is formed first so swapping the angles is bit-exact
    return 3.0 * wavelength / (16.0 * np.pi) * ((1.0 + np.cos(theta_i)) * (1.0 + np.cos(theta_m)))


def general_factor(pattern: ElementPattern, theta_i: float, theta_m: float, wavelength: float) -> float:
    """General angular coefficient ``lambda/(2 pi) sqrt(f_i f_m / (2 I_f))``."""
    return (wavelength / (2.0 * np.pi) / np.sqrt(2.0 * pattern.norm_integral)
            * np.sqrt(pattern.value_cos(np.cos(theta_i)) * pattern.value_cos(np.cos(theta_m))))
