"""Total scattered field of a scene and the scan procedures built on it.

The coherent field is the sum of one contribution per reradiated mode:

* ``specular``: a constant mode ``Gamma = R sqrt(rho)``, which the
  physical-optics engine turns into specular reflection plus edge diffraction;
* ``mode1``, ``mode2``, ...: the anomalous modes of the modulation profile;
* ``induction`` (integral engine only): the Gamma-independent part of the
  radiation integral, which is nearly zero in front of a large panel.

Diffuse scattering is added in power: ``|E|^2 = |E_coherent|^2 + |E_s|^2``.
"""

from __future__ import annotations

import hashlib
import json
import time
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import array as array_engine
from . import integral as integral_engine
from .array import (
    DEFAULT_HUYGENS_EDGE,
    DELTA_MAX,
    HUYGENS_DELTA_MIN,
    LAMBERTIAN_DELTA_MIN,
    ElementPattern,
)
from .budget import PowerBudget
from .core import AngularCut, PlanarGrid, RisPanel, WaveSpec, check_front, reactive_mask, unit
from .diffuse import diffuse_intensity
from .errors import DomainError, ReactiveNearFieldWarning
from .incident import IncidentWave
from .modulation import ModulationProfile, constant_mode

ENGINES = ("integral", "array")


def default_array_edge(panel: RisPanel, pattern: ElementPattern, wavelength: float) -> float:
    """Tile edge giving the fewest tiles whose actual pitch still meets the aperture bound."""
    floor = (HUYGENS_DELTA_MIN if pattern.kind == "huygens" else LAMBERTIAN_DELTA_MIN) * wavelength
    size = panel.max_dimension
    if size == 0:
        return DEFAULT_HUYGENS_EDGE * wavelength
    n = max(1, int(np.floor(size / floor)), int(np.ceil(size / (DELTA_MAX * wavelength))))
    return size / n


@dataclass(frozen=True, eq=False)
class Scene:
    """Everything needed to evaluate the field scattered by one panel.

    ``panel.tile_edge`` drives the integral engine. The array engine re-meshes
    to ``array_tile_edge`` (default: :func:`default_array_edge`) unless ``comparison`` is set,
    in which case both engines share ``panel`` and the soft feasibility
    warnings are silenced.
    """

    wave: WaveSpec
    panel: RisPanel
    incident: IncidentWave
    profile: ModulationProfile
    budget: PowerBudget = field(default_factory=PowerBudget)
    pattern: ElementPattern = field(default_factory=ElementPattern)
    array_tile_edge: float | None = None
    comparison: bool = False
    far: bool = False

    def engine_panel(self, engine: str) -> RisPanel:
        if engine not in ENGINES:
            raise DomainError(f"unknown engine {engine!r}")
        if engine == "integral" or self.comparison:
            return self.panel
        if self.array_tile_edge:
            return self.panel.with_tile_edge(self.array_tile_edge)
        return self.panel.with_tile_edge(default_array_edge(self.panel, self.pattern, self.wave.wavelength))

    def specular_profile(self) -> ModulationProfile:
        return ModulationProfile((constant_mode(self.budget.rho, label="specular"),), self.profile.rayleigh)

    def contributions(self, engine: str) -> tuple[list[str], np.ndarray]:
        """Labels and per-tile Gamma rows of the coherent contributions."""
        panel = self.engine_panel(engine)
        labels, rows = [], []
        if self.budget.rho > 0:
            labels.append("specular")
            rows.append(self.specular_profile().samples(panel)[0])
        s = self.profile.samples(panel)
        for n in range(len(s)):
            labels.append(f"mode{n + 1}")
            rows.append(s[n])
        g = np.array(rows, dtype=complex).reshape(len(rows), panel.n_tiles)
        return labels, g

    def describe(self) -> dict:
        return {
            "frequency_Hz": self.wave.frequency_hz,
            "wavelength_m": self.wave.wavelength,
            "panel": {
                "size_m": list(self.panel.size),
                "center_m": list(self.panel.center),
                "normal": list(self.panel.normal),
                "x_axis": list(self.panel.x_axis),
                "tile_edge_m": self.panel.tile_edge,
            },
            "incident": self.incident.describe(),
            "profile": self.profile.describe(),
            "budget": self.budget.summary(),
            "pattern": self.pattern.describe(),
            "array_tile_edge_m": self.array_tile_edge,
            "comparison": self.comparison,
        }

    def profile_hash(self) -> str:
        blob = json.dumps(self.profile.describe(), sort_keys=True, default=float).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class FieldSample:
    point: np.ndarray
    e_coherent: np.ndarray
    breakdown: dict
    diffuse: float
    reactive: bool

    @property
    def magnitude(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.e_coherent) ** 2) + self.diffuse))


@dataclass
class ScanResult:
    """Field samples on a grid, in grid-index order."""

    grid: object
    points: np.ndarray
    coherent: np.ndarray
    breakdown: dict
    diffuse: np.ndarray
    reactive: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    @property
    def magnitude(self) -> np.ndarray:
        """``sqrt(|E_coherent|^2 + diffuse)`` in V/m."""
        return np.sqrt(np.sum(np.abs(self.coherent) ** 2, axis=-1) + self.diffuse)

    @property
    def db(self) -> np.ndarray:
        """Total field in dBV/m."""
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(self.magnitude)

    def contribution_magnitude(self, label: str) -> np.ndarray:
        return np.linalg.norm(self.breakdown[label], axis=-1)

    def sample(self, i: int) -> FieldSample:
        return FieldSample(self.points[i], self.coherent[i], {k: v[i] for k, v in self.breakdown.items()},
                           float(self.diffuse[i]), bool(self.reactive[i]))


def _coherent(scene: Scene, points: np.ndarray, engine: str, threads=None):
    panel = scene.engine_panel(engine)
    labels, g = scene.contributions(engine)
    if engine == "integral":
        src = integral_engine.split_sources(scene.incident, panel, g)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ReactiveNearFieldWarning)
            f = integral_engine.reradiate_E(src, points, threads=threads, far=scene.far)
        labels = ["induction"] + labels
    else:
        array_engine.enforce_feasibility(scene.pattern, panel, scene.wave.wavelength, quiet=scene.comparison)
        if len(g):
            f = array_engine.array_field(panel, scene.incident, g, scene.pattern, points, threads=threads)
        else:
            f = np.zeros((0, len(points), 3), dtype=complex)
    return labels, f


def evaluate(scene: Scene, points, engine: str = "integral", threads=None, grid=None) -> ScanResult:
    """Coherent contributions, diffuse intensity and reactive-zone flags at points."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(pts):
        check_front(scene.panel, pts)
    t0 = time.perf_counter()
    labels, f = _coherent(scene, pts, engine, threads)
    t1 = time.perf_counter()
    coherent = f.sum(axis=0) if len(f) else np.zeros((len(pts), 3), dtype=complex)
    s2 = scene.budget.s_squared
    diff = diffuse_intensity(scene.panel, scene.incident, s2, pts, threads) if len(pts) else np.zeros(0)
    panel = scene.engine_panel(engine)
    meta = {
        "engine": engine,
        "tile_edge_m": panel.tile_edge,
        "tile_pitch_m": list(panel.pitch),
        "tiles": list(panel.counts),
        "profile_hash": scene.profile_hash(),
        "budget": scene.budget.summary(),
        "seconds": t1 - t0,
        "seconds_per_point": (t1 - t0) / max(1, len(pts)),
        "contributions": labels,
    }
    return ScanResult(grid, pts, coherent, dict(zip(labels, f)), np.asarray(diff, dtype=float),
                      reactive_mask(scene.panel, pts, scene.wave.wavelength), meta)


def total_field(scene: Scene, point, engine: str = "integral") -> FieldSample:
    """Field sample at a single point."""
    return evaluate(scene, np.asarray(point, dtype=float)[None, :], engine).sample(0)


def grid_scan(scene: Scene, grid, engine: str = "integral", threads=None) -> ScanResult:
    res = evaluate(scene, grid.points, engine, threads, grid)
    res.metadata["grid"] = grid.describe()
    return res


def pattern_cut(scene: Scene, radius: float, angles, plane: str = "xz", engine: str = "integral",
                threads=None) -> ScanResult:
    """Field along an arc of ``radius`` around the panel center; ``angles`` in radians."""
    if radius <= 3.0 * scene.wave.wavelength:
        raise DomainError("cut radius must exceed 3 wavelengths")
    return grid_scan(scene, AngularCut.in_panel_plane(scene.panel, radius, angles, plane), engine, threads)


def relative_error(reference: np.ndarray, other: np.ndarray, floor: float = 1e-6):
    """``|other - reference| / |reference|`` and the mask of points above ``floor * max``."""
    ref = np.linalg.norm(reference, axis=-1)
    err = np.linalg.norm(other - reference, axis=-1) / np.where(ref > 0, ref, np.inf)
    return err, ref > floor * ref.max() if ref.size else ref > 0


def compare_engines(scene: Scene, grid, floor: float = 1e-6, threads=None) -> dict:
    """Relative error of the array engine against the integral engine on a shared mesh.

    ``relative_error`` uses the full integral field. ``modes_relative_error``
    leaves out the Gamma-independent induction term of the integral engine.
    """
    shared = replace(scene, comparison=True)
    ref = grid_scan(shared, grid, "integral", threads)
    arr = grid_scan(shared, grid, "array", threads)
    err, mask = relative_error(ref.coherent, arr.coherent, floor)
    # Diagnostic: the array engine has no counterpart of the induction term.
    modes_err, _ = relative_error(ref.coherent - ref.breakdown["induction"], arr.coherent, floor)
    e = err[mask]
    q = {f"p{p}": float(np.percentile(e, p)) for p in (50, 90, 95, 99)} if e.size else {}
    return {
        "relative_error": err,
        "mask": mask,
        "integral": ref,
        "array": arr,
        "quantiles": q,
        "fraction_below_2pct": float(np.mean(e <= 0.02)) if e.size else float("nan"),
        "modes_relative_error": modes_err,
        "modes_fraction_below_2pct": float(np.mean(modes_err[mask] <= 0.02)) if e.size else float("nan"),
        "seconds_per_point": {
            "integral": ref.metadata["seconds_per_point"],
            "array": arr.metadata["seconds_per_point"],
        },
    }


def _direction(scene: Scene, direction) -> np.ndarray:
    if np.ndim(direction) == 0:
        th = float(direction)
        return np.sin(th) * scene.panel.x_hat + np.cos(th) * scene.panel.n_hat
    return unit(direction)


@dataclass
class SpreadingResult:
    distances: np.ndarray
    mean_amplitude: np.ndarray
    near_slope: float
    far_slope: float
    transition: float
    asymptote_crossing: float
    fraunhofer: float
    metadata: dict = field(default_factory=dict)


def _fit_slope(r, a, sel):
    if np.count_nonzero(sel) < 2:
        return float("nan"), float("nan")
    s, c = np.polyfit(np.log10(r[sel]), np.log10(a[sel]), 1)
    return float(s), float(c)


def spreading_sweep(scene: Scene, direction, r_min: float, r_max: float, samples: int = 40,
                    window: float | None = None, engine: str = "integral", subsamples: int = 11,
                    threads=None) -> SpreadingResult:
    """Locally averaged ``|E|`` along a direction at log-spaced distances.

    ``direction`` is a unit vector or a polar angle (radians) in the x'-n
    plane. At each distance the amplitude is averaged over a ``window`` x
    ``window`` patch (default 10 lambda) normal to the direction, sampled on
    an ``subsamples`` x ``subsamples`` grid. Slopes of ``log|E|`` against
    ``log r`` are fitted below 0.1 and above 2 Fraunhofer distances. The
    transition is where the curve first drops 3 dB below the near-zone mean.
    """
    lam = scene.wave.wavelength
    window = 10.0 * lam if window is None else window
    d = _direction(scene, direction)
    t1 = np.cross(d, scene.panel.n_hat)
    t1 = unit(t1) if np.linalg.norm(t1) > 1e-9 else scene.panel.y_hat
    t2 = np.cross(d, t1)
    off = np.linspace(-window / 2, window / 2, subsamples)
    a, b = np.meshgrid(off, off, indexing="ij")
    patch = a.ravel()[:, None] * t1 + b.ravel()[:, None] * t2
    r = np.geomspace(r_min, r_max, samples)
    pts = (scene.panel.origin + r[:, None, None] * d + patch[None]).reshape(-1, 3)
    res = evaluate(scene, pts, engine, threads)
    mean_amp = res.magnitude.reshape(samples, -1).mean(axis=1)
    fr = scene.panel.fraunhofer_distance(lam)
    near = r < 0.1 * fr
    far = r > 2.0 * fr
    s_near, c_near = _fit_slope(r, mean_amp, near)
    s_far, c_far = _fit_slope(r, mean_amp, far)
    level = float(np.mean(mean_amp[near])) if np.any(near) else float(mean_amp[0])
    below = np.nonzero((mean_amp < level / np.sqrt(2.0)) & (r > (r[near].max() if np.any(near) else r_min)))[0]
    if below.size:
        i = below[0]
        if i > 0:
            x0, x1 = np.log10(r[i - 1]), np.log10(r[i])
            y0, y1 = np.log10(mean_amp[i - 1]), np.log10(mean_amp[i])
            yt = np.log10(level / np.sqrt(2.0))
            transition = float(10 ** (x0 + (yt - y0) * (x1 - x0) / (y1 - y0)))
        else:
            transition = float(r[0])
    else:
        transition = float("nan")
    crossing = float(10 ** ((np.log10(level) - c_far) / s_far)) if np.isfinite(s_far) and s_far != 0 else float("nan")
    meta = {"engine": engine, "window_m": window, "subsamples": subsamples, "direction": list(d),
            "seconds": res.metadata["seconds"]}
    return SpreadingResult(r, mean_amp, s_near, s_far, transition, crossing, fr, meta)


def planar_xz(panel: RisPanel, x_range, z_range, counts) -> PlanarGrid:
    """Raster in the panel's x'-n plane; ranges are panel-frame coordinates (m)."""
    return PlanarGrid.from_ranges(x_range, z_range, counts, panel.x_hat, panel.n_hat, panel.center)
