"""Geometry, wave constants, complex vectors and observation grids.

Conventions used throughout the package:

* time dependence ``exp(+j omega t)``; outgoing waves carry ``exp(-j k r)``;
* angles are radians; polar angles are measured from the panel normal;
* vector fields are complex numpy arrays whose last axis holds (x, y, z).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ContractError, DomainError, WrongHalfSpaceError

SPEED_OF_LIGHT = 299_792_458.0
MU_0 = 1.25663706212e-6
EPS_0 = 8.8541878128e-12
ETA_0 = float(np.sqrt(MU_0 / EPS_0))  # 376.730313... ohm

# Observation points closer than this many wavelengths to the panel are flagged.
REACTIVE_ZONE_WAVELENGTHS = 3.0

_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class Complex3:
    """Three complex components of an E (V/m) or H (A/m) phasor."""

    x: complex = 0j
    y: complex = 0j
    z: complex = 0j

    @classmethod
    def from_array(cls, a) -> "Complex3":
        a = np.asarray(a, dtype=complex).reshape(3)
        return cls(complex(a[0]), complex(a[1]), complex(a[2]))

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=complex)

    def magnitude(self) -> float:
        return float(np.sqrt(abs(self.x) ** 2 + abs(self.y) ** 2 + abs(self.z) ** 2))

    def dot(self, other: "Complex3") -> complex:
        """Bilinear dot product (no conjugation)."""
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Complex3") -> "Complex3":
        return Complex3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def __add__(self, other: "Complex3") -> "Complex3":
        return Complex3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Complex3") -> "Complex3":
        return Complex3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __mul__(self, s) -> "Complex3":
        return Complex3(self.x * s, self.y * s, self.z * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Complex3":
        return Complex3(-self.x, -self.y, -self.z)

    def __iter__(self):
        return iter((self.x, self.y, self.z))


@dataclass(frozen=True)
class WaveSpec:
    """Operating frequency and medium impedance."""

    frequency_hz: float
    eta: float = ETA_0

    def __post_init__(self):
        if not self.frequency_hz > 0:
            raise DomainError(f"frequency must be positive, got {self.frequency_hz}")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz

    @property
    def wavenumber(self) -> float:
        return 2.0 * np.pi / self.wavelength

    @classmethod
    def from_ghz(cls, f_ghz: float, eta: float = ETA_0) -> "WaveSpec":
        return cls(f_ghz * 1e9, eta)


def _vec(v, name="vector") -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ContractError(f"{name} must have 3 components, got shape {a.shape}")
    return a


def unit(v) -> np.ndarray:
    """Return ``v / |v|``."""
    a = np.asarray(v, dtype=float)
    n = np.linalg.norm(a)
    if n == 0:
        raise DomainError("cannot normalise a zero vector")
    return a / n


def _check_unit(n, name="normal") -> np.ndarray:
    a = np.asarray(n, dtype=float)
    if a.shape[-1] != 3 or np.any(np.abs(np.linalg.norm(a, axis=-1) - 1.0) > _UNIT_TOL):
        raise ContractError(f"{name} must be a unit vector (|n| = 1 within 1e-12)")
    return a


def tangential_project(v, n):
    """Tangential part ``n x (v x n)`` of a (complex) vector field.

    ``v`` may be a :class:`Complex3` or an array whose last axis has length 3;
    the result has the same kind.
    """
    n = _check_unit(n)
    as_c3 = isinstance(v, Complex3)
    a = v.to_array() if as_c3 else np.asarray(v)
    out = np.cross(n, np.cross(a, n))
    return Complex3.from_array(out) if as_c3 else out


def green(r, k: float):
    """Free-space scalar Green's function ``exp(-j k r) / (4 pi r)``."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("Green's function distance must be positive")
    g = np.exp(-1j * k * r) / (4.0 * np.pi * r)
    return complex(g) if g.ndim == 0 else g


def far_green(r, r_src, k: float) -> complex:
    """Fraunhofer approximation of ``green(|r - r_src|)``.

    Valid only when ``|r|`` is much larger than ``|r_src|``; this is not
    checked.
    """
    r = _vec(r, "observation point")
    r_src = _vec(r_src, "source point")
    d = float(np.linalg.norm(r))
    if d == 0:
        raise DomainError("far-field Green's function undefined at the origin")
    rhat = r / d
    return complex(np.exp(-1j * k * d) / (4.0 * np.pi * d) * np.exp(1j * k * float(rhat @ r_src)))


@dataclass(frozen=True)
class RisPanel:
    """Flat rectangular panel split into ``nx * ny`` square-ish tiles.

    ``tile_edge`` is the requested tile size; the tile counts are
    ``round(L / tile_edge)`` and the actual pitch is ``L / n`` so that the tiles
    cover the panel exactly. Tiles are ordered with the x' index outermost.
    """

    half_extents: tuple[float, float]
    tile_edge: float
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    normal: tuple[float, float, float] = (0.0, 0.0, 1.0)
    x_axis: tuple[float, float, float] = (1.0, 0.0, 0.0)

    def __post_init__(self):
        hx, hy = (float(h) for h in self.half_extents)
        if hx < 0 or hy < 0:
            raise DomainError("panel half extents must be non-negative")
        if not self.tile_edge > 0:
            raise DomainError("tile edge must be positive")
        n = unit(_vec(self.normal, "normal"))
        x = _vec(self.x_axis, "x_axis")
        # Gram-Schmidt so that slightly inexact user axes still give an exact triad.
        x = unit(x - (x @ n) * n)
        object.__setattr__(self, "half_extents", (hx, hy))
        object.__setattr__(self, "center", tuple(float(c) for c in _vec(self.center, "center")))
        object.__setattr__(self, "normal", tuple(float(c) for c in n))
        object.__setattr__(self, "x_axis", tuple(float(c) for c in x))

    @classmethod
    def from_size(cls, lx: float, ly: float, tile_edge: float, **kw) -> "RisPanel":
        return cls((lx / 2.0, ly / 2.0), tile_edge, **kw)

    def with_tile_edge(self, tile_edge: float) -> "RisPanel":
        return RisPanel(self.half_extents, tile_edge, self.center, self.normal, self.x_axis)

    @property
    def size(self) -> tuple[float, float]:
        return (2.0 * self.half_extents[0], 2.0 * self.half_extents[1])

    @property
    def max_dimension(self) -> float:
        return max(self.size)

    @cached_property
    def n_hat(self) -> np.ndarray:
        return np.array(self.normal)

    @cached_property
    def x_hat(self) -> np.ndarray:
        return np.array(self.x_axis)

    @cached_property
    def y_hat(self) -> np.ndarray:
        return np.cross(self.n_hat, self.x_hat)

    @cached_property
    def origin(self) -> np.ndarray:
        return np.array(self.center)

    @property
    def counts(self) -> tuple[int, int]:
        lx, ly = self.size
        if lx == 0 or ly == 0:
            return (0, 0)
        return (max(1, int(round(lx / self.tile_edge))), max(1, int(round(ly / self.tile_edge))))

    @property
    def n_tiles(self) -> int:
        nx, ny = self.counts
        return nx * ny

    @property
    def pitch(self) -> tuple[float, float]:
        nx, ny = self.counts
        lx, ly = self.size
        return (lx / nx if nx else 0.0, ly / ny if ny else 0.0)

    @property
    def tile_area(self) -> float:
        px, py = self.pitch
        return px * py

    @cached_property
    def tile_local(self) -> np.ndarray:
        """Tile-center panel coordinates (x', y'), shape (n_tiles, 2)."""
        nx, ny = self.counts
        if nx == 0:
            return np.zeros((0, 2))
        px, py = self.pitch
        u = (np.arange(nx) + 0.5) * px - self.half_extents[0]
        v = (np.arange(ny) + 0.5) * py - self.half_extents[1]
        uu, vv = np.meshgrid(u, v, indexing="ij")
        return np.column_stack([uu.ravel(), vv.ravel()])

    @cached_property
    def tile_centers(self) -> np.ndarray:
        """Tile centers in the global frame, shape (n_tiles, 3)."""
        uv = self.tile_local
        return self.origin + uv[:, :1] * self.x_hat + uv[:, 1:] * self.y_hat

    def to_local(self, points) -> np.ndarray:
        """Panel-frame coordinates (x', y', height above the panel)."""
        d = np.asarray(points, dtype=float) - self.origin
        return np.stack([d @ self.x_hat, d @ self.y_hat, d @ self.n_hat], axis=-1)

    def to_global(self, local) -> np.ndarray:
        p = np.asarray(local, dtype=float)
        return self.origin + p[..., :1] * self.x_hat + p[..., 1:2] * self.y_hat + p[..., 2:3] * self.n_hat

    def height(self, points) -> np.ndarray:
        """Signed distance of points from the panel plane (positive in front)."""
        return (np.asarray(points, dtype=float) - self.origin) @ self.n_hat

    def contains(self, xp, yp, tol: float = 1e-9) -> np.ndarray:
        hx, hy = self.half_extents
        return (np.abs(xp) <= hx * (1 + tol) + tol) & (np.abs(yp) <= hy * (1 + tol) + tol)

    def fraunhofer_distance(self, wavelength: float) -> float:
        """``2 D^2 / lambda`` with ``D`` the larger panel side."""
        return 2.0 * self.max_dimension**2 / wavelength


def check_front(panel: RisPanel, points) -> np.ndarray:
    """Raise :class:`WrongHalfSpaceError` if any point is on or behind the panel plane."""
    h = panel.height(points)
    if np.any(h <= 0):
        raise WrongHalfSpaceError("observation point not in the reflection half-space of the panel")
    return h


def reactive_mask(panel: RisPanel, points, wavelength: float) -> np.ndarray:
    """True where a point is closer than 3 wavelengths to the panel plane."""
    return panel.height(points) < REACTIVE_ZONE_WAVELENGTHS * wavelength


@dataclass(frozen=True)
class PlanarGrid:
    """Raster ``origin + i*du*axis_u + j*dv*axis_v`` with ``i`` outermost."""

    origin: tuple[float, float, float]
    axis_u: tuple[float, float, float]
    axis_v: tuple[float, float, float]
    counts: tuple[int, int]
    spacing: tuple[float, float]
    kind: str = field(default="planar", init=False)

    @classmethod
    def from_ranges(cls, u_range, v_range, counts, axis_u=(1, 0, 0), axis_v=(0, 0, 1), offset=(0, 0, 0)):
        """Raster spanning ``u_range`` x ``v_range`` (inclusive) with the given counts."""
        nu, nv = int(counts[0]), int(counts[1])
        du = (u_range[1] - u_range[0]) / (nu - 1) if nu > 1 else 0.0
        dv = (v_range[1] - v_range[0]) / (nv - 1) if nv > 1 else 0.0
        au, av = unit(axis_u), unit(axis_v)
        o = np.asarray(offset, float) + u_range[0] * au + v_range[0] * av
        return cls(tuple(o), tuple(au), tuple(av), (nu, nv), (du, dv))

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts

    @property
    def size(self) -> int:
        return self.counts[0] * self.counts[1]

    @cached_property
    def points(self) -> np.ndarray:
        nu, nv = self.counts
        i, j = np.meshgrid(np.arange(nu), np.arange(nv), indexing="ij")
        su = (i.ravel() * self.spacing[0])[:, None]
        sv = (j.ravel() * self.spacing[1])[:, None]
        return np.asarray(self.origin) + su * np.asarray(self.axis_u) + sv * np.asarray(self.axis_v)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "origin_m": list(self.origin),
            "axis_u": list(self.axis_u),
            "axis_v": list(self.axis_v),
            "counts": list(self.counts),
            "spacing_m": list(self.spacing),
        }


@dataclass(frozen=True)
class AngularCut:
    """Arc of points ``center + r (sin(theta) axis_u + cos(theta) axis_n)``."""

    center: tuple[float, float, float]
    radius: float
    angles: tuple[float, ...]
    axis_u: tuple[float, float, float] = (1.0, 0.0, 0.0)
    axis_n: tuple[float, float, float] = (0.0, 0.0, 1.0)
    kind: str = field(default="angular", init=False)

    @classmethod
    def in_panel_plane(cls, panel: RisPanel, radius: float, angles: Sequence[float], plane: str = "xz"):
        """Cut in the x'-n (``"xz"``) or y'-n (``"yz"``) plane of ``panel``."""
        if plane not in ("xz", "yz"):
            raise DomainError(f"unknown cut plane {plane!r}")
        u = panel.x_hat if plane == "xz" else panel.y_hat
        return cls(panel.center, float(radius), tuple(float(a) for a in angles), tuple(u), panel.normal)

    @property
    def shape(self) -> tuple[int]:
        return (len(self.angles),)

    @property
    def size(self) -> int:
        return len(self.angles)

    @cached_property
    def points(self) -> np.ndarray:
        th = np.asarray(self.angles, dtype=float)[:, None]
        return np.asarray(self.center) + self.radius * (
            np.sin(th) * np.asarray(self.axis_u) + np.cos(th) * np.asarray(self.axis_n)
        )

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "center_m": list(self.center),
            "radius_m": self.radius,
            "angles_deg": [float(np.degrees(a)) for a in self.angles],
            "axis_u": list(self.axis_u),
            "axis_n": list(self.axis_n),
        }


ObservationGrid = PlanarGrid | AngularCut
