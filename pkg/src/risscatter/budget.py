"""Macroscopic power budget of a reradiating surface.

A budget holds the specular reflectance ``rho``, the per-mode reradiation
weights ``m_n``, the diffuse fraction ``S^2``, the dissipation ``tau`` and the
Rayleigh factor ``R``, tied together by::

    R^2 rho + S^2 + R^2 sum(m_n) + tau = 1
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, BudgetWarning, DomainError

DEFAULT_TOLERANCE = 1e-9


def _fraction(name, value):
    v = float(value)
    if not (0.0 <= v <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {v}")
    return v


def balance_residual(rho, mode_weights, s_squared, tau, rayleigh) -> float:
    r2 = rayleigh * rayleigh
    return r2 * rho + s_squared + r2 * float(np.sum(mode_weights)) + tau - 1.0


def _over_unity(total, strict, tolerance):
    if total > 1.0 + tolerance:
        msg = f"rho + sum(m_n) = {total:.6g} exceeds 1"
        if strict:
            raise BudgetError(msg)
        warnings.warn(msg + " (lenient budget)", BudgetWarning, stacklevel=3)


def solve_diffuse(rho, mode_weights, rayleigh, strict: bool = False, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """Diffuse fraction ``S^2 = (1 - R^2)(rho + sum m_n)`` implied by a Rayleigh factor."""
    rho = _fraction("rho", rho)
    ms = [_fraction("m_n", m) for m in mode_weights]
    rayleigh = _fraction("rayleigh", rayleigh)
    total = rho + sum(ms)
    _over_unity(total, strict, tolerance)
    return (1.0 - rayleigh * rayleigh) * total


def solve_rayleigh(rho, mode_weights, s_squared) -> float:
    """Inverse of :func:`solve_diffuse`: ``R = sqrt(1 - S^2 / (rho + sum m_n))``."""
    total = float(rho) + float(np.sum(mode_weights))
    s_squared = _fraction("s_squared", s_squared)
    if s_squared == 0:
        return 1.0
    if total <= 0 or s_squared > total:
        raise DomainError("S^2 cannot exceed rho + sum(m_n)")
    return float(np.sqrt(1.0 - s_squared / total))


def check_er_identity(s, r) -> bool:
    """Plain-wall effective-roughness identity ``S^2 + R^2 = 1``."""
    return abs(s * s + r * r - 1.0) < 1e-9


def smooth_balance(rho, m, tau) -> bool:
    """Balance ``rho + m + tau = 1`` of a perfectly smooth surface."""
    return abs(rho + m + tau - 1.0) < 1e-9


@dataclass(frozen=True)
class PowerBudget:
    """Power coefficients of a panel; see the module docstring for the identity.

    ``strict`` budgets raise :class:`BudgetError` when the identity is violated
    beyond ``tolerance``; lenient ones (the default) only warn when
    ``rho + sum(m_n)`` exceeds unity.
    """

    rho: float = 0.0
    mode_weights: tuple[float, ...] = (1.0,)
    s_squared: float = 0.0
    tau: float = 0.0
    rayleigh: float = 1.0
    strict: bool = False
    tolerance: float = DEFAULT_TOLERANCE
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "mode_weights", tuple(_fraction("m_n", m) for m in self.mode_weights))
        for name in ("rho", "s_squared", "tau", "rayleigh"):
            object.__setattr__(self, name, _fraction(name, getattr(self, name)))
        if self.strict and abs(self.residual) > self.tolerance:
            raise BudgetError(f"power balance residual {self.residual:.3g} exceeds {self.tolerance:g}")

    @classmethod
    def complete(cls, rho=0.0, mode_weights=(1.0,), rayleigh=1.0, strict=False, tolerance=DEFAULT_TOLERANCE):
        """Budget with ``S^2`` from the Rayleigh factor and ``tau = 1 - rho - sum m_n``.

        In lenient mode an over-unity ``rho + sum m_n`` yields ``tau = 0`` and a
        recorded warning.
        """
        msgs = []
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            s2 = solve_diffuse(rho, mode_weights, rayleigh, strict=strict, tolerance=tolerance)
        for w in caught:
            msgs.append(str(w.message))
            warnings.warn(str(w.message), BudgetWarning, stacklevel=2)
        tau = 1.0 - (rho + float(np.sum(mode_weights)))
        return cls(rho, tuple(mode_weights), s2, max(0.0, min(1.0, tau)), rayleigh, strict, tolerance, tuple(msgs))

    @classmethod
    def with_diffuse(cls, rho, mode_weights, s_squared, strict=False, tolerance=DEFAULT_TOLERANCE):
        """Budget with a target diffuse fraction; the Rayleigh factor is re-solved.

        ``R^2 = 1 - S^2 / (rho + sum m_n)`` so the coherent modes shrink by ``R``
        while ``tau`` stays at ``1 - rho - sum m_n``.
        """
        r = solve_rayleigh(rho, mode_weights, s_squared)
        b = cls.complete(rho, mode_weights, r, strict=strict, tolerance=tolerance)
        # s_squared from the forward formula equals the target up to rounding; keep the target.
        return cls(b.rho, b.mode_weights, float(s_squared), b.tau, r, strict, tolerance, b.warnings)

    @property
    def reradiation(self) -> float:
        """Total reradiation coefficient ``sum(m_n)``."""
        return float(np.sum(self.mode_weights))

    @property
    def residual(self) -> float:
        return balance_residual(self.rho, self.mode_weights, self.s_squared, self.tau, self.rayleigh)

    def summary(self) -> dict:
        return {
            "rho": self.rho,
            "mode_weights": list(self.mode_weights),
            "sum_rho_m": self.rho + self.reradiation,
            "s_squared": self.s_squared,
            "tau": self.tau,
            "rayleigh": self.rayleigh,
            "residual": self.residual,
            "strict": self.strict,
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class AngleTable:
    """Incidence-angle dependent ``(rho, m_n, tau)`` with linear interpolation.

    ``angles`` are radians in ascending order; ``mode_weights`` has one row per
    angle. Values outside the table are clamped to the end points.
    """

    angles: tuple[float, ...]
    rho: tuple[float, ...]
    mode_weights: tuple[tuple[float, ...], ...]
    tau: tuple[float, ...]
    rayleigh: float = 1.0

    def __post_init__(self):
        n = len(self.angles)
        if n == 0 or len(self.rho) != n or len(self.tau) != n or len(self.mode_weights) != n:
            raise DomainError("angle table columns must have equal, non-zero length")
        if np.any(np.diff(self.angles) <= 0):
            raise DomainError("angle table must be strictly increasing")

    def at(self, theta_i: float) -> PowerBudget:
        th = abs(float(theta_i))
        m = np.asarray(self.mode_weights, dtype=float)
        weights = tuple(float(np.interp(th, self.angles, m[:, j])) for j in range(m.shape[1]))
        rho = float(np.interp(th, self.angles, self.rho))
        tau = float(np.interp(th, self.angles, self.tau))
        s2 = solve_diffuse(rho, weights, self.rayleigh)
        return PowerBudget(rho, weights, s2, tau, self.rayleigh)


def budget_for(table_or_budget, theta_i: float) -> PowerBudget:
    if isinstance(table_or_budget, AngleTable):
        return table_or_budget.at(theta_i)
    return table_or_budget
