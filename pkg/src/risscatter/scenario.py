"""Scenario files: a YAML description of one scene and one scan.

Angles are degrees and frequency is GHz in the file; everything is converted
to radians and hertz on load. ``load_scenario`` validates every field and
reports problems by dotted field name (``incident.polarization``) or, for
syntax errors, by line and column.
"""

from __future__ import annotations

import copy
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .array import ElementPattern, Violation, feasibility_check
from .budget import PowerBudget
from .core import AngularCut, PlanarGrid, RisPanel, WaveSpec
from .errors import BudgetError, ContractError, DomainError, ScenarioError
from .incident import PlaneWave, SphericalSource
from .modulation import Mode, ModulationProfile, focus_profile, gradient_profile, read_gamma_table, table_mode
from .scan import ENGINES, Scene

PROFILE_TYPES = ("gradient", "focus", "multimode", "custom-table")
SCAN_TYPES = ("map", "cut", "spreading")

DEFAULTS = {
    "frequency_ghz": 3.0,
    "engine": "integral",
    "panel": {
        "center_m": [0.0, 0.0, 0.0],
        "normal": [0.0, 0.0, 1.0],
        "x_axis": [1.0, 0.0, 0.0],
        "tile_edge_wavelengths": 0.5,
    },
    "incident": {"type": "plane", "amplitude_Vpm": 1.0, "theta_deg": 0.0, "phi_deg": 0.0, "phase_deg": 0.0},
    "budget": {"rho": 0.0, "rayleigh": 1.0, "s_squared": None, "strict": False},
    "element": {"kind": "huygens", "alpha": 0.0, "tile_edge_wavelengths": None},
    "output": {"directory": "out", "name": None},
}


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _get(cfg: dict, path: str, required: bool = True, default=None):
    node = cfg
    for part in path.split("."):
        if not isinstance(node, dict) or node.get(part) is None:
            if required:
                raise ScenarioError(f"missing required field {path!r}", field=path)
            return default
        node = node[part]
    return node


def _number(cfg, path, required=True, default=None, positive=False, nonneg=False) -> float | None:
    v = _get(cfg, path, required, default)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"{path} must be a number", field=path)
    v = float(v)
    if not np.isfinite(v) or (positive and v <= 0) or (nonneg and v < 0):
        raise ScenarioError(f"{path} must be a {'positive' if positive else 'non-negative' if nonneg else 'finite'} number",
                            field=path)
    return v


def _vector(cfg, path, required=True, default=None, n=3) -> list[float] | None:
    v = _get(cfg, path, required, default)
    if v is None:
        return None
    if not isinstance(v, (list, tuple)) or len(v) != n or not all(
            isinstance(c, (int, float)) and not isinstance(c, bool) for c in v):
        raise ScenarioError(f"{path} must be a list of {n} numbers", field=path)
    return [float(c) for c in v]


def _choice(cfg, path, options, default=None) -> str:
    v = _get(cfg, path, default is None, default)
    if v not in options:
        raise ScenarioError(f"{path} must be one of {', '.join(options)}", field=path)
    return v


@dataclass(eq=False)
class Scenario:
    """A validated scenario: the normalised configuration plus the built scene."""

    config: dict
    scene: Scene
    engine: str
    scan: dict
    output: dict
    source: Path | None = None
    warnings: list = field(default_factory=list)
    feasibility: list = field(default_factory=list)

    def __eq__(self, other):
        return isinstance(other, Scenario) and self.config == other.config

    def grid(self):
        """Observation grid of a ``map`` or ``cut`` scan."""
        s = self.scan
        panel = self.scene.panel
        if s["type"] == "map":
            axes = {"x": panel.x_hat, "y": panel.y_hat, "z": panel.n_hat}
            u, v = s["plane"][0], s["plane"][1]
            return PlanarGrid.from_ranges(s["u_range_m"], s["v_range_m"], s["counts"], axes[u], axes[v], panel.center)
        if s["type"] == "cut":
            n = int(round((s["stop_deg"] - s["start_deg"]) / s["step_deg"])) + 1
            ang = np.radians(s["start_deg"] + s["step_deg"] * np.arange(n))
            return AngularCut.in_panel_plane(panel, s["radius_m"], ang, s["plane"])
        raise ScenarioError(f"scan type {s['type']!r} has no observation grid", field="scan.type")


def _panel(cfg, lam) -> RisPanel:
    size = _vector(cfg, "panel.size_m", required=False, n=2)
    if size is None:
        sw = _vector(cfg, "panel.size_wavelengths", required=False, n=2)
        if sw is None:
            raise ScenarioError("panel needs size_m or size_wavelengths", field="panel.size_m")
        size = [s * lam for s in sw]
    if min(size) < 0:
        raise ScenarioError("panel size must be non-negative", field="panel.size_m")
    edge = _number(cfg, "panel.tile_edge_wavelengths", positive=True) * lam
    try:
        return RisPanel.from_size(size[0], size[1], edge, center=_vector(cfg, "panel.center_m"),
                                  normal=_vector(cfg, "panel.normal"), x_axis=_vector(cfg, "panel.x_axis"))
    except (DomainError, ValueError) as e:
        raise ScenarioError(str(e), field="panel") from e


def _incident(cfg, wave, panel):
    kind = _choice(cfg, "incident.type", ("plane", "spherical"))
    pol = _vector(cfg, "incident.polarization")
    phase = np.radians(_number(cfg, "incident.phase_deg"))
    try:
        if kind == "plane":
            return PlaneWave.from_angles(wave, _number(cfg, "incident.amplitude_Vpm", nonneg=True),
                                         np.radians(_number(cfg, "incident.theta_deg")), pol,
                                         phi=np.radians(_number(cfg, "incident.phi_deg")), panel=panel, phase=phase)
        pos = _vector(cfg, "incident.position_m")
        return SphericalSource(wave, _number(cfg, "incident.eirp_W", positive=True), pos,
                               tuple(np.asarray(pol) / np.linalg.norm(pol)), phase)
    except (ContractError, DomainError, ValueError) as e:
        raise ScenarioError(f"incident: {e}", field="incident.polarization") from e


def _modes(cfg, k, source: Path | None) -> list[Mode]:
    kind = _choice(cfg, "profile.type", PROFILE_TYPES)
    ti = np.radians(_number(cfg, "profile.theta_i_deg", required=False, default=cfg["incident"].get("theta_deg", 0.0)))
    try:
        if kind == "gradient":
            return [gradient_profile(ti, np.radians(_number(cfg, "profile.theta_r_deg")), k,
                                     _number(cfg, "profile.weight", required=False, default=1.0, nonneg=True))]
        if kind == "focus":
            return [focus_profile(ti, _number(cfg, "profile.z0_m"), k,
                                  _number(cfg, "profile.weight", required=False, default=1.0, nonneg=True))]
        if kind == "multimode":
            entries = _get(cfg, "profile.modes")
            if not isinstance(entries, list) or not entries:
                raise ScenarioError("profile.modes must be a non-empty list", field="profile.modes")
            out = []
            for i, e in enumerate(entries):
                name = f"profile.modes[{i}]"
                sub = {"profile": {f"modes[{i}]": e}} if isinstance(e, dict) else {}
                w = _number(sub, f"{name}.weight", nonneg=True)
                tr = _number(sub, f"{name}.theta_r_deg")
                out.append(gradient_profile(ti, np.radians(tr), k, w))
            return out
        path = Path(_get(cfg, "profile.path"))
        if not path.is_absolute() and source is not None:
            path = source.parent / path
        pts, vals = read_gamma_table(path)
        return [table_mode(pts, vals, weight=_number(cfg, "profile.weight", required=False, default=1.0, nonneg=True))]
    except (DomainError, OSError, ValueError) as e:
        if isinstance(e, ScenarioError):
            raise
        raise ScenarioError(f"profile: {e}", field="profile") from e


def _budget(cfg, weights) -> tuple[PowerBudget, list[str]]:
    rho = _number(cfg, "budget.rho", nonneg=True)
    strict = bool(_get(cfg, "budget.strict", required=False, default=False))
    s2 = _number(cfg, "budget.s_squared", required=False, nonneg=True)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            if s2 is not None:
                b = PowerBudget.with_diffuse(rho, weights, s2, strict=strict)
            else:
                b = PowerBudget.complete(rho, weights, _number(cfg, "budget.rayleigh", nonneg=True), strict=strict)
        except BudgetError:
            raise
        except DomainError as e:
            raise ScenarioError(f"budget: {e}", field="budget") from e
    return b, [str(w.message) for w in caught]


def _scan(cfg, lam) -> dict:
    kind = _choice(cfg, "scan.type", SCAN_TYPES)
    if kind == "map":
        plane = _choice(cfg, "scan.plane", ("xz", "yz", "xy"), default="xz")
        counts = _vector(cfg, "scan.counts", n=2)
        if min(counts) < 1 or any(c != int(c) for c in counts):
            raise ScenarioError("scan.counts must be positive integers", field="scan.counts")
        return {"type": kind, "plane": plane, "u_range_m": _vector(cfg, "scan.u_range_m", n=2),
                "v_range_m": _vector(cfg, "scan.v_range_m", n=2), "counts": [int(c) for c in counts]}
    if kind == "cut":
        step = _number(cfg, "scan.step_deg", positive=True)
        return {"type": kind, "plane": _choice(cfg, "scan.plane", ("xz", "yz"), default="xz"),
                "radius_m": _number(cfg, "scan.radius_m", positive=True),
                "start_deg": _number(cfg, "scan.start_deg"), "stop_deg": _number(cfg, "scan.stop_deg"),
                "step_deg": step}
    return {"type": kind, "theta_deg": _number(cfg, "scan.theta_deg"),
            "r_min_m": _number(cfg, "scan.r_min_m", positive=True),
            "r_max_m": _number(cfg, "scan.r_max_m", positive=True),
            "samples": int(_number(cfg, "scan.samples", required=False, default=40, positive=True)),
            "window_wavelengths": _number(cfg, "scan.window_wavelengths", required=False, default=10.0,
                                          positive=True)}


def build_scenario(raw: dict, source: Path | None = None) -> Scenario:
    """Validate a configuration mapping and build its scene."""
    if not isinstance(raw, dict):
        raise ScenarioError("scenario must be a mapping at the top level")
    cfg = _merge(DEFAULTS, raw)
    freq = _number(cfg, "frequency_ghz", positive=True)
    wave = WaveSpec.from_ghz(freq)
    lam, k = wave.wavelength, wave.wavenumber
    panel = _panel(cfg, lam)
    incident = _incident(cfg, wave, panel)
    modes = _modes(cfg, k, source)
    budget, msgs = _budget(cfg, tuple(m.weight for m in modes))
    profile = ModulationProfile(tuple(modes), budget.rayleigh, panel.half_extents)
    try:
        pattern = ElementPattern(_choice(cfg, "element.kind", ("huygens", "lambertian")),
                                 _number(cfg, "element.alpha", nonneg=True))
    except DomainError as e:
        raise ScenarioError(str(e), field="element") from e
    engine = _choice(cfg, "engine", ENGINES)
    a_edge = _number(cfg, "element.tile_edge_wavelengths", required=False, positive=True)
    scene = Scene(wave, panel, incident, profile, budget, pattern, None if a_edge is None else a_edge * lam)
    scan = _scan(cfg, lam)
    output = {"directory": str(_get(cfg, "output.directory")), "name": _get(cfg, "output.name", required=False)}

    feas: list[Violation] = []
    if engine == "array":
        edge = scene.engine_panel("array").pitch
        feas = feasibility_check(pattern, max(edge), lam)
        hard = [v for v in feas if v.hard]
        if hard:
            raise ScenarioError(f"{hard[0].code}: {hard[0].message}", field="element.tile_edge_wavelengths")
        msgs += [f"{v.code}: {v.message}" for v in feas]
    sc = Scenario(cfg, scene, engine, scan, output, source, msgs, feas)
    if scan["type"] in ("map", "cut"):
        pts = sc.grid().points
        h = panel.height(pts)
        if np.any(h <= 0):
            raise ScenarioError("scan points must lie in front of the panel", field="scan")
        close = int(np.count_nonzero(h < 3.0 * lam))
        if close:
            msgs.append(f"reactive-near-field: {close} scan point(s) closer than 3 wavelengths to the panel")
    return sc


def load_scenario(path) -> Scenario:
    """Read and validate a YAML scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ScenarioError(f"cannot read {path}: {e.strerror}") from e
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark else None
        col = mark.column + 1 if mark else None
        raise ScenarioError(f"{path}: {getattr(e, 'problem', None) or e}", line=line, column=col) from e
    return build_scenario(raw if raw is not None else {}, path)


def dump_scenario(scenario: Scenario) -> str:
    return yaml.safe_dump(scenario.config, sort_keys=True)


def write_scenario(scenario: Scenario, path) -> Path:
    """Write the normalised configuration; loading it back gives an equal scenario."""
    path = Path(path)
    path.write_text(dump_scenario(scenario))
    return path


def with_overrides(scenario: Scenario, engine: str | None = None, tile_edge: float | None = None) -> Scenario:
    """Scenario rebuilt with CLI overrides; ``tile_edge`` is in wavelengths."""
    cfg = copy.deepcopy(scenario.config)
    if engine is not None:
        cfg["engine"] = engine
    if tile_edge is not None:
        cfg["panel"]["tile_edge_wavelengths"] = tile_edge
        cfg["element"]["tile_edge_wavelengths"] = tile_edge
    return build_scenario(cfg, scenario.source)


def bundled_scenarios() -> list[Path]:
    """Paths of the scenario files shipped with the package."""
    return sorted((Path(__file__).parent / "scenarios").glob("*.yaml"))

