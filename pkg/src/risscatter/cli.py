"""``ris-scatter`` command line.

Every subcommand writes ``<name>_<subcommand>.csv`` plus a JSON sidecar with
the parameters, warnings, timing and the SHA-256 of the CSV bytes. Exit codes:
0 success, 2 invalid input, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .errors import BudgetError, FeasibilityError, RisError, ScenarioError
from .parallel import THREADS_ENV, default_threads
from .scan import compare_engines, grid_scan, spreading_sweep
from .scenario import Scenario, load_scenario, with_overrides

FORMAT_VERSION = "1.0"
EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3
SUBCOMMANDS = ("map", "cut", "compare", "spreading", "budget", "validate")


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _csv(header: list[str], rows) -> bytes:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue().encode()


def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, Path):
        return str(o)
    raise TypeError(f"not serialisable: {type(o)}")


def _field_columns(res) -> tuple[list[str], np.ndarray]:
    cols = []
    for c in "xyz":
        cols += [f"re_E{c}_Vpm", f"im_E{c}_Vpm"]
    vals = np.empty((len(res), 6))
    vals[:, 0::2] = res.coherent.real
    vals[:, 1::2] = res.coherent.imag
    return cols, vals


def _flags(res) -> list[str]:
    return ["reactive" if f else "" for f in res.reactive]


def run_map(sc: Scenario, threads: int):
    res = grid_scan(sc.scene, sc.grid(), sc.engine, threads)
    cols, vals = _field_columns(res)
    header = ["x_m", "y_m", "z_m"] + cols + ["abs_E_Vpm", "diffuse_V2pm2", "flags"]
    rows = (list(p) + list(v) + [m, d, f] for p, v, m, d, f in
            zip(res.points, vals, res.magnitude, res.diffuse, _flags(res)))
    summary = {"points": len(res), "max_abs_E_Vpm": float(res.magnitude.max()),
               "reactive_points": int(res.reactive.sum())}
    return _csv(header, rows), summary, res.metadata


def run_cut(sc: Scenario, threads: int):
    if sc.scan["type"] != "cut":
        raise ScenarioError("the cut subcommand needs scan.type: cut", field="scan.type")
    grid = sc.grid()
    res = grid_scan(sc.scene, grid, sc.engine, threads)
    labels = list(res.breakdown)
    cols, vals = _field_columns(res)
    header = (["angle_deg", "x_m", "y_m", "z_m"] + cols + ["abs_E_Vpm", "dBVpm"]
              + [f"abs_{lab}_Vpm" for lab in labels] + ["diffuse_V2pm2", "flags"])
    per = np.column_stack([res.contribution_magnitude(lab) for lab in labels]) if labels else np.zeros((len(res), 0))
    ang = np.degrees(np.asarray(grid.angles))
    rows = ([a] + list(p) + list(v) + [m, db] + list(pm) + [d, f] for a, p, v, m, db, pm, d, f in
            zip(ang, res.points, vals, res.magnitude, res.db, per, res.diffuse, _flags(res)))
    i = int(np.argmax(res.magnitude))
    summary = {"points": len(res), "peak_angle_deg": float(ang[i]), "peak_dBVpm": float(res.db[i])}
    return _csv(header, rows), summary, res.metadata


def run_compare(sc: Scenario, threads: int):
    out = compare_engines(sc.scene, sc.grid(), threads=threads)
    a, b = out["integral"], out["array"]
    header = ["x_m", "y_m", "z_m", "abs_E_integral_Vpm", "abs_E_array_Vpm", "relative_error",
              "modes_relative_error", "included"]
    ea, eb = np.linalg.norm(a.coherent, axis=1), np.linalg.norm(b.coherent, axis=1)
    rows = (list(p) + [x, y, e, em, inc] for p, x, y, e, em, inc in
            zip(a.points, ea, eb, out["relative_error"], out["modes_relative_error"], out["mask"]))
    summary = {"quantiles": out["quantiles"], "fraction_below_2pct": out["fraction_below_2pct"],
               "modes_fraction_below_2pct": out["modes_fraction_below_2pct"],
               "seconds_per_point": out["seconds_per_point"]}
    return _csv(header, rows), summary, {"integral": a.metadata, "array": b.metadata}


def run_spreading(sc: Scenario, threads: int):
    s = sc.scan
    if s["type"] != "spreading":
        raise ScenarioError("the spreading subcommand needs scan.type: spreading", field="scan.type")
    lam = sc.scene.wave.wavelength
    res = spreading_sweep(sc.scene, np.radians(s["theta_deg"]), s["r_min_m"], s["r_max_m"], s["samples"],
                          s["window_wavelengths"] * lam, sc.engine, threads=threads)
    header = ["distance_m", "mean_abs_E_Vpm", "mean_dBVpm"]
    rows = ([r, a, 20.0 * np.log10(a)] for r, a in zip(res.distances, res.mean_amplitude))
    summary = {"near_slope": res.near_slope, "far_slope": res.far_slope, "transition_m": res.transition,
               "asymptote_crossing_m": res.asymptote_crossing, "fraunhofer_m": res.fraunhofer}
    return _csv(header, rows), summary, res.metadata


def run_budget(sc: Scenario, threads: int):
    b = sc.scene.budget
    summ = b.summary()
    rows = [[k, v] for k, v in summ.items() if k not in ("mode_weights", "warnings")]
    rows += [[f"m{i + 1}", m] for i, m in enumerate(b.mode_weights)]
    print(f"rho + sum(m) = {summ['sum_rho_m']:.2f}  S^2 = {b.s_squared:.6g}  R = {b.rayleigh:.6g}  "
          f"tau = {b.tau:.6g}  residual = {b.residual:.3g}")
    for w in b.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return _csv(["quantity", "value"], rows), summ, {}


def run_validate(sc: Scenario, threads: int):
    rows = [["load", "ok", "scenario parsed and validated"]]
    rows += [[v.code, "violation", v.message] for v in sc.feasibility]
    rows += [["warning", "warn", w] for w in sc.warnings if not any(w.endswith(v.message) for v in sc.feasibility)]
    return _csv(["check", "status", "message"], rows), {"valid": True, "warnings": len(sc.warnings)}, {}


RUNNERS = {"map": run_map, "cut": run_cut, "compare": run_compare, "spreading": run_spreading,
           "budget": run_budget, "validate": run_validate}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ris-scatter", description="Field scattered by a reconfigurable surface.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", required=True, type=Path, help="scenario YAML file")
    p.add_argument("--engine", choices=("integral", "array"), help="override the scenario engine")
    p.add_argument("--tile-edge", type=float, help="tile edge in wavelengths (overrides the scenario)")
    p.add_argument("--out", type=Path, help="output directory (overrides the scenario)")
    p.add_argument("--threads", type=int, help=f"worker threads (default ${THREADS_ENV} or 1)")
    return p


def _fail(code: int, msg: str) -> int:
    print(f"ris-scatter: {msg}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    threads = args.threads if args.threads is not None else default_threads()
    if threads < 1:
        return _fail(EXIT_INVALID, "--threads must be at least 1")
    caught = []
    try:
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            sc = load_scenario(args.config)
            if args.engine or args.tile_edge:
                sc = with_overrides(sc, args.engine, args.tile_edge)
        caught += [str(w.message) for w in rec]
    except (ScenarioError, BudgetError, FeasibilityError) as e:
        return _fail(EXIT_INVALID, str(e))

    out_dir = args.out or Path(sc.output["directory"])
    stem = sc.output["name"] or args.config.stem
    try:
        t0 = time.perf_counter()
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            body, summary, meta = RUNNERS[args.subcommand](sc, threads)
        wall = time.perf_counter() - t0
        caught += [str(w.message) for w in rec]
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f"{stem}_{args.subcommand}.csv"
        csv_path.write_bytes(body)
        sidecar = {
            "format_version": FORMAT_VERSION,
            "tool_version": __version__,
            "subcommand": args.subcommand,
            "engine": sc.engine,
            "threads": threads,
            "config": sc.config,
            "scene": sc.scene.describe(),
            "scan": sc.scan,
            "warnings": list(dict.fromkeys(sc.warnings + caught)),
            "feasibility": [{"code": v.code, "message": v.message, "hard": v.hard} for v in sc.feasibility],
            "timing": {"wall_seconds": wall},
            "results": summary,
            "engine_metadata": meta,
            "csv": csv_path.name,
            "content_sha256": hashlib.sha256(body).hexdigest(),
        }
        (out_dir / f"{stem}_{args.subcommand}.json").write_text(
            json.dumps(sidecar, indent=2, sort_keys=True, default=_jsonable) + "\n")
    except ScenarioError as e:
        return _fail(EXIT_INVALID, str(e))
    except (RisError, OSError, ValueError, ArithmeticError) as e:
        return _fail(EXIT_RUNTIME, f"{type(e).__name__}: {e}")
    print(f"wrote {csv_path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
