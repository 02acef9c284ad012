"""Configuration-driven experiment runner: run, sweep, oracle-check, snapshot.

Configs are flat ``key = value`` text with dotted sections (graph.*, init.*,
run.*, output.*, sweep.*, oracle.*), chosen for diff-friendliness::

    graph.kind = torus          # torus | layered
    graph.d = 2
    graph.lengths = 16,16
    graph.boundary = periodic   # periodic | free
    init.kind = uniform_real    # constant uniform_real exponential pareto
                                # two_point uniform_int geometric pattern
    init.low = 0.0
    init.high = 1.0
    run.seed = 1
    run.max_steps = 100000
    output.dir = out/demo

Sweeps add cartesian grid axes over any config key plus a seed count::

    sweep.grid.graph.lengths = 16,16 ; 64,64
    sweep.grid.init.kind = uniform_real ; geometric
    sweep.seeds = 20

Outputs are deterministic for equal configs: byte-identical CSV bodies and
manifest cores (wall-clock timing is segregated in the manifest's "timing"
field, excluded from the content digest). The environment variable
RICHFLOW_MAX_PARALLEL caps sweep parallelism for CI.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, engine, stats
from .graph import Graph, build_box, build_layered, build_torus
from .initial import EXACT, DistributionSpec, Field, MassOverflowError, SpecError, sample_field
from .oracle import OracleGuardError, compare_engine_oracle

PARALLEL_ENV = "RICHFLOW_MAX_PARALLEL"

TIMESERIES_BASE_COLUMNS = [
    "step", "activity", "ties", "count_A", "count_B", "count_C", "count_D",
    "count_E", "max_gap", "mean_gap", "active_count", "max_cluster",
    "moment_alpha2",
]
MOVING_MASS_COLUMNS = ["n", "origin_fraction", "mass_fraction"]

SWEEP_COLUMNS = [
    "run", "dir", "seed", "status", "absorbed", "absorption_step", "steps_run",
    "final_activity", "final_max_gap", "final_ties", "final_active_count",
    "final_max_cluster", "final_moment_alpha2", "total_mass", "error",
]


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


# key -> (parser tag, default); None default means "no entry unless set"
_SCHEMA = {
    "graph.kind": ("str", "torus"),
    "graph.d": ("int", None),
    "graph.lengths": ("ints", None),
    "graph.boundary": ("str", "periodic"),
    "graph.layers": ("int", 1),
    "graph.templates": ("templates", None),
    "init.kind": ("str", None),
    "init.mode": ("str", "auto"),
    "init.value": ("number", None),
    "init.low": ("number", None),
    "init.high": ("number", None),
    "init.rate": ("float", None),
    "init.shape": ("float", None),
    "init.scale": ("float", None),
    "init.v1": ("number", None),
    "init.p": ("float", None),
    "init.v2": ("number", None),
    "init.pattern": ("numbers", None),
    "init.pattern_shape": ("ints", None),
    "init.random_shift": ("bool", False),
    "run.seed": ("int", 0),
    "run.max_steps": ("int", 100000),
    "run.record_every": ("int", 1),
    "run.audit": ("bool", True),
    "run.stop_on_absorption": ("bool", True),
    "run.gap_deltas": ("floats", ()),
    "run.cluster_ks": ("ints", ()),
    "run.window": ("int", 16),
    "output.dir": ("str", "out"),
    "output.snapshot_steps": ("ints", ()),
    "sweep.seeds": ("int", 1),
    "sweep.parallel": ("int", 1),
    "oracle.horizon": ("int", 1),
    "oracle.trials": ("int", 100000),
    "oracle.tolerance": ("float", 0.01),
}


def _parse_number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)  # accepts inf


def _parse_value(key: str, tag: str, raw: str):
    raw = raw.strip()
    try:
        if tag == "str":
            return raw
        if tag == "int":
            return int(raw)
        if tag == "float":
            return float(raw)
        if tag == "number":
            return _parse_number(raw)
        if tag == "bool":
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if tag == "ints":
            return tuple(int(v) for v in raw.split(",") if v.strip())
        if tag == "floats":
            return tuple(float(v) for v in raw.split(",") if v.strip())
        if tag == "numbers":
            return tuple(_parse_number(v) for v in raw.split(",") if v.strip())
        if tag == "templates":
            out = []
            for part in raw.split(";"):
                part = part.strip()
                if not part:
                    continue
                bits = part.split(":")
                if len(bits) != 3:
                    raise ValueError(f"template must be j:j2:offsets, got {part!r}")
                off = tuple(int(v) for v in bits[2].split(","))
                out.append((int(bits[0]), int(bits[1]), off))
            return tuple(out)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc
    raise ConfigError(f"{key}: unknown parser tag {tag}")  # pragma: no cover


def parse_config_text(text: str) -> dict[str, str]:
    """Flat key -> raw string, preserving file order; rejects malformed lines."""
    out: dict[str, str] = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected 'key = value', got {line!r}")
        key, _, raw = line.partition("=")
        out[key.strip()] = raw.strip()
    return out


def load_config(path) -> dict:
    """Read, type and default-fill a config file; raises ConfigError."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return resolve_config(parse_config_text(text))


def resolve_config(raw: dict[str, str]) -> dict:
    cfg: dict = {}
    grid: dict[str, list] = {}
    for key, value in raw.items():
        if key.startswith("sweep.grid."):
            axis = key[len("sweep.grid."):]
            if axis not in _SCHEMA:
                raise ConfigError(f"{key}: unknown grid axis {axis!r}")
            tag = _SCHEMA[axis][0]
            grid[axis] = [_parse_value(axis, tag, part)
                          for part in value.split(";") if part.strip()]
            if not grid[axis]:
                raise ConfigError(f"{key}: empty grid axis")
        elif key in _SCHEMA:
            cfg[key] = _parse_value(key, _SCHEMA[key][0], value)
        else:
            raise ConfigError(f"unknown configuration key {key!r}")
    for key, (_, default) in _SCHEMA.items():
        cfg.setdefault(key, default)
    cfg["sweep.grid"] = grid
    return cfg


def build_graph(cfg: dict) -> Graph:
    kind = cfg["graph.kind"]
    d = cfg["graph.d"]
    lengths = cfg["graph.lengths"]
    boundary = cfg["graph.boundary"]
    if kind not in ("torus", "layered"):
        raise ConfigError(f"graph.kind: expected torus or layered, got {kind!r}")
    if boundary not in ("periodic", "free"):
        raise ConfigError(f"graph.boundary: expected periodic or free, got {boundary!r}")
    if d is None:
        raise ConfigError("graph.d is required")
    if lengths is None:
        raise ConfigError("graph.lengths is required")
    try:
        if kind == "layered":
            templates = cfg["graph.templates"]
            if templates is None:
                raise ConfigError("graph.templates is required for layered graphs")
            return build_layered(cfg["graph.layers"], d, lengths, templates, boundary)
        if boundary == "free":
            return build_box(d, lengths)
        return build_torus(d, lengths)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"graph.lengths/graph.d: {exc}") from exc


def build_spec(cfg: dict) -> DistributionSpec:
    kind = cfg["init.kind"]
    if kind is None:
        raise ConfigError("init.kind is required")
    spec = DistributionSpec(
        kind=kind,
        mode=cfg["init.mode"],
        value=cfg["init.value"],
        low=cfg["init.low"],
        high=cfg["init.high"],
        rate=cfg["init.rate"],
        shape=cfg["init.shape"],
        scale=cfg["init.scale"],
        v1=cfg["init.v1"],
        p=cfg["init.p"],
        v2=cfg["init.v2"],
        pattern=cfg["init.pattern"] or (),
        pattern_shape=cfg["init.pattern_shape"],
        random_shift=cfg["init.random_shift"],
    )
    try:
        return spec.resolved()
    except SpecError as exc:
        raise ConfigError(f"init.*: {exc}") from exc


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _joint_column(delta: float, k: int) -> str:
    return f"joint_d{delta!r}_k{k}"


def timeseries_columns(gap_deltas, cluster_ks) -> list[str]:
    cols = list(TIMESERIES_BASE_COLUMNS)
    for delta in gap_deltas:
        for k in cluster_ks:
            cols.append(_joint_column(delta, k))
    cols.append("total_mass")
    return cols


def write_timeseries(path: Path, rows, gap_deltas, cluster_ks) -> list[str]:
    cols = timeseries_columns(gap_deltas, cluster_ks)
    lines = [",".join(cols)]
    for r in rows:
        cells = [
            _fmt(r.step), _fmt(r.activity), _fmt(r.ties), _fmt(r.count_a),
            _fmt(r.count_b), _fmt(r.count_c), _fmt(r.count_d), _fmt(r.count_e),
            _fmt(r.max_gap), _fmt(r.mean_gap), _fmt(r.active_count),
            _fmt(r.max_cluster), _fmt(r.moment_alpha2),
        ]
        cells.extend(_fmt(frac) for _, _, frac in r.joint)
        cells.append(_fmt(r.total_mass))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")
    return cols


def field_csv_columns(g: Graph) -> list[str]:
    if g.kind == "layered":
        return ["vertex", "layer"] + [f"c{i}" for i in range(g.d)] + ["value"]
    return ["vertex"] + [f"c{i}" for i in range(g.d)] + ["value"]


def write_field_csv(path: Path, g: Graph, values: np.ndarray) -> list[str]:
    cols = field_csv_columns(g)
    lines = [",".join(cols)]
    for x in range(g.vertex_count):
        cc = g.coords(x)
        lines.append(",".join([str(x), *map(str, cc), _fmt(values[x])]))
    path.write_text("\n".join(lines) + "\n")
    return cols


def write_pgm(path: Path, g: Graph, values: np.ndarray) -> None:
    """8-bit binary PGM, min-max scaled; inf renders 255, flat fields render 0."""
    if g.d != 2 or g.layers != 1:
        raise ConfigError("PGM export needs a single-layer 2-d graph")
    grid = np.asarray(values, dtype=np.float64).reshape(g.lengths)
    finite = np.isfinite(grid)
    pix = np.zeros(grid.shape, dtype=np.uint8)
    if finite.any():
        lo = float(grid[finite].min())
        hi = float(grid[finite].max())
        if hi > lo:
            scaled = (grid - lo) / (hi - lo) * 255.0
            pix[finite] = np.rint(scaled[finite]).astype(np.uint8)
    pix[~finite] = 255
    h, w = grid.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pix.tobytes())


def _sha256(path: Path) -> str:
    return "sha256:" + hashlib.sha256(path.read_bytes()).hexdigest()


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _config_for_manifest(cfg: dict) -> dict:
    out = {}
    for key, value in cfg.items():
        if key == "sweep.grid":
            continue
        if isinstance(value, tuple):
            value = [list(v) if isinstance(v, tuple) else v for v in value]
        out[key] = value
    return out


def execute_run(cfg: dict, out_dir: Path) -> dict:
    """Run one configured experiment and write its artifacts; returns a summary."""
    g = build_graph(cfg)
    spec = build_spec(cfg)
    seed = cfg["run.seed"]
    if cfg["run.max_steps"] < 0:
        raise ConfigError("run.max_steps must be >= 0")
    if cfg["run.record_every"] < 1:
        raise ConfigError("run.record_every must be >= 1")
    try:
        field0 = sample_field(g, spec, seed)
    except (SpecError, MassOverflowError) as exc:
        raise ConfigError(f"init.*: {exc}") from exc
    opts = engine.RunOptions(
        record_every=cfg["run.record_every"],
        gap_deltas=tuple(cfg["run.gap_deltas"]),
        cluster_ks=tuple(cfg["run.cluster_ks"]),
        window=cfg["run.window"],
        audit=cfg["run.audit"],
        stop_on_absorption=cfg["run.stop_on_absorption"],
        snapshot_steps=tuple(cfg["output.snapshot_steps"]),
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    result = engine.run(g, field0, cfg["run.max_steps"], seed, options=opts)
    wall = time.perf_counter() - started

    ts_path = out_dir / "timeseries.csv"
    ts_cols = write_timeseries(ts_path, result.rows, opts.gap_deltas, opts.cluster_ks)

    mm_path = out_dir / "moving_mass.csv"
    mm_lines = [",".join(MOVING_MASS_COLUMNS)]
    for r in result.rows:
        mm = stats.moving_mass_fraction(result, r.step)
        mm_lines.append(",".join([_fmt(r.step), _fmt(mm.origins), _fmt(mm.mass)]))
    mm_path.write_text("\n".join(mm_lines) + "\n")

    ff_path = out_dir / "final_field.csv"
    ff_cols = write_field_csv(ff_path, g, result.final_field.values)

    files = {
        "timeseries.csv": _sha256(ts_path),
        "moving_mass.csv": _sha256(mm_path),
        "final_field.csv": _sha256(ff_path),
    }
    if result.snapshots:
        snap_dir = out_dir / "snapshots"
        snap_dir.mkdir(exist_ok=True)
        for n, vals in sorted(result.snapshots.items()):
            p = snap_dir / f"step_{n}.npy"
            np.save(p, vals)
            files[f"snapshots/step_{n}.npy"] = _sha256(p)

    final_row = result.rows[-1]
    results_block = {
        "absorbed": result.absorbed,
        "absorption_step": result.absorption_step,
        "steps_run": result.steps_run,
        "rows": len(result.rows),
        "vertex_count": g.vertex_count,
        "mode": field0.mode,
        "final": {
            "activity": final_row.activity,
            "ties": final_row.ties,
            "max_gap": final_row.max_gap,
            "active_count": final_row.active_count,
            "max_cluster": final_row.max_cluster,
            "moment_alpha2": final_row.moment_alpha2,
            "total_mass": final_row.total_mass,
        },
    }
    core = {
        "artifact": {"name": "richflow", "version": __version__},
        "config": _config_for_manifest(cfg),
        "results": results_block,
        "files": files,
        "schema": {
            "timeseries.csv": ts_cols,
            "moving_mass.csv": MOVING_MASS_COLUMNS,
            "final_field.csv": ff_cols,
        },
    }
    manifest = dict(core)
    manifest["core_digest"] = "sha256:" + hashlib.sha256(_canonical(core).encode()).hexdigest()
    manifest["timing"] = {
        "wall_seconds": wall,
        "steps_per_second": (result.steps_run / wall) if wall > 0 else None,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")

    summary = dict(results_block)
    summary["core_digest"] = manifest["core_digest"]
    summary["wall_seconds"] = wall
    summary["out_dir"] = str(out_dir)
    return summary


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg["run.seed"] = args.seed
    out_dir = Path(args.out) if args.out else Path(cfg["output.dir"])
    summary = execute_run(cfg, out_dir)
    status = "absorbed" if summary["absorbed"] else "not absorbed"
    print(f"run {status}: steps={summary['steps_run']} "
          f"absorption_step={summary['absorption_step']} rows={summary['rows']} "
          f"wall={summary['wall_seconds']:.3f}s out={summary['out_dir']}")
    return 0


def _grid_points(grid: dict[str, list]) -> list[dict]:
    points = [{}]
    for axis in grid:  # config file order
        points = [dict(p, **{axis: v}) for p in points for v in grid[axis]]
    return points


def _sweep_worker(payload) -> dict:
    cfg, out_dir = payload
    try:
        return execute_run(cfg, Path(out_dir))
    except Exception as exc:  # recorded per-row, sweep continues
        return {"status": "error", "error": f"{type(exc).__name__}: {exc}"}


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    grid = cfg["sweep.grid"]
    seeds = cfg["sweep.seeds"]
    if seeds < 1:
        raise ConfigError("sweep.seeds must be >= 1")
    base_seed = args.seed if args.seed is not None else cfg["run.seed"]
    parallel = args.parallel if args.parallel is not None else cfg["sweep.parallel"]
    cap = os.environ.get(PARALLEL_ENV)
    if cap is not None:
        parallel = min(parallel, max(1, int(cap)))
    parallel = max(parallel, 1)
    out_dir = Path(args.out) if args.out else Path(cfg["output.dir"])
    out_dir.mkdir(parents=True, exist_ok=True)

    points = _grid_points(grid)
    jobs = []
    for pi, point in enumerate(points):
        for s in range(seeds):
            run_cfg = dict(cfg)
            run_cfg.update(point)
            run_cfg["run.seed"] = base_seed + s
            run_dir = out_dir / "runs" / f"{len(jobs):04d}"
            jobs.append((run_cfg, point, base_seed + s, run_dir))

    payloads = [(cfg_i, str(run_dir)) for cfg_i, _, _, run_dir in jobs]
    if parallel > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=parallel) as pool:
            outcomes = list(pool.map(_sweep_worker, payloads))
    else:
        outcomes = [_sweep_worker(p) for p in payloads]

    axes = list(grid)
    cols = SWEEP_COLUMNS[:2] + axes + SWEEP_COLUMNS[2:]
    lines = [",".join(cols)]
    n_err = 0
    for i, ((_, point, seed_i, run_dir), outcome) in enumerate(zip(jobs, outcomes)):
        rel = run_dir.relative_to(out_dir)
        cells = [str(i), str(rel)]
        cells.extend(_axis_cell(point[a]) for a in axes)
        cells.append(str(seed_i))
        if outcome.get("status") == "error":
            n_err += 1
            cells.extend(["error", "", "", "", "", "", "", "", "", "", "",
                          outcome["error"].replace(",", ";")])
        else:
            fin = outcome["final"]
            cells.extend([
                "ok", _fmt(outcome["absorbed"]),
                _fmt(outcome["absorption_step"]) if outcome["absorption_step"] is not None else "",
                _fmt(outcome["steps_run"]), _fmt(fin["activity"]), _fmt(fin["max_gap"]),
                _fmt(fin["ties"]), _fmt(fin["active_count"]), _fmt(fin["max_cluster"]),
                _fmt(fin["moment_alpha2"]), _fmt(fin["total_mass"]), "",
            ])
        lines.append(",".join(cells))
    agg = out_dir / "sweep.csv"
    agg.write_text("\n".join(lines) + "\n")

    core = {
        "artifact": {"name": "richflow", "version": __version__},
        "config": _config_for_manifest(cfg),
        "grid": {k: [list(v) if isinstance(v, tuple) else v for v in vs]
                 for k, vs in grid.items()},
        "seeds": seeds,
        "runs": len(jobs),
        "errors": n_err,
        "files": {"sweep.csv": _sha256(agg)},
    }
    manifest = dict(core)
    manifest["core_digest"] = "sha256:" + hashlib.sha256(_canonical(core).encode()).hexdigest()
    manifest["timing"] = {"parallel": parallel}
    (out_dir / "sweep_manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    print(f"sweep complete: {len(jobs)} runs, {n_err} errors, out={out_dir}")
    return 0


def _axis_cell(v) -> str:
    if isinstance(v, tuple):
        return ";".join(str(x) for x in v)
    return _fmt(v)


def cmd_oracle_check(args) -> int:
    cfg = load_config(args.config)
    tol = args.tolerance if args.tolerance is not None else cfg["oracle.tolerance"]
    g = build_graph(cfg)
    spec = build_spec(cfg)
    seed = args.seed if args.seed is not None else cfg["run.seed"]
    field0 = sample_field(g, spec, seed)
    if field0.mode != EXACT:
        raise ConfigError("init.mode: oracle checks require exact mode")
    try:
        report = compare_engine_oracle(
            g, [int(v) for v in field0.values], cfg["oracle.horizon"],
            cfg["oracle.trials"], seed, tolerance=tol)
    except OracleGuardError as exc:
        raise ConfigError(f"oracle.*: {exc}") from exc
    out_dir = Path(args.out) if args.out else Path(cfg["output.dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "oracle_report.json"
    path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    print(f"oracle check: max |empirical - exact| = {report['max_abs_difference']:.5f} "
          f"(tolerance {tol}), outcomes {report['observed_outcome_count']}"
          f"/{report['exact_outcome_count']}, report {path}")
    return 0 if report["passed"] else 1


def cmd_snapshot(args) -> int:
    run_dir = Path(args.run)
    manifest_path = run_dir / "manifest.json"
    if not manifest_path.exists():
        raise ConfigError(f"no manifest.json under {run_dir}")
    manifest = json.loads(manifest_path.read_text())
    cfg = resolve_config({})
    for key, value in manifest["config"].items():
        if isinstance(value, list):
            value = tuple(tuple(v) if isinstance(v, list) else v for v in value)
        cfg[key] = value
    g = build_graph(cfg)
    snap = run_dir / "snapshots" / f"step_{args.step}.npy"
    if not snap.exists():
        print(f"error: no snapshot captured for step {args.step} under {run_dir}",
              file=sys.stderr)
        return 1
    values = np.load(snap)
    out_dir = Path(args.out) if args.out else run_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"field_step_{args.step}.csv"
    write_field_csv(csv_path, g, values)
    written = [str(csv_path)]
    if g.d == 2 and g.layers == 1:
        pgm_path = out_dir / f"field_step_{args.step}.pgm"
        write_pgm(pgm_path, g, values)
        written.append(str(pgm_path))
    print("wrote " + ", ".join(written))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="richflow",
        description="Greedy resource-flow clustering dynamics: experiment runner.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="config file path")
        p.add_argument("--seed", type=int, default=None, help="override run.seed")
        p.add_argument("--out", default=None, help="override output.dir")
        p.add_argument("--parallel", type=int, default=None,
                       help="worker cap (sweeps; accepted elsewhere for symmetry)")
        p.add_argument("--tolerance", type=float, default=None,
                       help="override oracle.tolerance")

    common(sub.add_parser("run", help="execute one configured run"))
    common(sub.add_parser("sweep", help="execute a parameter grid of runs"))
    common(sub.add_parser("oracle-check", help="compare engine vs exact enumeration"))
    snap = sub.add_parser("snapshot", help="export a captured field snapshot")
    snap.add_argument("--run", required=True, help="run output directory")
    snap.add_argument("--step", type=int, required=True, help="captured step index")
    snap.add_argument("--out", default=None, help="output directory (default: run dir)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "oracle-check":
            return cmd_oracle_check(args)
        if args.command == "snapshot":
            return cmd_snapshot(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (MassOverflowError, engine.EngineInvariantError) as exc:
        print(f"run aborted: {exc}", file=sys.stderr)
        return 1
    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
