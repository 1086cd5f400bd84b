"""Command-line interface.

Commands: graph, run, fit, sweep, seed-select, analyze. Every command that
takes --seed is reproducible: identical invocations produce byte-identical
outputs, independent of --workers. Exit codes: 0 success, 2 usage or
configuration error, 3 data or identifiability error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, bass, calibrate, cascade, engine, games, graphs, tables
from .errors import DataError, InputError

CONFIG_SCHEMA = 1

_TOP_KEYS = {"schema", "model", "horizon", "seed", "cadence", "schedule", "graph", "params"}
_GRAPH_KEYS = {"path", "kind", "n", "seed", "k", "p", "rows", "cols", "m"}
_PARAM_KEYS = {
    "bass": {"p", "q", "z0"},
    "ltm": {"theta", "seeds", "strict"},
    "axelrod": {"m", "init", "check_every"},
    "naming_game": {
        "objects", "committed_fraction", "committed_word",
        "pre_consensus", "pre_horizon", "record_every",
    },
    "game": {"payoff", "rule", "beta", "committed", "initial"},
}
_PAYOFF_KEYS = {"matrix", "alpha", "extended"}
_SWEEP_KEYS = {"schema", "sweep", "scenario"}
_SWEEP_BODY_KEYS = {"model", "fractions", "reps", "uptake_threshold"}


def _reject_unknown(obj, allowed, context) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise InputError(f"unknown keys in {context}: {sorted(unknown)}")


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"config is not valid JSON: {exc}") from None


def _resolve_graph(spec, base_dir, inputs):
    _reject_unknown(spec, _GRAPH_KEYS, "graph")
    if "path" in spec:
        path = Path(base_dir) / spec["path"]
        inputs.append(path)
        return graphs.read_edge_list(path)
    if "kind" not in spec or "n" not in spec:
        raise InputError("graph spec needs either 'path' or 'kind' and 'n'")
    return graphs.generate(
        spec["kind"], int(spec["n"]), seed=int(spec.get("seed", 0)),
        k=spec.get("k"), p=spec.get("p"), rows=spec.get("rows"),
        cols=spec.get("cols"), m=spec.get("m"),
    )


def _build_extended(body, n) -> games.Extended:
    _reject_unknown(body, {"classes", "assignment", "trend_scope"}, "payoff.extended")
    classes = []
    fractions = []
    for entry in body.get("classes", []):
        _reject_unknown(entry, {"b", "k", "r", "beta", "fraction"}, "extended class")
        classes.append(games.ClassParams(
            b=float(entry["b"]), k=float(entry["k"]),
            r=float(entry["r"]), beta=float(entry.get("beta", 0.0)),
        ))
        fractions.append(entry.get("fraction"))
    if not classes:
        raise InputError("extended payoff needs at least one class")
    if "assignment" in body:
        assignment = tuple(int(c) for c in body["assignment"])
    elif len(classes) == 1:
        assignment = None
    else:
        if any(f is None for f in fractions):
            raise InputError("multi-class extended payoff needs per-class fractions or an assignment")
        # contiguous blocks by class order; any rounding remainder joins the last class
        assignment_list = []
        for c, f in enumerate(fractions):
            assignment_list.extend([c] * int(round(float(f) * n)))
        assignment_list = assignment_list[:n]
        while len(assignment_list) < n:
            assignment_list.append(len(classes) - 1)
        assignment = tuple(assignment_list)
    return games.Extended(
        classes=tuple(classes), assignment=assignment,
        trend_scope=body.get("trend_scope", "global"),
    )


def _build_payoff(spec, n):
    _reject_unknown(spec, _PAYOFF_KEYS, "payoff")
    if len(spec) != 1:
        raise InputError("payoff spec needs exactly one of 'matrix', 'alpha', 'extended'")
    if "matrix" in spec:
        m = spec["matrix"]
        _reject_unknown(m, {"a", "b", "c", "d"}, "payoff.matrix")
        return games.PayoffMatrix(float(m["a"]), float(m["b"]), float(m["c"]), float(m["d"]))
    if "alpha" in spec:
        return games.Coordination(alpha=float(spec["alpha"]))
    return _build_extended(spec["extended"], n)


def load_run_config(path, seed_override=None):
    """Load and validate a run config file; returns (SimConfig, echo, input paths)."""
    path = Path(path)
    doc = _load_json(path)
    config, echo, inputs = build_run_config(doc, path.parent, seed_override=seed_override)
    return config, echo, [path] + inputs


def build_run_config(doc, base_dir, seed_override=None):
    """Validate a run-config object; returns (SimConfig, echo, referenced files)."""
    if not isinstance(doc, dict):
        raise InputError("config must be a JSON object")
    _reject_unknown(doc, _TOP_KEYS, "config")
    if doc.get("schema") != CONFIG_SCHEMA:
        raise InputError(f"config schema must be {CONFIG_SCHEMA}, got {doc.get('schema')!r}")
    model = doc.get("model")
    if model not in engine.MODELS:
        raise InputError(f"unknown model {model!r}")
    if "horizon" not in doc:
        raise InputError("config needs a horizon")
    inputs: list[Path] = []
    graph = None
    if "graph" in doc:
        graph = _resolve_graph(doc["graph"], base_dir, inputs)
    params = dict(doc.get("params", {}))
    _reject_unknown(params, _PARAM_KEYS[model], f"params for model {model}")
    if model == "game":
        if "payoff" not in params:
            raise InputError("game config needs params.payoff")
        if graph is None:
            raise InputError("game config needs a graph")
        params["payoff"] = _build_payoff(params["payoff"], graph.n)
        if "committed" in params and params["committed"] is not None:
            _reject_unknown(params["committed"], {"fraction", "agents", "action"}, "committed")
        if "initial" in params and params["initial"] is not None:
            _reject_unknown(params["initial"], {"value", "fraction_ones", "explicit"}, "initial")
    seed = int(doc.get("seed", 0)) if seed_override is None else int(seed_override)
    config = engine.SimConfig(
        model=model,
        horizon=int(doc["horizon"]),
        seed=seed,
        graph=graph,
        schedule=doc.get("schedule", "async_uniform"),
        cadence=int(doc.get("cadence", 1)),
        params=params,
    )
    config.validate()
    echo = dict(doc)
    echo["seed"] = seed
    return config, echo, inputs


def _write_manifest(out_dir, command, echo, seed, inputs, outputs) -> Path:
    manifest = {
        "tool": "normsim",
        "version": __version__,
        "command": command,
        "seed": seed,
        "config": echo,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": sorted(str(o.name) for o in outputs),
    }
    path = Path(out_dir) / "manifest.json"
    tables.write_json(path, manifest)
    return path


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_graph(args) -> int:
    g = graphs.generate(
        args.kind, args.n, seed=args.seed,
        k=args.k, p=args.p, rows=args.rows, cols=args.cols, m=args.m,
    )
    graphs.write_edge_list(g, args.out)
    print(f"wrote {args.out}: n={g.n}, edges={g.m}")
    return 0


def _trajectory_outputs(config, traj, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    if config.model == "bass":
        path = out_dir / "series.csv"
        tables.write_series_csv(path, traj.z)
        outputs.append(path)
    elif config.model == "naming_game":
        path = out_dir / "uptake.csv"
        tables.write_uptake_csv(path, traj)
        outputs.append(path)
    elif config.model == "axelrod":
        path = out_dir / "regions.csv"
        tables.write_regions_csv(path, traj)
        outputs.append(path)
    else:
        path = out_dir / "trajectory.csv"
        tables.write_state_trajectory_csv(path, traj)
        outputs.append(path)
    return outputs


def _exposure_report(traj, g, path) -> None:
    times = cascade.adoption_times(traj)
    exposures = cascade.exposure_at_adoption(traj, g)
    cat_time = ["NA"] * g.n
    cat_thresh = ["NA"] * g.n
    adopters = [i for i in range(g.n) if times[i] >= 0]
    try:
        labels = cascade.classify_sigma_categories([times[i] for i in adopters])
        for i, lab in zip(adopters, labels):
            cat_time[i] = lab
    except (DataError, InputError):
        pass
    defined = [i for i in range(g.n) if not np.isnan(exposures[i])]
    try:
        labels = cascade.classify_sigma_categories([exposures[i] for i in defined])
        for i, lab in zip(defined, labels):
            cat_thresh[i] = lab
    except (DataError, InputError):
        pass
    tables.write_exposure_csv(path, times, exposures, cat_time, cat_thresh)


def cmd_run(args) -> int:
    config, echo, inputs = load_run_config(args.config, seed_override=args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    if args.reps > 1:
        summary = engine.ensemble(config, args.reps, workers=args.workers)
        summary_path = out_dir / "summary.csv"
        terminal_path = out_dir / "terminal.csv"
        tables.write_summary_csv(summary_path, summary)
        tables.write_terminal_csv(terminal_path, summary)
        outputs += [summary_path, terminal_path]
    else:
        traj = engine.run(config)
        outputs += _trajectory_outputs(config, traj, out_dir)
        if args.analyze == "exposure":
            if traj.states is None:
                raise DataError("exposure analysis needs a model with recorded states")
            path = out_dir / "exposure.csv"
            _exposure_report(traj, config.graph, path)
            outputs.append(path)
    outputs.append(_write_manifest(out_dir, "run", echo, config.seed, inputs, outputs))
    for o in outputs:
        print(f"wrote {o}")
    return 0


def cmd_fit_bass(args) -> int:
    series = tables.read_series_csv(args.series)
    report = bass.fit_bass(series)
    payload = report.to_dict()
    if args.out:
        tables.write_json(args.out, payload)
        print(f"wrote {args.out}")
    else:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        print()
    return 0


def cmd_fit_bkr(args) -> int:
    counts = tables.read_switch_counts_csv(args.observed)
    observed = calibrate.SwitchObservations(counts=counts, window=args.window)
    scenario, _, _ = load_run_config(args.config, seed_override=args.seed)
    report = calibrate.grid_search_bkr(
        observed, scenario, args.grid_step, classes=args.classes,
        ensemble_size=args.ensemble_size, workers=args.workers,
    )
    payload = report.to_dict()
    payload.pop("table", None)
    if args.grid_out:
        tables.write_grid_csv(args.grid_out, report)
        print(f"wrote {args.grid_out}")
    if args.out:
        tables.write_json(args.out, payload)
        print(f"wrote {args.out}")
    else:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        print()
    return 0


def cmd_sweep(args) -> int:
    path = Path(args.config)
    doc = _load_json(path)
    _reject_unknown(doc, _SWEEP_KEYS, "sweep config")
    if doc.get("schema") != CONFIG_SCHEMA:
        raise InputError(f"config schema must be {CONFIG_SCHEMA}, got {doc.get('schema')!r}")
    body = doc.get("sweep", {})
    _reject_unknown(body, _SWEEP_BODY_KEYS, "sweep")
    if "scenario" not in doc:
        raise InputError("sweep config needs a scenario")
    scenario, _, referenced = build_run_config(doc["scenario"], path.parent, seed_override=args.seed)
    inputs = [path] + referenced
    fractions = args.fractions or body.get("fractions")
    if not fractions:
        raise InputError("sweep needs fractions (config or --fractions)")
    reps = args.reps or int(body.get("reps", 20))
    result = calibrate.critical_mass_sweep(
        body.get("model", "naming_game"),
        [float(f) for f in fractions],
        reps,
        scenario,
        workers=args.workers,
        uptake_threshold=float(body.get("uptake_threshold", 0.5)),
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "tipping.csv"
    tables.write_tipping_csv(csv_path, result)
    json_path = out_dir / "tipping.json"
    tables.write_json(json_path, {
        "critical_mass": result.critical_mass,
        "uptake_threshold": float(body.get("uptake_threshold", 0.5)),
        "reps": reps,
        "fractions": [float(f) for f in result.fractions],
        "mean_uptake": [float(u) for u in result.mean_uptake],
        "ci_low": [float(u) for u in result.ci_low],
        "ci_high": [float(u) for u in result.ci_high],
        "note": None if result.critical_mass is not None else "above sweep range",
    })
    outputs = [csv_path, json_path]
    outputs.append(_write_manifest(out_dir, "sweep", doc, scenario.seed, inputs, outputs))
    for o in outputs:
        print(f"wrote {o}")
    return 0


def cmd_seed_select(args) -> int:
    g = graphs.read_edge_list(args.graph)
    theta = np.full(g.n, args.theta)
    seeds, spread = cascade.greedy_seed_selection(g, theta, args.k, strict=args.strict)
    payload = {"seeds": seeds, "spread": spread, "k": args.k, "theta": args.theta}
    if args.out:
        tables.write_json(args.out, payload)
        print(f"wrote {args.out}")
    else:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        print()
    return 0


def _traj_from_csv(path):
    times, states, z = tables.read_state_trajectory_csv(path)
    from .trajectory import Trajectory

    switches = np.abs(np.diff(states.astype(np.int64), axis=0)).sum(axis=1)
    return Trajectory(
        z_times=times, z=z, states=states, state_times=times,
        switches=switches, cadence=1, extra={"n": states.shape[1]},
    )


def cmd_analyze(args) -> int:
    if args.what == "exposure":
        if not args.graph:
            raise InputError("exposure analysis needs --graph")
        g = graphs.read_edge_list(args.graph)
        traj = _traj_from_csv(args.trajectory)
        out = args.out or "exposure.csv"
        _exposure_report(traj, g, out)
        print(f"wrote {out}")
        return 0
    if args.what == "sshape":
        series = tables.read_series_csv(args.series)
        result = engine.s_shape_check(series)
        json.dump(result, sys.stdout, indent=2, sort_keys=True)
        print()
        return 0
    if args.what == "switching":
        traj = _traj_from_csv(args.trajectory)
        rates = engine.switching_rate(traj)
        for t, s in enumerate(rates, start=1):
            print(f"{t},{repr(float(s))}")
        return 0
    # conformity
    if not args.graph:
        raise InputError("conformity analysis needs --graph")
    g = graphs.read_edge_list(args.graph)
    traj = _traj_from_csv(args.trajectory)
    result = engine.conformity_metrics(g, traj.states[-1])
    json.dump(result, sys.stdout, indent=2, sort_keys=True)
    print()
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normsim",
        description="Simulate and calibrate the dynamics of social norms and conventions.",
    )
    parser.add_argument("--version", action="version", version=f"normsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the config seed")
    common.add_argument("--workers", type=int, default=1, help="parallel workers")
    common.add_argument("--out-dir", default=".", help="output directory")

    p_graph = sub.add_parser("graph", help="generate a graph edge-list file")
    p_graph.add_argument("--kind", required=True, choices=graphs.GENERATOR_KINDS)
    p_graph.add_argument("--n", type=int, required=True)
    p_graph.add_argument("--seed", type=int, default=0)
    p_graph.add_argument("--k", type=int)
    p_graph.add_argument("--p", type=float)
    p_graph.add_argument("--rows", type=int)
    p_graph.add_argument("--cols", type=int)
    p_graph.add_argument("--m", type=int)
    p_graph.add_argument("--out", required=True)
    p_graph.set_defaults(func=cmd_graph)

    p_run = sub.add_parser("run", parents=[common], help="run a simulation from a config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--reps", type=int, default=1, help="ensemble repetitions")
    p_run.add_argument("--analyze", choices=["exposure"], default=None)
    p_run.set_defaults(func=cmd_run)

    p_fit = sub.add_parser("fit", help="fit model parameters")
    fit_sub = p_fit.add_subparsers(dest="what", required=True)
    p_fb = fit_sub.add_parser("bass", help="least-squares (p, q) from an adoption series")
    p_fb.add_argument("--series", required=True)
    p_fb.add_argument("--out", default=None)
    p_fb.set_defaults(func=cmd_fit_bass)
    p_fk = fit_sub.add_parser("bkr", parents=[common], help="grid search for (b, k, r)")
    p_fk.add_argument("--observed", required=True, help="CSV of observed switch counts")
    p_fk.add_argument("--window", type=int, required=True)
    p_fk.add_argument("--config", required=True, help="scenario run config")
    p_fk.add_argument("--grid-step", type=float, default=0.1)
    p_fk.add_argument("--classes", type=int, default=1)
    p_fk.add_argument("--ensemble-size", type=int, default=50)
    p_fk.add_argument("--out", default=None)
    p_fk.add_argument("--grid-out", default=None)
    p_fk.set_defaults(func=cmd_fit_bkr)

    p_sweep = sub.add_parser("sweep", help="parameter sweeps")
    sweep_sub = p_sweep.add_subparsers(dest="what", required=True)
    p_tip = sweep_sub.add_parser("tipping", parents=[common], help="committed-fraction sweep")
    p_tip.add_argument("--config", required=True)
    p_tip.add_argument("--fractions", type=lambda s: [float(f) for f in s.split(",")])
    p_tip.add_argument("--reps", type=int, default=None)
    p_tip.set_defaults(func=cmd_sweep)

    p_sel = sub.add_parser("seed-select", help="greedy influence-maximizing seed set")
    p_sel.add_argument("--graph", required=True)
    p_sel.add_argument("--theta", type=float, required=True)
    p_sel.add_argument("--k", type=int, required=True)
    p_sel.add_argument("--strict", action="store_true")
    p_sel.add_argument("--out", default=None)
    p_sel.set_defaults(func=cmd_seed_select)

    p_an = sub.add_parser("analyze", help="post-run analytics")
    an_sub = p_an.add_subparsers(dest="what", required=True)
    for name in ("exposure", "sshape", "switching", "conformity"):
        p = an_sub.add_parser(name)
        if name == "sshape":
            p.add_argument("--series", required=True)
        else:
            p.add_argument("--trajectory", required=True)
        if name in ("exposure", "conformity"):
            p.add_argument("--graph", default=None)
        if name == "exposure":
            p.add_argument("--out", default=None)
        p.set_defaults(func=cmd_analyze)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main_entry() -> None:
    sys.exit(main())
