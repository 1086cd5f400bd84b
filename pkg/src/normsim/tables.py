"""CSV and JSON writers for the declared file formats.

All writers emit LF line endings and UTF-8. Floats are written with repr,
which is shortest-round-trip (well above 12 significant digits when they
matter) and byte-stable across runs and platforms.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .errors import ParseError
from .trajectory import Trajectory


def _fmt(value) -> str:
    if isinstance(value, (np.floating, float)):
        return repr(float(value))
    if isinstance(value, (np.integer, int)):
        return str(int(value))
    return str(value)


def _write_rows(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_series_csv(path, series) -> None:
    """Adoption series as 't,z'."""
    _write_rows(path, ["t", "z"], list(enumerate(np.asarray(series))))


def read_series_csv(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["t", "z"]:
            raise ParseError("expected header 't,z'", line=1)
        values = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                values.append(float(row[1]))
            except (IndexError, ValueError):
                raise ParseError("expected 't,z' row", line=lineno) from None
    return np.asarray(values)


def write_state_trajectory_csv(path, traj: Trajectory) -> None:
    """Binary-state trajectory as 't,agent_0,...,agent_{n-1},z'."""
    n = traj.states.shape[1]
    header = ["t"] + [f"agent_{i}" for i in range(n)] + ["z"]
    rows = []
    for idx, t in enumerate(traj.state_times):
        state = traj.states[idx]
        rows.append([int(t)] + [int(v) for v in state] + [traj.z[int(t)]])
    _write_rows(path, header, rows)


def read_state_trajectory_csv(path):
    """Read back a state trajectory; returns (times, states, z)."""
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "t" or header[-1] != "z":
            raise ParseError("expected header 't,agent_0,...,z'", line=1)
        n = len(header) - 2
        times, states, z = [], [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != n + 2:
                raise ParseError(f"expected {n + 2} columns, got {len(row)}", line=lineno)
            times.append(int(row[0]))
            states.append([int(v) for v in row[1:-1]])
            z.append(float(row[-1]))
    return np.asarray(times), np.asarray(states, dtype=np.int8), np.asarray(z)


def write_uptake_csv(path, traj: Trajectory) -> None:
    """Naming-game uptake as 't,uptake,consensus_flag' (flag set on the last row)."""
    consensus = traj.terminal == "consensus"
    rows = []
    last = len(traj.z) - 1
    for idx, t in enumerate(traj.z_times):
        flag = 1 if (consensus and idx == last) else 0
        rows.append([int(t), traj.z[idx], flag])
    _write_rows(path, ["t", "uptake", "consensus_flag"], rows)


def write_regions_csv(path, traj: Trajectory) -> None:
    """Axelrod region statistics as 'checkpoint,regions,largest_region_fraction'."""
    regions = traj.extra["regions"]
    rows = [
        [int(t), int(regions[idx]), traj.z[idx]]
        for idx, t in enumerate(traj.z_times)
    ]
    _write_rows(path, ["checkpoint", "regions", "largest_region_fraction"], rows)


def write_exposure_csv(path, adopt_times, exposures, cat_time, cat_threshold) -> None:
    """Valente report: 'agent,adopt_time,exposure,category_time,category_threshold'."""
    rows = []
    for i in range(len(exposures)):
        t = adopt_times[i]
        e = exposures[i]
        rows.append([
            i,
            "NA" if t < 0 else int(t),
            "NA" if np.isnan(e) else e,
            cat_time.get(i, "NA") if isinstance(cat_time, dict) else cat_time[i],
            cat_threshold.get(i, "NA") if isinstance(cat_threshold, dict) else cat_threshold[i],
        ])
    _write_rows(
        path,
        ["agent", "adopt_time", "exposure", "category_time", "category_threshold"],
        rows,
    )


def write_summary_csv(path, summary) -> None:
    """Ensemble summary as 't,mean_z,q10,q50,q90'."""
    rows = [
        [int(summary.times[i]), summary.mean_z[i], summary.q10[i],
         summary.q50[i], summary.q90[i]]
        for i in range(len(summary.mean_z))
    ]
    _write_rows(path, ["t", "mean_z", "q10", "q50", "q90"], rows)


def write_terminal_csv(path, summary) -> None:
    """Per-rep terminal stats as 'rep,seed,final_z,terminal_flag'."""
    rows = [
        [r, int(summary.seeds[r]), summary.final_z[r], summary.terminals[r]]
        for r in range(len(summary.seeds))
    ]
    _write_rows(path, ["rep", "seed", "final_z", "terminal_flag"], rows)


def write_grid_csv(path, report) -> None:
    """Calibration grid table as 'class,b,k,r,objective'."""
    rows = [
        [row["class"], row["b"], row["k"], row["r"], row["objective"]]
        for row in (report.table or ())
    ]
    _write_rows(path, ["class", "b", "k", "r", "objective"], rows)


def write_tipping_csv(path, result) -> None:
    """Tipping sweep as 'fraction,mean_uptake,std_uptake,reps'."""
    rows = [
        [result.fractions[i], result.mean_uptake[i], result.std_uptake[i], result.reps]
        for i in range(len(result.fractions))
    ]
    _write_rows(path, ["fraction", "mean_uptake", "std_uptake", "reps"], rows)


def read_switch_counts_csv(path):
    """Observed switch counts: 'agent,switches' rows; returns the count vector."""
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or [h.strip() for h in header[:2]] != ["agent", "switches"]:
            raise ParseError("expected header 'agent,switches'", line=1)
        counts = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                counts.append(float(row[1]))
            except (IndexError, ValueError):
                raise ParseError("expected 'agent,switches' row", line=lineno) from None
    return np.asarray(counts)


def write_json(path, payload) -> None:
    """Stable JSON: sorted keys, LF newline at end."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
