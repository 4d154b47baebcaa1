"""Trajectory CSV export and JSON run manifests."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

import numpy as np

from micz.dynamics import Trajectory, diagnostics
from micz.liealg import algebra_dim

DIAGNOSTIC_COLUMNS = ("xi_norm", "cone_residual", "L2_residual", "energy_residual")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def trajectory_header(k: int) -> list[str]:
    n = 2 * k + 1
    D = algebra_dim(k)
    return (
        ["t"]
        + [f"x_{i}" for i in range(1, n + 1)]
        + [f"pi_{i}" for i in range(1, n + 1)]
        + [f"T_{a}" for a in range(1, D + 1)]
        + ["H", "Q"]
        + list(DIAGNOSTIC_COLUMNS)
    )


def trajectory_csv(traj: Trajectory) -> str:
    """CSV text, one row per sample, floats at 17 significant digits."""
    d = traj.diagnostics if traj.diagnostics is not None else diagnostics(traj.k, traj.states)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(trajectory_header(traj.k))
    for i in range(len(traj)):
        row = [traj.t[i], *traj.states[i], d.H[i], d.Q[i]]
        row += [getattr(d, name)[i] for name in DIAGNOSTIC_COLUMNS]
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_trajectory_csv(traj: Trajectory, path) -> None:
    Path(path).write_text(trajectory_csv(traj))


def read_trajectory_csv(path) -> dict[str, np.ndarray]:
    """Column name to array, for downstream checks."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], np.array(rows[1:], dtype=float).reshape(-1, len(rows[0]))
    return {name: body[:, j] for j, name in enumerate(header)}


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True)


def content_hash(obj) -> str:
    """Git blob hash (sha1 of ``"blob <len>\\0" + content``) of canonical JSON."""
    data = canonical_json(obj).encode()
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def run_manifest(k: int, mu: float | None, seed, config: dict, inputs: dict | None = None) -> dict:
    payload = {"k": k, "mu": mu, "seed": seed, "config": config}
    if inputs is not None:
        payload["inputs"] = inputs
    return {**payload, "content_hash": content_hash(payload)}


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
