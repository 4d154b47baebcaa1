import shutil
import subprocess

import numpy as np
import pytest

from micz.dynamics import IntegratorConfig, bound_orbit_initial, integrate
from micz.io import (
    canonical_json,
    content_hash,
    read_trajectory_csv,
    run_manifest,
    trajectory_csv,
    trajectory_header,
    write_trajectory_csv,
)


@pytest.fixture(scope="module")
def traj():
    p0 = bound_orbit_initial(2, 0.7, seed=1)
    return integrate(p0, IntegratorConfig(t_end=2.0, sample_interval=0.5))


def test_header():
    h = trajectory_header(1)
    assert h[:8] == ["t", "x_1", "x_2", "x_3", "pi_1", "pi_2", "pi_3", "T_1"]
    assert h[8:10] == ["H", "Q"]
    assert len(trajectory_header(2)) == 1 + 5 + 5 + 6 + 2 + 4


def test_csv_round_trips_exactly(traj, tmp_path):
    path = tmp_path / "traj.csv"
    write_trajectory_csv(traj, path)
    cols = read_trajectory_csv(path)
    assert np.array_equal(cols["t"], traj.t)
    assert np.array_equal(cols["x_3"], traj.x[:, 2])
    assert np.array_equal(cols["T_6"], traj.xi[:, 5])
    assert np.array_equal(cols["H"], traj.diagnostics.H)
    assert trajectory_csv(traj) == path.read_text()


def test_content_hash_is_deterministic():
    a = run_manifest(1, 0.5, 3, {"rel_tol": 1e-10})
    b = run_manifest(1, 0.5, 3, {"rel_tol": 1e-10})
    assert a == b
    assert a["content_hash"] != run_manifest(1, 0.5, 4, {"rel_tol": 1e-10})["content_hash"]


@pytest.mark.skipif(shutil.which("git") is None, reason="git not available")
def test_content_hash_matches_git_blob_hash():
    obj = {"k": 2, "config": {"a": [1, 2.5]}}
    out = subprocess.run(["git", "hash-object", "--stdin"], input=canonical_json(obj).encode(),
                         capture_output=True, check=True)
    assert content_hash(obj) == out.stdout.decode().strip()
