"""Command-line interface: ``micz verify | simulate | sample``.

Exit codes: 0 success, 1 a check or the drift contract failed, 2 usage
error, 3 chart exit, 4 collision or other integration failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from micz.cone import casimir_Q, charge, cone_membership, cone_residual, sample_off_cone_point, sample_orbit_point
from micz.dynamics import (
    IntegratorConfig,
    bound_orbit_initial,
    conic_fit,
    hamiltonian,
    integrate,
    kepler_period,
)
from micz.io import dump_json, run_manifest, trajectory_csv
from micz.liealg import AlgElement, algebra_dim
from micz.monopole import DEFAULT_Q_MIN, ChartSingularityError, verify_monopole_identities
from micz.poisson import (
    PhasePoint,
    bivector_jacobi_residual,
    check_basic_relations,
    check_bracket_relations,
    check_covariance_relations,
    check_auxiliary_identities,
    check_quadratic_relations,
    sample_leaf_point,
)
from micz.report import CheckResult, VerificationReport, merge_reports

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CHART, EXIT_INTEGRATION = 0, 1, 2, 3, 4
FORMATS = ("csv", "json")
PRESETS = ("bound", "circular-kepler", "radial-collision")
DRIFT_TOL = 1e-6
NEGATIVE_THRESHOLD = 1e-3


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    k: int = 1
    mu: float | None = None
    seed: int = 0
    samples: int = 100
    leaf_samples: int = 5
    n: int = 10
    tol: float = 1e-8
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    q_min: float = DEFAULT_Q_MIN
    periods: float = 10.0
    t_end: float | None = None
    samples_per_period: int = 100
    preset: str = "bound"
    x: list[float] | None = None
    pi: list[float] | None = None
    xi: list[float] | None = None
    prerotate: bool = False
    negative_control: bool = False
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.command not in ("verify", "simulate", "sample"):
            raise UsageError(f"unknown command {self.command!r}")
        if self.k < 1:
            raise UsageError(f"k must be >= 1, got {self.k}")
        for name in ("tol", "rel_tol", "abs_tol", "q_min", "periods"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be positive")
        if self.t_end is not None and not self.t_end > 0:
            raise UsageError("t-end must be positive")
        for name in ("samples", "leaf_samples", "n", "samples_per_period"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be >= 1")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")
        if self.preset not in PRESETS:
            raise UsageError(f"preset must be one of {PRESETS}")
        n = 2 * self.k + 1
        for name, size in (("x", n), ("pi", n), ("xi", algebra_dim(self.k))):
            v = getattr(self, name)
            if v is not None and len(v) != size:
                raise UsageError(f"--{name} needs {size} components for k={self.k}, got {len(v)}")


def _vector(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a vector of numbers: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="micz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, help="rank: dimension 2k+1, gauge group SO(2k)")
    common.add_argument("--mu", type=float, help="magnetic charge")
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--out", help="output directory (verify, simulate) or file (sample)")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--config", help="JSON file of defaults; flags win")

    v = sub.add_parser("verify", parents=[common], help="run the identity suites")
    v.add_argument("--samples", type=int, help="random chart points for the monopole suite")
    v.add_argument("--leaf-samples", type=int, help="leaf points for the bracket suites")
    v.add_argument("--negative-control", action="store_true", default=None)

    s = sub.add_parser("simulate", parents=[common], help="integrate a trajectory")
    s.add_argument("--preset", choices=PRESETS)
    s.add_argument("--rel-tol", type=float)
    s.add_argument("--abs-tol", type=float)
    s.add_argument("--q-min", type=float)
    s.add_argument("--periods", type=float)
    s.add_argument("--t-end", type=float)
    s.add_argument("--samples-per-period", type=int)
    s.add_argument("--x", type=_vector, help="initial position, comma separated")
    s.add_argument("--pi", type=_vector, help="initial kinetic momentum")
    s.add_argument("--xi", type=_vector, help="initial fiber coordinates T_a")
    s.add_argument("--prerotate", action="store_true", default=None,
                   help="rotate initial x, pi into the e1-e2 plane before integrating")

    c = sub.add_parser("sample", parents=[common], help="sample points of a magnetic orbit")
    c.add_argument("--n", type=int, help="number of points")
    return parser


def config_from_args(argv) -> RunConfig:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            raise
        raise UsageError("invalid arguments") from exc
    values: dict = {}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        values.update({key.replace("-", "_"): val for key, val in loaded.items()})
    for key, val in vars(args).items():
        if key != "config" and val is not None:
            values[key] = val
    known = set(RunConfig.__dataclass_fields__)
    unknown = sorted(set(values) - known)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


# verify

def _jacobi_report(points, tol) -> VerificationReport:
    worst = max(bivector_jacobi_residual(p) for p in points)
    return VerificationReport("bivector_jacobi", points[0].k, len(points), tol,
                              [CheckResult("jacobi", worst, len(points), tol)])


def run_verify(cfg: RunConfig) -> tuple[int, list[VerificationReport], list[str]]:
    rng = np.random.default_rng(cfg.seed)
    k = cfg.k
    notes = []
    off = cfg.samples if (cfg.negative_control and k >= 2) else 0
    reports = [verify_monopole_identities(cfg.samples, k, cfg.seed, tol=cfg.tol, off_cone_samples=off,
                                          negative_threshold=NEGATIVE_THRESHOLD)]

    def leaf_mu():
        return cfg.mu if cfg.mu is not None else float(rng.uniform(0.1, 2.0))

    points = [sample_leaf_point(k, leaf_mu(), rng) for _ in range(cfg.leaf_samples)]
    mu = cfg.mu
    reports.append(merge_reports("basic_relations", [check_basic_relations(p) for p in points], mu))
    reports.append(_jacobi_report(points, cfg.tol))
    bracket = [check_bracket_relations(p, cfg.tol) for p in points]
    if cfg.negative_control:
        if k >= 2:
            for _ in range(cfg.leaf_samples):
                base = sample_leaf_point(k, 1.0, rng)
                q = PhasePoint(k, base.x, base.pi, sample_off_cone_point(k, rng))
                rep = check_bracket_relations(q, NEGATIVE_THRESHOLD, negative_control=True)
                bracket.append(rep)
        else:
            notes.append("k=1: every element of so(2) lies on the cone, no off-cone controls exist")
    reports.append(merge_reports("bracket_relations", bracket, mu))
    reports.append(merge_reports("quadratic_relations", [check_quadratic_relations(p, cfg.tol) for p in points], mu))
    reports.append(merge_reports("covariance_relations", [check_covariance_relations(p, cfg.tol) for p in points], mu))
    reports.append(merge_reports("auxiliary_identities", [check_auxiliary_identities(p, cfg.tol) for p in points], mu))
    for rep in reports:
        rep.mu = mu
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    return code, reports, notes


def cmd_verify(cfg: RunConfig, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    code, reports, notes = run_verify(cfg)
    for note in notes:
        print(f"note: {note}", file=stdout)
    for rep in reports:
        for line in rep.summary_lines():
            print(line, file=stdout)
        if cfg.out:
            _write(Path(cfg.out) / f"{rep.suite}.json", dump_json(rep.to_dict()))
    print("verify: " + ("PASS" if code == EXIT_OK else "FAIL"), file=stdout)
    return code


# simulate

def prerotate(x: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """Rotation R (det 1) with R x along e1 and R pi in span(e1, e2)."""
    n = x.shape[0]
    M = np.column_stack([x, pi, np.eye(n)])
    Qm, Rm = np.linalg.qr(M)
    Qm = Qm[:, :n] * np.where(np.diag(Rm)[:n] < 0, -1.0, 1.0)
    R = Qm.T
    if np.linalg.det(R) < 0:
        R[-1] *= -1
    return R


def initial_point(cfg: RunConfig) -> PhasePoint:
    k, n = cfg.k, 2 * cfg.k + 1
    mu = 0.0 if cfg.mu is None else cfg.mu
    e = np.eye(n)
    if cfg.x is not None or cfg.pi is not None or cfg.xi is not None:
        if cfg.x is None or cfg.pi is None:
            raise UsageError("explicit initial data needs both --x and --pi")
        xi = AlgElement(k, cfg.xi) if cfg.xi is not None else sample_orbit_point(k, mu, cfg.seed).xi
        x, pi = np.array(cfg.x), np.array(cfg.pi)
    elif cfg.preset == "circular-kepler":
        if mu != 0.0:
            raise UsageError("the circular Kepler preset has zero charge")
        x, pi, xi = e[0], e[1], AlgElement.zeros(k)
    elif cfg.preset == "radial-collision":
        x, pi, xi = e[0], -0.1 * e[0], AlgElement.zeros(k)
    else:
        p = bound_orbit_initial(k, mu, cfg.seed)
        x, pi, xi = p.x, p.pi, p.xi
    if cfg.prerotate:
        R = prerotate(x, pi)
        x, pi = R @ x, R @ pi
    try:
        return PhasePoint(k, x, pi, xi, q_min=cfg.q_min)
    except ChartSingularityError as exc:
        raise UsageError(f"initial position outside the chart: {exc}") from exc


def run_simulate(cfg: RunConfig):
    p0 = initial_point(cfg)
    H0 = hamiltonian(p0)
    if cfg.t_end is not None:
        t_end = cfg.t_end
        period = kepler_period(H0) if H0 < 0 else None
        sample_interval = (period or t_end) / cfg.samples_per_period
    else:
        if H0 >= 0:
            raise UsageError(f"H = {H0:.6g} >= 0: the orbit has no period, give --t-end")
        period = kepler_period(H0)
        t_end = cfg.periods * period
        sample_interval = period / cfg.samples_per_period
    icfg = IntegratorConfig(t_end=t_end, sample_interval=sample_interval, rel_tol=cfg.rel_tol,
                            abs_tol=cfg.abs_tol, q_min=cfg.q_min)
    traj = integrate(p0, icfg)
    d = traj.diagnostics
    drifts = d.drifts() if d is not None else {}
    max_drift = max(drifts.values(), default=float("nan"))
    summary = {
        "status": traj.status,
        "message": traj.message,
        "t_stop": traj.t_stop,
        "samples": len(traj),
        "H0": H0,
        "period": period,
        "drifts": drifts,
        "max_drift": max_drift,
        "drift_tol": DRIFT_TOL,
        "drift_ok": bool(max_drift <= DRIFT_TOL),
    }
    if d is not None:
        finite = np.abs(d.energy_residual[np.isfinite(d.energy_residual)])
        summary["max_energy_residual"] = float(finite.max()) if finite.size else None
        summary["max_L2_residual"] = float(np.max(np.abs(d.L2_residual)))
        summary["max_cone_residual"] = float(np.max(d.cone_residual))
    if traj.ok and len(traj) >= 6:
        summary["conic_fit"] = conic_fit(traj).to_dict()
    inputs = {"x": p0.x.tolist(), "pi": p0.pi.tolist(), "xi": p0.xi.coeffs.tolist()}
    manifest = run_manifest(cfg.k, cfg.mu, cfg.seed, {**icfg.to_dict(), "preset": cfg.preset,
                                                      "prerotate": cfg.prerotate}, inputs)
    summary["manifest"] = manifest
    if traj.status == "chart_exit":
        code = EXIT_CHART
    elif not traj.ok:
        code = EXIT_INTEGRATION
    else:
        code = EXIT_OK if summary["drift_ok"] else EXIT_FAIL
    summary["exit_code"] = code
    return code, traj, summary


def _trajectory_json(traj) -> dict:
    d = traj.diagnostics
    return {"k": traj.k, "t": traj.t.tolist(), "states": traj.states.tolist(),
            "H": d.H.tolist(), "Q": d.Q.tolist()}


def cmd_simulate(cfg: RunConfig, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    code, traj, summary = run_simulate(cfg)
    if cfg.out:
        out = Path(cfg.out)
        if len(traj):
            if cfg.format == "csv":
                _write(out / "trajectory.csv", trajectory_csv(traj))
            else:
                _write(out / "trajectory.json", dump_json(_trajectory_json(traj)))
        _write(out / "summary.json", dump_json(summary))
    print(dump_json(summary), end="", file=stdout)
    return code


# sample

def run_sample(cfg: RunConfig) -> tuple[int, dict]:
    mu = 1.0 if cfg.mu is None else cfg.mu
    rng = np.random.default_rng(cfg.seed)
    count = 1 if mu == 0 else cfg.n
    points = []
    for _ in range(count):
        xi = sample_orbit_point(cfg.k, mu, rng).xi
        points.append({
            "xi": xi.coeffs.tolist(),
            "charge": charge(xi),
            "Q": casimir_Q(xi),
            "cone_residual": cone_residual(xi),
            "on_cone": bool(cone_membership(xi, cfg.tol)),
        })
    code = EXIT_OK if all(p["on_cone"] for p in points) else EXIT_FAIL
    return code, {"k": cfg.k, "mu": mu, "seed": cfg.seed, "n": count, "points": points}


def cmd_sample(cfg: RunConfig, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    code, doc = run_sample(cfg)
    text = dump_json(doc)
    if cfg.out:
        _write(Path(cfg.out), text)
    else:
        print(text, end="", file=stdout)
    return code


COMMANDS = {"verify": cmd_verify, "simulate": cmd_simulate, "sample": cmd_sample}


def main(argv=None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"micz: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
