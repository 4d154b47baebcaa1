"""The charge-mu Kepler problem in dimension 2k+1.

Hamiltonian ``H = pi^2/2 + Q/(2 r^2) - 1/r`` with Hamilton's equations::

    x'   = pi
    pi'_i = -x_i/r^3 + Q x_i/r^4 + pi_j F_ji
    T'_a = -C^c_ab pi_k A_k^b T_c

integrated in the single chart with an adaptive Dormand-Prince 5(4) pair.
Conserved quantities (H, L_ij, the Lenz vector, Q, |xi|) are monitored but
never enforced.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from micz.cone import casimir_Q, cone_residual
from micz.liealg import AlgElement, structure_constants
from micz.monopole import DEFAULT_Q_MIN, _potential, _strength, chart_q
from micz.poisson import Observable, PhasePoint, phase_jets

log = logging.getLogger(__name__)

__all__ = [
    "ConicFit",
    "Diagnostics",
    "IntegratorConfig",
    "Trajectory",
    "TrajectoryState",
    "angular_momentum",
    "angular_momentum_squared",
    "bound_orbit_initial",
    "conic_fit",
    "diagnostics",
    "energy_identity",
    "eom_rhs",
    "hamiltonian",
    "hamiltonian_observable",
    "integrate",
    "kepler_period",
    "lenz_vector",
    "lenz_vector_universal",
    "universal_hamiltonian",
]


def hamiltonian(p: PhasePoint) -> float:
    r = p.r
    return float(0.5 * p.pi @ p.pi + casimir_Q(p.xi) / (2 * r * r) - 1.0 / r)


def hamiltonian_observable() -> Observable:
    """H as an observable with an exact (jet) gradient."""

    def jet(p: PhasePoint):
        pj = phase_jets(p)
        return 0.5 * pj.pi2 + pj.Q / (2.0 * pj.r * pj.r) - 1.0 / pj.r

    return Observable.from_jet(jet, name="H")


def _XY(p: PhasePoint):
    r = p.r
    return r * (p.pi @ p.pi) + casimir_Q(p.xi) / r, r


def universal_hamiltonian(p: PhasePoint) -> float:
    """(X/2 - 1)/Y with X = r pi^2 + Q/r and Y = r."""
    X, Y = _XY(p)
    return float((0.5 * X - 1.0) / Y)


def angular_momentum(p: PhasePoint) -> np.ndarray:
    """L_ij = x_i pi_j - x_j pi_i + r^2 F_ij(x, xi)."""
    x, pi = p.x, p.pi
    return np.outer(x, pi) - np.outer(pi, x) + p.r**2 * p.field()


def angular_momentum_squared(L: np.ndarray) -> float:
    """L^2 = sum_{i<j} L_ij^2."""
    return float(0.5 * np.sum(L * L))


def lenz_vector(p: PhasePoint) -> np.ndarray:
    """A_i = pi_j L_ji + x_i / r, the interior product of pi with L plus r-hat."""
    return p.pi @ angular_momentum(p) + p.x / p.r


def lenz_vector_universal(p: PhasePoint) -> np.ndarray:
    """The same vector from (X_u - Y_u X_e/Y_e)/2 + Y_u/Y_e with X_{e_i} = -Z_i, Y_{e_i} = x_i."""
    x, pi = p.x, p.pi
    r = p.r
    Q = casimir_Q(p.xi)
    X, Y = _XY(p)
    Z = x * (pi @ pi) - 2 * pi * (x @ pi) + 2 * r * r * (p.field() @ pi) - Q * x / r**2
    return 0.5 * (-Z - x * X / Y) + x / Y


def kepler_period(H: float) -> float:
    """Radial period 2 pi (-2H)^(-3/2) of a bound orbit."""
    if H >= 0:
        raise ValueError(f"orbit is not bound (H = {H})")
    return 2 * np.pi * (-2.0 * H) ** -1.5


def _rhs(z: np.ndarray, k: int, C: np.ndarray) -> np.ndarray:
    n = 2 * k + 1
    x, pi, xi = z[:n], z[n:2 * n], z[2 * n:]
    r = float(np.sqrt(x @ x))
    A, _, u = _potential(x, r, k)
    Fs = _strength(x, r, k, A, u) @ xi
    Q = (xi @ xi) / k
    dpi = -x / r**3 + Q * x / r**4 + pi @ Fs
    dxi = -np.einsum("abg,b,g->a", C, pi @ A, xi)
    return np.concatenate([pi, dpi, dxi])


def eom_rhs(p: PhasePoint) -> tuple[np.ndarray, np.ndarray, AlgElement]:
    """Tangent vector (x', pi', xi') of Hamilton's equations at ``p``."""
    dz = _rhs(p.coords, p.k, structure_constants(p.k).C)
    n = p.n
    return dz[:n], dz[n:2 * n], AlgElement(p.k, dz[2 * n:])


@dataclass
class IntegratorConfig:
    t_end: float
    sample_interval: float
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = np.inf
    q_min: float = DEFAULT_Q_MIN
    r_min: float = 1e-6

    def __post_init__(self):
        for name in ("t_end", "sample_interval", "rel_tol", "abs_tol", "max_step", "q_min", "r_min"):
            v = getattr(self, name)
            if not v > 0:
                raise ValueError(f"{name} must be positive, got {v}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["max_step"] = None if np.isinf(self.max_step) else self.max_step
        return d


@dataclass(frozen=True)
class TrajectoryState:
    t: float
    p: PhasePoint


@dataclass
class Diagnostics:
    """Per-sample invariants along a trajectory."""

    H: np.ndarray
    L: np.ndarray            # [sample, i, j]
    A: np.ndarray            # [sample, i]
    Q: np.ndarray
    xi_norm: np.ndarray
    cone_residual: np.ndarray
    L2_residual: np.ndarray  # L^2 - kQ - |r ^ pi|^2
    energy_residual: np.ndarray

    def drifts(self) -> dict[str, float]:
        """Max deviation from the initial value, relative to its size.

        Groups (L, A) use the max-abs entry as size, and a quantity whose
        initial size is below 1e-8 is compared in absolute terms.
        """
        out = {}
        for name in ("H", "L", "A", "Q", "xi_norm"):
            v = getattr(self, name)
            v = v.reshape(v.shape[0], -1)
            size = float(np.max(np.abs(v[0])))
            denom = size if size > 1e-8 else 1.0
            out[name] = float(np.max(np.abs(v - v[0]))) / denom
        return out

    def max_drift(self) -> float:
        return max(self.drifts().values())


@dataclass
class Trajectory:
    k: int
    t: np.ndarray
    states: np.ndarray  # [sample, coordinate]
    status: str = "completed"
    message: str = ""
    diagnostics: Diagnostics | None = field(default=None, repr=False)
    t_stop: float | None = None

    @property
    def n(self) -> int:
        return 2 * self.k + 1

    @property
    def x(self) -> np.ndarray:
        return self.states[:, :self.n]

    @property
    def pi(self) -> np.ndarray:
        return self.states[:, self.n:2 * self.n]

    @property
    def xi(self) -> np.ndarray:
        return self.states[:, 2 * self.n:]

    def points(self, q_min: float = 0.0) -> list[PhasePoint]:
        return [PhasePoint.from_coords(self.k, z, q_min=q_min) for z in self.states]

    def __len__(self) -> int:
        return self.states.shape[0]

    def __getitem__(self, i: int) -> TrajectoryState:
        return TrajectoryState(float(self.t[i]), PhasePoint.from_coords(self.k, self.states[i], q_min=0.0))

    @property
    def ok(self) -> bool:
        return self.status == "completed"


def _selected_residuals(p: PhasePoint, H: float, L: np.ndarray, A: np.ndarray):
    k = p.k
    Q = casimir_Q(p.xi)
    L2 = angular_momentum_squared(L)
    wedge = np.outer(p.x, p.pi) - np.outer(p.pi, p.x)
    l2_res = L2 - k * Q - angular_momentum_squared(wedge)
    gap = L2 - k * Q
    if gap > 1e-12 * max(1.0, L2):
        e_res = H + (1.0 - A @ A) / (2.0 * gap)
    else:
        e_res = np.nan
    return l2_res, e_res


def diagnostics(k: int, states: np.ndarray) -> Diagnostics:
    rows = {key: [] for key in ("H", "L", "A", "Q", "xi_norm", "cone", "l2", "energy")}
    for z in states:
        p = PhasePoint.from_coords(k, z, q_min=0.0)
        H = hamiltonian(p)
        L = angular_momentum(p)
        A = p.pi @ L + p.x / p.r
        l2_res, e_res = _selected_residuals(p, H, L, A)
        rows["H"].append(H)
        rows["L"].append(L)
        rows["A"].append(A)
        rows["Q"].append(casimir_Q(p.xi))
        rows["xi_norm"].append(p.xi.norm())
        rows["cone"].append(cone_residual(p.xi))
        rows["l2"].append(l2_res)
        rows["energy"].append(e_res)
    a = {key: np.array(v) for key, v in rows.items()}
    return Diagnostics(a["H"], a["L"], a["A"], a["Q"], a["xi_norm"], a["cone"], a["l2"], a["energy"])


def integrate(p0: PhasePoint, cfg: IntegratorConfig, backward: bool = False) -> Trajectory:
    """Integrate Hamilton's equations from ``p0`` over ``[0, t_end]``.

    States are sampled every ``sample_interval`` (plus the final time).
    With ``backward`` the flow runs to ``-t_end`` instead.  The run stops
    early, with a non-"completed" status, when the orbit leaves the chart
    (q < q_min), approaches the origin (r < r_min), produces non-finite
    values or the step size underflows.
    """
    k = p0.k
    n = p0.n
    C = structure_constants(k).C
    sign = -1.0 if backward else 1.0
    t_end = sign * cfg.t_end
    m = int(np.floor(cfg.t_end / cfg.sample_interval + 1e-9))
    t_eval = cfg.sample_interval * np.arange(m + 1)
    t_eval = t_eval[t_eval < cfg.t_end * (1 - 1e-12)]
    t_eval = sign * np.append(t_eval, cfg.t_end)

    def chart_exit(t, z):
        return chart_q(z[:n]) - cfg.q_min

    chart_exit.terminal = True
    chart_exit.direction = -1

    def collision(t, z):
        return float(np.sqrt(z[:n] @ z[:n])) - cfg.r_min

    collision.terminal = True
    collision.direction = -1

    def rhs(t, z):
        return _rhs(z, k, C)

    sol = solve_ivp(
        rhs,
        (0.0, t_end),
        p0.coords,
        method="RK45",
        t_eval=t_eval,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step,
        events=(chart_exit, collision),
    )
    states = sol.y.T.copy()
    status, message = "completed", ""
    t_stop = float(sol.t[-1]) if sol.t.size else 0.0
    if sol.status == 1:
        if sol.t_events[0].size:
            t_stop = float(sol.t_events[0][0])
            status, message = "chart_exit", f"q fell below q_min={cfg.q_min} at t={t_stop:.6g}"
        else:
            t_stop = float(sol.t_events[1][0])
            status, message = "collision", f"r fell below r_min={cfg.r_min} at t={t_stop:.6g}"
    elif sol.status == -1:
        status, message = "step_underflow", sol.message
    if not np.all(np.isfinite(states)):
        bad = int(np.argmax(~np.all(np.isfinite(states), axis=1)))
        states = states[:bad]
        status, message = "non_finite", "state became non-finite"
    t = sol.t[: states.shape[0]]
    if status != "completed":
        log.warning("integration stopped: %s", message)
    traj = Trajectory(k, t, states, status, message, t_stop=t_stop)
    traj.diagnostics = diagnostics(k, states) if states.shape[0] else None
    return traj


def energy_identity(traj: Trajectory) -> np.ndarray:
    """Residual H + (1 - A^2) / (2 (L^2 - mu^2)) per sample, mu^2 = kQ.

    Samples with L^2 - mu^2 <= 0 (colliding data) are reported as NaN.
    """
    d = traj.diagnostics if traj.diagnostics is not None else diagnostics(traj.k, traj.states)
    return d.energy_residual


def bound_orbit_initial(k: int, mu: float, seed, energy_fraction=(0.4, 0.8)) -> PhasePoint:
    """Random initial data with H < 0 on the charge-``mu`` leaf.

    The speed is ``sqrt(f (2/r - Q/r^2))`` with f drawn from
    ``energy_fraction``, so H = (f - 1)(1/r - Q/(2r^2)) < 0.
    """
    from micz.cone import sample_orbit_point
    from micz.monopole import sample_chart_point

    rng = np.random.default_rng(seed)
    xi = sample_orbit_point(k, mu, rng).xi
    Q = casimir_Q(xi)
    n = 2 * k + 1
    for _ in range(1000):
        x = sample_chart_point(k, rng, q_floor=0.5, r_range=(0.8, 1.5))
        r = np.linalg.norm(x)
        budget = 2.0 / r - Q / r**2
        if budget <= 0:
            continue
        speed = np.sqrt(rng.uniform(*energy_fraction) * budget)
        d = rng.standard_normal(n)
        d /= np.linalg.norm(d)
        return PhasePoint(k, x, speed * d, xi)
    raise ValueError(f"no bound orbit found for mu={mu}: Q/2 exceeds the sampled radii")


@dataclass
class ConicFit:
    eccentricity: float
    plane_residual: float
    conic_residual: float
    coefficients: np.ndarray   # a, b, c, d, e, f of a u^2 + b uv + c v^2 + d u + e v + f
    plane_basis: np.ndarray    # [2, n]
    kind: str                  # by the sign of H
    shape: str                 # by the discriminant of the fitted conic

    def to_dict(self) -> dict:
        return {
            "eccentricity": self.eccentricity,
            "plane_residual": self.plane_residual,
            "conic_residual": self.conic_residual,
            "coefficients": self.coefficients.tolist(),
            "kind": self.kind,
            "shape": self.shape,
        }


def _eccentricity(a, b, c, d, e, f) -> float:
    M = np.array([[a, b / 2, d / 2], [b / 2, c, e / 2], [d / 2, e / 2, f]])
    root = np.hypot(a - c, b)
    eta = 1.0 if np.linalg.det(M) < 0 else -1.0
    den = eta * (a + c) + root
    if den == 0:
        return float("inf")
    return float(np.sqrt(max(0.0, 2 * root / den)))


def conic_fit(traj: Trajectory, energy_tol: float = 1e-9) -> ConicFit:
    """Least-squares conic through the position track (exploratory only).

    The positions are projected onto the best-fit 2-plane through the
    origin; the conic is the unit-norm coefficient vector minimising the
    algebraic residual in coordinates scaled by the RMS radius.
    """
    X = traj.x
    if X.shape[0] < 6:
        raise ValueError("conic fit needs at least 6 samples")
    _, sv, vt = np.linalg.svd(X, full_matrices=False)
    basis = vt[:2]
    rms = np.sqrt(np.mean(np.sum(X * X, axis=1)))
    plane_res = float(np.sqrt(np.mean(np.sum((X - (X @ basis.T) @ basis) ** 2, axis=1))) / rms)
    uv = (X @ basis.T) / rms
    u, v = uv[:, 0], uv[:, 1]
    design = np.column_stack([u * u, u * v, v * v, u, v, np.ones_like(u)])
    _, s, wt = np.linalg.svd(design, full_matrices=False)
    coef = wt[-1]
    conic_res = float(np.sqrt(np.mean((design @ coef) ** 2)))
    a, b, c, d, e, f = coef
    # undo the coordinate scaling so the coefficients refer to plane coordinates
    coef_phys = coef / np.array([rms**2, rms**2, rms**2, rms, rms, 1.0])
    disc = b * b - 4 * a * c
    shape = "ellipse" if disc < -1e-12 else ("hyperbola" if disc > 1e-12 else "parabola")
    d_ = traj.diagnostics if traj.diagnostics is not None else diagnostics(traj.k, traj.states)
    H = float(np.mean(d_.H))
    kind = "parabola" if abs(H) <= energy_tol else ("ellipse" if H < 0 else "hyperbola")
    return ConicFit(_eccentricity(a, b, c, d, e, f), plane_res, conic_res, coef_phys, basis, kind, shape)
