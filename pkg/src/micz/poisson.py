"""Poisson structure on the good coordinate patch of the Wong phase space.

Coordinates are ``z = (x_1..x_n, pi_1..pi_n, T_1..T_D)`` with n = 2k+1 and
D = k(2k-1).  The bivector is assembled from the basic relations::

    {x_j, x_k} = 0             {x_j, pi_k} = delta_jk      {pi_j, pi_k} = -F_jk
    {T_a, T_b} = -C^c_ab T_c   {T_a, x_k} = 0              {T_a, pi_k} = -C^c_ab A_k^b T_c

and brackets of observables are contractions of their gradients with it.
The so(2, 2k+2) generators J_AB carry exact gradients through ``Jet``.

Generator labels run over -1, 0, 1, ..., 2k+2.  Arrays indexed by a label
use position ``label + 1``; the metric is eta = diag(1, 1, -1, ..., -1) in
that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np

from micz.cone import NotOnConeError, casimir_Q, cone_membership, cone_residual, sample_orbit_point
from micz.jet import Jet
from micz.liealg import AlgElement, algebra_dim, structure_constants
from micz.monopole import (
    DEFAULT_Q_MIN,
    _position,
    _potential,
    _potential_derivative,
    _strength,
    _strength_derivative,
    sample_chart_point,
)
from micz.report import CheckResult, VerificationReport

__all__ = [
    "JCollection",
    "J_observable",
    "Observable",
    "PhaseJets",
    "PhasePoint",
    "bivector",
    "bracket_tensor",
    "bivector_derivative",
    "bivector_jacobi_residual",
    "check_basic_relations",
    "check_bracket_relations",
    "check_covariance_relations",
    "check_auxiliary_identities",
    "check_quadratic_relations",
    "coordinate_jets",
    "eta",
    "evaluate_J",
    "field_jet",
    "gradient_J",
    "J_jets",
    "label_position",
    "moment_map",
    "phase_jets",
    "poisson_bracket",
    "auxiliary_observables",
    "sample_leaf_point",
]


class _Geometry(NamedTuple):
    r: float
    A: np.ndarray   # [j, alpha]
    dA: np.ndarray  # [l, j, alpha]
    F: np.ndarray   # [j, m, alpha]
    dF: np.ndarray  # [l, j, m, alpha]


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """Point (x, pi, xi) of the good coordinate patch."""

    k: int
    x: np.ndarray
    pi: np.ndarray
    xi: AlgElement
    q_min: float = DEFAULT_Q_MIN

    def __post_init__(self):
        x, _ = _position(self.x, self.k, self.q_min)
        pi = np.array(self.pi, dtype=float).reshape(-1)
        if pi.shape != x.shape:
            raise ValueError(f"momentum must have length {x.shape[0]}, got {pi.shape[0]}")
        if not np.all(np.isfinite(pi)):
            raise ValueError("momentum must be finite")
        xi = self.xi if isinstance(self.xi, AlgElement) else AlgElement(self.k, self.xi)
        if xi.k != self.k:
            raise ValueError(f"rank mismatch: k={self.k} vs xi with k={xi.k}")
        x = x.copy()
        x.flags.writeable = False
        pi.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "xi", xi)

    @property
    def n(self) -> int:
        return 2 * self.k + 1

    @property
    def dim(self) -> int:
        return 2 * self.n + algebra_dim(self.k)

    @property
    def coords(self) -> np.ndarray:
        return np.concatenate([self.x, self.pi, self.xi.coeffs])

    @classmethod
    def from_coords(cls, k: int, z, q_min: float = DEFAULT_Q_MIN) -> PhasePoint:
        z = np.asarray(z, dtype=float)
        n = 2 * k + 1
        if z.shape != (2 * n + algebra_dim(k),):
            raise ValueError(f"expected {2 * n + algebra_dim(k)} coordinates, got shape {z.shape}")
        return cls(k, z[:n], z[n:2 * n], AlgElement(k, z[2 * n:]), q_min)

    @cached_property
    def geometry(self) -> _Geometry:
        r = float(np.linalg.norm(self.x))
        A, s, u = _potential(self.x, r, self.k)
        dA = _potential_derivative(self.x, r, self.k, s, u)
        F = _strength(self.x, r, self.k, A, u)
        dF = _strength_derivative(self.x, r, self.k, A, dA, u)
        return _Geometry(r, A, dA, F, dF)

    @property
    def r(self) -> float:
        return self.geometry.r

    def field(self) -> np.ndarray:
        """F_jm(x, xi)."""
        return self.geometry.F @ self.xi.coeffs


def _blocks(p: PhasePoint):
    n = p.n
    return slice(0, n), slice(n, 2 * n), slice(2 * n, p.dim)


def bivector(p: PhasePoint) -> np.ndarray:
    """Matrix P with {f, g} = grad f . P . grad g at ``p``."""
    ix, ip, it = _blocks(p)
    geo = p.geometry
    xi = p.xi.coeffs
    C = structure_constants(p.k).C
    P = np.zeros((p.dim, p.dim))
    eye = np.eye(p.n)
    P[ix, ip] = eye
    P[ip, ix] = -eye
    Fs = geo.F @ xi
    P[ip, ip] = -0.5 * (Fs - Fs.T)  # exact antisymmetry under rounding
    P[it, it] = -(C @ xi)
    Tpi = -np.einsum("abg,kb,g->ak", C, geo.A, xi)
    P[it, ip] = Tpi
    P[ip, it] = -Tpi.T
    return P


def bivector_derivative(p: PhasePoint) -> np.ndarray:
    """``dP[d, a, b]`` = derivative of P_ab along coordinate d."""
    ix, ip, it = _blocks(p)
    N = p.dim
    geo = p.geometry
    xi = p.xi.coeffs
    C = structure_constants(p.k).C
    dP = np.zeros((N, N, N))
    dP[ix, ip, ip] = -(geo.dF @ xi)
    dP[it, ip, ip] = -np.moveaxis(geo.F, 2, 0)
    dP[it, it, it] = -np.moveaxis(C, 2, 0)
    dx_Tpi = -np.einsum("abg,lkb,g->lak", C, geo.dA, xi)
    dT_Tpi = -np.einsum("abg,kb->gak", C, geo.A)
    dP[ix, it, ip] = dx_Tpi
    dP[ix, ip, it] = -np.swapaxes(dx_Tpi, 1, 2)
    dP[it, it, ip] = dT_Tpi
    dP[it, ip, it] = -np.swapaxes(dT_Tpi, 1, 2)
    return dP


def bivector_jacobi_residual(p: PhasePoint) -> float:
    """max |{z_a, {z_b, z_c}} + cyclic| over all coordinate triples."""
    P = bivector(p)
    dP = bivector_derivative(p)
    t = np.einsum("ad,dbc->abc", P, dP)
    cyc = t + np.transpose(t, (1, 2, 0)) + np.transpose(t, (2, 0, 1))
    return float(np.max(np.abs(cyc)))


@dataclass(frozen=True)
class Observable:
    """Real function on phase space with an analytic or finite-difference gradient.

    ``grad`` returns the gradient with respect to ``PhasePoint.coords``;
    when absent, central differences with step ``rel_step * max(1, |z_i|)``
    are used.
    """

    func: Callable[[PhasePoint], float]
    grad: Callable[[PhasePoint], np.ndarray] | None = None
    rel_step: float = 1e-6
    name: str = ""

    def __call__(self, p: PhasePoint) -> float:
        return float(self.func(p))

    def gradient(self, p: PhasePoint) -> np.ndarray:
        if self.grad is not None:
            return np.asarray(self.grad(p), dtype=float)
        return self.fd_gradient(p)

    def fd_gradient(self, p: PhasePoint) -> np.ndarray:
        z = p.coords
        out = np.empty_like(z)
        for i in range(z.shape[0]):
            h = self.rel_step * max(1.0, abs(z[i]))
            zp, zm = z.copy(), z.copy()
            zp[i] += h
            zm[i] -= h
            fp = self.func(PhasePoint.from_coords(p.k, zp, p.q_min))
            fm = self.func(PhasePoint.from_coords(p.k, zm, p.q_min))
            out[i] = (fp - fm) / (2.0 * h)
        return out

    @classmethod
    def from_jet(cls, fn: Callable[[PhasePoint], Jet], name: str = "") -> Observable:
        """Observable whose value and exact gradient come from a scalar jet."""
        return cls(lambda p: float(fn(p).val), lambda p: fn(p).grad, name=name)

    @classmethod
    def coordinate(cls, p_or_k, kind: str, i: int) -> Observable:
        """Coordinate function: ``kind`` in {"x", "pi", "T"}, zero-based ``i``."""
        k = p_or_k.k if isinstance(p_or_k, PhasePoint) else int(p_or_k)
        n = 2 * k + 1
        offset = {"x": 0, "pi": n, "T": 2 * n}[kind]
        N = 2 * n + algebra_dim(k)
        e = np.zeros(N)
        e[offset + i] = 1.0
        return cls(lambda p: float(p.coords[offset + i]), lambda p: e, name=f"{kind}_{i + 1}")


def _grad_of(f, p: PhasePoint) -> np.ndarray:
    if isinstance(f, Observable):
        return f.gradient(p)
    if isinstance(f, Jet):
        return f.grad
    return np.asarray(f, dtype=float)


def poisson_bracket(f, g, p: PhasePoint) -> float:
    """{f, g} at ``p``; ``f``/``g`` are Observables, scalar Jets or gradient vectors."""
    return float(_grad_of(f, p) @ bivector(p) @ _grad_of(g, p))


def bracket_tensor(f: Jet, g: Jet, p: PhasePoint, P: np.ndarray | None = None) -> np.ndarray:
    """All brackets {f[I], g[J]} for array-valued jets, shape f.shape + g.shape."""
    P = bivector(p) if P is None else P
    fg = f.grad.reshape(-1, f.size)
    gg = g.grad.reshape(-1, g.size)
    return (fg @ P @ gg.T).reshape(f.shape + g.shape)


class PhaseJets(NamedTuple):
    x: Jet
    pi: Jet
    xi: Jet
    r: Jet
    pi2: Jet
    rdotpi: Jet
    Q: Jet
    F: Jet      # F_ij(x, xi)
    Fpi: Jet    # sum_j F_ij pi_j


def field_jet(p: PhasePoint) -> Jet:
    """F_jm(x, xi) as a jet over the phase coordinates."""
    ix, _, it = _blocks(p)
    geo = p.geometry
    xi = p.xi.coeffs
    grad = np.zeros((p.n, p.n, p.dim))
    grad[:, :, ix] = np.moveaxis(geo.dF @ xi, 0, 2)
    grad[:, :, it] = geo.F
    return Jet(geo.F @ xi, grad)


def phase_jets(p: PhasePoint) -> PhaseJets:
    ix, ip, it = _blocks(p)
    N = p.dim
    eye = np.eye(N)
    x = Jet(p.x, eye[ix])
    pi = Jet(p.pi, eye[ip])
    xi = Jet(p.xi.coeffs, eye[it])
    r = (x * x).sum().sqrt()
    pi2 = (pi * pi).sum()
    rdotpi = (x * pi).sum()
    Q = (xi * xi).sum() / p.k
    F = field_jet(p)
    Fpi = (F * pi[None, :]).sum(axis=1)
    return PhaseJets(x, pi, xi, r, pi2, rdotpi, Q, F, Fpi)


def label_position(label: int, k: int) -> int:
    if not -1 <= label <= 2 * k + 2:
        raise ValueError(f"generator label must lie in [-1, {2 * k + 2}], got {label}")
    return label + 1


def eta(k: int) -> np.ndarray:
    """Diagonal of the so(2, 2k+2) metric in label order -1, 0, 1, ..., 2k+2."""
    e = -np.ones(2 * k + 4)
    e[:2] = 1.0
    return e


def J_jets(p: PhasePoint, pj: PhaseJets | None = None) -> Jet:
    """Antisymmetric jet matrix of all J_AB, indexed by label position."""
    pj = phase_jets(p) if pj is None else pj
    n = p.n
    m = n + 3
    x, pi, r, pi2, rp, Q = pj.x, pj.pi, pj.r, pj.pi2, pj.rdotpi, pj.Q
    r2 = r * r

    Jij = x[:, None] * pi[None, :] - x[None, :] * pi[:, None] + r2 * pj.F
    common = 0.5 * x * pi2 - pi * rp + r2 * pj.Fpi - x * (Q / (2.0 * r2))
    J_top = common - 0.5 * x      # J_{i, 2k+2}
    J_bot = common + 0.5 * x      # J_{i, -1}
    J_i0 = r * pi
    half_X = 0.5 * (r * pi2 + Q / r)
    J_top0 = half_X - 0.5 * r     # J_{2k+2, 0}
    J_bot0 = half_X + 0.5 * r     # J_{-1, 0}

    val = np.zeros((m, m))
    grad = np.zeros((m, m, p.dim))

    def put(a, b, jet):
        val[a, b] = jet.val
        grad[a, b] = jet.grad
        val[b, a] = -jet.val
        grad[b, a] = -jet.grad

    vec = slice(2, 2 + n)
    top, bot, zero = n + 2, 0, 1
    val[vec, vec] = Jij.val
    grad[vec, vec] = Jij.grad
    put(vec, top, J_top)
    put(vec, bot, J_bot)
    put(vec, zero, J_i0)
    put(top, bot, rp)
    put(top, zero, J_top0)
    put(bot, zero, J_bot0)
    return Jet(val, grad)


class JCollection(NamedTuple):
    k: int
    values: np.ndarray     # [A+1, B+1]
    gradients: np.ndarray  # [A+1, B+1, coordinate]


def evaluate_J(A: int, B: int, p: PhasePoint) -> float:
    J = J_jets(p)
    return float(J.val[label_position(A, p.k), label_position(B, p.k)])


def gradient_J(A: int, B: int, p: PhasePoint) -> np.ndarray:
    J = J_jets(p)
    return J.grad[label_position(A, p.k), label_position(B, p.k)].copy()


def J_observable(A: int, B: int, k: int) -> Observable:
    a, b = label_position(A, k), label_position(B, k)
    return Observable.from_jet(lambda p: J_jets(p)[a, b], name=f"J[{A},{B}]")


def moment_map(p: PhasePoint) -> np.ndarray:
    """Antisymmetric (2k+4) x (2k+4) matrix of J_AB values at ``p``."""
    return J_jets(p).val


def sample_leaf_point(k: int, mu: float, rng, momentum_scale: float = 1.0) -> PhasePoint:
    """Random chart point on the magnetic leaf of charge ``mu``."""
    rng = np.random.default_rng(rng)
    x = sample_chart_point(k, rng)
    pi = momentum_scale * rng.standard_normal(2 * k + 1)
    xi = sample_orbit_point(k, mu, rng).xi
    return PhasePoint(k, x, pi, xi)


def check_basic_relations(p: PhasePoint, tol: float = 1e-14) -> VerificationReport:
    """Brackets of coordinate functions against the defining table.

    The expected values are rebuilt from the monopole field and the algebra
    bracket, independently of the bivector assembly.
    """
    from micz.liealg import alg_bracket
    from micz.monopole import field_scalar, gauge_potential

    k, n = p.k, p.n
    D = algebra_dim(k)
    xs = [Observable.coordinate(k, "x", i) for i in range(n)]
    ps = [Observable.coordinate(k, "pi", i) for i in range(n)]
    ts = [Observable.coordinate(k, "T", a) for a in range(D)]
    Fs = field_scalar(p.x, p.xi, p.q_min)
    A = gauge_potential(p.x, k, p.q_min)
    basis = [AlgElement(k, e) for e in np.eye(D)]
    xi = p.xi.coeffs

    def table(fs, gs, expected):
        got = np.array([[poisson_bracket(f, g, p) for g in gs] for f in fs])
        want = np.array([[expected(a, b) for b in range(len(gs))] for a in range(len(fs))])
        scale = max(1.0, float(np.max(np.abs(want), initial=0.0)))
        return float(np.max(np.abs(got - want), initial=0.0)) / scale, got.size

    rows = [
        ("x_x", table(xs, xs, lambda i, j: 0.0)),
        ("x_pi", table(xs, ps, lambda i, j: float(i == j))),
        ("pi_pi", table(ps, ps, lambda i, j: -Fs[i, j])),
        ("T_T", table(ts, ts, lambda a, b: alg_bracket(basis[a], basis[b]).coeffs @ xi)),
        ("T_x", table(ts, xs, lambda a, j: 0.0)),
        ("T_pi", table(ts, ps, lambda a, j: alg_bracket(basis[a], A[j]).coeffs @ xi)),
    ]
    checks = [CheckResult(name, res, count, tol) for name, (res, count) in rows]
    return VerificationReport("basic_relations", k, 1, tol, checks)


def _require_cone(p: PhasePoint, negative_control: bool) -> None:
    if not negative_control and not cone_membership(p.xi):
        raise NotOnConeError(cone_residual(p.xi), 1e-8)


def _expected_cmtr(J: np.ndarray, e: np.ndarray) -> np.ndarray:
    """-eta_AA' J_BB' - eta_BB' J_AA' + eta_AB' J_BA' + eta_BA' J_AB', as [A, B, A', B']."""
    m = J.shape[0]
    d = np.eye(m) * e  # diagonal metric
    return (
        -np.einsum("ac,bd->abcd", d, J)
        - np.einsum("bd,ac->abcd", d, J)
        + np.einsum("ad,bc->abcd", d, J)
        + np.einsum("bc,ad->abcd", d, J)
    )


def _cmtr_residuals(p: PhasePoint):
    Jt = J_jets(p)
    P = bivector(p)
    lhs = bracket_tensor(Jt, Jt, p, P)
    J = Jt.val
    rhs = _expected_cmtr(J, eta(p.k))
    a = np.abs(J)
    scale = np.maximum(1.0, np.maximum(a[:, :, None, None], a[None, None, :, :]))
    for sub in ("bd,ac->abcd", "ac,bd->abcd", "bc,ad->abcd", "ad,bc->abcd"):
        scale = np.maximum(scale, np.einsum(sub, a, np.ones_like(a)))
    return np.abs(lhs - rhs) / scale


def check_bracket_relations(p: PhasePoint, tol: float = 1e-8, negative_control: bool = False) -> VerificationReport:
    """{J_AB, J_A'B'} against the so(2, 2k+2) relations over every index quadruple.

    Off the magnetic cone this raises ``NotOnConeError`` unless
    ``negative_control`` is set, in which case the check passes only if
    some relation is violated beyond ``tol``.
    """
    _require_cone(p, negative_control)
    res = _cmtr_residuals(p)
    m = res.shape[0]
    worst = float(np.max(res))
    count = m * (m - 1) // 2
    count = count * count
    name = "cmtr_off_cone" if negative_control else "cmtr"
    return VerificationReport("bracket_relations", p.k, 1, tol, [CheckResult(name, worst, count, tol, negative=negative_control)])


def check_quadratic_relations(p: PhasePoint, tol: float = 1e-8, negative_control: bool = False) -> VerificationReport:
    """eta^{AA'} J_AB J_A'C = eta_BC Q, the primary relation and its matrix form."""
    _require_cone(p, negative_control)
    Jt = J_jets(p)
    J = Jt.val
    e = eta(p.k)
    Q = casimir_Q(p.xi)
    lhs = np.einsum("a,ab,ac->bc", e, J, J)
    rhs = np.diag(e) * Q
    big = np.max(np.abs(J), axis=0)
    scale = np.maximum(1.0, np.maximum.outer(big, big))
    quad = float(np.max(np.abs(lhs - rhs) / scale))

    n = p.n
    zero = 1
    col = J[:, zero]
    primary = np.sum(col[2:2 + n] ** 2) + col[n + 2] ** 2 - col[0] ** 2
    prim_res = abs(primary + Q) / max(1.0, float(np.max(np.abs(col))))

    M = moment_map(p)
    mat = float(np.max(np.abs(M.T @ np.diag(e) @ M - Q * np.diag(e))) / max(1.0, float(np.max(np.abs(M)))))
    checks = [
        CheckResult("quadratic", quad, J.size, tol, negative=negative_control),
        CheckResult("primary", prim_res, 1, tol),
        CheckResult("matrix_form", mat, 1, tol, negative=negative_control),
    ]
    return VerificationReport("quadratic_relations", p.k, 1, tol, checks)


def _rel(lhs, rhs, *scales) -> float:
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    s = max([1.0] + [float(np.max(np.abs(np.asarray(v)), initial=0.0)) for v in scales])
    return float(np.max(np.abs(lhs - rhs), initial=0.0)) / s


def check_covariance_relations(p: PhasePoint, tol: float = 1e-8) -> VerificationReport:
    """Rotation covariance under J_ij and the dimension-operator relations.

    These hold for every xi, on the cone or not.
    """
    pj = phase_jets(p)
    Jt = J_jets(p, pj)
    P = bivector(p)
    n = p.n
    vec = slice(2, 2 + n)
    Lij = Jt[vec, vec]
    D = Jt[n + 2, 0]  # J_{2k+2, -1}
    x, pi, F = pj.x.val, pj.pi.val, pj.F.val
    d = np.eye(n)
    r = pj.r
    J = Jt.val
    checks = []

    def add(name, lhs, rhs, *scales):
        checks.append(CheckResult(name, _rel(lhs, rhs, *scales), int(np.size(lhs)), tol))

    add("Jij_x", bracket_tensor(Lij, pj.x, p, P),
        -np.einsum("i,jk->ijk", x, d) + np.einsum("j,ik->ijk", x, d), J)
    add("Jij_pi", bracket_tensor(Lij, pj.pi, p, P),
        -np.einsum("i,jk->ijk", pi, d) + np.einsum("j,ik->ijk", pi, d), J)
    rhs_F = (
        np.einsum("ia,jb->ijab", d, F)
        + np.einsum("jb,ia->ijab", d, F)
        - np.einsum("ib,ja->ijab", d, F)
        - np.einsum("ja,ib->ijab", d, F)
    )
    add("Jij_F", bracket_tensor(Lij, pj.F, p, P), rhs_F, J, F)
    Lv = Lij.val
    rhs_L = (
        np.einsum("ia,jb->ijab", d, Lv)
        + np.einsum("jb,ia->ijab", d, Lv)
        - np.einsum("ib,ja->ijab", d, Lv)
        - np.einsum("ja,ib->ijab", d, Lv)
    )
    add("Jij_Jij", bracket_tensor(Lij, Lij, p, P), rhs_L, J)
    add("Jij_r", bracket_tensor(Lij, r, p, P), 0.0, J)
    add("Jij_pi2", bracket_tensor(Lij, pj.pi2, p, P), 0.0, J)
    add("dim_x", bracket_tensor(D, pj.x, p, P), -x, J)
    add("dim_r", bracket_tensor(D, r, p, P), -r.val, J)
    add("dim_inv_r", bracket_tensor(D, 1.0 / r, p, P), 1.0 / r.val, J)
    add("dim_pi", bracket_tensor(D, pj.pi, p, P), pi, J)
    add("dim_r2F", bracket_tensor(D, (r * r) * pj.F, p, P), 0.0, J)
    return VerificationReport("covariance_relations", p.k, 1, tol, checks)


def auxiliary_observables(p: PhasePoint, pj: PhaseJets | None = None):
    """The auxiliary observables X, Y, W_i, Z_i as jets."""
    pj = phase_jets(p) if pj is None else pj
    x, pi, r, Q = pj.x, pj.pi, pj.r, pj.Q
    X = r * pj.pi2 + Q / r
    Y = r
    W = x
    Z = x * pj.pi2 - 2.0 * pi * pj.rdotpi + 2.0 * (r * r) * pj.Fpi - x * (Q / (r * r))
    return X, Y, W, Z


def check_auxiliary_identities(p: PhasePoint, tol: float = 1e-8) -> VerificationReport:
    """Identities among X, Y, W_i, Z_i and J_AB that together imply the bracket relations."""
    _require_cone(p, False)
    pj = phase_jets(p)
    Jt = J_jets(p, pj)
    P = bivector(p)
    X, Y, W, Z = auxiliary_observables(p, pj)
    n = p.n
    vec = slice(2, 2 + n)
    top, bot, zero = n + 2, 0, 1
    J = Jt.val
    e = eta(p.k)
    eta_ij = np.diag(e[vec])
    Ji0 = Jt[vec, zero]
    checks = []

    def br(f, g):
        return bracket_tensor(f, g, p, P)

    def add(name, lhs, rhs):
        checks.append(CheckResult(name, _rel(lhs, rhs, J, X.val), int(np.size(lhs)), tol))

    # brackets of the J_{i,0}, J_{2k+2,0}, J_{-1,0} and the definitions of W, Z
    add("Ji0_Jj0", br(Ji0, Ji0), -J[vec, vec])
    add("Ji0_Jtop0", br(Ji0, Jt[top, zero]), -J[vec, top])
    add("Ji0_Jbot0", br(Ji0, Jt[bot, zero]), -J[vec, bot])
    add("Jtop0_Jbot0", br(Jt[top, zero], Jt[bot, zero]), -J[top, bot])
    add("W_def", br(Y, Ji0), W.val)
    add("Z_def", br(X, Ji0), Z.val)
    add("W_Y", br(W, Y), 0.0)
    add("Z_X", br(Z, X), 0.0)
    add("W_X", br(W, X), 2.0 * J[vec, zero])
    add("Z_Y", br(Z, Y), 2.0 * J[vec, zero])
    add("Jbot_Jbot0", br(Jt[vec, bot], Jt[bot, zero]), J[vec, zero])
    add("Jbot_Jtop0", br(Jt[vec, bot], Jt[top, zero]), 0.0)
    add("Jtop_Jbot0", br(Jt[vec, top], Jt[bot, zero]), 0.0)
    add("Jtop_Jtop0", br(Jt[vec, top], Jt[top, zero]), -J[vec, zero])
    add("Z_Jj0", br(Z, Ji0), -eta_ij * X.val)
    add("W_Jj0", br(W, Ji0), -eta_ij * Y.val)
    add("Jbot_Jj0", br(Jt[vec, bot], Ji0), -eta_ij * J[bot, zero])
    add("Jtop_Jj0", br(Jt[vec, top], Ji0), -eta_ij * J[top, zero])
    add("Z_W", br(Z, W), -2.0 * (eta_ij * J[top, bot] + J[vec, vec]))
    add("Z_Z", br(Z, Z), 0.0)
    add("W_W", br(W, W), 0.0)
    add("Jbot_Jbot", br(Jt[vec, bot], Jt[vec, bot]), -J[vec, vec])
    add("Jtop_Jbot", br(Jt[vec, top], Jt[vec, bot]), -eta_ij * J[top, bot])
    add("Jtop_Jtop", br(Jt[vec, top], Jt[vec, top]), J[vec, vec])
    return VerificationReport("auxiliary_identities", p.k, 1, tol, checks)


def coordinate_jets(p: PhasePoint) -> Jet:
    """All coordinate functions stacked as one jet (identity gradient)."""
    return Jet(p.coords, np.eye(p.dim))

