"""The magnetic cone in so*(2k) and its orbits.

The cone is the union of the positive and negative cones (orbits of the
scaled points sigma_+* and sigma_-* under SO(2k) x R_+) and the origin.  It
is cut out by the quadratic equations ``S^T S = Q 1`` on the antisymmetric
array ``S[a, b] = gamma_ab(xi)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from micz.liealg import AlgElement, basis_index, coadjoint_act, random_rotation

__all__ = [
    "ConePoint",
    "NotOnConeError",
    "casimir_Q",
    "charge",
    "cone_membership",
    "cone_residual",
    "pfaffian",
    "sample_off_cone_point",
    "sample_orbit_point",
    "sigma_minus",
    "sigma_plus",
]

DEFAULT_CONE_TOL = 1e-8


class NotOnConeError(ValueError):
    """Raised when a cone-only quantity is requested off the magnetic cone."""

    def __init__(self, residual: float, tol: float):
        super().__init__(f"point is not on the magnetic cone (residual {residual:.3e} > tol {tol:.1e})")
        self.residual = residual
        self.tol = tol


@dataclass(frozen=True, eq=False)
class ConePoint:
    xi: AlgElement
    mu: float


def _cartan(k: int, diag) -> AlgElement:
    c = np.zeros(k * (2 * k - 1))
    for a in range(k):
        c[basis_index(2 * a + 1, 2 * a + 2, k) - 1] = diag[a]
    return AlgElement(k, c)


def sigma_plus(k: int) -> AlgElement:
    return _cartan(k, np.ones(k))


def sigma_minus(k: int) -> AlgElement:
    d = np.ones(k)
    d[-1] = -1.0
    return _cartan(k, d)


def casimir_Q(xi: AlgElement) -> float:
    """Q = (1/2k) sum_{a,b} gamma_ab^2 = |xi|^2 / k."""
    return float(xi.coeffs @ xi.coeffs) / xi.k


def cone_residual(xi: AlgElement) -> float:
    """max_{b,c} |sum_a gamma_ab gamma_ac - delta_bc Q|, relative to max(1, |xi|^2)."""
    S = xi.skew()
    Q = casimir_Q(xi)
    res = np.max(np.abs(S.T @ S - Q * np.eye(S.shape[0])))
    return float(res / max(1.0, float(xi.coeffs @ xi.coeffs)))


def cone_membership(xi: AlgElement, tol: float = DEFAULT_CONE_TOL) -> bool:
    if not tol > 0:
        raise ValueError("tol must be positive")
    return cone_residual(xi) <= tol


def pfaffian(A: np.ndarray) -> float:
    """Pfaffian of a real antisymmetric matrix by skew LTL^T elimination."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("expected a square matrix")
    if n % 2:
        return 0.0
    pf = 1.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if kp != k + 1:
            A[[k + 1, kp], k:] = A[[kp, k + 1], k:]
            A[k:, [k + 1, kp]] = A[k:, [kp, k + 1]]
            pf = -pf
        if A[k + 1, k] == 0.0:
            return 0.0
        pf *= A[k, k + 1]
        if k + 2 < n:
            tau = A[k, k + 2:] / A[k, k + 1]
            col = A[k + 2:, k + 1].copy()
            A[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return float(pf)


def charge(xi: AlgElement, tol: float = DEFAULT_CONE_TOL) -> float:
    """Signed magnetic charge: |xi| with the sign of the cone component.

    The sign is read from the Pfaffian of ``S``, which is +1 at sigma_+*,
    -1 at sigma_-* and invariant under SO(2k).  For k = 1 every point of
    so*(2) is on the cone and the charge is ``gamma_12(xi)``.
    """
    res = cone_residual(xi)
    if res > tol:
        raise NotOnConeError(res, tol)
    if xi.k == 1:
        return float(xi.coeffs[0])
    nrm = xi.norm()
    if nrm == 0.0:
        return 0.0
    return float(np.sign(pfaffian(xi.skew()))) * nrm


def sample_orbit_point(k: int, mu: float, seed) -> ConePoint:
    """Point of the magnetic orbit with charge ``mu``: g . (|mu|/sqrt(k)) sigma_sign(mu)*."""
    mu = float(mu)
    base = sigma_plus(k) if mu >= 0 else sigma_minus(k)
    base = (abs(mu) / np.sqrt(k)) * base
    if mu == 0.0:
        return ConePoint(base, 0.0)
    g = random_rotation(k, seed)
    return ConePoint(coadjoint_act(g, base), mu)


def sample_off_cone_point(k: int, seed, spread: float = 0.5) -> AlgElement:
    """Random element in a generic orbit whose Cartan moduli differ by at least ``spread``.

    Only meaningful for k >= 2 (for k = 1 the cone is the whole dual).
    """
    if k < 2:
        raise ValueError("every point of so*(2) lies on the magnetic cone")
    rng = np.random.default_rng(seed)
    mags = 1.0 + np.cumsum(rng.uniform(spread, 1.0 + spread, size=k)) - spread
    signs = rng.choice([-1.0, 1.0], size=k)
    g = random_rotation(k, rng)
    return coadjoint_act(g, _cartan(k, rng.permutation(mags * signs)))
