"""so(2k): pair basis, Lie-Poisson brackets, invariant metric, SO(2k) action.

Elements of so(2k), and of its dual, are stored as coefficient vectors over
the basis ``i gamma_ab`` (a < b), ordered lexicographically.  For a dual
element the coefficient at (a, b) is the value of the linear function
``gamma_ab`` at that point, so the same storage serves both readings.

Dense helpers work with the antisymmetric ``2k x 2k`` array ``S`` whose
entry ``S[a, b]`` is the (a, b) coefficient; the defining representation of
the algebra element is ``-S`` because ``i gamma_ab`` carries ``-1`` in slot
(a, b).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "AlgElement",
    "GroupElement",
    "StructureConstants",
    "alg_bracket",
    "algebra_dim",
    "basis_index",
    "basis_pairs",
    "coadjoint_act",
    "defining_matrix",
    "invariant_metric",
    "pair_tensor",
    "random_rotation",
    "structure_constants",
]

ORTHOGONALITY_TOL = 1e-12


def algebra_dim(k: int) -> int:
    """Dimension k(2k-1) of so(2k)."""
    _check_rank(k)
    return k * (2 * k - 1)


def _check_rank(k) -> None:
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < 1:
        raise ValueError(f"rank k must be an integer >= 1, got {k!r}")


@lru_cache(maxsize=None)
def basis_pairs(k: int) -> tuple[tuple[int, int], ...]:
    """Zero-based pairs (a, b), a < b, in basis order."""
    _check_rank(k)
    m = 2 * k
    return tuple((a, b) for a in range(m) for b in range(a + 1, m))


def basis_index(a: int, b: int, k: int) -> int:
    """One-based position of the pair (a, b) in the lexicographic basis.

    ``a`` and ``b`` are one-based with ``1 <= a < b <= 2k``.

    >>> basis_index(3, 4, 2)
    6
    """
    _check_rank(k)
    m = 2 * k
    if not (1 <= a < b <= m):
        raise ValueError(f"need 1 <= a < b <= {m}, got a={a}, b={b}")
    # pairs with first entry a' < a come first: sum_{a'=1}^{a-1} (m - a')
    before = (a - 1) * m - (a - 1) * a // 2
    return before + (b - a)


@lru_cache(maxsize=None)
def pair_tensor(k: int) -> np.ndarray:
    """Array ``G[a, b, alpha]``: coefficient of ``gamma_alpha`` in ``gamma_ab``.

    Antisymmetric in (a, b); ``G[a, a] = 0``.  Read-only.
    """
    m = 2 * k
    pairs = basis_pairs(k)
    G = np.zeros((m, m, len(pairs)))
    for alpha, (a, b) in enumerate(pairs):
        G[a, b, alpha] = 1.0
        G[b, a, alpha] = -1.0
    G.flags.writeable = False
    return G


@dataclass(frozen=True, eq=False)
class AlgElement:
    """Coefficient vector over the ordered basis ``{i gamma_ab : a < b}``."""

    k: int
    coeffs: np.ndarray = field(repr=True)

    def __post_init__(self):
        _check_rank(self.k)
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.shape[0] != algebra_dim(self.k):
            raise ValueError(
                f"so({2 * self.k}) needs {algebra_dim(self.k)} coefficients, got {c.shape[0]}"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, k: int) -> AlgElement:
        return cls(k, np.zeros(algebra_dim(k)))

    @classmethod
    def basis(cls, k: int, a: int, b: int) -> AlgElement:
        """Unit element ``i gamma_ab`` (one-based a < b)."""
        c = np.zeros(algebra_dim(k))
        c[basis_index(a, b, k) - 1] = 1.0
        return cls(k, c)

    @classmethod
    def from_skew(cls, S: np.ndarray) -> AlgElement:
        S = np.asarray(S, dtype=float)
        m = S.shape[0]
        if S.shape != (m, m) or m % 2:
            raise ValueError("expected an even-sized square array")
        k = m // 2
        iu = np.triu_indices(m, 1)
        return cls(k, S[iu])

    def skew(self) -> np.ndarray:
        """Antisymmetric array of the values ``gamma_ab``."""
        return pair_tensor(self.k) @ self.coeffs

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def _same_rank(self, other: AlgElement) -> None:
        if other.k != self.k:
            raise ValueError(f"rank mismatch: k={self.k} vs k={other.k}")

    def __add__(self, other: AlgElement) -> AlgElement:
        self._same_rank(other)
        return AlgElement(self.k, self.coeffs + other.coeffs)

    def __sub__(self, other: AlgElement) -> AlgElement:
        self._same_rank(other)
        return AlgElement(self.k, self.coeffs - other.coeffs)

    def __neg__(self) -> AlgElement:
        return AlgElement(self.k, -self.coeffs)

    def __mul__(self, s: float) -> AlgElement:
        return AlgElement(self.k, float(s) * self.coeffs)

    __rmul__ = __mul__

    def __len__(self) -> int:
        return self.coeffs.shape[0]


def defining_matrix(X: AlgElement) -> np.ndarray:
    """Real skew matrix representing ``sum_ab X_ab i gamma_ab`` in so(2k)."""
    return -X.skew()


@dataclass(frozen=True, eq=False)
class StructureConstants:
    """``C[alpha, beta, gamma]`` holds C^gamma_{alpha beta}.

    Normalised so that ``{T_alpha, T_beta} = -C^gamma_{alpha beta} T_gamma``.
    """

    k: int
    C: np.ndarray

    def jacobi_residual(self) -> float:
        C = self.C
        # sum_d C^d_{ab} C^e_{dc} + cyclic(a, b, c)
        t = np.einsum("abd,dce->abce", C, C)
        cyc = t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))
        return float(np.max(np.abs(cyc), initial=0.0))


@lru_cache(maxsize=None)
def _structure_tensor(k: int) -> np.ndarray:
    G = pair_tensor(k)
    pairs = basis_pairs(k)
    D = len(pairs)
    C = np.zeros((D, D, D))
    for al, (a, b) in enumerate(pairs):
        for be, (c, d) in enumerate(pairs):
            # {gamma_ab, gamma_cd} = -d_ac g_bd + d_bc g_ad - d_bd g_ac + d_ad g_bc
            v = np.zeros(D)
            if a == c:
                v -= G[b, d]
            if b == c:
                v += G[a, d]
            if b == d:
                v -= G[a, c]
            if a == d:
                v += G[b, c]
            C[al, be] = -v
    C.flags.writeable = False
    return C


def structure_constants(k: int) -> StructureConstants:
    _check_rank(k)
    return StructureConstants(k, _structure_tensor(k))


def alg_bracket(X: AlgElement, Y: AlgElement) -> AlgElement:
    """Poisson bracket of the linear functions X and Y on so*(2k)."""
    X._same_rank(Y)
    C = _structure_tensor(X.k)
    return AlgElement(X.k, -np.einsum("abg,a,b->g", C, X.coeffs, Y.coeffs))


def invariant_metric(X: AlgElement, Y: AlgElement) -> float:
    """Invariant inner product; the pair basis is orthonormal for it."""
    X._same_rank(Y)
    return float(X.coeffs @ Y.coeffs)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A matrix in SO(2k)."""

    k: int
    matrix: np.ndarray

    def __post_init__(self):
        _check_rank(self.k)
        M = np.array(self.matrix, dtype=float)
        m = 2 * self.k
        if M.shape != (m, m):
            raise ValueError(f"expected a {m}x{m} matrix, got shape {M.shape}")
        err = np.linalg.norm(M.T @ M - np.eye(m))
        if err > ORTHOGONALITY_TOL:
            raise ValueError(f"matrix is not orthogonal (|M^T M - I| = {err:.3e})")
        if np.linalg.det(M) < 0:
            raise ValueError("matrix has determinant -1")
        M.flags.writeable = False
        object.__setattr__(self, "matrix", M)

    @classmethod
    def identity(cls, k: int) -> GroupElement:
        return cls(k, np.eye(2 * k))


def coadjoint_act(g: GroupElement, xi: AlgElement) -> AlgElement:
    """Coadjoint action ``(g.gamma)_ab = g_aa' g_bb' gamma_a'b'``."""
    if g.k != xi.k:
        raise ValueError(f"rank mismatch: k={g.k} vs k={xi.k}")
    M = g.matrix
    return AlgElement.from_skew(M @ xi.skew() @ M.T)


def random_rotation(k: int, seed) -> GroupElement:
    """Haar-distributed element of SO(2k) from a seeded Gaussian matrix.

    ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    _check_rank(k)
    rng = np.random.default_rng(seed)
    m = 2 * k
    q, r = np.linalg.qr(rng.standard_normal((m, m)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return GroupElement(k, q)
