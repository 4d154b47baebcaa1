import numpy as np
import pytest
from hypothesis import given, strategies as st

from micz.liealg import (
    AlgElement,
    GroupElement,
    alg_bracket,
    algebra_dim,
    basis_index,
    basis_pairs,
    coadjoint_act,
    defining_matrix,
    invariant_metric,
    random_rotation,
    structure_constants,
)

ranks = st.integers(min_value=1, max_value=4)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_element(k, rng):
    return AlgElement(k, rng.standard_normal(algebra_dim(k)))


@pytest.mark.parametrize("k,dim", [(1, 1), (2, 6), (3, 15), (4, 28)])
def test_algebra_dim(k, dim):
    assert algebra_dim(k) == dim


def test_basis_index_examples():
    assert basis_index(1, 2, 1) == 1
    assert basis_index(3, 4, 2) == 6
    assert basis_index(1, 2, 3) == 1
    assert basis_index(5, 6, 3) == 15


@pytest.mark.parametrize("a,b,k", [(2, 1, 2), (1, 1, 2), (0, 1, 2), (1, 5, 2)])
def test_basis_index_rejects_bad_pairs(a, b, k):
    with pytest.raises(ValueError):
        basis_index(a, b, k)


@given(ranks)
def test_basis_index_is_a_bijection(k):
    idx = [basis_index(a + 1, b + 1, k) for a, b in basis_pairs(k)]
    assert idx == list(range(1, algebra_dim(k) + 1))


@pytest.mark.parametrize("k", [0, -1, 1.5])
def test_rank_validation(k):
    with pytest.raises(ValueError):
        algebra_dim(k)


def test_element_validation():
    with pytest.raises(ValueError):
        AlgElement(2, np.zeros(5))
    with pytest.raises(ValueError):
        AlgElement(1, [np.nan])
    X = AlgElement(2, np.arange(6.0))
    with pytest.raises(ValueError):
        X.coeffs[0] = 1.0


@given(ranks, seeds)
def test_skew_round_trip(k, seed):
    X = random_element(k, np.random.default_rng(seed))
    S = X.skew()
    assert np.allclose(S, -S.T)
    assert np.array_equal(AlgElement.from_skew(S).coeffs, X.coeffs)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_structure_constants_antisymmetric_and_jacobi(k):
    sc = structure_constants(k)
    assert np.array_equal(sc.C, -np.swapaxes(sc.C, 0, 1))
    assert sc.jacobi_residual() <= 1e-14


def test_bracket_of_overlapping_pairs():
    g12 = AlgElement.basis(2, 1, 2)
    g23 = AlgElement.basis(2, 2, 3)
    assert np.array_equal(alg_bracket(g12, g23).coeffs, AlgElement.basis(2, 1, 3).coeffs)
    g34 = AlgElement.basis(2, 3, 4)
    assert np.array_equal(alg_bracket(g12, g34).coeffs, np.zeros(6))


@given(ranks, seeds)
def test_bracket_is_minus_matrix_commutator(k, seed):
    # independent oracle: commutator of the defining representation
    rng = np.random.default_rng(seed)
    X, Y = random_element(k, rng), random_element(k, rng)
    a, b = defining_matrix(X), defining_matrix(Y)
    assert np.allclose(defining_matrix(alg_bracket(X, Y)), -(a @ b - b @ a), atol=1e-12)


@given(ranks, seeds)
def test_metric_is_trace_form(k, seed):
    rng = np.random.default_rng(seed)
    X, Y = random_element(k, rng), random_element(k, rng)
    a, b = defining_matrix(X), defining_matrix(Y)
    assert invariant_metric(X, Y) == pytest.approx(-0.5 * np.trace(a @ b), abs=1e-12)
    assert invariant_metric(X, Y) == pytest.approx(invariant_metric(Y, X))
    assert invariant_metric(X, X) > 0


@given(ranks, seeds)
def test_metric_invariance(k, seed):
    rng = np.random.default_rng(seed)
    X, Y, Z = (random_element(k, rng) for _ in range(3))
    lhs = invariant_metric(alg_bracket(Z, X), Y) + invariant_metric(X, alg_bracket(Z, Y))
    assert abs(lhs) <= 1e-12 * (1 + X.norm() * Y.norm() * Z.norm())
    g = random_rotation(k, rng)
    assert invariant_metric(coadjoint_act(g, X), coadjoint_act(g, Y)) == pytest.approx(invariant_metric(X, Y), abs=1e-12)


@given(ranks, seeds)
def test_coadjoint_action_is_a_homomorphism(k, seed):
    rng = np.random.default_rng(seed)
    X, Y = random_element(k, rng), random_element(k, rng)
    g, h = random_rotation(k, rng), random_rotation(k, rng)
    gh = GroupElement(k, g.matrix @ h.matrix)
    lhs = coadjoint_act(g, coadjoint_act(h, X)).coeffs
    assert np.allclose(lhs, coadjoint_act(gh, X).coeffs, atol=1e-12)
    assert np.allclose(coadjoint_act(GroupElement.identity(k), X).coeffs, X.coeffs)
    # equivariance of the bracket
    lhs = coadjoint_act(g, alg_bracket(X, Y)).coeffs
    rhs = alg_bracket(coadjoint_act(g, X), coadjoint_act(g, Y)).coeffs
    assert np.allclose(lhs, rhs, atol=1e-11)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_random_rotation(k):
    g = random_rotation(k, 5)
    m = 2 * k
    assert np.allclose(g.matrix.T @ g.matrix, np.eye(m), atol=1e-13)
    assert np.linalg.det(g.matrix) == pytest.approx(1.0)
    assert np.array_equal(g.matrix, random_rotation(k, 5).matrix)


def test_group_element_validation():
    with pytest.raises(ValueError):
        GroupElement(1, 2 * np.eye(2))
    with pytest.raises(ValueError):
        GroupElement(1, np.diag([1.0, -1.0]))
    with pytest.raises(ValueError):
        GroupElement(2, np.eye(3))


def test_rank_mismatch():
    with pytest.raises(ValueError):
        alg_bracket(AlgElement.zeros(1), AlgElement.zeros(2))
    with pytest.raises(ValueError):
        coadjoint_act(GroupElement.identity(1), AlgElement.zeros(2))
