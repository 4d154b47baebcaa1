import numpy as np
import pytest
from hypothesis import given, strategies as st

from micz.cone import casimir_Q, charge, sigma_plus
from micz.dynamics import (
    IntegratorConfig,
    Trajectory,
    angular_momentum,
    angular_momentum_squared,
    bound_orbit_initial,
    conic_fit,
    energy_identity,
    eom_rhs,
    hamiltonian,
    hamiltonian_observable,
    integrate,
    kepler_period,
    lenz_vector,
    lenz_vector_universal,
    universal_hamiltonian,
)
from micz.liealg import AlgElement
from micz.poisson import Observable, PhasePoint, poisson_bracket, sample_leaf_point

ranks = st.integers(min_value=1, max_value=3)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def basis(k):
    return np.eye(2 * k + 1)


def circular(k):
    e = basis(k)
    return PhasePoint(k, e[0], e[1], AlgElement.zeros(k))


def leaf_point(k, seed, mu=0.8):
    return sample_leaf_point(k, mu, np.random.default_rng(seed))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_hamiltonian_examples(k):
    assert hamiltonian(circular(k)) == -0.5
    e = basis(k)
    p = PhasePoint(k, e[-1], np.zeros(2 * k + 1), sigma_plus(k))
    assert hamiltonian(p) == pytest.approx(-0.5)


@given(ranks, seeds)
def test_hamiltonian_matches_universal_form(k, seed):
    p = leaf_point(k, seed)
    assert universal_hamiltonian(p) == pytest.approx(hamiltonian(p), rel=1e-13, abs=1e-14)


def test_angular_momentum_examples():
    p = leaf_point(2, 0, mu=0.0)
    assert np.allclose(angular_momentum(p), np.outer(p.x, p.pi) - np.outer(p.pi, p.x))
    e = basis(1)
    p = PhasePoint(1, e[-1], np.zeros(3), sigma_plus(1))
    assert angular_momentum(p)[0, 1] == pytest.approx(-1.0)


@given(ranks, seeds)
def test_angular_momentum_square_identity(k, seed):
    p = leaf_point(k, seed, mu=1.3)
    L = angular_momentum(p)
    assert np.allclose(L, -L.T)
    wedge = np.outer(p.x, p.pi) - np.outer(p.pi, p.x)
    lhs = angular_momentum_squared(L) - k * casimir_Q(p.xi)
    assert lhs == pytest.approx(angular_momentum_squared(wedge), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("k", [1, 2])
def test_lenz_examples(k):
    assert np.allclose(lenz_vector(circular(k)), 0.0)
    e = basis(k)
    rest = PhasePoint(k, e[0], np.zeros(2 * k + 1), AlgElement.zeros(k))
    assert np.allclose(lenz_vector(rest), e[0])
    assert np.allclose(lenz_vector_universal(rest), e[0])


@given(ranks, seeds)
def test_lenz_forms_agree(k, seed):
    p = leaf_point(k, seed)
    assert np.max(np.abs(lenz_vector(p) - lenz_vector_universal(p))) <= 1e-10


@given(ranks, seeds)
def test_energy_identity_pointwise(k, seed):
    p = leaf_point(k, seed, mu=0.6)
    A = lenz_vector(p)
    gap = angular_momentum_squared(angular_momentum(p)) - k * casimir_Q(p.xi)
    assert hamiltonian(p) == pytest.approx(-(1 - A @ A) / (2 * gap), rel=1e-9, abs=1e-10)


@pytest.mark.parametrize("k", [1, 2])
def test_free_kepler_force(k):
    p = leaf_point(k, 3, mu=0.0)
    dx, dpi, dxi = eom_rhs(p)
    assert np.array_equal(dx, p.pi)
    assert np.allclose(dpi, -p.x / p.r**3, atol=1e-15)
    assert np.array_equal(dxi.coeffs, np.zeros_like(dxi.coeffs))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_eom_matches_bracket_engine(k):
    H = hamiltonian_observable()
    for seed in range(3):
        p = leaf_point(k, seed)
        z = np.concatenate([c.coeffs if isinstance(c, AlgElement) else c for c in eom_rhs(p)])
        br = np.array([poisson_bracket(e, H, p) for e in np.eye(p.dim)])
        assert np.max(np.abs(z - br)) <= 1e-9 * max(1.0, np.max(np.abs(z)))
        fd = np.array([poisson_bracket(e, Observable(hamiltonian), p) for e in np.eye(p.dim)])
        assert np.allclose(fd, z, atol=1e-7)


@given(ranks, seeds)
def test_magnetic_force_is_orthogonal(k, seed):
    p = leaf_point(k, seed, mu=1.1)
    force = p.pi @ p.field()
    assert abs(force @ p.pi) <= 1e-12 * (1 + np.linalg.norm(force) * np.linalg.norm(p.pi))
    assert abs(force @ p.x) <= 1e-12 * (1 + np.linalg.norm(force) * p.r)


@given(seeds, st.floats(min_value=-2.0, max_value=2.0))
def test_k1_force_is_classical_micz(seed, mu):
    rng = np.random.default_rng(seed)
    p = sample_leaf_point(1, mu, rng)
    _, dpi, _ = eom_rhs(p)
    r = p.r
    expected = -p.x / r**3 + mu**2 * p.x / r**4 + charge(p.xi) * np.cross(p.pi, p.x) / r**3
    assert np.allclose(dpi, expected, atol=1e-12)


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(t_end=1.0, sample_interval=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(t_end=-1.0, sample_interval=0.1)
    with pytest.raises(ValueError):
        IntegratorConfig(t_end=1.0, sample_interval=0.1, rel_tol=0.0)


def test_kepler_period():
    assert kepler_period(-0.5) == pytest.approx(2 * np.pi)
    with pytest.raises(ValueError):
        kepler_period(0.1)


@pytest.mark.parametrize("k", [1, 2])
def test_circular_orbit_closes(k):
    traj = integrate(circular(k), IntegratorConfig(t_end=2 * np.pi, sample_interval=np.pi / 16))
    assert traj.ok
    assert traj.t[-1] == pytest.approx(2 * np.pi)
    assert np.max(np.abs(traj.x[-1] - traj.x[0])) <= 1e-6
    assert traj.diagnostics.drifts()["H"] < 1e-8
    assert np.nanmax(np.abs(energy_identity(traj))) <= 1e-8


def test_trajectory_access():
    traj = integrate(circular(1), IntegratorConfig(t_end=1.0, sample_interval=0.25))
    assert len(traj) == 5
    state = traj[2]
    assert state.t == pytest.approx(0.5)
    assert isinstance(state.p, PhasePoint)
    assert traj.x.shape == (5, 3) and traj.pi.shape == (5, 3) and traj.xi.shape == (5, 1)


@pytest.mark.parametrize("k,mu", [(1, 0.5), (2, 0.9)])
def test_leaf_orbit_stays_on_orbit(k, mu):
    p0 = bound_orbit_initial(k, mu, seed=4)
    assert hamiltonian(p0) < 0
    T = kepler_period(hamiltonian(p0))
    traj = integrate(p0, IntegratorConfig(t_end=3 * T, sample_interval=T / 20))
    assert traj.ok, traj.message
    d = traj.diagnostics
    assert np.allclose(d.Q, mu**2 / k, rtol=1e-8)
    assert np.max(d.cone_residual) < 1e-8
    assert d.max_drift() <= 1e-6
    assert np.max(np.abs(d.L2_residual)) <= 1e-8


def test_time_reversal():
    p0 = bound_orbit_initial(2, 0.7, seed=2)
    cfg = IntegratorConfig(t_end=4.0, sample_interval=1.0)
    fwd = integrate(p0, cfg)
    back = integrate(fwd[len(fwd) - 1].p, cfg, backward=True)
    assert back.t[-1] == pytest.approx(-4.0)
    size = np.max(np.abs(p0.coords))
    assert np.max(np.abs(back.states[-1] - p0.coords)) <= 10 * cfg.rel_tol * max(1.0, size)


def test_radial_collision_halts():
    e = basis(1)
    p = PhasePoint(1, e[0], -0.1 * e[0], AlgElement.zeros(1))
    traj = integrate(p, IntegratorConfig(t_end=10.0, sample_interval=0.1))
    assert traj.status == "collision"
    assert traj.t_stop < 10.0
    assert "r fell below" in traj.message


def test_chart_exit_halts():
    p = PhasePoint(1, np.array([0.5, 0.0, 0.5]), np.array([0.0, 0.0, -1.2]), AlgElement.zeros(1))
    traj = integrate(p, IntegratorConfig(t_end=30.0, sample_interval=1.0))
    assert traj.status == "chart_exit"
    assert not traj.ok


def test_degenerate_energy_identity_is_skipped():
    e = basis(1)
    p = PhasePoint(1, e[0], -0.1 * e[0], AlgElement.zeros(1))
    traj = integrate(p, IntegratorConfig(t_end=0.5, sample_interval=0.1))
    assert np.all(np.isnan(energy_identity(traj)))


def test_conic_fit_kepler_ellipse():
    e = basis(2)
    p = PhasePoint(2, e[0], 0.8 * e[1] + 0.3 * e[0], AlgElement.zeros(2))
    T = kepler_period(hamiltonian(p))
    traj = integrate(p, IntegratorConfig(t_end=T, sample_interval=T / 40))
    fit = conic_fit(traj)
    assert fit.kind == "ellipse" and fit.shape == "ellipse"
    assert fit.conic_residual < 1e-8
    assert fit.plane_residual < 1e-12
    assert fit.eccentricity == pytest.approx(np.linalg.norm(lenz_vector(p)), rel=1e-6)


def test_conic_fit_hyperbola():
    e = basis(1)
    p = PhasePoint(1, e[0], 1.6 * e[1], AlgElement.zeros(1))
    assert hamiltonian(p) > 0
    traj = integrate(p, IntegratorConfig(t_end=3.0, sample_interval=0.1))
    fit = conic_fit(traj)
    assert fit.kind == "hyperbola" and fit.shape == "hyperbola"
    assert fit.eccentricity == pytest.approx(np.linalg.norm(lenz_vector(p)), rel=1e-6)


def test_conic_fit_needs_samples():
    traj = Trajectory(1, np.zeros(3), np.tile(circular(1).coords, (3, 1)))
    with pytest.raises(ValueError):
        conic_fit(traj)
