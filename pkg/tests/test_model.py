import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qbattery import model
from qbattery.errors import InvalidStateError, RegimeError
from qbattery.model import BlochState, JointState, QubitState, SystemParams

from conftest import random_density

N_OP = np.diag([0.0, 1.0, 1.0, 2.0])


def test_bloch_state_validation_and_phi_wrap():
    assert BlochState(1.0, 2 * math.pi + 0.5).phi == pytest.approx(0.5)
    assert BlochState(1.0, -0.5).phi == pytest.approx(2 * math.pi - 0.5)
    with pytest.raises(ValueError):
        BlochState(-0.1)
    with pytest.raises(ValueError):
        BlochState(math.pi + 1e-9)


def test_system_params_validation():
    for bad in ({"omega_b": 0.0}, {"J": -1.0}, {"gamma": -0.1}):
        with pytest.raises(ValueError):
            SystemParams(**bad)


def test_strong_coupling_flag_and_G():
    p = SystemParams(1.0, 1.0, 0.4)
    assert p.strong_coupling
    assert p.G == pytest.approx(math.sqrt(0.99), abs=1e-15)
    assert SystemParams(1.0, 1.0, 0.0).G == 1.0
    weak = SystemParams(1.0, 1.0, 4.0)
    assert not weak.strong_coupling
    with pytest.raises(RegimeError):
        weak.G


def test_initial_state_north_pole():
    rho = model.initial_joint_state(BlochState(0.0)).rho
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    np.testing.assert_allclose(rho, expected, atol=1e-15)


def test_initial_state_south_pole():
    rho = model.initial_joint_state(BlochState(math.pi)).rho
    assert rho[1, 1] == pytest.approx(1.0)
    assert np.sum(np.abs(rho)) == pytest.approx(1.0, abs=1e-15)


def test_initial_state_equator():
    rho = model.initial_joint_state(BlochState(math.pi / 2)).rho
    for i, j in [(0, 0), (1, 1), (0, 1), (1, 0)]:
        assert rho[i, j] == pytest.approx(0.5, abs=1e-15)
    mask = np.ones((4, 4), bool)
    mask[:2, :2] = False
    assert np.all(rho[mask] == 0)


@given(st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_initial_state_pure_and_confined(theta, phi):
    j = model.initial_joint_state(BlochState(theta, phi))
    assert abs(j.purity() - 1.0) <= 1e-12
    assert np.all(j.rho[3, :] == 0) and np.all(j.rho[:, 3] == 0)


def test_hamiltonian_entries():
    h0 = model.hamiltonian(SystemParams(1.3, 1.0), J=0.0)
    np.testing.assert_array_equal(h0, np.diag([0.0, 1.3, 1.3, 2.6]))
    h = model.hamiltonian(SystemParams(1.0, 0.05))
    assert h[1, 2] == h[2, 1] == 0.05
    np.testing.assert_array_equal(h, h.conj().T)


def test_hamiltonian_conserves_excitations_exactly():
    h = model.hamiltonian(SystemParams(1.7, 0.3))
    assert np.array_equal(N_OP @ h - h @ N_OP, np.zeros((4, 4)))
    np.testing.assert_array_equal(model.NUMBER.real, N_OP)


def test_lowering_operators_follow_basis_order():
    # sigma_a maps |10> (index 1) to |00>, sigma_b maps |01> (index 2) to |00>
    assert model.SIGMA_A[0, 1] == 1 and model.SIGMA_A[2, 3] == 1
    assert model.SIGMA_B[0, 2] == 1 and model.SIGMA_B[1, 3] == 1


def test_liouvillian_matches_direct_commutator(rng):
    p = SystemParams(1.2, 0.7, 0.3)
    rho = random_density(rng)
    h, s = model.hamiltonian(p), model.SIGMA_A
    ss = s.conj().T @ s
    direct = -1j * (h @ rho - rho @ h) + 0.5 * p.gamma * (2 * s @ rho @ s.conj().T - ss @ rho - rho @ ss)
    got = model.unvec(model.liouvillian(p) @ model.vec(rho))
    np.testing.assert_allclose(got, direct, atol=1e-14)


def test_liouvillian_trace_preserving(rng):
    p = SystemParams(1.0, 1.0, 0.4)
    trace_functional = model.vec(np.eye(4)).conj()
    assert np.max(np.abs(trace_functional @ model.liouvillian(p))) <= 1e-12
    for _ in range(20):
        d_rho = model.unvec(model.liouvillian(p) @ model.vec(random_density(rng)))
        assert abs(np.trace(d_rho)) <= 1e-12


def test_liouvillian_lossless_spectrum_imaginary():
    ev = np.linalg.eigvals(model.liouvillian(SystemParams(1.0, 0.6, 0.0)))
    assert np.max(np.abs(ev.real)) <= 1e-12


def test_ground_state_is_stationary():
    rho = np.zeros((4, 4), complex)
    rho[0, 0] = 1
    out = model.liouvillian(SystemParams(1.0, 1.0, 0.5)) @ model.vec(rho)
    assert np.max(np.abs(out)) == 0.0


def test_moment_generator_second_entries():
    m = model.moment_generator_second(SystemParams(1.0, 0.8, 0.0))
    expected = 0.8 * np.array([[0, 0, 1, -1], [0, 0, -1, 1], [1, -1, 0, 0], [-1, 1, 0, 0]])
    np.testing.assert_array_equal(m, expected)
    md = model.moment_generator_second(SystemParams(1.0, 1.0, 0.2))
    assert md[0, 0] == pytest.approx(-0.2j)
    assert md[2, 2] == md[3, 3] == pytest.approx(-0.1j)


def test_moment_generator_first_entries():
    m = model.moment_generator_first(SystemParams(1.5, 1.0, 0.0))
    assert m[0, 2] == -2.0
    np.testing.assert_array_equal(np.diag(m), [1.5] * 4)
    md = model.moment_generator_first(SystemParams(1.0, 1.0, 0.2))
    assert md[2, 2] == pytest.approx(1.0 - 0.2j)
    assert md[0, 0] == pytest.approx(1.0 - 0.1j)


def test_qubit_state_invariants():
    QubitState(0.5, 0.5j)
    QubitState(1.0 + 5e-11, 0.0)
    with pytest.raises(InvalidStateError):
        QubitState(0.5, 0.6)
    with pytest.raises(InvalidStateError):
        QubitState(1.1, 0.0)


def test_joint_state_invariants(rng):
    JointState(random_density(rng))
    with pytest.raises(InvalidStateError, match="trace"):
        JointState(2 * random_density(rng))
    with pytest.raises(InvalidStateError, match="Hermitian"):
        bad = random_density(rng)
        bad[0, 1] += 0.1
        JointState(bad)
    with pytest.raises(InvalidStateError, match="negative eigenvalue"):
        JointState(np.diag([1.2, -0.2, 0.0, 0.0]))
    with pytest.raises(InvalidStateError, match="4x4"):
        JointState(np.eye(2) / 2)


def test_joint_state_is_read_only(rng):
    j = JointState(random_density(rng))
    with pytest.raises(ValueError):
        j.rho[0, 0] = 0.0
