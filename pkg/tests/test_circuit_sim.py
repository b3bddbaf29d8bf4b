from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tbvqe.circuit import Circuit, Gate, count_cx
from tbvqe.pauli import PauliSum
from tbvqe.simulate import (NoiseModel, QuantumState, StatevectorProgram, circuit_unitary, depolarize_pair,
                            estimate_energy, expectation, fidelity, gate_matrix, run_density,
                            run_statevector, run_trajectories)

ONE_QUBIT = ("H", "X", "RX", "RY", "RZ")


def random_circuit(rng, width, n_gates, params=False):
    c = Circuit(width)
    for k in range(n_gates):
        kind = rng.choice(["H", "X", "RX", "RY", "RZ", "CX", "CZ", "CRY"])
        if kind in ("CX", "CZ", "CRY"):
            if width < 2:
                continue
            a, b = rng.choice(width, 2, replace=False)
            qs = (int(a), int(b))
        else:
            qs = (int(rng.integers(width)),)
        if kind in ("RX", "RY", "RZ", "CRY"):
            if params:
                c.add(kind, *qs, slot=int(rng.integers(3)), scale=float(rng.normal()))
            else:
                c.add(kind, *qs, angle=float(rng.uniform(-np.pi, np.pi)))
        else:
            c.add(kind, *qs)
    return c


def kron_unitary(c: Circuit) -> np.ndarray:
    """Reference built from full Kronecker products, independent of the index kernels."""
    n = c.width
    eye2 = np.eye(2)
    p0, p1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])

    def embed(ops):
        out = np.ones((1, 1))
        for q in reversed(range(n)):
            out = np.kron(out, ops.get(q, eye2))
        return out

    u = np.eye(2**n, dtype=complex)
    for g in c.gates:
        m = gate_matrix(g.kind, g.angle)
        if g.kind in ("CX", "CZ", "CRY"):
            ctl, tgt = g.qubits
            full = embed({ctl: p0}) + embed({ctl: p1, tgt: m})
        else:
            full = embed({g.qubits[0]: m})
        u = full @ u
    return u


def test_gate_text_and_binding():
    g = Gate("RY", (3,), slot=5, scale=-0.5)
    assert g.text() == "RY 3 t5*-0.5"
    c = Circuit(2).add("RX", 0, slot=0)
    np.testing.assert_allclose(circuit_unitary(c.bind([0.0])), np.eye(4), atol=1e-15)
    assert Circuit(1).bind([]).gates == []
    with pytest.raises(ValueError):
        c.bind([0.0, 1.0])
    with pytest.raises(ValueError):
        run_statevector(c)


def test_ry_pi_flips():
    c = Circuit(1).add("RY", 0, slot=0).bind([np.pi])
    assert abs(run_statevector(c).data[1]) == pytest.approx(1.0)


def test_statevector_examples():
    assert run_statevector(Circuit(2).add("X", 0)).data[1] == 1
    bell = run_statevector(Circuit(2).add("H", 0).add("CX", 0, 1)).data
    np.testing.assert_allclose(bell, [2**-0.5, 0, 0, 2**-0.5], atol=1e-15)
    init = QuantumState.basis(2, 2)
    np.testing.assert_array_equal(run_statevector(Circuit(2), init).data, init.data)


def test_count_cx():
    assert count_cx(Circuit(2)) == 0
    assert count_cx(Circuit(2).add("H", 0).add("CX", 0, 1)) == 1
    assert count_cx(Circuit(2).add("CRY", 0, 1, angle=0.3).add("CZ", 1, 0)) == 3


def test_expectation_examples():
    assert expectation(PauliSum.from_dict(1, {"Z": 1}), QuantumState.zero(1)) == 1
    bell = run_statevector(Circuit(2).add("H", 0).add("CX", 0, 1))
    assert expectation(PauliSum.from_dict(2, {"XX": 1}), bell) == pytest.approx(1.0)


def test_fidelity_examples():
    psi = run_statevector(Circuit(2).add("H", 0).add("RY", 1, angle=0.4))
    assert fidelity(psi, psi) == pytest.approx(1.0)
    assert fidelity(QuantumState.zero(1), QuantumState.basis(1, 1)) == 0
    assert fidelity(QuantumState(np.eye(2) / 2), QuantumState.zero(1)) == pytest.approx(0.5)


@pytest.mark.parametrize("kind", ONE_QUBIT + ("CX", "CZ", "CRY"))
def test_gates_unitary(kind):
    for angle in (0.0, 0.7, -2.1):
        u = gate_matrix(kind, angle)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(2), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**31 - 1))
def test_statevector_matches_kron_reference(width, seed):
    rng = np.random.default_rng(seed)
    c = random_circuit(rng, width, 25)
    np.testing.assert_allclose(circuit_unitary(c), kron_unitary(c), atol=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**31 - 1))
def test_compiled_program_matches_bind(width, seed):
    rng = np.random.default_rng(seed)
    c = random_circuit(rng, width, 30, params=True)
    theta = rng.normal(size=c.n_params)
    a = StatevectorProgram(c).run(theta).data
    b = run_statevector(c.bind(theta)).data
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_density_noiseless_limit():
    rng = np.random.default_rng(3)
    c = random_circuit(rng, 4, 40)
    psi = run_statevector(c).data
    rho = run_density(c).data
    np.testing.assert_allclose(rho, np.outer(psi, psi.conj()), atol=1e-12)


def test_depolarizing_full_strength():
    c = Circuit(3).add("X", 0).add("H", 2).add("CX", 0, 1)
    rho = run_density(c, noise=NoiseModel(15 / 16)).data.reshape([2] * 6)
    # trace out qubit 2 (leading tensor axis) to get the pair (1, 0)
    pair = np.einsum("aijakl->ijkl", rho).reshape(4, 4)
    np.testing.assert_allclose(pair, np.eye(4) / 4, atol=1e-12)
    # p = 1 applies one of the 15 non-identity Paulis with certainty
    r1 = run_density(Circuit(2).add("CX", 0, 1), noise=NoiseModel(1.0)).data
    np.testing.assert_allclose(np.diag(r1).real, [3 / 15, 4 / 15, 4 / 15, 4 / 15], atol=1e-12)


def test_noise_only_on_cx():
    c = Circuit(2).add("H", 0).add("CZ", 0, 1).add("RY", 1, angle=0.3)
    psi = run_statevector(c).data
    np.testing.assert_allclose(run_density(c, noise=NoiseModel(0.3)).data, np.outer(psi, psi.conj()), atol=1e-12)


def test_channel_is_cptp():
    # Choi matrix of the two-qubit channel on a 4-qubit register (system x reference)
    bell = np.zeros(16, dtype=complex)
    for k in range(4):
        bell[k | (k << 2)] = 0.5
    rho = np.outer(bell, bell.conj())
    choi = depolarize_pair(rho, 0, 1, 0.37)
    assert np.trace(choi).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(choi).min() > -1e-10


def test_purity_bound():
    rng = np.random.default_rng(11)
    c = random_circuit(rng, 3, 30)
    k = c.count("CX") + 2 * c.count("CRY")
    p = 0.01
    assert run_density(c, noise=NoiseModel(p)).purity() >= (1 - p) ** (2 * k) - 1e-6


def test_trajectories_agree_with_density():
    c = Circuit(2).add("H", 0).add("CX", 0, 1).add("RY", 1, angle=0.5).add("CX", 1, 0)
    noise = NoiseModel(0.2, seed=4)
    exact = run_density(c, noise=noise).data
    sampled = run_trajectories(c, noise=noise, n_traj=40000).data
    assert np.abs(exact - sampled).max() < 0.02


def test_shot_estimator_identity_and_binomial():
    mean, err = estimate_energy(PauliSum.from_dict(1, {"I": 2.5}), Circuit(1), 100)
    assert (mean, err) == (2.5, 0.0)
    plus = Circuit(1).add("H", 0)
    mean, err = estimate_energy(PauliSum.from_dict(1, {"Z": 1}), plus, 10_000, seed=1)
    assert err == pytest.approx(0.01, rel=0.05)
    assert abs(mean) < 5 * err


def test_shot_estimator_consistency():
    rng = np.random.default_rng(5)
    obs = PauliSum.from_dict(4, {"ZZII": 0.7, "XIXI": -0.4, "IYYI": 0.3, "IIIZ": 1.1, "XXYY": 0.2, "IIII": 0.5})
    for case in range(20):
        c = random_circuit(rng, 4, 20)
        exact = expectation(obs, run_statevector(c))
        mean, err = estimate_energy(obs, c, 20_000, seed=case)
        assert abs(mean - exact) < 5 * err + 1e-12


def test_shot_estimator_unbiased():
    rng = np.random.default_rng(9)
    c = random_circuit(rng, 2, 12)
    obs = PauliSum.from_dict(2, {"ZI": 1.0})
    exact = expectation(obs, run_statevector(c))
    means = np.array([estimate_energy(obs, c, 200, seed=s)[0] for s in range(100)])
    grand_err = means.std(ddof=1) / np.sqrt(len(means))
    assert abs(means.mean() - exact) < 4 * grand_err
