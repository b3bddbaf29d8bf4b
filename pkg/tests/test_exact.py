from __future__ import annotations

import numpy as np
import pytest

from tbvqe.exact import diagonalize, hamiltonian_matrix, reference_fidelity, sector_indices
from tbvqe.model import CoulombConvention, ModelParams, build_qubit_hamiltonian, uniform_field
from tbvqe.simulate import QuantumState, expectation

BENCH = [(1.0, 0.2, 10.0), (4.0, 0.1, 10.0), (1.0, 0.2, 0.1)]


def analytic_two_site(u_eff, t=1.0):
    return (u_eff - np.sqrt(u_eff**2 + 16 * t**2)) / 2


@pytest.mark.parametrize("u_eff", [0.2, 5.0, 20.0])
@pytest.mark.parametrize("conv", list(CoulombConvention))
def test_two_site_hubbard(u_eff, conv):
    u_c = u_eff / conv.double_occupancy_factor
    spec = diagonalize(ModelParams(2, 2, t=1.0, U_c=u_c), conv, sector=2)
    assert spec.ground_energy == pytest.approx(analytic_two_site(u_eff), abs=1e-10)


def test_single_site_spectrum():
    spec = diagonalize(ModelParams(1, 1, t=0.0, J=1.0, B=((0, 0, 1),)))
    np.testing.assert_allclose(spec.eigenvalues, [-1, 0, 0, 1], atol=1e-12)


def test_zero_couplings():
    spec = diagonalize(ModelParams(2, 2, t=0.0))
    assert np.abs(spec.eigenvalues).max() == 0
    assert spec.degeneracy == 16


def test_fidelity_examples():
    spec = diagonalize(ModelParams(2, 2, t=1.0, J=0.2, U_c=1.0, B=uniform_field(2)), sector=2)
    assert not spec.is_degenerate
    g, e1 = spec.eigenvectors[:, 0], spec.eigenvectors[:, 1]
    assert reference_fidelity(QuantumState(g), spec)[0] == pytest.approx(1.0)
    assert reference_fidelity(QuantumState(e1), spec)[0] == pytest.approx(0.0, abs=1e-12)
    assert reference_fidelity(QuantumState((g + e1) / np.sqrt(2)), spec)[0] == pytest.approx(0.5)
    rho = QuantumState(np.outer(g, g.conj()))
    assert reference_fidelity(rho, spec)[0] == pytest.approx(1.0)


@pytest.mark.parametrize("t,J,U", BENCH)
def test_oracle_self_consistency(t, J, U):
    p = ModelParams(2, 2, t=t, J=J, U_c=U, B=uniform_field(2))
    spec = diagonalize(p, sector=2)
    e = expectation(build_qubit_hamiltonian(p), QuantumState(spec.ground_state))
    assert e == pytest.approx(spec.ground_energy, abs=1e-9)
    full = diagonalize(p)
    assert spec.ground_energy >= full.ground_energy - 1e-12


def test_sector_restriction_consistency():
    # weak repulsion: the global ground state holds two electrons
    p = ModelParams(2, 2, t=1.0, J=0.2, U_c=0.1, B=uniform_field(2))
    w, v = np.linalg.eigh(hamiltonian_matrix(p))
    n_of_ground = sum(abs(v[i, 0]) ** 2 * bin(i).count("1") for i in range(16))
    assert n_of_ground == pytest.approx(2.0)
    assert diagonalize(p, sector=2).ground_energy == pytest.approx(w[0], abs=1e-12)
    # strong repulsion: a single electron is cheaper, so the sector lies strictly above
    q = ModelParams(2, 2, t=1.0, J=0.2, U_c=10.0, B=uniform_field(2))
    assert diagonalize(q, sector=2).ground_energy > diagonalize(q).ground_energy + 0.5


def test_sector_indices():
    assert list(sector_indices(3, 1)) == [1, 2, 4]
    with pytest.raises(ValueError):
        diagonalize(ModelParams(1, 1), sector=3)
