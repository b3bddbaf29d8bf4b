from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tbvqe.fermion import fock_matrix, jw_transform, occupation_index
from tbvqe.model import (CoulombConvention, ModelParams, PenaltyParams, build_fermionic_hamiltonian,
                         build_qubit_hamiltonian, classical_energy, number_pauli, sz_pauli, uniform_field)

LIT, HUB = CoulombConvention.LITERAL, CoulombConvention.HUBBARD


def qubit_matrix(p, conv=LIT, penalty=None):
    return build_qubit_hamiltonian(p, conv, penalty).to_matrix()


def test_single_site_zeeman_spectrum():
    p = ModelParams(1, 1, t=3.0, J=1.0, B=((0, 0, 1),))
    m = fock_matrix(build_fermionic_hamiltonian(p, LIT))
    diag = {occ: m[occupation_index(occ), occupation_index(occ)].real for occ in [(), (0,), (1,), (0, 1)]}
    assert diag == {(): 0, (0,): -1, (1,): 1, (0, 1): 0}
    np.testing.assert_allclose(np.linalg.eigvalsh(m), [-1, 0, 0, 1], atol=1e-12)


def test_single_electron_hopping():
    p = ModelParams(2, 1, t=1.0)
    m = qubit_matrix(p)
    # one spin-up electron: basis states |10> and |01> on the up modes
    idx = [occupation_index([0]), occupation_index([1])]
    np.testing.assert_allclose(np.linalg.eigvalsh(m[np.ix_(idx, idx)])[0], -1.0, atol=1e-12)


@pytest.mark.parametrize("conv,expected", [(LIT, 10.0), (HUB, 5.0)])
def test_double_occupancy_energy(conv, expected):
    p = ModelParams(1, 2, t=0.0, U_c=5.0)
    m = qubit_matrix(p, conv)
    assert m[3, 3].real == pytest.approx(expected)
    assert classical_energy(p, conv, [0, 1]) == pytest.approx(expected)


def test_penalty_eigenvalues():
    p = ModelParams(1, 1, t=0.0)
    m = qubit_matrix(p, penalty=PenaltyParams(10.0, 1))
    np.testing.assert_allclose(np.diag(m).real, [10, 0, 0, 10], atol=1e-12)


def test_zeeman_qubit_form():
    h = build_qubit_hamiltonian(ModelParams(1, 1, t=0.0, J=1.0, B=((0, 0, 1),)))
    assert h.coeff("ZI") == pytest.approx(0.5)
    assert h.coeff("IZ") == pytest.approx(-0.5)
    assert h.to_matrix()[1, 1].real == pytest.approx(-1.0)


def test_no_penalty_is_plain_transform():
    p = ModelParams(2, 2, t=1.0, J=0.3, U_c=2.0, B=((0.1, 0.2, 0.9), (0, 0, 1)))
    assert build_qubit_hamiltonian(p).equals(jw_transform(build_fermionic_hamiltonian(p)))


def test_invalid_params():
    with pytest.raises(ValueError):
        ModelParams(2, 5)
    with pytest.raises(ValueError):
        ModelParams(2, 2, B=((0, 0, 1),))
    with pytest.raises(ValueError):
        PenaltyParams(-1.0, 2)


def test_classical_energy_matches_diagonal():
    p = ModelParams(3, 3, t=1.0, J=0.4, U_c=2.0, B=uniform_field(3))
    m = qubit_matrix(p)
    for occ in ([0, 1, 2], [0, 4, 2], [0, 3, 5], [1, 4, 5]):
        assert classical_energy(p, LIT, occ) == pytest.approx(m[occupation_index(occ)] [occupation_index(occ)].real)


fields = st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))


@settings(max_examples=25, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0, 5), st.lists(fields, min_size=2, max_size=2),
       st.sampled_from([LIT, HUB]))
def test_hermitian_and_number_conserving(t, J, U, b, conv):
    p = ModelParams(2, 2, t=t, J=J, U_c=U, B=tuple(b))
    h = qubit_matrix(p, conv)
    n = number_pauli(4).to_matrix()
    np.testing.assert_allclose(h, h.conj().T, atol=1e-12)
    assert np.abs(h @ n - n @ h).max() < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 2), st.floats(0.05, 1), st.floats(0, 1))
def test_sz_conserved_iff_collinear(J, bz, bx):
    sz = sz_pauli(2).to_matrix()
    collinear = qubit_matrix(ModelParams(2, 2, J=J, U_c=1.0, B=((0, 0, bz), (0, 0, -bz))))
    assert np.abs(collinear @ sz - sz @ collinear).max() < 1e-12
    if bx > 1e-3:
        tilted = qubit_matrix(ModelParams(2, 2, J=J, U_c=1.0, B=((bx, 0, bz), (0, 0, bz))))
        assert np.abs(tilted @ sz - sz @ tilted).max() > 1e-6
