from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tbvqe.ansatz import generate_transitions
from tbvqe.fermion import (FermionSum, ModeConvention, annihilation, creation, fock_matrix, jw_transform,
                           number_op, occupation_index, total_number)
from tbvqe.pauli import PauliSum


def jw_matrix(f: FermionSum) -> np.ndarray:
    return jw_transform(f).to_matrix()


def test_number_operator_example():
    h = jw_transform(number_op(2, 0))
    assert h.equals(PauliSum.from_dict(2, {"II": 0.5, "ZI": -0.5}))


def test_hopping_example():
    f = FermionSum(2).add([(0, True), (1, False)]).add([(1, True), (0, False)])
    assert jw_transform(f).equals(PauliSum.from_dict(2, {"XX": 0.5, "YY": 0.5}))


def test_empty_sum_maps_to_empty():
    assert len(jw_transform(FermionSum(3))) == 0


def test_mode_convention():
    mc = ModeConvention(3)
    assert [mc.mode(s, 0) for s in range(3)] == [0, 1, 2]
    assert [mc.mode(s, 1) for s in range(3)] == [3, 4, 5]
    assert mc.site_spin(4) == (1, 1)
    with pytest.raises(ValueError):
        mc.mode(3, 0)


def test_fock_sign_convention():
    # c_1^dag acting on |mode 0 occupied> passes one occupied mode
    m = fock_matrix(creation(2, 1))
    assert m[occupation_index([0, 1]), occupation_index([0])] == -1
    assert m[occupation_index([1]), 0] == 1


@pytest.mark.parametrize("n_modes", [1, 2, 3, 4, 5, 6])
def test_anticommutation(n_modes):
    eye = np.eye(2**n_modes)
    mats_c = [jw_matrix(annihilation(n_modes, i)) for i in range(n_modes)]
    mats_d = [jw_matrix(creation(n_modes, i)) for i in range(n_modes)]
    for i in range(n_modes):
        for j in range(n_modes):
            anti = mats_c[i] @ mats_d[j] + mats_d[j] @ mats_c[i]
            np.testing.assert_allclose(anti, eye if i == j else 0 * eye, atol=1e-12)
            anti2 = mats_c[i] @ mats_c[j] + mats_c[j] @ mats_c[i]
            assert np.abs(anti2).max() < 1e-12


@pytest.mark.parametrize("n_modes", [4, 6])
def test_generators_match_fock(n_modes):
    for t in generate_transitions(n_modes)[:: max(1, n_modes - 3)]:
        g = t.generator(n_modes)
        np.testing.assert_allclose(jw_matrix(g), fock_matrix(g), atol=1e-12)


def test_normal_ordering_preserves_matrix():
    f = FermionSum(3).add([(0, False), (1, True), (0, True), (2, False)], 0.7)
    f = f + FermionSum(3).add([(2, False), (2, True)], -1.3)
    np.testing.assert_allclose(fock_matrix(f.normal_ordered()), fock_matrix(f), atol=1e-12)


def test_total_number_is_diagonal_count():
    d = np.diag(fock_matrix(total_number(3))).real
    assert list(d) == [bin(i).count("1") for i in range(8)]


ops = st.tuples(st.integers(0, 3), st.booleans())
# PauliSum drops coefficients below DROP_TOL, so keep generated ones clear of it
coeffs = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False).filter(
    lambda c: c == 0 or abs(c) > 1e-6)
terms = st.tuples(st.lists(ops, min_size=1, max_size=4), coeffs)


@settings(max_examples=60, deadline=None)
@given(st.lists(terms, min_size=1, max_size=4))
def test_random_sums_round_trip(raw):
    f = FermionSum(4)
    for o, c in raw:
        f.add(o, c)
    np.testing.assert_allclose(jw_matrix(f), fock_matrix(f), atol=1e-12)
    np.testing.assert_allclose(jw_matrix(f.dagger()), fock_matrix(f).conj().T, atol=1e-12)
