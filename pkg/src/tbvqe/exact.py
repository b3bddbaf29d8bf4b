"""Exact diagonalization reference for ground energies and fidelities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fermion import fock_matrix
from .model import CoulombConvention, ModelParams, build_fermionic_hamiltonian
from .simulate import QuantumState

MAX_ED_MODES = 12
DEGENERACY_RTOL = 1e-8


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns in the full 2**n_modes basis
    degeneracy: int
    sector: int | None

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def ground_states(self) -> np.ndarray:
        """Columns spanning the ground subspace."""
        return self.eigenvectors[:, : self.degeneracy]

    @property
    def ground_state(self) -> np.ndarray:
        return self.eigenvectors[:, 0]

    @property
    def is_degenerate(self) -> bool:
        return self.degeneracy > 1


def hamiltonian_matrix(p: ModelParams, conv: CoulombConvention = CoulombConvention.LITERAL) -> np.ndarray:
    """Fock-space matrix built without the qubit mapping."""
    if p.n_modes > MAX_ED_MODES:
        raise ValueError(f"{p.n_modes} modes exceed the dense limit of {MAX_ED_MODES}")
    return fock_matrix(build_fermionic_hamiltonian(p, conv))


def sector_indices(n_modes: int, n_particles: int) -> np.ndarray:
    idx = np.arange(2**n_modes)
    counts = np.array([bin(i).count("1") for i in idx])
    return idx[counts == n_particles]


def diagonalize(p: ModelParams, conv: CoulombConvention = CoulombConvention.LITERAL,
                sector: int | None = None) -> SpectrumResult:
    h = hamiltonian_matrix(p, conv)
    dim = h.shape[0]
    if sector is None:
        basis = np.arange(dim)
    else:
        if not 0 <= sector <= p.n_modes:
            raise ValueError("sector particle number out of range")
        basis = sector_indices(p.n_modes, sector)
    w, v = np.linalg.eigh(h[np.ix_(basis, basis)])
    vecs = np.zeros((dim, len(basis)), dtype=complex)
    vecs[basis, :] = v
    tol = DEGENERACY_RTOL * max(1.0, abs(w[0]))
    degeneracy = int(np.sum(w - w[0] < tol))
    return SpectrumResult(w, vecs, degeneracy, sector)


def reference_fidelity(candidate: QuantumState, spectrum: SpectrumResult) -> tuple[float, bool]:
    """Weight of ``candidate`` in the ground subspace, and whether it was degenerate."""
    g = spectrum.ground_states
    if g.shape[0] != candidate.data.shape[0]:
        raise ValueError("candidate width does not match the spectrum")
    if candidate.is_pure:
        f = float(np.sum(np.abs(g.conj().T @ candidate.data) ** 2))
    else:
        f = float(np.real(np.trace(g.conj().T @ candidate.data @ g)))
    return min(1.0, max(0.0, f)), spectrum.is_degenerate
