"""Tight-binding chain with on-site Coulomb repulsion and sd-exchange."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .fermion import DOWN, UP, FermionSum, ModeConvention, jw_transform, total_number
from .pauli import PauliSum


class CoulombConvention(str, Enum):
    """How the on-site repulsion is read.

    ``literal`` sums ``n_s n_s'`` over ordered spin pairs ``s != s'``, which
    gives ``2 U_c n_up n_down`` per site. ``hubbard`` uses ``U_c n_up n_down``.
    """

    LITERAL = "literal"
    HUBBARD = "hubbard"

    @property
    def double_occupancy_factor(self) -> float:
        return 2.0 if self is CoulombConvention.LITERAL else 1.0


@dataclass(frozen=True)
class ModelParams:
    n_sites: int
    n_electrons: int
    t: float = 1.0
    J: float = 0.0
    U_c: float = 0.0
    B: tuple[tuple[float, float, float], ...] = field(default=())

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if not 0 <= self.n_electrons <= 2 * self.n_sites:
            raise ValueError(f"n_electrons must lie in [0, {2 * self.n_sites}]")
        b = tuple(tuple(float(x) for x in v) for v in self.B) if self.B else ((0.0, 0.0, 0.0),) * self.n_sites
        if len(b) != self.n_sites or any(len(v) != 3 for v in b):
            raise ValueError("B needs exactly one 3-vector per site")
        object.__setattr__(self, "B", b)

    @property
    def n_modes(self) -> int:
        return 2 * self.n_sites

    @property
    def convention(self) -> ModeConvention:
        return ModeConvention(self.n_sites)

    def has_transverse_field(self) -> bool:
        return any(abs(bx) > 0 or abs(by) > 0 for bx, by, _ in self.B)


@dataclass(frozen=True)
class PenaltyParams:
    """Energy ``E_f (N - n_e)^2`` added to keep the particle number fixed."""

    E_f: float
    n_e: int

    def __post_init__(self):
        if self.E_f < 0:
            raise ValueError("E_f must be nonnegative")


def uniform_field(n_sites: int, vec: Sequence[float] = (0.0, 0.0, 1.0)) -> tuple[tuple[float, float, float], ...]:
    return tuple(tuple(float(x) for x in vec) for _ in range(n_sites))


def build_fermionic_hamiltonian(p: ModelParams, conv: CoulombConvention = CoulombConvention.LITERAL) -> FermionSum:
    conv = CoulombConvention(conv)
    mc = p.convention
    h = FermionSum(p.n_modes)
    # open chain hopping
    for i in range(p.n_sites - 1):
        for s in (UP, DOWN):
            a, b = mc.mode(i, s), mc.mode(i + 1, s)
            h.add([(a, True), (b, False)], -p.t)
            h.add([(b, True), (a, False)], -p.t)
    # sd exchange: -J B . (c^dag sigma c)
    for i, (bx, by, bz) in enumerate(p.B):
        up, dn = mc.mode(i, UP), mc.mode(i, DOWN)
        if bz:
            h.add([(up, True), (up, False)], -p.J * bz)
            h.add([(dn, True), (dn, False)], p.J * bz)
        if bx:
            h.add([(up, True), (dn, False)], -p.J * bx)
            h.add([(dn, True), (up, False)], -p.J * bx)
        if by:
            h.add([(dn, True), (up, False)], -1j * p.J * by)
            h.add([(up, True), (dn, False)], 1j * p.J * by)
    u = p.U_c * conv.double_occupancy_factor
    if u:
        for i in range(p.n_sites):
            up, dn = mc.mode(i, UP), mc.mode(i, DOWN)
            h.add([(up, True), (up, False), (dn, True), (dn, False)], u)
    return h


def number_pauli(n_modes: int) -> PauliSum:
    return jw_transform(total_number(n_modes))


def sz_pauli(n_sites: int) -> PauliSum:
    mc = ModeConvention(n_sites)
    f = FermionSum(mc.n_modes)
    for i in range(n_sites):
        f.add([(mc.mode(i, UP), True), (mc.mode(i, UP), False)], 0.5)
        f.add([(mc.mode(i, DOWN), True), (mc.mode(i, DOWN), False)], -0.5)
    return jw_transform(f)


def penalty_pauli(n_modes: int, penalty: PenaltyParams) -> PauliSum:
    shifted = number_pauli(n_modes) - PauliSum.identity(n_modes, penalty.n_e)
    return penalty.E_f * (shifted * shifted)


def build_qubit_hamiltonian(
    p: ModelParams,
    conv: CoulombConvention = CoulombConvention.LITERAL,
    penalty: PenaltyParams | None = None,
) -> PauliSum:
    h = jw_transform(build_fermionic_hamiltonian(p, conv), p.convention)
    if penalty is not None and penalty.E_f:
        h = h + penalty_pauli(p.n_modes, penalty)
    return h


def classical_energy(p: ModelParams, conv: CoulombConvention, occupied: Sequence[int]) -> float:
    """Diagonal energy of an occupation-number state (hopping contributes 0)."""
    conv = CoulombConvention(conv)
    occ = set(occupied)
    mc = p.convention
    e = 0.0
    for i, (_, _, bz) in enumerate(p.B):
        up, dn = mc.mode(i, UP) in occ, mc.mode(i, DOWN) in occ
        e += -p.J * bz * (up - dn)
        if up and dn:
            e += p.U_c * conv.double_occupancy_factor
    return float(np.real(e))
