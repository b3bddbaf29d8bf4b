"""Second-quantized operators, the Jordan-Wigner mapping and a Fock-space builder.

Modes are numbered so that spin-up orbitals of sites ``0..N_s-1`` come first
and spin-down orbitals follow. Mode ``k`` maps onto qubit ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .pauli import DROP_TOL, MAX_DENSE_WIDTH, PauliString, PauliSum

UP, DOWN = 0, 1


@dataclass(frozen=True)
class ModeConvention:
    """Site/spin to mode index rule: up modes ``0..N_s-1``, down modes after."""

    n_sites: int

    @property
    def n_modes(self) -> int:
        return 2 * self.n_sites

    def mode(self, site: int, spin: int) -> int:
        if not 0 <= site < self.n_sites:
            raise ValueError(f"site {site} out of range")
        if spin not in (UP, DOWN):
            raise ValueError(f"spin must be 0 (up) or 1 (down), got {spin}")
        return site + spin * self.n_sites

    def site_spin(self, mode: int) -> tuple[int, int]:
        if not 0 <= mode < self.n_modes:
            raise ValueError(f"mode {mode} out of range")
        return mode % self.n_sites, mode // self.n_sites


@dataclass(frozen=True)
class FermionTerm:
    """Product of ladder operators, written left to right, times a coefficient.

    ``ops`` holds ``(mode, dagger)`` pairs, so ``((1, True), (0, False))`` is
    ``c_1^dagger c_0``.
    """

    ops: tuple[tuple[int, bool], ...]
    coeff: complex = 1.0

    def dagger(self) -> "FermionTerm":
        return FermionTerm(tuple((m, not d) for m, d in reversed(self.ops)), np.conj(self.coeff))


@dataclass
class FermionSum:
    n_modes: int
    terms: list[FermionTerm] = field(default_factory=list)

    def __post_init__(self):
        for term in self.terms:
            self._check(term)

    def _check(self, term: FermionTerm) -> None:
        for m, _ in term.ops:
            if not 0 <= m < self.n_modes:
                raise ValueError(f"mode {m} outside [0, {self.n_modes})")

    def add(self, ops: Sequence[tuple[int, bool]], coeff: complex = 1.0) -> "FermionSum":
        term = FermionTerm(tuple((int(m), bool(d)) for m, d in ops), complex(coeff))
        self._check(term)
        self.terms.append(term)
        return self

    def __add__(self, other: "FermionSum") -> "FermionSum":
        if self.n_modes != other.n_modes:
            raise ValueError("mode count mismatch")
        return FermionSum(self.n_modes, list(self.terms) + list(other.terms))

    def __mul__(self, other):
        if isinstance(other, FermionSum):
            if self.n_modes != other.n_modes:
                raise ValueError("mode count mismatch")
            out = [FermionTerm(a.ops + b.ops, a.coeff * b.coeff) for a in self.terms for b in other.terms]
            return FermionSum(self.n_modes, out)
        if np.isscalar(other):
            return FermionSum(self.n_modes, [FermionTerm(t.ops, t.coeff * other) for t in self.terms])
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return NotImplemented

    def dagger(self) -> "FermionSum":
        return FermionSum(self.n_modes, [t.dagger() for t in self.terms])

    def normal_ordered(self) -> "FermionSum":
        """Canonical form: creators left of annihilators, each block in
        descending mode order, like terms merged, zeros dropped."""
        acc: dict[tuple[tuple[int, bool], ...], complex] = {}
        for term in self.terms:
            for ops, c in _normal_order_term(term.ops, term.coeff):
                acc[ops] = acc.get(ops, 0) + c
        out = [FermionTerm(ops, c) for ops, c in sorted(acc.items(), key=lambda kv: _order_key(kv[0]))
               if abs(c) >= DROP_TOL]
        return FermionSum(self.n_modes, out)


def _order_key(ops):
    return (len(ops), [(not d, -m) for m, d in ops])


def _normal_order_term(ops, coeff):
    """Bubble sort with anticommutation; yields (ops, coeff) pieces."""
    stack = [(tuple(ops), complex(coeff))]
    done = []
    while stack:
        cur, c = stack.pop()
        swapped = False
        for k in range(len(cur) - 1):
            (m1, d1), (m2, d2) = cur[k], cur[k + 1]
            if (not d1 and d2) or (d1 == d2 and m1 < m2):
                # c_a c_b^dag = delta_ab - c_b^dag c_a, and same-type ops anticommute
                swapped_ops = cur[:k] + (cur[k + 1], cur[k]) + cur[k + 2:]
                stack.append((swapped_ops, -c))
                if not d1 and d2 and m1 == m2:
                    stack.append((cur[:k] + cur[k + 2:], c))
                swapped = True
                break
            if d1 == d2 and m1 == m2:
                # c_a c_a = 0
                swapped = True
                break
        if not swapped:
            done.append((cur, c))
    return done


def creation(n_modes: int, mode: int) -> FermionSum:
    return FermionSum(n_modes).add([(mode, True)])


def annihilation(n_modes: int, mode: int) -> FermionSum:
    return FermionSum(n_modes).add([(mode, False)])


def number_op(n_modes: int, mode: int) -> FermionSum:
    return FermionSum(n_modes).add([(mode, True), (mode, False)])


def total_number(n_modes: int) -> FermionSum:
    out = FermionSum(n_modes)
    for m in range(n_modes):
        out.add([(m, True), (m, False)])
    return out


def _ladder_pauli(n_modes: int, mode: int, dagger: bool) -> PauliSum:
    # c_j = Z_<j (X + iY)/2 ; c_j^dag = Z_<j (X - iY)/2
    z = "Z" * mode
    rest = "I" * (n_modes - mode - 1)
    sign = -1 if dagger else 1
    return PauliSum(n_modes, [(0.5, PauliString(z + "X" + rest)),
                              (0.5j * sign, PauliString(z + "Y" + rest))])


def jw_transform(f: FermionSum, convention: ModeConvention | None = None) -> PauliSum:
    """Jordan-Wigner image of ``f`` as a canonical PauliSum on ``n_modes`` qubits."""
    n = f.n_modes if convention is None else convention.n_modes
    if convention is not None and f.n_modes > n:
        raise ValueError(f"operator has {f.n_modes} modes, convention allows {n}")
    out = PauliSum(n)
    cache: dict[tuple[int, bool], PauliSum] = {}
    for term in f.terms:
        prod = PauliSum.identity(n, term.coeff)
        for m, d in term.ops:
            if not 0 <= m < n:
                raise ValueError(f"mode {m} out of range for {n} modes")
            key = (m, d)
            if key not in cache:
                cache[key] = _ladder_pauli(n, m, d)
            prod = prod * cache[key]
        out = out + prod
    return out


def fock_matrix(f: FermionSum) -> np.ndarray:
    """Dense matrix of ``f`` built directly on occupation-number states.

    Basis index bit ``k`` is the occupation of mode ``k``; a state is
    ``c_{k_r}^dag ... c_{k_1}^dag |vac>`` with ``k_1 < ... < k_r``, so moving an
    operator onto mode ``k`` picks up ``(-1)`` per occupied mode below ``k``.
    This builder shares no code with :func:`jw_transform` and serves as its
    reference.
    """
    n = f.n_modes
    if n > MAX_DENSE_WIDTH:
        raise ValueError("too many modes for a dense matrix")
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    for term in f.terms:
        for b in range(dim):
            state, sign = b, 1
            for m, d in reversed(term.ops):
                occ = (state >> m) & 1
                if occ == int(d):
                    sign = 0
                    break
                if bin(state & ((1 << m) - 1)).count("1") % 2:
                    sign = -sign
                state ^= 1 << m
            if sign:
                out[state, b] += sign * term.coeff
    return out


def occupation_index(occupied: Iterable[int]) -> int:
    """Basis index of the product state with the given modes occupied."""
    idx = 0
    for m in occupied:
        idx |= 1 << m
    return idx
