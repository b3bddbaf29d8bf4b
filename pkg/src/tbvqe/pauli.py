"""Pauli strings, weighted Pauli sums and their dense matrices.

Qubit 0 is the least significant bit of a computational-basis index. A
string is written with qubit 0 first, so ``"XZI"`` is X on qubit 0, Z on
qubit 1 and identity on qubit 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

DROP_TOL = 1e-12
MAX_DENSE_WIDTH = 12

_LETTERS = "IXYZ"

# (a, b) -> (phase, c) with sigma_a sigma_b = phase * sigma_c
_MUL_TABLE: dict[tuple[str, str], tuple[complex, str]] = {}
for _a in _LETTERS:
    _MUL_TABLE[("I", _a)] = (1, _a)
    _MUL_TABLE[(_a, "I")] = (1, _a)
    _MUL_TABLE[(_a, _a)] = (1, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _MUL_TABLE[(_a, _b)] = (1j, _c)
    _MUL_TABLE[(_b, _a)] = (-1j, _c)

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Paulis without a coefficient."""

    ops: str

    def __post_init__(self):
        if any(ch not in _LETTERS for ch in self.ops):
            raise ValueError(f"invalid Pauli letters in {self.ops!r}")

    @property
    def width(self) -> int:
        return len(self.ops)

    @classmethod
    def identity(cls, width: int) -> "PauliString":
        return cls("I" * width)

    @classmethod
    def from_sparse(cls, width: int, ops: Mapping[int, str]) -> "PauliString":
        """Build from ``{qubit: letter}``; unspecified qubits are identity."""
        letters = ["I"] * width
        for q, letter in ops.items():
            if not 0 <= q < width:
                raise ValueError(f"qubit {q} outside width {width}")
            letters[q] = letter
        return cls("".join(letters))

    def is_identity(self) -> bool:
        return set(self.ops) <= {"I"}

    def support(self) -> tuple[int, ...]:
        return tuple(q for q, ch in enumerate(self.ops) if ch != "I")

    def commutes_qubitwise(self, other: "PauliString") -> bool:
        return all(a == "I" or b == "I" or a == b for a, b in zip(self.ops, other.ops))

    def to_matrix(self) -> np.ndarray:
        if self.width > MAX_DENSE_WIDTH:
            raise ValueError(f"width {self.width} exceeds dense limit {MAX_DENSE_WIDTH}")
        out = np.ones((1, 1), dtype=complex)
        # highest qubit is the leftmost Kronecker factor
        for ch in reversed(self.ops):
            out = np.kron(out, PAULI_MATRICES[ch])
        return out

    def __str__(self) -> str:
        return self.ops


def pauli_mul(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Multiply two Pauli strings, returning ``(phase, product)``.

    The phase is one of +1, -1, +i, -i.
    """
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")
    phase: complex = 1
    letters = []
    for x, y in zip(a.ops, b.ops):
        ph, c = _MUL_TABLE[(x, y)]
        phase *= ph
        letters.append(c)
    return complex(phase), PauliString("".join(letters))


class PauliSum:
    """Weighted sum of Pauli strings of a fixed width.

    Terms are kept in a dict keyed by the string, so the stored form has no
    duplicates. Coefficients with magnitude below ``DROP_TOL`` are removed by
    :meth:`simplify`, which every arithmetic operation applies.
    """

    def __init__(self, width: int, terms: Iterable[tuple[complex, PauliString]] | None = None):
        self.width = int(width)
        self._terms: dict[PauliString, complex] = {}
        for coeff, ps in terms or ():
            self._add_term(coeff, ps)
        self.simplify()

    def _add_term(self, coeff: complex, ps: PauliString) -> None:
        if ps.width != self.width:
            raise ValueError(f"term width {ps.width} != sum width {self.width}")
        self._terms[ps] = self._terms.get(ps, 0) + complex(coeff)

    @classmethod
    def from_dict(cls, width: int, terms: Mapping[str, complex]) -> "PauliSum":
        return cls(width, [(c, PauliString(s)) for s, c in terms.items()])

    @classmethod
    def identity(cls, width: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(width, [(coeff, PauliString.identity(width))])

    def simplify(self, tol: float = DROP_TOL) -> "PauliSum":
        self._terms = {ps: c for ps, c in self._terms.items() if abs(c) >= tol}
        return self

    @property
    def terms(self) -> list[tuple[complex, PauliString]]:
        """Terms sorted by string for reproducible output."""
        return [(self._terms[ps], ps) for ps in sorted(self._terms, key=lambda p: p.ops)]

    def __iter__(self) -> Iterator[tuple[complex, PauliString]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, ps: PauliString | str) -> complex:
        if isinstance(ps, str):
            ps = PauliString(ps)
        return self._terms.get(ps, 0j)

    def copy(self) -> "PauliSum":
        return PauliSum(self.width, self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.width != self.width:
            raise ValueError("width mismatch")
        return PauliSum(self.width, self.terms + other.terms)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1) * other

    def __neg__(self) -> "PauliSum":
        return (-1) * self

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            if other.width != self.width:
                raise ValueError("width mismatch")
            out = []
            for pa, ca in self._terms.items():
                for pb, cb in other._terms.items():
                    ph, pc = pauli_mul(pa, pb)
                    out.append((ca * cb * ph, pc))
            return PauliSum(self.width, out)
        if np.isscalar(other):
            return PauliSum(self.width, [(c * other, ps) for c, ps in self.terms])
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return NotImplemented

    def dagger(self) -> "PauliSum":
        return PauliSum(self.width, [(np.conj(c), ps) for c, ps in self.terms])

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def equals(self, other: "PauliSum", tol: float = 1e-12) -> bool:
        diff = self - other
        return all(abs(c) <= tol for c, _ in diff.terms)

    def to_matrix(self) -> np.ndarray:
        if self.width > MAX_DENSE_WIDTH:
            raise ValueError(f"width {self.width} exceeds dense limit {MAX_DENSE_WIDTH}")
        dim = 2**self.width
        out = np.zeros((dim, dim), dtype=complex)
        for ps, c in self._terms.items():
            out += c * ps.to_matrix()
        return out

    def render(self, precision: int = 12) -> str:
        """One line per term in the form ``coeff * P0P1...``."""
        lines = []
        for c, ps in self.terms:
            lines.append(f"{_fmt_coeff(c, precision)} * {ps.ops}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"PauliSum(width={self.width}, n_terms={len(self)})"


def _fmt_coeff(c: complex, precision: int) -> str:
    if abs(c.imag) < DROP_TOL:
        return f"{c.real:.{precision}g}"
    if abs(c.real) < DROP_TOL:
        return f"{c.imag:.{precision}g}j"
    return f"({c.real:.{precision}g}{c.imag:+.{precision}g}j)"


def qubitwise_groups(terms: Iterable[PauliString]) -> list[list[PauliString]]:
    """Greedy partition into groups whose members commute qubit-wise."""
    groups: list[list[PauliString]] = []
    bases: list[list[str]] = []
    for ps in terms:
        for grp, basis in zip(groups, bases):
            if all(b == "I" or ch == "I" or b == ch for b, ch in zip(basis, ps.ops)):
                grp.append(ps)
                for q, ch in enumerate(ps.ops):
                    if ch != "I":
                        basis[q] = ch
                break
        else:
            groups.append([ps])
            bases.append(list(ps.ops))
    return groups
