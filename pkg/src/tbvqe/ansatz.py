"""Ansatz families, excitation circuits and initial-state preparation.

Excitation circuits come in two styles:

* ``staircase``: the generator ``K = A - A^dag`` is expanded into commuting
  Pauli strings and each is exponentiated with a basis change, a CX
  staircase over its support, and an Rz.
* ``yab``: a CX network maps the two coupled occupation states onto a pair
  that differs on one pivot qubit, and a multiplexed Ry on the pivot performs
  the rotation. The Jordan-Wigner parity of the intermediate orbitals is
  collected by a CX ladder onto one qubit, which then flips the sign of the
  rotation (``exact_ladder``). In ``no_ladder`` mode the ladder is dropped
  and only the nearest intermediate orbital steers the sign, which keeps
  every amplitude magnitude but can get signs wrong.

Single excitations without a ladder use a two-CX Givens core; the
``exact_ladder`` singles keep the pivot form so the parity can act on a
single-target rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Sequence

import numpy as np

from .circuit import Circuit, count_cx
from .fermion import DOWN, UP, FermionSum, ModeConvention, jw_transform

EXACT = "exact_ladder"
NO_LADDER = "no_ladder"


@dataclass(frozen=True)
class Transition:
    """``single(i, j)``: ``A = c_j^dag c_i``; ``double(i, j, k, l)``: ``A = c_k^dag c_l^dag c_j c_i``."""

    modes: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.modes)
        object.__setattr__(self, "modes", m)
        if len(m) not in (2, 4) or len(set(m)) != len(m) or min(m) < 0:
            raise ValueError(f"invalid transition {m}")
        if m[0] >= m[1] or (len(m) == 4 and m[2] >= m[3]):
            raise ValueError(f"pairs must be increasing: {m}")

    @property
    def kind(self) -> str:
        return "single" if len(self.modes) == 2 else "double"

    def generator(self, n_modes: int) -> FermionSum:
        """Anti-hermitian ``A - A^dag``."""
        m = self.modes
        if self.kind == "single":
            a = FermionSum(n_modes).add([(m[1], True), (m[0], False)])
        else:
            i, j, k, l = m
            a = FermionSum(n_modes).add([(k, True), (l, True), (j, False), (i, False)])
        return a + (-1) * a.dagger()

    def intermediates(self) -> list[int]:
        """Modes whose Jordan-Wigner parity enters the matrix element."""
        s = sorted(self.modes)
        if self.kind == "single":
            return list(range(s[0] + 1, s[1]))
        return list(range(s[0] + 1, s[1])) + list(range(s[2] + 1, s[3]))

    def __str__(self) -> str:
        if self.kind == "single":
            return f"{self.modes[0]}->{self.modes[1]}"
        i, j, k, l = self.modes
        return f"{i},{j}->{k},{l}"


def generate_transitions(n_modes: int, include_doubles: bool = True) -> list[Transition]:
    if n_modes < 2:
        raise ValueError("need at least two modes")
    out = [Transition((i, j)) for i, j in combinations(range(n_modes), 2)]
    if include_doubles:
        pairs = list(combinations(range(n_modes), 2))
        doubles = []
        for p, q in combinations(pairs, 2):
            if set(p) & set(q):
                continue
            doubles.append(p + q)
        out += [Transition(d) for d in sorted(doubles)]
    return out


def _double_sign(t: Transition) -> int:
    """Sign of ``<y|A|x>`` for the two coupled states with all other modes empty."""
    i, j, k, l = t.modes
    state, sign = (1 << i) | (1 << j), 1
    for m, dag in ((i, False), (j, False), (l, True), (k, True)):
        if bin(state & ((1 << m) - 1)).count("1") % 2:
            sign = -sign
        state ^= 1 << m
    return sign


def _staircase(t: Transition, width: int, slot: int) -> Circuit:
    c = Circuit(width)
    for coeff, ps in jw_transform(t.generator(width)).terms:
        # coeff = i*alpha, exp(theta*i*alpha*P) = W^dag exp(i*theta*alpha*Z..Z) W
        alpha = coeff.imag
        support = ps.support()
        for q in support:
            if ps.ops[q] == "X":
                c.add("H", q)
            elif ps.ops[q] == "Y":
                c.add("RX", q, angle=math.pi / 2)
        for a, b in zip(support, support[1:]):
            c.add("CX", a, b)
        c.add("RZ", support[-1], slot=slot, scale=-2 * alpha)
        for a, b in reversed(list(zip(support, support[1:]))):
            c.add("CX", a, b)
        for q in support:
            if ps.ops[q] == "X":
                c.add("H", q)
            elif ps.ops[q] == "Y":
                c.add("RX", q, angle=-math.pi / 2)
    return c


def _givens(c: Circuit, i: int, j: int, slot: int, scale: float = 1.0) -> None:
    # exp(theta (s+_j s-_i - h.c.)) with two CX
    c.add("H", j)
    c.add("CX", j, i)
    c.add("RY", i, slot=slot, scale=-scale)
    c.add("RY", j, slot=slot, scale=-scale)
    c.add("CX", j, i)
    c.add("H", j)


def _controlled_ry(c: Circuit, ctl: int, tgt: int, slot: int, scale: float) -> None:
    # CRy(scale*theta) = Ry(phi/2) CX Ry(-phi/2) CX
    c.add("RY", tgt, slot=slot, scale=scale / 2)
    c.add("CX", ctl, tgt)
    c.add("RY", tgt, slot=slot, scale=-scale / 2)
    c.add("CX", ctl, tgt)


def _mux_ry2(c: Circuit, c1: int, c2: int, tgt: int, slot: int, weights: Sequence[float]) -> None:
    """Gray-code Ry multiplexor; ``weights[b1 + 2*b2]`` is the angle per theta."""
    # angle(b1, b2) = w0 + (-1)^b1 w1 + (-1)^(b1^b2) w2 + (-1)^b2 w3
    m = np.array([[1, (-1) ** b1, (-1) ** (b1 ^ b2), (-1) ** b2]
                  for b2 in (0, 1) for b1 in (0, 1)], dtype=float)
    w = np.linalg.solve(m, np.asarray(weights, dtype=float))
    for wk, ctl in zip(w, (c1, c2, c1, c2)):
        c.add("RY", tgt, slot=slot, scale=float(wk))
        c.add("CX", ctl, tgt)


def _ladder(c: Circuit, qubits: Sequence[int], reverse: bool = False) -> None:
    links = list(zip(qubits, qubits[1:]))
    for a, b in (reversed(links) if reverse else links):
        c.add("CX", a, b)


def _yab_single(t: Transition, width: int, ladder: str, slot: int) -> Circuit:
    i, j = t.modes
    inter = t.intermediates()
    c = Circuit(width)
    if ladder == NO_LADDER:
        if inter:
            # CZ(p, i) written as H CX H; keeps only the nearest parity
            p = inter[-1]
            c.add("H", i).add("CX", p, i).add("H", i)
            _givens(c, i, j, slot)
            c.add("H", i).add("CX", p, i).add("H", i)
        else:
            _givens(c, i, j, slot)
        return c
    _ladder(c, inter)
    c.add("CX", j, i)
    if inter:
        c.add("CX", inter[-1], j)
    _controlled_ry(c, i, j, slot, 2.0)
    if inter:
        c.add("CX", inter[-1], j)
    c.add("CX", j, i)
    _ladder(c, inter, reverse=True)
    return c


def _yab_double(t: Transition, width: int, ladder: str, slot: int) -> Circuit:
    i, j, k, l = t.modes
    inter = t.intermediates()
    s = _double_sign(t)
    c = Circuit(width)
    if ladder == EXACT:
        _ladder(c, inter)
    for q in (i, j, k):
        c.add("CX", l, q)
    if inter:
        c.add("CX", inter[-1], l)
    # rotation on l where (i, j, k) = (1, 1, 0), split on k into two 2-control halves
    half = [0.0, 0.0, 0.0, float(s)]
    _mux_ry2(c, i, j, l, slot, half)
    c.add("CX", k, l)
    _mux_ry2(c, i, j, l, slot, half)
    c.add("CX", k, l)
    if inter:
        c.add("CX", inter[-1], l)
    for q in (k, j, i):
        c.add("CX", l, q)
    if ladder == EXACT:
        _ladder(c, inter, reverse=True)
    return c


def excitation_circuit(t: Transition, width: int, style: str = "yab", ladder: str = EXACT,
                       slot: int = 0) -> Circuit:
    """Circuit for ``exp(theta (A - A^dag))`` with ``theta`` in parameter ``slot``."""
    if max(t.modes) >= width:
        raise ValueError(f"transition {t} does not fit {width} qubits")
    if ladder not in (EXACT, NO_LADDER):
        raise ValueError(f"unknown ladder mode {ladder!r}")
    if style == "staircase":
        if ladder != EXACT:
            raise ValueError("staircase circuits have no ladder-free variant")
        c = _staircase(t, width, slot)
    elif style == "yab":
        c = _yab_single(t, width, ladder, slot) if t.kind == "single" else _yab_double(t, width, ladder, slot)
    else:
        raise ValueError(f"unknown style {style!r}")
    c.n_params = max(c.n_params, slot + 1)
    return c


class Family(str, Enum):
    GENERIC = "Generic"
    CLUSTER_SD = "ClusterSD"
    YAB_SD = "YAB_SD"
    YAB_S = "YAB_S"
    SIMPLIFIED_YAB_SD = "SimplifiedYAB_SD"
    SIMPLIFIED_YAB_S = "SimplifiedYAB_S"
    SIMPLIFIED_YAB_3S = "SimplifiedYAB_3S"


CLUSTER_FAMILIES = tuple(f for f in Family if f is not Family.GENERIC)

# family -> (style, ladder, include doubles, default repetitions)
_FAMILY_LAYOUT = {
    Family.CLUSTER_SD: ("staircase", EXACT, True, 1),
    Family.YAB_SD: ("yab", EXACT, True, 1),
    Family.YAB_S: ("yab", EXACT, False, 1),
    Family.SIMPLIFIED_YAB_SD: ("yab", NO_LADDER, True, 1),
    Family.SIMPLIFIED_YAB_S: ("yab", NO_LADDER, False, 1),
    Family.SIMPLIFIED_YAB_3S: ("yab", NO_LADDER, False, 3),
}


@dataclass(frozen=True)
class AnsatzSpec:
    family: Family
    n_sites: int
    reps: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if self.reps is not None and self.reps < 1:
            raise ValueError("reps must be >= 1")

    @property
    def repetitions(self) -> int:
        if self.reps is not None:
            return self.reps
        if self.family is Family.GENERIC:
            return 3
        return _FAMILY_LAYOUT[self.family][3]


@dataclass(frozen=True)
class Ansatz:
    circuit: Circuit
    n_params: int
    n_cx: int
    spec: AnsatzSpec


def _generic(width: int, layers: int) -> Circuit:
    c = Circuit(width)
    slot = 0
    for _ in range(layers):
        for q in range(width):
            c.add("H", q)
        for q in range(width):
            for kind in ("RX", "RY", "RX", "RY"):
                c.add(kind, q, slot=slot)
                slot += 1
        for q in range(width - 1):
            c.add("CX", q, q + 1)
    return c


def build_ansatz(spec: AnsatzSpec) -> Ansatz:
    width = 2 * spec.n_sites
    if spec.family is Family.GENERIC:
        c = _generic(width, spec.repetitions)
    else:
        style, ladder, doubles, _ = _FAMILY_LAYOUT[spec.family]
        trans = generate_transitions(width, include_doubles=doubles)
        c = Circuit(width)
        slot = 0
        for _ in range(spec.repetitions):
            for t in trans:
                c.extend(excitation_circuit(t, width, style, ladder, slot=0), slot_offset=slot)
                slot += 1
    return Ansatz(c, c.n_params, count_cx(c), spec)


class InitialStateKind(str, Enum):
    FM = "FM"
    AFM = "AFM"
    DOUBLE_AFM = "DoubleAFM"
    EXPLICIT = "explicit"


def afm_occupation(n_sites: int, n_electrons: int, flipped: bool = False) -> list[int]:
    mc = ModeConvention(n_sites)
    occ = []
    for k in range(n_electrons):
        spin = UP if k % 2 == 0 else DOWN
        if flipped:
            spin = 1 - spin
        occ.append(mc.mode(k, spin))
    return sorted(occ)


def initial_occupations(kind: InitialStateKind | str, n_sites: int, n_electrons: int,
                        occupied: Sequence[int] | None = None) -> list[list[int]]:
    """Occupied-mode lists of the basis states in the initial superposition."""
    kind = InitialStateKind(kind)
    if not 0 <= n_electrons <= 2 * n_sites:
        raise ValueError("infeasible filling")
    if kind is InitialStateKind.EXPLICIT:
        if occupied is None or len(set(occupied)) != n_electrons:
            raise ValueError("explicit initial state needs n_electrons distinct modes")
        if any(not 0 <= m < 2 * n_sites for m in occupied):
            raise ValueError("occupied mode out of range")
        return [sorted(occupied)]
    if n_electrons > n_sites:
        raise ValueError(f"{kind.value} filling needs n_electrons <= n_sites")
    if kind is InitialStateKind.FM:
        return [list(range(n_electrons))]
    if kind is InitialStateKind.AFM:
        return [afm_occupation(n_sites, n_electrons)]
    return [afm_occupation(n_sites, n_electrons), afm_occupation(n_sites, n_electrons, flipped=True)]


def prepare_initial(kind: InitialStateKind | str, n_sites: int, n_electrons: int,
                    occupied: Sequence[int] | None = None) -> Circuit:
    kind = InitialStateKind(kind)
    states = initial_occupations(kind, n_sites, n_electrons, occupied)
    c = Circuit(2 * n_sites)
    if kind is not InitialStateKind.DOUBLE_AFM:
        for m in states[0]:
            c.add("X", m)
        return c
    main, flip = states
    if not main:
        return c
    # one Hadamard on a main-state qubit, then fan out: main copies it, flipped gets its complement
    head = main[0]
    c.add("H", head)
    for q in main[1:]:
        c.add("CX", head, q)
    for q in flip:
        c.add("X", q)
        c.add("CX", head, q)
    return c
