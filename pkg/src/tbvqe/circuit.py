"""Parametrized gate lists.

A rotation angle is ``angle + scale * theta[slot]`` when the gate has a slot,
and ``angle`` otherwise. Ansatz builders use ``scale`` to tie several
rotations to one variational parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

ONE_QUBIT = {"H", "X", "RX", "RY", "RZ"}
TWO_QUBIT = {"CX", "CZ", "CRY"}
ROTATIONS = {"RX", "RY", "RZ", "CRY"}
# CX-equivalent cost used for gate counting
CX_WEIGHT = {"CX": 1, "CZ": 1, "CRY": 2}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float = 0.0
    slot: int | None = None
    scale: float = 1.0

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if kind not in ONE_QUBIT | TWO_QUBIT:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        need = 1 if kind in ONE_QUBIT else 2
        if len(self.qubits) != need:
            raise ValueError(f"{kind} acts on {need} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {kind}{self.qubits}")
        if self.slot is not None and kind not in ROTATIONS:
            raise ValueError(f"{kind} takes no parameter")

    def resolved_angle(self, theta: Sequence[float] | None = None) -> float:
        if self.slot is None:
            return self.angle
        if theta is None:
            raise ValueError("unbound parameter slot")
        return self.angle + self.scale * float(theta[self.slot])

    def text(self) -> str:
        parts = [self.kind] + [str(q) for q in self.qubits]
        if self.slot is not None:
            s = f"t{self.slot}"
            if self.scale != 1.0:
                s += f"*{self.scale:.12g}"
            if self.angle:
                s += f"{self.angle:+.12g}"
            parts.append(s)
        elif self.kind in ROTATIONS:
            parts.append(f"={self.angle:.12g}")
        return " ".join(parts)


class Circuit:
    def __init__(self, width: int, gates: Iterable[Gate] = (), n_params: int = 0):
        self.width = int(width)
        self.gates: list[Gate] = []
        self.n_params = int(n_params)
        for g in gates:
            self.append(g)

    def append(self, g: Gate) -> "Circuit":
        if any(not 0 <= q < self.width for q in g.qubits):
            raise ValueError(f"gate {g.text()} outside width {self.width}")
        if g.slot is not None:
            if g.slot < 0:
                raise ValueError("negative parameter slot")
            self.n_params = max(self.n_params, g.slot + 1)
        self.gates.append(g)
        return self

    def add(self, kind: str, *qubits: int, angle: float = 0.0, slot: int | None = None,
            scale: float = 1.0) -> "Circuit":
        return self.append(Gate(kind, tuple(qubits), angle, slot, scale))

    def extend(self, other: "Circuit", slot_offset: int = 0) -> "Circuit":
        """Append ``other``'s gates, shifting its parameter slots."""
        if other.width > self.width:
            raise ValueError("cannot extend with a wider circuit")
        for g in other.gates:
            if g.slot is not None:
                g = replace(g, slot=g.slot + slot_offset)
            self.append(g)
        self.n_params = max(self.n_params, other.n_params + slot_offset)
        return self

    def copy(self) -> "Circuit":
        return Circuit(self.width, list(self.gates), self.n_params)

    def bind(self, theta: Sequence[float]) -> "Circuit":
        theta = np.asarray(theta, dtype=float).ravel()
        if theta.size != self.n_params:
            raise ValueError(f"expected {self.n_params} parameters, got {theta.size}")
        out = Circuit(self.width)
        for g in self.gates:
            if g.slot is None:
                out.append(g)
            else:
                out.append(Gate(g.kind, g.qubits, g.resolved_angle(theta)))
        return out

    @property
    def is_bound(self) -> bool:
        return all(g.slot is None for g in self.gates)

    def count(self, kind: str) -> int:
        kind = kind.upper()
        return sum(1 for g in self.gates if g.kind == kind)

    def dump(self) -> str:
        """Line-per-gate text: ``GATE q0 [q1] [slot]``."""
        return "\n".join(g.text() for g in self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __repr__(self) -> str:
        return f"Circuit(width={self.width}, n_gates={len(self.gates)}, n_params={self.n_params})"


def count_cx(c: Circuit) -> int:
    """CX-equivalent two-qubit gate count (CZ counts 1, CRy counts 2)."""
    return sum(CX_WEIGHT.get(g.kind, 0) for g in c.gates)

