"""Statevector, density-matrix and trajectory execution of circuits.

All kernels act on the leading axis of an array whose first dimension is
``2**width``. A statevector is a 1-D array; batches of statevectors are 2-D
with one column per member.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import Circuit, Gate
from .pauli import PAULI_MATRICES, PauliString, PauliSum, qubitwise_groups

MAX_DENSITY_WIDTH = 10
_SQ2 = 1 / np.sqrt(2)


def gate_matrix(kind: str, angle: float = 0.0) -> np.ndarray:
    """2x2 matrix of a single-qubit gate, or the target block of a controlled one."""
    kind = kind.upper()
    if kind == "H":
        return np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex)
    if kind in ("X", "CX"):
        return PAULI_MATRICES["X"]
    if kind == "CZ":
        return PAULI_MATRICES["Z"]
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    if kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind in ("RY", "CRY"):
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "RZ":
        return np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex)
    raise ValueError(f"no matrix for {kind}")


def gate_unitary(g: Gate, width: int) -> np.ndarray:
    """Full ``2**width`` unitary of a bound gate (for tests and small widths)."""
    dim = 2**width
    return apply_gate(np.eye(dim, dtype=complex), g)


@lru_cache(maxsize=None)
def _pair_indices(dim: int, target: int, control: int | None) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(dim)
    mask = (idx >> target) & 1 == 0
    if control is not None:
        mask &= (idx >> control) & 1 == 1
    i0 = idx[mask]
    return i0, i0 | (1 << target)


def _apply_block(arr: np.ndarray, u: np.ndarray, target: int, control: int | None) -> np.ndarray:
    i0, i1 = _pair_indices(arr.shape[0], target, control)
    a0, a1 = arr[i0], arr[i1]
    out = arr.copy()
    out[i0] = u[0, 0] * a0 + u[0, 1] * a1
    out[i1] = u[1, 0] * a0 + u[1, 1] * a1
    return out


def apply_gate(arr: np.ndarray, g: Gate) -> np.ndarray:
    """Left-multiply ``arr`` (leading axis = basis index) by a bound gate."""
    if g.slot is not None:
        raise ValueError("gate has an unbound parameter slot")
    if g.kind in ("CX", "CZ", "CRY"):
        c, t = g.qubits
        return _apply_block(arr, gate_matrix(g.kind, g.angle), t, c)
    return _apply_block(arr, gate_matrix(g.kind, g.angle), g.qubits[0], None)


def apply_pauli(arr: np.ndarray, ps: PauliString) -> np.ndarray:
    for q, ch in enumerate(ps.ops):
        if ch != "I":
            arr = _apply_block(arr, PAULI_MATRICES[ch], q, None)
    return arr


@dataclass
class QuantumState:
    """Statevector (1-D) or density matrix (2-D) on ``width`` qubits."""

    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        dim = self.data.shape[0]
        if dim & (dim - 1) or self.data.ndim not in (1, 2):
            raise ValueError("state dimension must be a power of two")
        if self.data.ndim == 2 and self.data.shape != (dim, dim):
            raise ValueError("density matrix must be square")

    @property
    def width(self) -> int:
        return int(self.data.shape[0]).bit_length() - 1

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    @classmethod
    def zero(cls, width: int) -> "QuantumState":
        return cls.basis(width, 0)

    @classmethod
    def basis(cls, width: int, index: int) -> "QuantumState":
        v = np.zeros(2**width, dtype=complex)
        v[index] = 1
        return cls(v)

    def density(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def norm(self) -> float:
        if self.is_pure:
            return float(np.linalg.norm(self.data))
        return float(np.real(np.trace(self.data)))

    def purity(self) -> float:
        if self.is_pure:
            return 1.0
        return float(np.real(np.vdot(self.data, self.data)))


@dataclass(frozen=True)
class NoiseModel:
    """Two-qubit depolarizing channel applied after every CX; other gates are ideal."""

    p_cx: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p_cx <= 1.0:
            raise ValueError("p_cx must lie in [0, 1]")


def _bound(c: Circuit) -> Circuit:
    if not c.is_bound:
        raise ValueError("circuit has unbound parameters; call bind() first")
    return c


def _initial(c: Circuit, init: QuantumState | None) -> QuantumState:
    if init is None:
        return QuantumState.zero(c.width)
    if init.width != c.width:
        raise ValueError(f"state width {init.width} != circuit width {c.width}")
    return init


def run_statevector(c: Circuit, init: QuantumState | None = None) -> QuantumState:
    _bound(c)
    state = _initial(c, init)
    if not state.is_pure:
        raise ValueError("statevector backend needs a pure initial state")
    v = state.data
    for g in c.gates:
        v = apply_gate(v, g)
    return QuantumState(v)


class StatevectorProgram:
    """A parametrized circuit compiled for repeated statevector runs.

    Index pairs are resolved once; each run binds angles on the fly and
    updates the amplitudes in place, so no Gate objects are rebuilt.
    """

    def __init__(self, c: Circuit):
        self.width = c.width
        self.n_params = c.n_params
        dim = 2**c.width
        self._ops = []
        for g in c.gates:
            ctl = g.qubits[0] if g.kind in ("CX", "CZ", "CRY") else None
            tgt = g.qubits[-1]
            i0, i1 = _pair_indices(dim, tgt, ctl)
            if g.kind == "CX":
                self._ops.append(("swap", np.concatenate([i0, i1]), np.concatenate([i1, i0])))
            elif g.kind == "CZ":
                self._ops.append(("neg", i1, None))
            elif g.slot is None:
                self._ops.append(("fixed", (i0, i1), gate_matrix(g.kind, g.angle)))
            else:
                self._ops.append(("param", (i0, i1), (g.kind, g.angle, g.slot, g.scale)))

    def run(self, theta, init: QuantumState | None = None) -> QuantumState:
        theta = np.asarray(theta, dtype=float).ravel()
        if theta.size != self.n_params:
            raise ValueError(f"expected {self.n_params} parameters, got {theta.size}")
        v = (init.data if init is not None else QuantumState.zero(self.width).data).copy()
        for op, a, b in self._ops:
            if op == "swap":
                v[a] = v[b]
            elif op == "neg":
                v[a] *= -1
            else:
                u = b if op == "fixed" else gate_matrix(b[0], b[1] + b[3] * theta[b[2]])
                i0, i1 = a
                a0, a1 = v[i0], v[i1]
                v[i0] = u[0, 0] * a0 + u[0, 1] * a1
                v[i1] = u[1, 0] * a0 + u[1, 1] * a1
        return QuantumState(v)


def circuit_unitary(c: Circuit) -> np.ndarray:
    _bound(c)
    u = np.eye(2**c.width, dtype=complex)
    for g in c.gates:
        u = apply_gate(u, g)
    return u


def _expand_cry(c: Circuit) -> list[Gate]:
    # CRy(phi) = Ry(phi/2) CX Ry(-phi/2) CX, so the noise sees real CX gates
    out = []
    for g in c.gates:
        if g.kind == "CRY":
            ctl, tgt = g.qubits
            out += [Gate("RY", (tgt,), g.angle / 2), Gate("CX", (ctl, tgt)),
                    Gate("RY", (tgt,), -g.angle / 2), Gate("CX", (ctl, tgt))]
        else:
            out.append(g)
    return out


def _conj_apply(rho: np.ndarray, g: Gate) -> np.ndarray:
    m = apply_gate(rho, g)
    return apply_gate(m.conj().T, g).conj().T


def depolarize_pair(rho: np.ndarray, a: int, b: int, p: float) -> np.ndarray:
    """rho -> (1-p) rho + p/15 * sum over the 15 non-identity Paulis on (a, b)."""
    if p == 0:
        return rho
    twirled = _full_twirl(_full_twirl(rho, a), b)
    return (1 - 16 * p / 15) * rho + (16 * p / 15) * twirled


def _full_twirl(rho: np.ndarray, q: int) -> np.ndarray:
    # (1/4) sum_P P rho P on one qubit = Tr_q(rho) (x) I/2
    dim = rho.shape[0]
    A, B = dim >> (q + 1), 1 << q
    r = rho.reshape(A, 2, B, A, 2, B)
    d = 0.5 * (r[:, 0, :, :, 0, :] + r[:, 1, :, :, 1, :])
    out = np.zeros_like(r)
    out[:, 0, :, :, 0, :] = d
    out[:, 1, :, :, 1, :] = d
    return out.reshape(dim, dim)


def run_density(c: Circuit, init: QuantumState | None = None, noise: NoiseModel | None = None) -> QuantumState:
    _bound(c)
    if c.width > MAX_DENSITY_WIDTH:
        raise ValueError(f"density backend limited to {MAX_DENSITY_WIDTH} qubits")
    noise = noise or NoiseModel()
    rho = _initial(c, init).density().copy()
    for g in _expand_cry(c):
        rho = _conj_apply(rho, g)
        if g.kind == "CX":
            rho = depolarize_pair(rho, *g.qubits, noise.p_cx)
    return QuantumState(rho)


_PAIR_PAULIS = [(a, b) for a in "IXYZ" for b in "IXYZ"][1:]


def run_trajectories(c: Circuit, init: QuantumState | None = None, noise: NoiseModel | None = None,
                     n_traj: int = 1000, batch: int = 20000) -> QuantumState:
    """Monte Carlo unravelling of the CX depolarizing channel.

    Returns the sample-averaged density matrix. Deterministic for a fixed
    ``noise.seed``.
    """
    _bound(c)
    noise = noise or NoiseModel()
    state = _initial(c, init)
    if not state.is_pure:
        raise ValueError("trajectories need a pure initial state")
    rng = np.random.default_rng(noise.seed)
    gates = _expand_cry(c)
    dim = 2**c.width
    rho = np.zeros((dim, dim), dtype=complex)
    done = 0
    while done < n_traj:
        k = min(batch, n_traj - done)
        psi = np.repeat(state.data[:, None], k, axis=1)
        for g in gates:
            psi = apply_gate(psi, g)
            if g.kind == "CX" and noise.p_cx > 0:
                hit = rng.random(k) < noise.p_cx
                which = rng.integers(0, 15, size=k)
                for label in range(15):
                    cols = np.nonzero(hit & (which == label))[0]
                    if cols.size == 0:
                        continue
                    sub = psi[:, cols]
                    for q, ch in zip(g.qubits, _PAIR_PAULIS[label]):
                        if ch != "I":
                            sub = _apply_block(sub, PAULI_MATRICES[ch], q, None)
                    psi[:, cols] = sub
        rho += psi @ psi.conj().T
        done += k
    return QuantumState(rho / n_traj)


class DenseObservable:
    """Cached dense matrix of a PauliSum for repeated expectation values."""

    def __init__(self, obs: PauliSum):
        if not obs.is_hermitian():
            raise ValueError("observable is not hermitian")
        self.width = obs.width
        self.matrix = obs.to_matrix()

    def __call__(self, state: QuantumState) -> float:
        return _expect_matrix(self.matrix, state)


def _expect_matrix(m: np.ndarray, state: QuantumState) -> float:
    if state.is_pure:
        val = np.vdot(state.data, m @ state.data)
    else:
        val = np.sum(m.T * state.data)
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise ValueError(f"expectation has imaginary part {val.imag}")
    return float(val.real)


def expectation(obs: PauliSum | DenseObservable, state: QuantumState) -> float:
    if isinstance(obs, DenseObservable):
        return obs(state)
    if obs.width != state.width:
        raise ValueError("observable and state widths differ")
    if not obs.is_hermitian():
        raise ValueError("observable is not hermitian")
    return _expect_matrix(obs.to_matrix(), state)


def _measurement_rotation(basis: list[str]) -> list[Gate]:
    gates = []
    for q, ch in enumerate(basis):
        if ch == "X":
            gates.append(Gate("H", (q,)))
        elif ch == "Y":
            # H S^dag maps Y onto Z; S^dag = Rz(-pi/2) up to phase
            gates += [Gate("RZ", (q,), -np.pi / 2), Gate("H", (q,))]
    return gates


def estimate_energy(obs: PauliSum, c: Circuit, shots: int, seed: int = 0,
                    init: QuantumState | None = None) -> tuple[float, float]:
    """Shot-sampled estimate of ``<obs>`` with its standard error.

    Terms are grouped qubit-wise; each group gets ``shots // n_groups``
    samples (at least one) drawn in its own rotated basis.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    rng = np.random.default_rng(seed)
    psi = run_statevector(c, init).data
    const = 0.0
    terms = []
    for coeff, ps in obs.terms:
        if ps.is_identity():
            const += coeff.real
        else:
            terms.append((coeff.real, ps))
    if not terms:
        return const, 0.0
    coeff_of = {ps: cf for cf, ps in terms}
    groups = qubitwise_groups([ps for _, ps in terms])
    per_group = max(1, shots // len(groups))
    idx = np.arange(psi.size)
    mean, var = const, 0.0
    for grp in groups:
        basis = ["I"] * obs.width
        for ps in grp:
            for q, ch in enumerate(ps.ops):
                if ch != "I":
                    basis[q] = ch
        v = psi
        for g in _measurement_rotation(basis):
            v = apply_gate(v, g)
        prob = np.abs(v) ** 2
        prob /= prob.sum()
        outcomes = rng.choice(idx, size=per_group, p=prob)
        samples = np.zeros(per_group)
        for ps in grp:
            mask = 0
            for q in ps.support():
                mask |= 1 << q
            parity = np.array([bin(o & mask).count("1") & 1 for o in outcomes])
            samples += coeff_of[ps] * (1 - 2 * parity)
        mean += samples.mean()
        if per_group > 1:
            var += samples.var(ddof=1) / per_group
    return float(mean), float(np.sqrt(var))


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """``|<a|b>|^2`` for pure ``a``, ``<b|rho_a|b>`` for mixed ``a``; ``b`` pure."""
    if a.width != b.width:
        raise ValueError("state widths differ")
    if not b.is_pure:
        raise ValueError("reference state must be pure")
    if a.is_pure:
        f = abs(np.vdot(a.data, b.data)) ** 2
    else:
        f = np.real(np.vdot(b.data, a.data @ b.data))
    return float(min(1.0, max(0.0, f)))
