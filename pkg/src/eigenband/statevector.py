"""Two-register statevector simulation.

The joint basis index is ``i1 * 2**n + i2`` where ``i1`` indexes the
phase register (m qubits) and ``i2`` the eigenvector register (n qubits).
Inside a register qubit 0 is the most significant bit, so a phase-register
index read as an m-bit integer ``j`` is the binary fraction ``j / 2**m``.

All register operations are implemented on the ``(2**m, 2**n, *batch)``
tensor view so the same code applies a gate to a single state or to every
column of a matrix at once (the latter is how ``pea.build_u_pea`` gets its
dense unitary).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadControlIndex, DimensionCapExceeded, DimensionMismatch, NonUnitary
from .linalg import TOL, is_unitary, matrix_power

DEFAULT_CAP = 2**20

PHASE = 1
VECTOR = 2


@dataclass(frozen=True)
class RegisterLayout:
    m: int
    n: int
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"register widths must be >= 1, got m={self.m}, n={self.n}")
        if self.dim > self.cap:
            raise DimensionCapExceeded(
                f"2^(m+n) = {self.dim} amplitudes exceeds cap {self.cap}"
            )

    @property
    def dim1(self) -> int:
        return 2**self.m

    @property
    def dim2(self) -> int:
        return 2**self.n

    @property
    def dim(self) -> int:
        return 2 ** (self.m + self.n)

    def register_dim(self, which: int) -> int:
        if which == PHASE:
            return self.dim1
        if which == VECTOR:
            return self.dim2
        raise ValueError(f"register id must be 1 or 2, got {which!r}")


@dataclass(frozen=True)
class StateVector:
    layout: RegisterLayout
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != self.layout.dim:
            raise DimensionMismatch(
                f"{amps.shape[0]} amplitudes for a layout of dimension {self.layout.dim}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def tensor(self) -> np.ndarray:
        """Read-only ``(2**m, 2**n)`` view of the amplitudes."""
        return self.amplitudes.reshape(self.layout.dim1, self.layout.dim2)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class MeasurementDistribution:
    register: int
    probabilities: np.ndarray

    def __getitem__(self, index: int) -> float:
        return float(self.probabilities[index])

    def __len__(self) -> int:
        return len(self.probabilities)


def init_zero(layout: RegisterLayout) -> StateVector:
    amps = np.zeros(layout.dim, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(layout, amps)


def hadamard(qubits: int) -> np.ndarray:
    h = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)
    out = np.ones((1, 1), dtype=np.complex128)
    for _ in range(qubits):
        out = np.kron(out, h)
    return out


def qft(m: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Dense QFT on m qubits: entry (j, k) = exp(i 2 pi j k / 2^m) / sqrt(2^m)."""
    if m < 1:
        raise ValueError("qft needs m >= 1")
    dim = 2**m
    if dim * dim > cap:
        raise DimensionCapExceeded(f"dense {dim}x{dim} QFT exceeds cap {cap}")
    jk = np.outer(np.arange(dim), np.arange(dim)) % dim
    return np.exp(2j * np.pi * jk / dim) / np.sqrt(dim)


# -- tensor kernels ------------------------------------------------------------


def _apply_register(t: np.ndarray, u: np.ndarray, which: int) -> np.ndarray:
    if which == PHASE:
        return np.tensordot(u, t, axes=(1, 0))
    if which == VECTOR:
        return np.moveaxis(np.tensordot(u, t, axes=(1, 1)), 0, 1)
    raise ValueError(f"register id must be 1 or 2, got {which!r}")


def _control_mask(m: int, control_qubit: int) -> np.ndarray:
    bit = m - 1 - control_qubit
    return ((np.arange(2**m) >> bit) & 1).astype(bool)


def _apply_controlled(t: np.ndarray, upow: np.ndarray, m: int, control_qubit: int) -> np.ndarray:
    out = t.copy()
    mask = _control_mask(m, control_qubit)
    # rows of register 1 with the control bit set get upow on register 2
    out[mask] = np.moveaxis(np.tensordot(upow, t[mask], axes=(1, 1)), 0, 1)
    return out


def _check_unitary(u: np.ndarray, dim: int) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (dim, dim):
        raise DimensionMismatch(f"operator of shape {u.shape} does not act on dimension {dim}")
    if not is_unitary(u):
        raise NonUnitary("operator is not unitary within tolerance")
    return u


# -- public operations ---------------------------------------------------------


def apply_to_register(s: StateVector, u, which: int) -> StateVector:
    """Apply ``u`` to one register, i.e. (u x I) for register 1, (I x u) for 2."""
    u = _check_unitary(u, s.layout.register_dim(which))
    return StateVector(s.layout, _apply_register(s.tensor, u, which))


def apply_controlled_power(s: StateVector, u, control_qubit: int, power: int) -> StateVector:
    """Apply u**power to register 2 where phase qubit ``control_qubit`` is 1."""
    m = s.layout.m
    if not 0 <= control_qubit < m:
        raise BadControlIndex(f"control qubit {control_qubit} outside 0..{m - 1}")
    u = _check_unitary(u, s.layout.dim2)
    upow = matrix_power(u, int(power))
    return StateVector(s.layout, _apply_controlled(s.tensor, upow, m, control_qubit))


def apply_matrix(s: StateVector, u) -> StateVector:
    """Apply a dense operator on the joint space."""
    u = _check_unitary(u, s.layout.dim)
    return StateVector(s.layout, u @ s.amplitudes)


def measure_distribution(s: StateVector, which: int) -> MeasurementDistribution:
    probs = np.abs(s.tensor) ** 2
    if which == PHASE:
        p = probs.sum(axis=1)
    elif which == VECTOR:
        p = probs.sum(axis=0)
    else:
        raise ValueError(f"register id must be 1 or 2, got {which!r}")
    total = p.sum()
    if abs(total - 1.0) > TOL.norm:
        raise ValueError(f"state is not normalised (total probability {total:.12f})")
    return MeasurementDistribution(which, p / total)


def sample(s: StateVector, which: int, rng: np.random.Generator, size: int | None = None):
    """Draw a basis index of register ``which``; ``size`` draws an array of them."""
    dist = measure_distribution(s, which)
    draw = rng.choice(len(dist.probabilities), p=dist.probabilities, size=size)
    return int(draw) if size is None else draw
