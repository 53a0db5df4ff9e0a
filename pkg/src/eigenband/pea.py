"""Phase estimation with an equal-superposition eigenvector register.

Starting from |0>|0>, the pipeline is

    psi1 = (QFT x H^n) psi0
    psi2 = CU^(2^(m-1)) ... CU^(2^0) psi1      (U = exp(i 2 pi H))
    psi3 = (QFT^H x I) psi2

which leaves sum_j conj(alpha_j) |index(lambda_j)> |phi_j> when every
eigenvalue is an exact m-bit binary fraction.
"""

from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DimensionCapExceeded,
    DimensionMismatch,
    InexactPhase,
    PhaseAliasing,
    ValueOutOfRange,
)
from .linalg import (
    TOL,
    EigenDecomposition,
    check_hermitian,
    evolution_operator,
    hermitian_eig,
    matrix_power,
)
from .statevector import (
    PHASE,
    VECTOR,
    RegisterLayout,
    StateVector,
    _apply_controlled,
    _apply_register,
    apply_controlled_power,
    apply_to_register,
    hadamard,
    init_zero,
    qft,
)


class HermitianOperator:
    """Hermitian matrix with eigenvalues in [0, 1] and its cached spectrum."""

    def __init__(self, matrix, eig: EigenDecomposition | None = None):
        m = check_hermitian(matrix)
        dim = m.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise DimensionMismatch(f"operator dimension {dim} is not a power of two >= 2")
        self._matrix = 0.5 * (m + m.conj().T)
        self._matrix.flags.writeable = False
        self._eig = eig if eig is not None else hermitian_eig(self._matrix)
        lo, hi = float(self._eig.values[0]), float(self._eig.values[-1])
        if lo < -TOL.eigen_residual or hi > 1.0 + TOL.eigen_residual:
            raise ValueOutOfRange(
                f"eigenvalues span [{lo:.6g}, {hi:.6g}]; rescale H into [0, 1] first"
            )

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def eig(self) -> EigenDecomposition:
        return self._eig

    @property
    def values(self) -> np.ndarray:
        return self._eig.values

    @property
    def vectors(self) -> np.ndarray:
        return self._eig.vectors

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def n(self) -> int:
        return self.dim.bit_length() - 1

    @cached_property
    def unitary(self) -> np.ndarray:
        u = evolution_operator(self._matrix, self._eig)
        u.flags.writeable = False
        return u

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim}, values={np.round(self.values, 6).tolist()})"


@dataclass(frozen=True, eq=False)
class PeaConfig:
    layout: RegisterLayout
    operator: HermitianOperator
    zero_phase_as_one: bool = True

    def __post_init__(self):
        if self.operator.dim != self.layout.dim2:
            raise DimensionMismatch(
                f"operator dimension {self.operator.dim} != 2^n = {self.layout.dim2}"
            )
        object.__setattr__(self, "_lock", threading.Lock())
        object.__setattr__(self, "_u_pea", None)

    @classmethod
    def create(cls, operator: HermitianOperator, m: int, zero_phase_as_one: bool = True, **kw):
        return cls(RegisterLayout(m, operator.n, **kw), operator, zero_phase_as_one)

    @property
    def m(self) -> int:
        return self.layout.m

    @property
    def n(self) -> int:
        return self.layout.n


def eigenvalue_to_index(lam: float, m: int, zero_phase_as_one: bool = True, warn: bool = True) -> int:
    """Phase-register index holding eigenvalue ``lam``: round(lam 2^m) mod 2^m."""
    if not -TOL.phase_exact <= lam <= 1.0 + TOL.phase_exact:
        raise ValueOutOfRange(f"eigenvalue {lam} outside [0, 1]")
    scaled = lam * 2**m
    idx = int(round(scaled))
    if warn and abs(scaled - idx) > TOL.phase_exact:
        warnings.warn(f"eigenvalue {lam!r} is not a multiple of 2^-{m}", InexactPhase, stacklevel=2)
    return idx % 2**m


def index_to_value(index: int, m: int, zero_phase_as_one: bool = True) -> float:
    """Eigenvalue read off phase-register ``index``; index 0 reads 1 by default."""
    if index == 0 and zero_phase_as_one:
        return 1.0
    return index / 2**m


def phase_table(m: int, zero_phase_as_one: bool = True) -> list[tuple[str, float]]:
    """(bitstring, value) for every phase-register basis state."""
    return [(format(i, f"0{m}b"), index_to_value(i, m, zero_phase_as_one)) for i in range(2**m)]


def inexact_eigenvalues(op: HermitianOperator, m: int) -> list[float]:
    scaled = op.values * 2**m
    return [float(v) for v, s in zip(op.values, scaled) if abs(s - round(s)) > TOL.phase_exact]


def alpha_overlaps(op: HermitianOperator) -> np.ndarray:
    """Normalised entry sums of each eigenvector, alpha_j = sum_k phi_j[k] / sqrt(2^n).

    For complex eigenvectors the amplitude actually carried by |phi_j> in
    the phase-estimation output is ``conj(alpha_j)``; magnitudes agree.
    """
    return op.vectors.sum(axis=0) / np.sqrt(op.dim)


def _warn_phases(cfg: PeaConfig) -> None:
    bad = inexact_eigenvalues(cfg.operator, cfg.m)
    if bad:
        warnings.warn(
            f"eigenvalues not representable in {cfg.m} bits (spectral leakage): {bad}",
            InexactPhase,
            stacklevel=3,
        )
    vals = cfg.operator.values
    edge = 0.0 if cfg.zero_phase_as_one else 1.0
    if np.any(np.abs(vals - edge) <= TOL.phase_exact):
        reading = "1" if cfg.zero_phase_as_one else "0"
        warnings.warn(
            f"an eigenvalue equals {edge:g} but phase index 0 reads as {reading}",
            PhaseAliasing,
            stacklevel=3,
        )


def pea_steps(cfg: PeaConfig) -> list[StateVector]:
    """[psi0, psi1, psi2, psi3] computed gate by gate."""
    m, n = cfg.m, cfg.n
    psi0 = init_zero(cfg.layout)
    psi1 = apply_to_register(psi0, qft(m, cfg.layout.cap), PHASE)
    psi1 = apply_to_register(psi1, hadamard(n), VECTOR)
    psi2 = psi1
    u = cfg.operator.unitary
    for k in range(m):
        # weight-2^k bit of the phase index is qubit m-1-k
        psi2 = apply_controlled_power(psi2, u, m - 1 - k, 2**k)
    psi3 = apply_to_register(psi2, qft(m, cfg.layout.cap).conj().T, PHASE)
    return [psi0, psi1, psi2, psi3]


def run_pea(cfg: PeaConfig) -> StateVector:
    _warn_phases(cfg)
    return pea_steps(cfg)[-1]


def build_u_pea(cfg: PeaConfig) -> np.ndarray:
    """Dense U_PEA = (QFT^H x I) CU^(2^(m-1)) ... CU^(2^0) (QFT x H^n).

    Built once per config and cached; the returned array is read-only.
    """
    with cfg._lock:
        if cfg._u_pea is not None:
            return cfg._u_pea
        layout = cfg.layout
        if layout.dim * layout.dim > layout.cap:
            raise DimensionCapExceeded(
                f"dense {layout.dim}x{layout.dim} U_PEA exceeds cap {layout.cap} entries"
            )
        m, d1, d2 = layout.m, layout.dim1, layout.dim2
        t = np.eye(layout.dim, dtype=np.complex128).reshape(d1, d2, layout.dim)
        t = _apply_register(t, qft(m, layout.cap), PHASE)
        t = _apply_register(t, hadamard(layout.n), VECTOR)
        u = cfg.operator.unitary
        for k in range(m):
            t = _apply_controlled(t, matrix_power(u, 2**k), m, m - 1 - k)
        t = _apply_register(t, qft(m, layout.cap).conj().T, PHASE)
        out = t.reshape(layout.dim, layout.dim)
        out.flags.writeable = False
        object.__setattr__(cfg, "_u_pea", out)
        return out


def register_masses(cfg: PeaConfig) -> dict[int, float]:
    """|alpha_j|^2 summed per phase index (exact-phase reading)."""
    masses: dict[int, float] = {}
    for lam, a in zip(cfg.operator.values, alpha_overlaps(cfg.operator)):
        idx = eigenvalue_to_index(float(lam), cfg.m, cfg.zero_phase_as_one, warn=False)
        masses[idx] = masses.get(idx, 0.0) + float(abs(a) ** 2)
    return masses
