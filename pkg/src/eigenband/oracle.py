"""Closed-form predictions straight from the eigendecomposition.

Nothing here touches the statevector simulator: overlaps, per-index
masses, the joint phase-estimation output and the amplification
trajectory are all written down from (lambda_j, phi_j) alone, so agreement
with the simulator is a real cross-check.

Also hosts the built-in 4x4 test operator and random operator generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotOrthonormal, ValueOutOfRange
from .linalg import TOL, spectral_function
from .pea import HermitianOperator, PeaConfig, eigenvalue_to_index, inexact_eigenvalues

# Eigenvalues and the printed (4-decimal) eigenvector matrix of the 4x4 example;
# column j belongs to BUILTIN_EIGENVALUES[j].
BUILTIN_EIGENVALUES = (1.0, 0.25, 0.5, 0.75)
BUILTIN_EIGENVECTORS = np.array(
    [
        [-0.6330, 0.5361, -0.3094, -0.4649],
        [-0.4874, 0.0806, -0.1501, 0.8564],
        [0.0906, -0.4553, -0.8836, -0.0604],
        [0.5946, 0.7062, -0.3177, 0.2163],
    ]
)
# printed |alpha_j|^2, same column order
BUILTIN_MASSES = (0.0473, 0.1882, 0.6896, 0.0749)


@dataclass(frozen=True)
class OraclePrediction:
    alphas: np.ndarray
    eigenvalue_indices: np.ndarray
    index_mass: np.ndarray
    marked: tuple[int, ...]
    p_good: float
    theta: float
    approximate: bool = False

    def p_good_at(self, k) -> np.ndarray:
        return np.sin((2 * np.asarray(k) + 1) * self.theta) ** 2

    def trajectory(self, k_max: int) -> np.ndarray:
        return self.p_good_at(np.arange(k_max + 1))

    def index_probabilities(self, k: int) -> np.ndarray:
        """Per-index phase-register distribution after k independent-sign-flip iterations."""
        out = np.zeros_like(self.index_mass)
        good = np.zeros(len(self.index_mass), dtype=bool)
        good[list(self.marked)] = True
        angle = (2 * k + 1) * self.theta
        if self.p_good > 0:
            out[good] = self.index_mass[good] * math.sin(angle) ** 2 / self.p_good
        if self.p_good < 1:
            out[~good] = self.index_mass[~good] * math.cos(angle) ** 2 / (1 - self.p_good)
        return out

    def peak_iteration(self, k_max: int | None = None) -> int:
        if k_max is None:
            k_max = int(math.ceil(math.pi / (4 * self.theta))) + 1 if self.theta > 0 else 0
        traj = self.trajectory(k_max)
        return int(np.argmax(traj >= traj.max() - 1e-12))


def overlaps(op: HermitianOperator) -> np.ndarray:
    """<s|phi_j>^* with s the uniform vector, i.e. sum_k phi_j[k] / sqrt(N)."""
    s = np.full(op.dim, 1.0 / math.sqrt(op.dim))
    return op.vectors.T @ s


def eigenvalue_indices(cfg: PeaConfig) -> np.ndarray:
    return np.array(
        [eigenvalue_to_index(float(v), cfg.m, cfg.zero_phase_as_one, warn=False) for v in cfg.operator.values]
    )


def predict(cfg: PeaConfig, band) -> OraclePrediction:
    """Overlaps, per-index masses and rotation angle for ``band`` (an EigenBand)."""
    alphas = overlaps(cfg.operator)
    idx = eigenvalue_indices(cfg)
    mass = np.zeros(2**cfg.m)
    np.add.at(mass, idx, np.abs(alphas) ** 2)
    marked = tuple(sorted(band.marked_indices))
    p_good = float(mass[list(marked)].sum()) if marked else 0.0
    theta = math.asin(math.sqrt(min(max(p_good, 0.0), 1.0)))
    return OraclePrediction(
        alphas=alphas,
        eigenvalue_indices=idx,
        index_mass=mass,
        marked=marked,
        p_good=p_good,
        theta=theta,
        approximate=bool(inexact_eigenvalues(cfg.operator, cfg.m)),
    )


def psi3(cfg: PeaConfig) -> np.ndarray:
    """Exact-phase output sum_j <phi_j|s> |index_j>|phi_j> as a flat joint vector."""
    op = cfg.operator
    coeff = np.conj(overlaps(op))
    t = np.zeros((2**cfg.m, op.dim), dtype=np.complex128)
    for j, i1 in enumerate(eigenvalue_indices(cfg)):
        t[i1] += coeff[j] * op.vectors[:, j]
    return t.reshape(-1)


def good_bad_states(cfg: PeaConfig, band) -> tuple[np.ndarray, np.ndarray]:
    """Normalised good and bad components of ``psi3`` (zero vector if empty)."""
    v = psi3(cfg).reshape(2**cfg.m, -1)
    good = np.zeros_like(v)
    rows = sorted(band.marked_indices)
    good[rows] = v[rows]
    bad = v - good
    out = []
    for part in (good, bad):
        nrm = np.linalg.norm(part)
        out.append(part.reshape(-1) / nrm if nrm > 0 else part.reshape(-1))
    return out[0], out[1]


# -- operator construction ----------------------------------------------------------


def nearest_orthonormal(vectors) -> np.ndarray:
    """Polar factor V (V^H V)^(-1/2): the closest matrix with orthonormal columns."""
    v = np.asarray(vectors, dtype=np.complex128)
    gram = v.conj().T @ v
    return v @ spectral_function(gram, lambda x: x**-0.5)


def assemble_operator(values, vectors) -> HermitianOperator:
    """H = V diag(values) V^H."""
    v = np.asarray(vectors, dtype=np.complex128)
    vals = np.asarray(values, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] != vals.shape[0]:
        raise NotOrthonormal(f"need a square basis matching {vals.shape[0]} values, got {v.shape}")
    err = float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[0]))))
    if err > TOL.orthonormal:
        raise NotOrthonormal(f"basis deviates from orthonormal by {err:.3e}")
    if np.any(vals < 0.0) or np.any(vals > 1.0):
        raise ValueOutOfRange(f"eigenvalues must lie in [0, 1], got {vals.tolist()}")
    h = (v * vals) @ v.conj().T
    return HermitianOperator(0.5 * (h + h.conj().T))


@lru_cache(maxsize=1)
def builtin_basis() -> np.ndarray:
    """Printed 4x4 eigenvector matrix, orthonormalised (moves entries by < 4e-5)."""
    basis = nearest_orthonormal(BUILTIN_EIGENVECTORS).real.copy()
    basis.flags.writeable = False
    return basis


@lru_cache(maxsize=1)
def builtin_operator() -> HermitianOperator:
    """The built-in ``paper4x4`` operator."""
    return assemble_operator(BUILTIN_EIGENVALUES, builtin_basis())


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_exact_phase_operator(
    n: int, m: int, rng: np.random.Generator, distinct: bool = False
) -> HermitianOperator:
    """Random-basis operator on n qubits with eigenvalues in {1, 2, ..., 2^m} / 2^m.

    Zero is excluded so that no eigenvalue aliases with 1 on phase index 0.
    """
    dim = 2**n
    grid = np.arange(1, 2**m + 1)
    if distinct:
        if dim > len(grid):
            raise ValueError("not enough distinct m-bit values for this dimension")
        ints = rng.choice(grid, size=dim, replace=False)
    else:
        ints = rng.choice(grid, size=dim)
    return assemble_operator(ints / 2**m, haar_unitary(dim, rng))
