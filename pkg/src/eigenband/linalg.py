"""Dense complex linear algebra used by every other module.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``.
The Hermitian eigensolver is a cyclic complex Jacobi iteration with a
canonicalisation pass so that repeated calls on the same input return
bitwise-identical results, including inside degenerate eigenspaces.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from typing import Callable, NamedTuple, TextIO

import numpy as np

from .errors import DimensionMismatch, NonHermitian, NonSquare


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    unitary: float = 1e-10
    eigen_residual: float = 1e-9
    norm: float = 1e-10
    orthonormal: float = 1e-8
    phase_exact: float = 1e-9


TOL = Tolerances()

_JACOBI_MAX_SWEEPS = 60


class EigenDecomposition(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def adjoint(m) -> np.ndarray:
    return np.conj(np.asarray(m, dtype=np.complex128)).T


def matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape[-1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(*factors) -> np.ndarray:
    """Tensor product, leftmost factor is the most significant register."""
    if not factors:
        raise DimensionMismatch("kron needs at least one factor")
    out = np.asarray(factors[0], dtype=np.complex128)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=np.complex128))
    return out


def _scale(m: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0


def is_square(m) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1]


def is_hermitian(m, tol: float = TOL.hermitian) -> bool:
    m = np.asarray(m, dtype=np.complex128)
    if not is_square(m):
        return False
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol * _scale(m))


def check_hermitian(m, tol: float = TOL.hermitian) -> np.ndarray:
    m = as_matrix(m)
    if not is_square(m):
        raise NonSquare(f"matrix of shape {m.shape} is not square")
    if not is_hermitian(m, tol):
        err = float(np.max(np.abs(m - m.conj().T)))
        raise NonHermitian(f"max |M - M^H| = {err:.3e} exceeds {tol:g}")
    return m


def is_unitary(u, tol: float = TOL.unitary) -> bool:
    u = np.asarray(u, dtype=np.complex128)
    if not is_square(u):
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])), initial=0.0) <= tol)


def norm_check(v, tol: float = TOL.norm) -> bool:
    """True when ``v`` has unit Euclidean norm within ``tol``."""
    return abs(float(np.linalg.norm(np.asarray(v))) - 1.0) <= tol


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return a.diagonal().real.copy(), v
    frob = float(np.linalg.norm(a))
    if frob == 0.0:
        return np.zeros(n), v
    eps = np.finfo(float).eps
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(a - np.diag(a.diagonal())))
        if off <= eps * frob:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= eps * 1e-3 * frob:
                    continue
                app, aqq = a[p, p].real, a[q, q].real
                phase = apq / r
                tau = (aqq - app) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # D R with D = diag(1, conj(phase)) makes the pivot real first.
                rot = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ rot
    return a.diagonal().real.copy(), v


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    # Anchor on the first entry that is not small relative to the largest.
    mags = np.abs(vec)
    k = int(np.argmax(mags >= 0.5 * mags.max()))
    return vec * (np.conj(vec[k]) / mags[k])


def _canonical_cluster(block: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(block) built by Gram-Schmidt on projected e_k."""
    dim, size = block.shape
    proj = block @ block.conj().T
    basis: list[np.ndarray] = []
    for k in range(dim):
        w = proj[:, k].copy()
        for b in basis:
            w -= (b.conj() @ w) * b
        nrm = np.linalg.norm(w)
        if nrm > 1e-6:
            w = w / nrm
            # second pass against loss of orthogonality
            for b in basis:
                w -= (b.conj() @ w) * b
            basis.append(w / np.linalg.norm(w))
            if len(basis) == size:
                break
    return np.column_stack(basis)


def hermitian_eig(h) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    Eigenvalues are returned in ascending order with orthonormal
    eigenvectors as columns. Each non-degenerate eigenvector is phase-fixed
    so that its first dominant entry is real and positive; a degenerate
    eigenspace is spanned by the Gram-Schmidt sequence of the projected
    standard basis vectors, taken in index order.
    """
    h = check_hermitian(h)
    h = 0.5 * (h + h.conj().T)
    values, vectors = _jacobi(h)
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]

    tol = TOL.eigen_residual * _scale(h)
    out = np.empty_like(vectors)
    start = 0
    n = len(values)
    while start < n:
        stop = start + 1
        while stop < n and values[stop] - values[stop - 1] <= tol:
            stop += 1
        if stop - start == 1:
            out[:, start] = _fix_phase(vectors[:, start])
        else:
            out[:, start:stop] = _canonical_cluster(vectors[:, start:stop])
            values[start:stop] = values[start:stop].mean()
        start = stop
    return EigenDecomposition(values, out)


def spectral_function(
    h, f: Callable[[float], complex], eig: EigenDecomposition | None = None
) -> np.ndarray:
    """Return ``V diag(f(lambda)) V^H`` for Hermitian ``h``.

    ``eig`` may be passed to reuse an existing decomposition of ``h``.
    """
    if eig is None:
        eig = hermitian_eig(h)
    fv = np.array([f(float(x)) for x in eig.values], dtype=np.complex128)
    return (eig.vectors * fv) @ eig.vectors.conj().T


def evolution_operator(h, eig: EigenDecomposition | None = None) -> np.ndarray:
    """U = exp(i 2 pi H)."""
    return spectral_function(h, lambda x: np.exp(2j * np.pi * x), eig)


def matrix_power(u, power: int) -> np.ndarray:
    """Integer power of a square matrix by repeated squaring."""
    u = as_matrix(u)
    if not is_square(u):
        raise NonSquare(f"matrix of shape {u.shape} is not square")
    if power < 0:
        raise ValueError("negative powers are not supported")
    result = np.eye(u.shape[0], dtype=np.complex128)
    base = u
    while power:
        if power & 1:
            result = result @ base
        power >>= 1
        if power:
            base = base @ base
    return result


# -- matrix text format -------------------------------------------------------
# line 1: "rows cols"; then rows*cols lines of "re im", row-major.


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"header must be 'rows cols', got {lines[0]!r}")
    try:
        rows, cols = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ValueError(f"bad header {lines[0]!r}") from exc
    if rows < 1 or cols < 1:
        raise ValueError(f"bad dimensions {rows}x{cols}")
    body = lines[1:]
    if len(body) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, found {len(body)}")
    entries = np.empty(rows * cols, dtype=np.complex128)
    for i, ln in enumerate(body):
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"entry {i}: expected 're im', got {ln!r}")
        try:
            entries[i] = complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise ValueError(f"entry {i}: cannot parse {ln!r}") from exc
    if not np.all(np.isfinite(entries)):
        raise ValueError("matrix contains non-finite entries")
    return entries.reshape(rows, cols)


def read_matrix(source: str | os.PathLike | TextIO) -> np.ndarray:
    if hasattr(source, "read"):
        return parse_matrix(source.read())
    with open(source, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def format_matrix(m) -> str:
    m = as_matrix(m)
    buf = io.StringIO()
    buf.write(f"{m.shape[0]} {m.shape[1]}\n")
    for z in m.ravel():
        buf.write(f"{float(z.real)!r} {float(z.imag)!r}\n")
    return buf.getvalue()


def write_matrix(m, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(m))
