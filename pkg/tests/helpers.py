"""Shared generators for the test-suite."""

import numpy as np
from eigenband.oracle import haar_unitary

# filled by test_acceptance, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def random_hermitian(dim, rng, scale=1.0):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (a + a.conj().T) / 2


def random_unitary(dim, rng):
    return haar_unitary(dim, rng)


def diag_dominant_hermitian(dim, rng):
    """Hermitian matrix whose Gershgorin discs fall into well separated groups."""
    n_groups = int(rng.integers(1, min(dim, 5) + 1))
    centers = np.sort(rng.choice(np.arange(n_groups * 3), size=n_groups, replace=False)).astype(float)
    labels = np.sort(rng.integers(0, n_groups, size=dim))
    diag = centers[labels] + rng.uniform(-0.1, 0.1, size=dim)
    off = random_hermitian(dim, rng)
    np.fill_diagonal(off, 0)
    # keep every radius below 0.3 so groups 3 apart never touch
    rows = np.abs(off).sum(axis=1)
    off *= 0.3 / max(rows.max(), 1e-12) * rng.uniform(0.2, 1.0)
    return np.diag(diag) + off
