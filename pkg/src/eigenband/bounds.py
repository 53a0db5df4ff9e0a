"""Gershgorin localisation of the spectrum and band suggestions.

Every eigenvalue of a square matrix lies in the union of its discs; a
connected group of k discs that touches no other disc holds exactly k
eigenvalues. For Hermitian input the centres are real, so each group has
a real hull [lo, hi] usable as an amplification band.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amplify import EigenBand
from .errors import HullOutOfRange, NonSquare
from .linalg import as_matrix, check_hermitian, is_square

_SLACK = 1e-12


@dataclass(frozen=True)
class GershgorinDisc:
    center: complex
    radius: float
    row: int

    @property
    def interval(self) -> tuple[float, float]:
        return self.center.real - self.radius, self.center.real + self.radius

    def contains(self, z: complex, slack: float = _SLACK) -> bool:
        return abs(z - self.center) <= self.radius + slack

    def intersects(self, other: "GershgorinDisc") -> bool:
        return abs(self.center - other.center) <= self.radius + other.radius


@dataclass(frozen=True)
class DiscCluster:
    discs: tuple[int, ...]
    lo: float
    hi: float

    @property
    def guaranteed_count(self) -> int:
        return len(self.discs)

    def contains(self, x: float, slack: float = _SLACK) -> bool:
        return self.lo - slack <= x <= self.hi + slack


def gershgorin_discs(h, mode: str = "rows") -> list[GershgorinDisc]:
    m = as_matrix(h)
    if not is_square(m):
        raise NonSquare(f"matrix of shape {m.shape} is not square")
    if mode == "columns":
        m = m.T
    elif mode != "rows":
        raise ValueError(f"mode must be 'rows' or 'columns', got {mode!r}")
    absm = np.abs(m)
    radii = absm.sum(axis=1) - np.abs(np.diagonal(m))
    return [GershgorinDisc(complex(m[i, i]), float(max(radii[i], 0.0)), i) for i in range(m.shape[0])]


def cluster_discs(discs: list[GershgorinDisc]) -> list[DiscCluster]:
    """Connected components of the disc-overlap graph, ordered by hull."""
    parent = list(range(len(discs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(discs)):
        for j in range(i + 1, len(discs)):
            if discs[i].intersects(discs[j]):
                parent[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(len(discs)):
        groups.setdefault(find(i), []).append(i)
    clusters = []
    for members in groups.values():
        lo = min(discs[i].interval[0] for i in members)
        hi = max(discs[i].interval[1] for i in members)
        clusters.append(DiscCluster(tuple(discs[i].row for i in members), lo, hi))
    return sorted(clusters, key=lambda c: (c.lo, c.hi))


def disc_union_contains(discs: list[GershgorinDisc], z: complex, slack: float = _SLACK) -> bool:
    return any(d.contains(z, slack) for d in discs)


def column_sum_bounds(h) -> tuple[float, float]:
    """(min, max) column sums of |h|.

    For a matrix with nonnegative entries the largest eigenvalue lies
    between these two numbers.
    """
    m = np.abs(as_matrix(h))
    sums = m.sum(axis=0)
    return float(sums.min()), float(sums.max())


def rescale_parameters(lo: float, hi: float) -> tuple[float, float]:
    """(shift, scale) mapping [lo, hi] onto [0, 1] via x -> (x - shift) / scale."""
    width = hi - lo
    return lo, width if width > 0 else 1.0


def spectral_hull(h) -> tuple[float, float]:
    discs = gershgorin_discs(check_hermitian(h))
    return min(d.interval[0] for d in discs), max(d.interval[1] for d in discs)


def suggest_band(h, m: int, target="top", clip: bool = False, zero_phase_as_one: bool = True) -> EigenBand:
    """Band covering one Gershgorin cluster of Hermitian ``h``.

    ``target`` is ``"top"`` (the highest cluster) or an ``(a, b)`` hint, in
    which case every cluster meeting the hint is merged. The disc hull must
    lie inside [0, 1] unless ``clip`` is set, which is only sound when the
    spectrum is already known to lie in [0, 1].
    """
    h = check_hermitian(h)
    lo, hi = spectral_hull(h)
    if not clip and (lo < -_SLACK or hi > 1.0 + _SLACK):
        raise HullOutOfRange((lo, hi), rescale_parameters(lo, hi))
    clusters = cluster_discs(gershgorin_discs(h))
    if isinstance(target, str):
        if target != "top":
            raise ValueError(f"unknown target {target!r}")
        chosen = [clusters[-1]]
    else:
        a, b = target
        chosen = [c for c in clusters if c.hi >= a and c.lo <= b]
        if not chosen:
            raise ValueError(f"no Gershgorin cluster meets [{a}, {b}]")
    band_lo = max(0.0, min(c.lo for c in chosen))
    band_hi = min(1.0, max(c.hi for c in chosen))
    if band_lo > band_hi:
        raise HullOutOfRange((lo, hi), rescale_parameters(lo, hi))
    return EigenBand(band_lo, band_hi, m, zero_phase_as_one)
