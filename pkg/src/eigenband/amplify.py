"""Amplitude amplification of a band of phase-estimation outcomes.

The Grover iterate is ``Q = (U_PEA U0 U_PEA^H) (U_f x I)`` where ``U0 =
2|0><0| - I`` and ``U_f`` reflects the phase register about the marked
indices. Two marking reflections are available:

``householder``
    ``I - 2|i><i|`` with ``|i>`` the normalised uniform vector over the
    marked indices. For one marked index this is a sign flip; for several
    it is a genuine Householder reflection that mixes them.
``diagonal``
    ``I - 2 sum_x |x><x|``, an independent sign flip of every marked index.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .errors import DegenerateProbability, DimensionMismatch, EmptyBand, InvalidBand
from .linalg import TOL
from .pea import PeaConfig, build_u_pea, index_to_value, run_pea
from .statevector import PHASE, StateVector, measure_distribution

MODES = ("householder", "diagonal")

_BAND_SLACK = 1e-12


@dataclass(frozen=True)
class EigenBand:
    """Closed interval [a, b] of eigenvalues and the phase indices it selects."""

    a: float
    b: float
    m: int
    zero_phase_as_one: bool = True
    marked_indices: frozenset = field(init=False, compare=False)

    def __post_init__(self):
        if not (0.0 <= self.a <= self.b <= 1.0):
            raise InvalidBand(f"band [{self.a}, {self.b}] violates 0 <= a <= b <= 1")
        if self.m < 1:
            raise InvalidBand("m must be >= 1")
        values = (index_to_value(i, self.m, self.zero_phase_as_one) for i in range(2**self.m))
        marked = frozenset(i for i, v in enumerate(values) if self.contains_value(v))
        object.__setattr__(self, "marked_indices", marked)

    @classmethod
    def for_config(cls, cfg: PeaConfig, a: float, b: float) -> "EigenBand":
        return cls(a, b, cfg.m, cfg.zero_phase_as_one)

    def contains_value(self, value: float) -> bool:
        return self.a - _BAND_SLACK <= value <= self.b + _BAND_SLACK

    def __contains__(self, index: int) -> bool:
        return index in self.marked_indices

    @property
    def sorted_indices(self) -> list[int]:
        return sorted(self.marked_indices)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"marking mode must be one of {MODES}, got {mode!r}")


def marking_vector(band: EigenBand) -> np.ndarray:
    if not band.marked_indices:
        raise EmptyBand(f"no {band.m}-bit phase value lies in [{band.a}, {band.b}]")
    v = np.zeros(2**band.m, dtype=np.complex128)
    v[band.sorted_indices] = 1.0
    return v / np.linalg.norm(v)


def build_uf(band: EigenBand, mode: str = "householder") -> np.ndarray:
    """Marking reflection on the phase register."""
    _check_mode(mode)
    dim = 2**band.m
    if mode == "householder":
        i = marking_vector(band)
        return np.eye(dim, dtype=np.complex128) - 2.0 * np.outer(i, i.conj())
    if not band.marked_indices:
        raise EmptyBand(f"no {band.m}-bit phase value lies in [{band.a}, {band.b}]")
    d = np.ones(dim)
    d[band.sorted_indices] = -1.0
    return np.diag(d).astype(np.complex128)


def build_u0_perp(dim: int) -> np.ndarray:
    """2|0><0| - I."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    d = -np.ones(dim, dtype=np.complex128)
    d[0] = 1.0
    return np.diag(d)


def state_reflection(cfg: PeaConfig) -> np.ndarray:
    """U_PEA U0 U_PEA^H, the reflection about the phase-estimation output."""
    u = build_u_pea(cfg)
    return u @ build_u0_perp(u.shape[0]) @ u.conj().T


def outer_reflection(psi: StateVector) -> np.ndarray:
    """2|psi><psi| - I built from the state itself."""
    v = psi.amplitudes
    return 2.0 * np.outer(v, v.conj()) - np.eye(len(v))


def reflection_discrepancy(cfg: PeaConfig) -> float:
    """Max entrywise gap between the two forms of the state reflection."""
    return float(np.max(np.abs(outer_reflection(run_pea(cfg)) - state_reflection(cfg))))


def _lift_phase_op(cfg: PeaConfig, op: np.ndarray) -> np.ndarray:
    return np.kron(op, np.eye(cfg.layout.dim2, dtype=np.complex128))


def check_band(cfg: PeaConfig, band: EigenBand) -> None:
    if band.m != cfg.m:
        raise DimensionMismatch(f"band built for m={band.m}, config has m={cfg.m}")
    if band.zero_phase_as_one != cfg.zero_phase_as_one:
        raise ValueError("band and config disagree on the zero-phase reading")


def build_iterate(cfg: PeaConfig, band: EigenBand, mode: str = "householder") -> np.ndarray:
    """Grover iterate Q = (U_PEA U0 U_PEA^H) (U_f x I)."""
    check_band(cfg, band)
    return state_reflection(cfg) @ _lift_phase_op(cfg, build_uf(band, mode))


def marking_matches_sign_flip(cfg: PeaConfig, band: EigenBand) -> bool:
    """Whether the householder marking acts on psi3 exactly like per-index sign flips."""
    check_band(cfg, band)
    psi = run_pea(cfg).amplitudes
    h = _lift_phase_op(cfg, build_uf(band, "householder")) @ psi
    d = _lift_phase_op(cfg, build_uf(band, "diagonal")) @ psi
    return bool(np.max(np.abs(h - d)) <= 1e-10)


# -- trajectories ---------------------------------------------------------------


@dataclass(frozen=True)
class TrajectoryRecord:
    k: int
    probabilities: np.ndarray
    p_good: float

    def __eq__(self, other):
        if not isinstance(other, TrajectoryRecord):
            return NotImplemented
        return (
            self.k == other.k
            and self.p_good == other.p_good
            and np.array_equal(self.probabilities, other.probabilities)
        )


@dataclass
class Trajectory:
    records: list[TrajectoryRecord]

    @property
    def k(self) -> np.ndarray:
        return np.array([r.k for r in self.records])

    @property
    def p_good(self) -> np.ndarray:
        return np.array([r.p_good for r in self.records])

    @property
    def probabilities(self) -> np.ndarray:
        return np.vstack([r.probabilities for r in self.records])

    def peak(self) -> int:
        """Iteration count with the largest P_good (first one on ties)."""
        return int(self.k[int(np.argmax(self.p_good))])

    def __len__(self) -> int:
        return len(self.records)

    def header(self) -> list[str]:
        width = len(self.records[0].probabilities) if self.records else 0
        return ["k", *(f"p_idx{i}" for i in range(width)), "p_good"]

    def write_csv(self, dest: str | os.PathLike | TextIO) -> None:
        if hasattr(dest, "write"):
            self._write(dest)
        else:
            with open(dest, "w", newline="", encoding="utf-8") as fh:
                self._write(fh)

    def _write(self, fh: TextIO) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(self.header())
        for r in self.records:
            w.writerow([r.k, *(repr(float(p)) for p in r.probabilities), repr(float(r.p_good))])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self._write(buf)
        return buf.getvalue()

    @classmethod
    def read_csv(cls, src: str | os.PathLike | TextIO) -> "Trajectory":
        if hasattr(src, "read"):
            return cls._read(src)
        with open(src, newline="", encoding="utf-8") as fh:
            return cls._read(fh)

    @classmethod
    def from_csv(cls, text: str) -> "Trajectory":
        return cls._read(io.StringIO(text))

    @classmethod
    def _read(cls, fh: TextIO) -> "Trajectory":
        rows = list(csv.reader(fh))
        if not rows:
            raise ValueError("empty trajectory file")
        head = rows[0]
        if head[0] != "k" or head[-1] != "p_good":
            raise ValueError(f"unexpected trajectory header {head}")
        records = []
        for row in rows[1:]:
            if len(row) != len(head):
                raise ValueError(f"row has {len(row)} fields, header has {len(head)}")
            records.append(
                TrajectoryRecord(int(row[0]), np.array([float(x) for x in row[1:-1]]), float(row[-1]))
            )
        return cls(records)


def _record(k: int, state: StateVector, band: EigenBand) -> TrajectoryRecord:
    probs = measure_distribution(state, PHASE).probabilities
    return TrajectoryRecord(k, probs, float(probs[band.sorted_indices].sum()))


def amplification_states(
    cfg: PeaConfig, band: EigenBand, k_max: int, mode: str = "householder"
) -> list[StateVector]:
    """[psi3, Q psi3, ..., Q^k_max psi3]."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    q = build_iterate(cfg, band, mode)
    state = run_pea(cfg)
    states = [state]
    for _ in range(k_max):
        state = StateVector(cfg.layout, q @ state.amplitudes)
        states.append(state)
    return states


def run_amplification(
    cfg: PeaConfig, band: EigenBand, k_max: int, mode: str = "householder"
) -> Trajectory:
    states = amplification_states(cfg, band, k_max, mode)
    return Trajectory([_record(k, s, band) for k, s in enumerate(states)])


# -- iteration counts -------------------------------------------------------------


def rotation_angle(p_good: float) -> float:
    """theta with sin(theta)^2 = p_good."""
    if not 0.0 < p_good < 1.0:
        raise DegenerateProbability(f"p_good must lie in (0, 1), got {p_good}")
    return math.asin(math.sqrt(p_good))


def analytic_p_good(p_good: float, k) -> np.ndarray:
    theta = rotation_angle(p_good)
    return np.sin((2 * np.asarray(k) + 1) * theta) ** 2


def estimate_iterations(p_good: float) -> int:
    """Smallest integer k >= 0 maximising sin^2((2k+1) theta)."""
    theta = rotation_angle(p_good)
    upper = int(math.ceil(math.pi / (4 * theta))) + 1
    ks = np.arange(upper + 1)
    vals = np.sin((2 * ks + 1) * theta) ** 2
    return int(np.argmax(vals >= vals.max() - 1e-12))


def multi_mark_run_bound(masses: Iterable[float]) -> int:
    """ceil(1 / sqrt(sum |alpha_x|^2)) over the marked outcomes."""
    total = float(sum(masses))
    if not 0.0 < total < 1.0:
        raise DegenerateProbability(f"total marked mass must lie in (0, 1), got {total}")
    bound = 1.0 / math.sqrt(total)
    # guard exact reciprocal squares such as 1/sqrt(0.25) against ulp noise
    return int(math.ceil(bound - TOL.phase_exact))
