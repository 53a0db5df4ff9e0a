"""Search for a band eigenvector without knowing its overlap in advance.

Each attempt re-prepares the phase-estimation output, applies the iterate
some number of times and measures the phase register. A result whose
index lies in the band ends the search; otherwise another attempt is made
until the budget of iterate applications (``cutoff``) is used up.

Schedules
---------
``single``
    one application of Q per attempt.
``incremental``
    attempt j (1-based) applies Q j times.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .amplify import EigenBand, build_uf, check_band, state_reflection
from .errors import ZeroProbabilityBranch
from .pea import PeaConfig, run_pea
from .statevector import PHASE, StateVector, measure_distribution, sample

SCHEDULES = ("single", "incremental")


@dataclass(frozen=True)
class QSearchConfig:
    cfg: PeaConfig
    band: EigenBand
    cutoff: int | None = None
    seed: int = 0
    schedule: str = "single"
    mode: str = "householder"

    def __post_init__(self):
        if self.cutoff is None:
            object.__setattr__(self, "cutoff", 2**self.cfg.m)
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")
        if self.schedule not in SCHEDULES:
            raise ValueError(f"schedule must be one of {SCHEDULES}, got {self.schedule!r}")
        check_band(self.cfg, self.band)

    def attempt_lengths(self) -> list[int]:
        """Q applications per attempt; the last one is truncated to the budget."""
        out, used, j = [], 0, 1
        while used < self.cutoff:
            k = 1 if self.schedule == "single" else j
            k = min(k, self.cutoff - used)
            out.append(k)
            used += k
            j += 1
        return out


@dataclass(frozen=True)
class Found:
    phase_index: int
    iterations: int
    attempts: int
    state: np.ndarray


@dataclass(frozen=True)
class NotFound:
    iterations: int
    attempts: int


QSearchResult = Union[Found, NotFound]


def collapse_second_register(s: StateVector, phase_index: int) -> np.ndarray:
    """Register-2 state after register 1 is found in ``phase_index``."""
    row = np.array(s.tensor[phase_index])
    nrm = np.linalg.norm(row)
    if nrm ** 2 <= 1e-15:
        raise ZeroProbabilityBranch(f"phase index {phase_index} has zero probability")
    return row / nrm


def fidelity(u, v) -> float:
    """|<u|v>|^2 for unit vectors; insensitive to global phase."""
    return float(abs(np.vdot(u, v)) ** 2)


class QSearchRunner:
    """Precomputes Q^k psi3 for every k the schedule can ask for, then samples."""

    def __init__(self, q: QSearchConfig):
        self.q = q
        self.lengths = q.attempt_lengths()
        cfg, band = q.cfg, q.band
        psi = run_pea(cfg)
        if band.marked_indices:
            uf = np.kron(build_uf(band, q.mode), np.eye(cfg.layout.dim2))
        else:
            # nothing can be marked: the search runs unamplified and must fail
            uf = np.eye(cfg.layout.dim)
        iterate = state_reflection(cfg) @ uf
        self.states = [psi]
        for _ in range(max(self.lengths)):
            self.states.append(StateVector(cfg.layout, iterate @ self.states[-1].amplitudes))

    def success_probabilities(self) -> list[float]:
        """Probability that each attempt lands in the band."""
        marked = self.q.band.sorted_indices
        out = []
        for k in self.lengths:
            p = measure_distribution(self.states[k], PHASE).probabilities
            out.append(float(p[marked].sum()) if marked else 0.0)
        return out

    def predicted_success_rate(self) -> float:
        miss = 1.0
        for p in self.success_probabilities():
            miss *= 1.0 - p
        return 1.0 - miss

    def run(self, seed: int | None = None) -> tuple[QSearchResult, int | None]:
        """One search; returns the result and the last sampled phase index."""
        rng = np.random.default_rng(self.q.seed if seed is None else seed)
        used = 0
        sampled = None
        for attempt, k in enumerate(self.lengths, start=1):
            state = self.states[k]
            used += k
            sampled = sample(state, PHASE, rng)
            if sampled in self.q.band.marked_indices:
                return Found(sampled, used, attempt, collapse_second_register(state, sampled)), sampled
        return NotFound(used, len(self.lengths)), sampled


def run_qsearch(q: QSearchConfig) -> QSearchResult:
    return QSearchRunner(q).run()[0]


def run_trials(q: QSearchConfig, trials: int) -> list[dict]:
    """Trial batch with seeds ``q.seed, q.seed + 1, ...``."""
    runner = QSearchRunner(q)
    report = []
    for t in range(trials):
        seed = q.seed + t
        result, sampled = runner.run(seed)
        report.append(
            {
                "seed": seed,
                "outcome": "found" if isinstance(result, Found) else "not_found",
                "iterations": result.iterations,
                "attempts": result.attempts,
                "sampled_index": sampled,
            }
        )
    return report
