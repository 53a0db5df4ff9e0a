"""Regression suite for the built-in 4x4 example.

Printed overlap masses are compared at 1e-3 (they carry four decimals);
simulator-versus-closed-form comparisons use 1e-9.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import oracle
from .amplify import EigenBand, Trajectory, run_amplification
from .pea import PeaConfig, eigenvalue_to_index, run_pea
from .statevector import PHASE, measure_distribution

PRINTED_TOL = 1e-3
SIM_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def first_peak(p_good: np.ndarray) -> int:
    """Index of the first local maximum (the end of the first rise)."""
    for k in range(len(p_good) - 1):
        if p_good[k + 1] < p_good[k]:
            return k
    return len(p_good) - 1


def non_monotone_after(p_good: np.ndarray, start: int) -> bool:
    d = np.diff(p_good[start:])
    return bool(np.any(d > 0) and np.any(d < 0))


def run_suite(out_dir: str | os.PathLike | None = None) -> tuple[list[Check], dict[str, Trajectory]]:
    op = oracle.builtin_operator()
    cfg = PeaConfig.create(op, 2)
    checks: list[Check] = []
    trajectories: dict[str, Trajectory] = {}

    dist = measure_distribution(run_pea(cfg), PHASE).probabilities
    for lam, printed in zip(oracle.BUILTIN_EIGENVALUES, oracle.BUILTIN_MASSES):
        idx = eigenvalue_to_index(lam, cfg.m)
        got = dist[idx]
        checks.append(
            Check(
                f"mass[lambda={lam:g}]",
                abs(got - printed) <= PRINTED_TOL,
                f"index {idx}: {got:.6f} vs printed {printed:.4f}",
            )
        )
    single = EigenBand(1.0, 1.0, 2)
    pred = oracle.predict(cfg, single)
    err = float(np.max(np.abs(dist - pred.index_mass)))
    checks.append(Check("mass vs oracle", err <= SIM_TOL, f"max deviation {err:.2e}"))

    single_traj = run_amplification(cfg, single, 8, "householder")
    trajectories["single_mark"] = single_traj
    checks.append(Check("single-mark peak", single_traj.peak() == 3, f"argmax_k P_good over k<=8 is {single_traj.peak()}"))
    err = float(np.max(np.abs(single_traj.p_good - pred.trajectory(8))))
    checks.append(Check("single-mark analytic", err <= SIM_TOL, f"max |P_good - sin^2((2k+1)theta)| = {err:.2e}"))

    double = EigenBand(0.75, 1.0, 2)
    pred2 = oracle.predict(cfg, double)
    diag = run_amplification(cfg, double, 8, "diagonal")
    house = run_amplification(cfg, double, 8, "householder")
    trajectories["two_mark_diagonal"] = diag
    trajectories["two_mark_householder"] = house
    printed_sum = oracle.BUILTIN_MASSES[0] + oracle.BUILTIN_MASSES[3]
    p0 = diag.p_good[0]
    checks.append(
        Check("two-mark initial", abs(p0 - printed_sum) <= PRINTED_TOL, f"P_good(0) = {p0:.6f} vs {printed_sum:.4f}")
    )
    err = float(np.max(np.abs(diag.p_good - pred2.trajectory(8))))
    checks.append(Check("two-mark diagonal analytic", err <= SIM_TOL, f"max deviation {err:.2e}"))
    checks.append(
        Check(
            "two-mark householder (recorded)",
            True,
            f"first peak k={first_peak(house.p_good)} P_good={house.p_good[first_peak(house.p_good)]:.4f}; "
            f"diagonal first peak k={first_peak(diag.p_good)} P_good={diag.p_good[first_peak(diag.p_good)]:.4f}",
        )
    )

    long_traj = run_amplification(cfg, single, 30, "householder")
    trajectories["long_oscillation"] = long_traj
    peak = first_peak(long_traj.p_good)
    checks.append(
        Check(
            "long-run oscillation",
            peak > 0 and non_monotone_after(long_traj.p_good, peak),
            f"rises to k={peak}, non-monotone afterwards over k<=30",
        )
    )

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, traj in trajectories.items():
            traj.write_csv(out / f"{name}.csv")
    return checks, trajectories
