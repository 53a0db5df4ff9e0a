"""Command-line front end.

Exit codes: 0 ok, 1 regression failure, 2 input error, 3 empty band,
4 Gershgorin hull outside [0, 1].
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import oracle
from .amplify import MODES, EigenBand, estimate_iterations, run_amplification
from .bounds import cluster_discs, column_sum_bounds, gershgorin_discs, suggest_band
from .errors import EigenbandError, EmptyBand, HullOutOfRange
from .linalg import hermitian_eig, is_hermitian, read_matrix
from .pea import HermitianOperator, PeaConfig, alpha_overlaps, eigenvalue_to_index, index_to_value, run_pea
from .qsearch import SCHEDULES, QSearchConfig, QSearchRunner, run_trials
from .reproduce import run_suite
from .statevector import PHASE, measure_distribution

EXIT_OK, EXIT_REGRESSION, EXIT_INPUT, EXIT_EMPTY_BAND, EXIT_HULL = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _load_matrix(spec: str) -> np.ndarray:
    if spec == "paper4x4":
        return oracle.builtin_operator().matrix
    try:
        return read_matrix(spec)
    except OSError as exc:
        raise InputError(f"cannot read {spec}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"malformed matrix file {spec}: {exc}") from exc


def _load_operator(spec: str) -> HermitianOperator:
    if spec == "paper4x4":
        return oracle.builtin_operator()
    try:
        return HermitianOperator(_load_matrix(spec))
    except (EigenbandError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"{type(exc).__name__}: {exc}") from exc


def _config(args) -> PeaConfig:
    op = _load_operator(args.input)
    try:
        return PeaConfig.create(op, args.m)
    except (EigenbandError, ValueError) as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from exc


def _band(args, cfg: PeaConfig) -> EigenBand:
    try:
        a, b = (float(x) for x in args.band.split(","))
    except ValueError as exc:
        raise InputError(f"--band expects 'A,B', got {args.band!r}") from exc
    try:
        return EigenBand.for_config(cfg, a, b)
    except EigenbandError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from exc


def _alpha_rows(cfg: PeaConfig) -> list[dict]:
    rows = []
    for lam, a in zip(cfg.operator.values, alpha_overlaps(cfg.operator)):
        rows.append(
            {
                "eigenvalue": float(lam),
                "index": eigenvalue_to_index(float(lam), cfg.m, cfg.zero_phase_as_one, warn=False),
                "alpha_re": float(a.real),
                "alpha_im": float(a.imag),
                "mass": float(abs(a) ** 2),
            }
        )
    return rows


def cmd_pea(args) -> int:
    cfg = _config(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        dist = measure_distribution(run_pea(cfg), PHASE).probabilities
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    table = [
        {
            "index": i,
            "bits": format(i, f"0{cfg.m}b"),
            "value": index_to_value(i, cfg.m, cfg.zero_phase_as_one),
            "probability": float(p),
        }
        for i, p in enumerate(dist)
    ]
    alphas = _alpha_rows(cfg)
    for row in table:
        print(f"|{row['bits']}>  value={row['value']:<8g} p={row['probability']:.6f}")
    for row in alphas:
        print(f"lambda={row['eigenvalue']:.6f} index={row['index']} |alpha|^2={row['mass']:.6f}")
    if args.out:
        if args.format == "json":
            Path(args.out).write_text(json.dumps({"m": cfg.m, "distribution": table, "alphas": alphas}, indent=2))
        else:
            out = Path(args.out)
            lines = ["index,bits,value,probability"]
            lines += [f"{r['index']},{r['bits']},{r['value']!r},{r['probability']!r}" for r in table]
            out.write_text("\n".join(lines) + "\n")
            alines = ["eigenvalue,index,alpha_re,alpha_im,mass"]
            alines += [
                f"{r['eigenvalue']!r},{r['index']},{r['alpha_re']!r},{r['alpha_im']!r},{r['mass']!r}" for r in alphas
            ]
            out.with_name(out.stem + "_alphas.csv").write_text("\n".join(alines) + "\n")
    return EXIT_OK


def cmd_amplify(args) -> int:
    cfg = _config(args)
    band = _band(args, cfg)
    if not band.marked_indices:
        raise EmptyBand(f"no {cfg.m}-bit phase value lies in [{band.a}, {band.b}]")
    pred = oracle.predict(cfg, band)
    if pred.p_good <= 1e-12:
        raise EmptyBand(f"marked indices {sorted(band.marked_indices)} carry no probability")
    modes = list(MODES) if args.mode == "both" else [args.mode]
    if len(modes) > 1 and not args.out:
        raise InputError("--mode both needs --out")
    k_star = estimate_iterations(pred.p_good) if pred.p_good < 1 else 0
    print(f"marked indices {sorted(band.marked_indices)}; P_good(0) = {pred.p_good:.6f}; estimated k* = {k_star}")
    for mode in modes:
        traj = run_amplification(cfg, band, args.kmax, mode)
        k = traj.peak()
        print(f"[{mode}] max P_good = {traj.p_good.max():.6f} at k = {k}")
        if args.out and len(modes) > 1:
            out = Path(args.out)
            traj.write_csv(out.with_name(f"{out.stem}_{mode}{out.suffix or '.csv'}"))
        elif args.out:
            traj.write_csv(args.out)
        else:
            sys.stdout.write(traj.to_csv())
    return EXIT_OK


def cmd_qsearch(args) -> int:
    cfg = _config(args)
    band = _band(args, cfg)
    q = QSearchConfig(
        cfg, band, cutoff=args.cutoff, seed=args.seed, schedule=args.schedule, mode=_single_mode(args)
    )
    runner = QSearchRunner(q)
    trials = run_trials(q, args.trials)
    found = [t for t in trials if t["outcome"] == "found"]
    rate = len(found) / len(trials) if trials else 0.0
    mean_q = float(np.mean([t["iterations"] for t in trials])) if trials else 0.0
    predicted = runner.predicted_success_rate()
    print(f"success rate {rate:.4f} (predicted {predicted:.4f}) over {len(trials)} trials")
    print(f"mean Q applications {mean_q:.4f}; cutoff {q.cutoff}; schedule {q.schedule}")
    report = {
        "config": {
            "input": args.input,
            "m": cfg.m,
            "band": [band.a, band.b],
            "marked_indices": band.sorted_indices,
            "cutoff": q.cutoff,
            "seed": q.seed,
            "schedule": q.schedule,
            "mode": q.mode,
            "trials": args.trials,
        },
        "success_rate": rate,
        "predicted_success_rate": predicted,
        "mean_iterations": mean_q,
        "trials": trials,
    }
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def _single_mode(args) -> str:
    if args.mode == "both":
        raise InputError("--mode both is only valid for amplify")
    return args.mode


def cmd_bounds(args) -> int:
    h = _load_matrix(args.input)
    try:
        discs = gershgorin_discs(h)
    except EigenbandError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from exc
    spectrum = hermitian_eig(h).values if is_hermitian(h) else None
    print("discs (rows):")
    for d in discs:
        c = d.center.real if spectrum is not None else d.center
        print(f"  row {d.row}: center {c:.6g} radius {d.radius:.6g}")
    for c in cluster_discs(discs):
        line = f"cluster rows {list(c.discs)}: hull [{c.lo:.6g}, {c.hi:.6g}] holds {c.guaranteed_count} eigenvalue(s)"
        if spectrum is not None:
            inside = int(sum(c.contains(x) for x in spectrum))
            line += f"; oracle count {inside}"
        print(line)
    if spectrum is not None:
        contained = all(any(d.contains(x) for d in discs) for x in spectrum)
        print(f"oracle spectrum {np.round(spectrum, 6).tolist()} inside disc union: {contained}")
    lo, hi = column_sum_bounds(h)
    print(f"column sums of |H| span [{lo:.6g}, {hi:.6g}]")
    if spectrum is None:
        raise InputError("band suggestion needs a Hermitian matrix")
    try:
        band = suggest_band(h, args.m)
    except HullOutOfRange as exc:
        s, r = exc.rescale
        print(f"hull out of range: {exc}")
        print(f"suggested rescale: shift={s!r} scale={r!r}")
        return EXIT_HULL
    print(f"suggested band [{band.a:.6g}, {band.b:.6g}] -> marked indices {band.sorted_indices}")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    checks, _ = run_suite(args.out or "reproduce_out")
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    if failed:
        print(f"{len(failed)} regression check(s) failed", file=sys.stderr)
        return EXIT_REGRESSION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eigenband", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, band=False):
        sp.add_argument("--input", default="paper4x4", help="matrix file or 'paper4x4'")
        sp.add_argument("--m", type=int, default=2, help="phase-register qubits")
        if band:
            sp.add_argument("--band", required=True, help="closed band 'A,B' inside [0, 1]")
        sp.add_argument("--out", help="output path")

    sp = sub.add_parser("pea", help="phase-estimation output distribution")
    common(sp)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_pea)

    sp = sub.add_parser("amplify", help="amplification trajectory")
    common(sp, band=True)
    sp.add_argument("--kmax", type=int, default=8)
    sp.add_argument("--mode", choices=(*MODES, "both"), default="householder")
    sp.set_defaults(func=cmd_amplify)

    sp = sub.add_parser("qsearch", help="search without a known overlap")
    common(sp, band=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--cutoff", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--schedule", choices=SCHEDULES, default="single")
    sp.add_argument("--mode", choices=MODES, default="householder")
    sp.set_defaults(func=cmd_qsearch)

    sp = sub.add_parser("bounds", help="Gershgorin discs and band suggestion")
    common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("reproduce", help="run the 4x4 regression suite")
    sp.add_argument("--out", help="directory for CSV output (default ./reproduce_out)")
    sp.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("kmax", "trials"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            print(f"error: --{name} must be >= 0", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EmptyBand as exc:
        print(f"error: empty band: {exc}", file=sys.stderr)
        return EXIT_EMPTY_BAND
    except (EigenbandError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
