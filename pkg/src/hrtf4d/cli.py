"""Command-line front end: fit, decode, evaluate, sweep, match-eta, ard-are.

All angles on the CLI surface are degrees (azimuth/elevation); radians exist
only inside the library. Every invocation echoes its full parameter set to a
``run.json`` next to its outputs, after validation but before computation, so
runs are reproducible. Exit codes: 0 success, 1 validation error,
2 computation error, 3 resource (memory budget) error.
"""

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import evaluation
from .basis import BasisConfig, BasisFamily, count_hsh, count_scs, matched_eta
from .dataset import direction_from_degrees, load_hrir, magnitude_spectra
from .errors import (
    DimensionMismatchError,
    DomainError,
    ManifestError,
    MemoryBudgetError,
    UnderdeterminedError,
    ZeroDenominatorError,
)
from .fitting import WeightSpec, decode, fit, load_coefficients, save_coefficients

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_COMPUTATION = 2
EXIT_RESOURCE = 3

_VALIDATION_ERRORS = (ManifestError, DomainError, ValueError)
_COMPUTATION_ERRORS = (
    UnderdeterminedError,
    DimensionMismatchError,
    ZeroDenominatorError,
    ArithmeticError,
)


class _Parser(argparse.ArgumentParser):
    # usage problems are validation failures, not computation failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _echo_run(args, out_dir):
    params = {k: v for k, v in vars(args).items() if k != "func"}
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "run.json").write_text(
        json.dumps({"command": args.command, "parameters": params}, sort_keys=True)
        + "\n"
    )


def _add_weight_args(p):
    p.add_argument("--fl", type=float, default=20.0, help="lower weight limit in Hz")
    p.add_argument("--fu", type=float, default=20000.0, help="upper weight limit in Hz")


def _fmt(x):
    return repr(float(x))


def cmd_fit(args):
    hrirs = load_hrir(args.manifest)
    mags = magnitude_spectra(hrirs, args.ear)
    config = BasisConfig(family=args.family, L=args.L, eta=args.eta, fs=mags.fs)
    spec = WeightSpec(f_l=args.fl, f_u=args.fu)
    out = Path(args.out)
    _echo_run(args, out.parent)
    cs = fit(config, mags, spec, mem_budget_gb=args.mem_budget_gb)
    save_coefficients(cs, out)
    meta = cs.fit_metadata
    print(
        f"fit {config.family.value} L={config.L} eta={config.eta:g} ear={args.ear}: "
        f"N={cs.coeffs.size} residual={meta['weighted_residual']:.6e} "
        f"condition={meta['condition']:.3e}"
    )
    return EXIT_OK


def _read_queries(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
        fields = reader.fieldnames
    needed = {"azimuth_deg", "elevation_deg", "freq_hz"}
    if rows and (fields is None or not needed.issubset(fields)):
        raise ManifestError(
            f"query CSV must have columns azimuth_deg, elevation_deg, freq_hz; "
            f"got {fields}"
        )
    return rows


def cmd_decode(args):
    cs = load_coefficients(args.coeffs)
    rows = _read_queries(args.queries)
    out = Path(args.out)
    bad = []
    samples = []
    for i, row in enumerate(rows):
        f = float(row["freq_hz"])
        if f < 0 or f > cs.config.fs / 2:
            bad.append((i + 1, f))
            continue
        d = direction_from_degrees(
            float(row["azimuth_deg"]), float(row["elevation_deg"])
        )
        samples.append((d.azimuth, d.inclination, f))
    if bad:
        for line_no, f in bad:
            print(
                f"row {line_no}: frequency {f} outside [0, {cs.config.fs / 2}]",
                file=sys.stderr,
            )
        return EXIT_VALIDATION
    _echo_run(args, out.parent)
    values = decode(cs, np.array(samples).reshape(-1, 3))
    lines = ["azimuth_deg,elevation_deg,freq_hz,magnitude"]
    for row, v in zip(rows, values):
        lines.append(
            f"{row['azimuth_deg']},{row['elevation_deg']},{row['freq_hz']},{_fmt(v)}"
        )
    out.write_text("\n".join(lines) + "\n")
    print(f"decoded {len(rows)} queries -> {out}")
    return EXIT_OK


def cmd_evaluate(args):
    if args.coeffs_left is None and args.coeffs_right is None:
        raise ManifestError("provide --coeffs-left and/or --coeffs-right")
    if args.per_direction and (args.coeffs_left is None or args.coeffs_right is None):
        raise ManifestError("per-direction analysis needs both ears' coefficients")
    hrirs = load_hrir(args.manifest)
    sets = {}
    for ear, path in (("left", args.coeffs_left), ("right", args.coeffs_right)):
        if path is None:
            continue
        cs = load_coefficients(path)
        sets[ear] = (cs, magnitude_spectra(hrirs, ear))
    out_dir = Path(args.out_dir)
    _echo_run(args, out_dir)

    overall_rows = []
    freq_curves = []
    for ear, (cs, mags) in sets.items():
        overall_rows.append((ear, evaluation.overall_mse(cs, mags, args.fl, args.fu)))
        freq_curves.append(evaluation.mse_by_frequency(cs, mags, args.fl, args.fu))
    if len(overall_rows) == 2:
        overall_rows.append(("mean", float(np.mean([v for _, v in overall_rows]))))

    with open(out_dir / "overall_mse.csv", "w") as fh:
        fh.write("scope,mse_percent\n")
        for scope, v in overall_rows:
            fh.write(f"{scope},{_fmt(v)}\n")

    freqs = [f for f, _ in freq_curves[0]]
    merged = [
        (f, float(np.mean([curve[i][1] for curve in freq_curves])))
        for i, f in enumerate(freqs)
    ]
    evaluation.write_mse_by_frequency_csv(merged, out_dir / "mse_by_frequency.csv")

    wrote = ["overall_mse.csv", "mse_by_frequency.csv"]
    if len(sets) == 2:
        rows = evaluation.mse_by_direction(
            sets["left"][0],
            sets["right"][0],
            sets["left"][1],
            sets["right"][1],
            args.fl,
            args.fu,
        )
        evaluation.write_mse_by_direction_csv(rows, out_dir / "mse_by_direction.csv")
        wrote.append("mse_by_direction.csv")
    print(f"wrote {', '.join(wrote)} to {out_dir}")
    return EXIT_OK


def _parse_list(text, conv):
    try:
        return [conv(tok.strip()) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ManifestError(f"bad list {text!r}: {exc}") from exc


def cmd_sweep(args):
    families = _parse_list(args.families, str)
    for fam in families:
        if fam not in [f.value for f in BasisFamily]:
            raise ManifestError(f"unknown family {fam!r}")
    L_list = _parse_list(args.L_list, int)
    eta_list = _parse_list(args.eta_list, float)
    if not families or not L_list or not eta_list:
        raise ManifestError("families, L list and eta list must be non-empty")
    hrirs = load_hrir(args.manifest)
    mags_l = magnitude_spectra(hrirs, "left")
    mags_r = magnitude_spectra(hrirs, "right")
    out = Path(args.out)
    _echo_run(args, out.parent)
    result = evaluation.sweep(
        mags_l,
        mags_r,
        families,
        L_list,
        eta_list,
        WeightSpec(f_l=args.fl, f_u=args.fu),
        mem_budget_gb=args.mem_budget_gb,
    )
    evaluation.write_sweep_csv(result, out)
    n_fail = sum(1 for e in result.entries if e.error)
    print(f"swept {len(result.entries)} configurations ({n_fail} failed) -> {out}")
    return EXIT_OK


def cmd_match_eta(args):
    n_scs = count_scs(args.L, args.eta)
    n_hsh = count_hsh(args.L, args.eta)
    eta_m = matched_eta(args.L, args.eta)
    n_hshm = count_hsh(args.L, eta_m)
    print(f"L={args.L} eta={args.eta:g}: eta_m={eta_m:g}")
    print(f"N_SCS={n_scs}")
    print(f"N_HSH={n_hsh} ({(n_hsh - n_scs) / n_scs * 100.0:+.1f}%)")
    print(f"N_HSHm={n_hshm} ({(n_hshm - n_scs) / n_scs * 100.0:+.1f}%)")
    return EXIT_OK


def _read_mse_table(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = [r for r in reader if r]
    if len(rows) < 3 or len(rows[0]) < 2:
        raise ManifestError(
            "MSE table needs a header and at least two subject rows with one config"
        )
    subjects = [r[0] for r in rows[1:]]
    try:
        table = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    except ValueError as exc:
        raise ManifestError(f"non-numeric MSE value in {path}: {exc}") from exc
    if table.ndim != 2 or table.shape[1] != len(rows[0]) - 1:
        raise ManifestError(f"ragged MSE table in {path}")
    return subjects, table


def cmd_ard_are(args):
    subjects, table = _read_mse_table(args.mse_table)
    out = Path(args.out)
    _echo_run(args, out.parent)
    ard, are = evaluation.ard_are(table)
    best_ard = int(np.argmin(np.abs(ard)))
    best_are = int(np.argmin(are))
    lines = ["subject,ard_percent,are_percent,min_abs_ard,min_are"]
    for i, s in enumerate(subjects):
        lines.append(
            f"{s},{_fmt(ard[i])},{_fmt(are[i])},"
            f"{1 if i == best_ard else 0},{1 if i == best_are else 0}"
        )
    out.write_text("\n".join(lines) + "\n")
    print(
        f"representative by |ARD|: {subjects[best_ard]}; by ARE: {subjects[best_are]}"
    )
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="hrtf4d", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit basis coefficients to a measurement set")
    p.add_argument("--manifest", required=True)
    p.add_argument("--ear", choices=["left", "right"], required=True)
    p.add_argument(
        "--family", choices=[f.value for f in BasisFamily], required=True
    )
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--eta", type=float, required=True)
    _add_weight_args(p)
    p.add_argument("--mem-budget-gb", type=float, default=4.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("decode", help="evaluate a coefficient file at query points")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--queries", required=True, help="CSV: azimuth_deg,elevation_deg,freq_hz")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("evaluate", help="error reports for fitted coefficients")
    p.add_argument("--manifest", required=True)
    p.add_argument("--coeffs-left")
    p.add_argument("--coeffs-right")
    p.add_argument("--per-direction", action="store_true")
    _add_weight_args(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="fit a grid of configurations, flag the Pareto frontier")
    p.add_argument("--manifest", required=True)
    p.add_argument("--families", required=True, help="comma-separated family names")
    p.add_argument("--L-list", required=True, help="comma-separated integers")
    p.add_argument("--eta-list", required=True, help="comma-separated values")
    _add_weight_args(p)
    p.add_argument("--mem-budget-gb", type=float, default=4.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("match-eta", help="HSH eta matching a spherindrical count")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.set_defaults(func=cmd_match_eta)

    p = sub.add_parser("ard-are", help="subject-representative metrics from an MSE table")
    p.add_argument("--mse-table", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ard_are)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MemoryBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except _COMPUTATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
