"""Command-line interface: correct, curve, diagnose, simulate, compare.

Data goes to files or standard output; diagnostics go to standard error.
Exit codes: 0 success, 1 usage or parse error, 2 partial row failures,
3 internal invariant violation.
"""

import argparse
import csv
import json
import sys

import numpy as np

from .corrections import delta_to_beta, prior_shift_correct
from .dataio import _fmt, emit_dataset, ingest, read_table
from .diagnostics import Binning, build_curve, theoretical_curve, verify_sbr
from .errors import LosscalError, NoConsistentPosterior
from .losses import BinaryWeights, LossSpec, MatrixWeights
from .sbr import SimulationConfig, imbalance_preset, simulate
from .scoring import loss_correct_binary, loss_correct_multi
from .svgplot import write_reliability_svg

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARTIAL = 2
EXIT_INTERNAL = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_io_flags(parser, need_input=True, need_output=True):
    if need_input:
        parser.add_argument("--input", required=True, help="input dataset path")
    if need_output:
        parser.add_argument("--output", required=True, help="output file path")
    parser.add_argument(
        "--format", choices=("csv", "jsonl"), default="csv", help="dataset file format"
    )


def _add_weight_flags(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--beta", type=float, help="positive-class weight in (0, 1)")
    group.add_argument(
        "--beta-matrix", metavar="PATH", help="CSV of an n-by-n positive weight matrix, no header"
    )
    group.add_argument(
        "--delta", type=float, help="resampling ratio; equivalent to beta = 1/(1+delta)"
    )


def _add_binning_flags(parser):
    parser.add_argument("--bins", type=int, default=10, help="number of bins (default 10)")
    parser.add_argument(
        "--binning",
        choices=("quantile", "width", "distinct"),
        default="quantile",
        help="equal-count, equal-width, or one bin per distinct score",
    )


def _add_loss_flag(parser):
    parser.add_argument(
        "--loss", choices=("log", "brier"), default="log", help="base loss family"
    )


def _build_parser():
    parser = _Parser(
        prog="losscal",
        description="Recover calibrated probabilities from class-weighted classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correct", help="append loss-corrected score columns")
    _add_io_flags(p)
    _add_weight_flags(p)
    _add_loss_flag(p)

    p = sub.add_parser("curve", help="binned calibration curve as CSV (and optional SVG)")
    _add_io_flags(p)
    _add_binning_flags(p)
    p.add_argument("--beta", type=float, help="also emit the theoretical curve for this weight")
    p.add_argument(
        "--theoretical-output", metavar="PATH", help="where to write the theoretical-curve CSV"
    )
    p.add_argument("--svg", metavar="PATH", help="write a log-log reliability diagram")
    p.add_argument("--class-index", type=int, default=1, help="class for one-vs-rest binning")

    p = sub.add_parser("diagnose", help="loss-calibration regret report as JSON")
    _add_io_flags(p, need_output=False)
    p.add_argument("--output", help="report path (default: standard output)")
    _add_weight_flags(p)
    _add_loss_flag(p)
    _add_binning_flags(p)
    p.add_argument("--tolerance", type=float, help="loss-calibration tolerance override")

    p = sub.add_parser("simulate", help="generate a dataset from the built-in scoring model")
    _add_io_flags(p, need_input=False)
    _add_weight_flags(p)
    _add_loss_flag(p)
    p.add_argument("--samples", type=int, default=100_000, help="number of rows")
    p.add_argument("--seed", type=int, default=0, help="64-bit generator seed")
    p.add_argument("--positive-rate", type=float, default=0.02, help="prior positive rate")
    p.add_argument("--signals", type=int, default=10, help="number of distinct signals")
    p.add_argument(
        "--informativeness", type=float, default=1.0, help="signal informativeness in (0, 1]"
    )
    p.add_argument(
        "--sidecar", action="store_true", help="append true signal and posterior columns"
    )

    p = sub.add_parser("compare", help="loss-correction vs prior-shift correction, row by row")
    _add_io_flags(p)
    p.add_argument("--beta", type=float, required=True, help="weight for the loss-correction")
    p.add_argument("--delta", type=float, required=True, help="ratio for the prior-shift correction")

    return parser


def _check_paths_distinct(args):
    paths = [
        getattr(args, name, None)
        for name in ("input", "output", "theoretical_output", "svg")
    ]
    paths = [p for p in paths if p]
    if len(set(paths)) != len(paths):
        raise _UsageError("input/output paths must be distinct")


def _weights_for_data(args, data):
    """Resolve --beta/--beta-matrix/--delta against the dataset's shape."""
    if args.beta_matrix is not None:
        matrix = np.loadtxt(args.beta_matrix, delimiter=",", ndmin=2)
        weights = MatrixWeights(matrix)
        if data is not None and data.is_binary:
            raise _UsageError("--beta-matrix requires vector score columns (score_0, score_1, ...)")
        return weights
    if data is not None and not data.is_binary:
        raise _UsageError("multi-class data requires --beta-matrix")
    if args.beta is not None:
        return BinaryWeights(args.beta)
    # The prior-shift ratio maps one-to-one onto a binary weight; corrections
    # are routed through the single loss-correction implementation.
    return BinaryWeights(delta_to_beta(args.delta))


def _binning_from_args(args):
    return Binning(mode=args.binning, k=args.bins)


def _cmd_correct(args):
    table = read_table(args.input, args.format)
    data = table.data
    weights = _weights_for_data(args, data)
    failures = 0

    if isinstance(weights, BinaryWeights):
        corrected = loss_correct_binary(weights.beta1, data.scores)
        corrected_fields = [[_fmt(v)] for v in corrected]
        error_fields = None
        new_columns = ["corrected"]
    else:
        corrected_fields = []
        errors = []
        for i in range(data.n_rows):
            try:
                gamma = loss_correct_multi(weights.beta, data.scores[i])
                corrected_fields.append([_fmt(v) for v in gamma])
                errors.append("")
            except NoConsistentPosterior as exc:
                corrected_fields.append([""] * data.n_classes)
                errors.append(str(exc))
                failures += 1
        error_fields = errors
        new_columns = [f"corrected_{j}" for j in range(data.n_classes)]

    if args.format == "csv":
        header = list(table.header) + new_columns
        if error_fields is not None:
            header.append("error")
        with open(args.output, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for i, raw in enumerate(table.raw_rows):
                row = list(raw) + corrected_fields[i]
                if error_fields is not None:
                    row.append(error_fields[i])
                writer.writerow(row)
    else:
        with open(args.output, "w") as handle:
            for i, raw in enumerate(table.raw_rows):
                obj = dict(raw)
                values = [float(v) if v else None for v in corrected_fields[i]]
                obj["corrected"] = values[0] if len(values) == 1 else values
                if error_fields is not None and error_fields[i]:
                    obj["error"] = error_fields[i]
                handle.write(json.dumps(obj) + "\n")

    if failures:
        print(f"{failures} of {data.n_rows} rows had no consistent posterior", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _theoretical_grid():
    # Logit-spaced interior grid wide enough to cover any plotted decade.
    log_odds = np.linspace(-16.0, 16.0, 321)
    return 1.0 / (1.0 + np.exp(-log_odds))


def _cmd_curve(args):
    data = ingest(args.input, args.format)
    curve = build_curve(data, class_index=args.class_index, binning=_binning_from_args(args))
    if curve.dropped_bins:
        print(f"warning: {curve.dropped_bins} empty bin(s) dropped", file=sys.stderr)
    if curve.degenerate:
        print("warning: all scores identical; single bin returned", file=sys.stderr)

    with open(args.output, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["bin", "mean_score", "freq", "count", "lo", "hi"])
        for b in range(curve.n_bins):
            writer.writerow(
                [
                    b,
                    _fmt(curve.mean_score[b]),
                    _fmt(curve.freq[b]),
                    int(curve.count[b]),
                    _fmt(curve.lo[b]),
                    _fmt(curve.hi[b]),
                ]
            )

    theoretical = None
    if args.beta is not None:
        theoretical = theoretical_curve(args.beta, _theoretical_grid())
        if args.theoretical_output:
            with open(args.theoretical_output, "w", newline="") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(["score", "implied_freq"])
                for s, f in zip(*theoretical):
                    writer.writerow([_fmt(s), _fmt(f)])
    if args.svg:
        write_reliability_svg(args.svg, curve, theoretical=theoretical)
    return EXIT_OK


def _cmd_diagnose(args):
    data = ingest(args.input, args.format)
    weights = _weights_for_data(args, data)
    check = verify_sbr(
        data,
        LossSpec(args.loss),
        weights,
        tolerance=args.tolerance,
        binning=_binning_from_args(args),
    )
    report = check.report

    def scores_field(value):
        return _json_float(value) if np.ndim(value) == 0 else [_json_float(v) for v in value]

    payload = {
        "maxRegret": _json_float(report.max_regret),
        "meanRegret": _json_float(report.mean_regret),
        "tolerance": _json_float(check.tolerance),
        "loss_calibrated": check.has_sbr,
        "droppedBins": report.dropped_bins,
        "perBin": [
            {
                "binScore": scores_field(report.bin_score[b]),
                "count": int(report.count[b]),
                "realizedLoss": _json_float(report.realized[b]),
                "minimalLoss": _json_float(report.minimal[b]),
                "regret": _json_float(report.regret[b]),
                "argminScore": scores_field(report.argmin_score[b]),
            }
            for b in range(report.n_bins)
        ],
        "sbr": (
            {
                "signalCount": check.canonical.n_signals,
                "prior": [_json_float(v) for v in check.canonical.prior],
            }
            if check.has_sbr
            else None
        ),
    }
    text = json.dumps(payload, indent=2)
    if args.output:
        with open(args.output, "w") as handle:
            handle.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _json_float(value):
    return float(_fmt(float(value)))


def _cmd_simulate(args):
    experiment = imbalance_preset(args.positive_rate, args.signals, args.informativeness)
    weights = _weights_for_data(args, None)
    if isinstance(weights, MatrixWeights):
        raise _UsageError("simulate uses the binary preset; pass --beta or --delta")
    config = SimulationConfig(
        experiment=experiment,
        loss=LossSpec(args.loss),
        weights=weights,
        sample_count=args.samples,
        seed=args.seed,
    )
    result = simulate(config, include_sidecar=args.sidecar)
    sidecar = None
    if args.sidecar:
        sidecar = {"signal": result.signals, "true_posterior": result.posteriors}
    emit_dataset(args.output, result.data, fmt=args.format, sidecar=sidecar)
    return EXIT_OK


def _cmd_compare(args):
    data = ingest(args.input, args.format)
    if not data.is_binary:
        raise _UsageError("compare requires a binary dataset")
    loss_corrected = loss_correct_binary(args.beta, data.scores)
    prior_shifted = prior_shift_correct(args.delta, data.scores)
    diff = np.abs(loss_corrected - prior_shifted)
    with open(args.output, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["score", "loss_corrected", "prior_shift_corrected", "abs_diff"])
        for i in range(data.n_rows):
            writer.writerow(
                [
                    _fmt(data.scores[i]),
                    _fmt(loss_corrected[i]),
                    _fmt(prior_shifted[i]),
                    _fmt(diff[i]),
                ]
            )
        writer.writerow(["max_abs_diff", _fmt(diff.max()), "", ""])
    return EXIT_OK


_COMMANDS = {
    "correct": _cmd_correct,
    "curve": _cmd_curve,
    "diagnose": _cmd_diagnose,
    "simulate": _cmd_simulate,
    "compare": _cmd_compare,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _check_paths_distinct(args)
        return _COMMANDS[args.command](args)
    except (_UsageError, LosscalError, FileNotFoundError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
