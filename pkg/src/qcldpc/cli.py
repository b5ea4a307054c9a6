"""The decode-bench command.

Subcommands: `run` (FER/latency/throughput campaign over SNR points),
`schedule` (inspect or dump the layer schedule of a matrix), and
`compare-schedules` (same campaign with single-row vs merged layers).
Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from qcldpc.bench import CampaignConfig, compare_schedules, emit_report, run_campaign
from qcldpc.layer_schedule import (
    LANE_BUDGET,
    format_schedule,
    greedy_schedule,
    single_row_schedule,
    utilization,
)
from qcldpc.qc_code import load_base_matrix

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def _snr_list(text):
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad snr list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty snr list")
    return values


def _add_campaign_options(sub):
    sub.add_argument("--matrix", required=True, help="base-matrix file")
    sub.add_argument(
        "--snr", required=True, type=_snr_list, help="comma-separated linear SNR values"
    )
    sub.add_argument("--iters", type=int, default=50, help="max decoding iterations")
    sub.add_argument("--batch", type=int, default=32, help="codewords decoded per batch (K2)")
    sub.add_argument(
        "--early-term", action="store_true", help="stop when the syndrome is satisfied"
    )
    sub.add_argument("--seed", type=int, default=0, help="campaign RNG seed")
    sub.add_argument("--trials", type=int, default=1024, help="minimum frames per SNR point")
    sub.add_argument("--workers", type=int, default=1, help="decoder worker threads")
    sub.add_argument(
        "--lane-budget",
        type=int,
        default=LANE_BUDGET,
        help="reference lane budget for the utilization column",
    )
    sub.add_argument(
        "--encode",
        action="store_true",
        help="decode random words toward their true syndromes instead of the all-zero workload",
    )
    sub.add_argument("--out", help="write the report to this path")
    sub.add_argument("--format", choices=("csv", "json"), default="csv", help="report format")


def _campaign_config(args):
    return CampaignConfig(
        matrix_path=args.matrix,
        snr_list=args.snr,
        max_iterations=args.iters,
        early_termination=args.early_term,
        batch_size=args.batch,
        min_trials=args.trials,
        seed=args.seed,
        workers=args.workers,
        lane_budget=args.lane_budget,
        encode_mode=args.encode,
    )


def _print_cells(report, label=None):
    prefix = f"{label} " if label else ""
    for cell in report.cells:
        print(
            f"{prefix}snr={cell.snr:<8g} fer={cell.fer:<10.6f} "
            f"avg_iters={cell.avg_iterations:<7.2f} "
            f"latency/iter={cell.latency_per_iteration_s:.3e}s "
            f"throughput={cell.throughput_mbits_per_s:.3f}Mbit/s "
            f"beta={cell.beta:.4f} util={cell.utilization:.3e}"
        )


def _cmd_run(args):
    report = run_campaign(_campaign_config(args))
    meta = report.metadata
    print(
        f"matrix {meta['matrix']['path']}: {meta['matrix']['n_rows']}x"
        f"{meta['matrix']['n_cols']} z={meta['matrix']['z']} "
        f"rate={meta['matrix']['rate']:g}, "
        f"{meta['schedule']['layer_count']} layers, {meta['campaign']['frames_per_point']} "
        f"frames per point"
    )
    _print_cells(report)
    if args.out:
        emit_report(report, args.format, args.out)
        print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_schedule(args):
    base = load_base_matrix(args.matrix)
    merged = greedy_schedule(base)
    if args.dump_schedule:
        print(format_schedule(merged), end="")
        return EXIT_OK
    single = single_row_schedule(base)
    print(f"base matrix: {base.n_rows}x{base.n_cols}, z={base.z}")
    print(f"single-row layers: {len(single.layers)}")
    print(f"merged layers: {len(merged.layers)} (k1={merged.k1})")
    for i, layer in enumerate(merged.layers):
        print(f"  layer {i}: rows {' '.join(str(r) for r in layer)}")
    util = utilization(merged, k2=args.batch, z=base.z, lane_budget=args.lane_budget)
    print(f"utilization at K2={args.batch}: {util.utilization:.6g}")
    return EXIT_OK


def _cmd_compare(args):
    comparison = compare_schedules(_campaign_config(args))
    print(
        f"single-row layers: {comparison.single_layer_count}, "
        f"merged layers: {comparison.merged_layer_count}"
    )
    _print_cells(comparison.single, label="single")
    _print_cells(comparison.merged, label="merged")
    if args.out:
        emit_report(comparison, args.format, args.out)
        print(f"wrote {args.out}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="decode-bench",
        description="Benchmark layered belief-propagation decoding of QC-LDPC codes",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="run an FER/latency/throughput campaign")
    _add_campaign_options(run)
    run.set_defaults(func=_cmd_run)

    sched = subs.add_parser("schedule", help="show the layer schedule of a matrix")
    sched.add_argument("--matrix", required=True, help="base-matrix file")
    sched.add_argument(
        "--dump-schedule",
        action="store_true",
        help="print one line per layer, row indices space-separated",
    )
    sched.add_argument("--batch", type=int, default=128, help="K2 for the utilization line")
    sched.add_argument("--lane-budget", type=int, default=LANE_BUDGET)
    sched.set_defaults(func=_cmd_schedule)

    cmp_ = subs.add_parser(
        "compare-schedules", help="same campaign with single-row vs merged layers"
    )
    _add_campaign_options(cmp_)
    cmp_.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"decode-bench: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"decode-bench: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
