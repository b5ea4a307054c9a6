"""Monte-Carlo decoding campaigns: FER, iterations, latency, throughput.

The default workload transmits the all-zero codeword toward the zero
syndrome, which is sufficient for frame-error statistics of a linear
code over a symmetric channel; `encode_mode` instead draws a random
word per frame and decodes toward its actual syndrome, exercising the
odd-parity sign path end to end.

Metric definitions (also recorded in every report's metadata):
frame error = decoder did not converge, or the hard decision differs
from the transmitted word; throughput = decoded frames * block length
/ decode wall-clock seconds; latency per iteration = decode wall-clock
/ total iterations executed. Wall-clock covers decoding only, never
channel simulation. FER and iteration counts are deterministic for a
fixed seed regardless of batch size or worker count; the timing columns
are not.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from qcldpc.channel import ChannelConfig, beta, frame_rng, init_llr, transmit
from qcldpc.decoder import DecoderConfig, LayeredDecoder, syndrome_of
from qcldpc.layer_schedule import (
    LANE_BUDGET,
    greedy_schedule,
    single_row_schedule,
    utilization,
)
from qcldpc.qc_code import build_compact_index, descriptor, expand, load_base_matrix

__all__ = [
    "CampaignCell",
    "CampaignConfig",
    "CampaignReport",
    "ScheduleComparison",
    "compare_schedules",
    "emit_report",
    "run_campaign",
]

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "snr",
    "fer",
    "avg_iterations",
    "latency_per_iteration_s",
    "throughput_mbits_per_s",
    "beta",
    "total_expanded_edges",
    "utilization",
)

METRIC_DEFINITIONS = {
    "frame_error": "decoder did not converge, or hard decision differs from the transmitted word",
    "throughput_mbits_per_s": "decoded frames * block_length / decode wall-clock seconds / 1e6",
    "latency_per_iteration_s": "decode wall-clock seconds / total iterations executed",
}


@dataclass(frozen=True)
class CampaignConfig:
    """Everything one campaign needs; validated on construction."""

    matrix_path: str
    snr_list: tuple
    max_iterations: int = 50
    early_termination: bool = False
    batch_size: int = 32
    min_trials: int = 1024
    seed: int = 0
    workers: int = 1
    lane_budget: int = LANE_BUDGET
    encode_mode: bool = False
    merged_schedule: bool = True

    def __post_init__(self):
        object.__setattr__(self, "snr_list", tuple(float(s) for s in self.snr_list))
        if not self.snr_list:
            raise ValueError("snr_list must not be empty")
        if any(s <= 0 for s in self.snr_list):
            raise ValueError("every snr must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.min_trials < self.batch_size:
            raise ValueError("min_trials must be at least batch_size")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.lane_budget < 1:
            raise ValueError("lane_budget must be positive")

    @property
    def frames_per_point(self):
        return math.ceil(self.min_trials / self.batch_size) * self.batch_size


@dataclass(frozen=True)
class CampaignCell:
    """One (snr, configuration) measurement; the 8 report columns."""

    snr: float
    fer: float
    avg_iterations: float
    latency_per_iteration_s: float
    throughput_mbits_per_s: float
    beta: float
    total_expanded_edges: int
    utilization: float


@dataclass(frozen=True)
class CampaignReport:
    cells: tuple
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ScheduleComparison:
    """Side-by-side single-row-layer vs merged-layer campaigns."""

    single: CampaignReport
    merged: CampaignReport
    single_layer_count: int
    merged_layer_count: int


def _decode_block(decoder, llrs, syndromes, pool, workers):
    """Decode one batch, split across the worker pool when present."""
    if pool is None:
        return decoder.decode_batch_arrays(llrs, syndromes)
    chunks = [c for c in np.array_split(np.arange(llrs.shape[0]), workers) if c.size]
    parts = list(
        pool.map(lambda c: decoder.decode_batch_arrays(llrs[c], syndromes[c]), chunks)
    )
    words = np.concatenate([p[0] for p in parts])
    converged = np.concatenate([p[1] for p in parts])
    iterations = np.concatenate([p[2] for p in parts])
    return words, converged, iterations


def _campaign_metadata(cfg, base, desc, schedule):
    return {
        "schema_version": SCHEMA_VERSION,
        "matrix": {
            "path": str(cfg.matrix_path),
            "n_rows": base.n_rows,
            "n_cols": base.n_cols,
            "z": base.z,
            "block_length": desc.block_length,
            "n_checks": desc.n_checks,
            "rate": desc.rate,
        },
        "schedule": {
            "layers": [list(layer) for layer in schedule.layers],
            "layer_count": len(schedule.layers),
            "k1": schedule.k1,
            "merged": cfg.merged_schedule,
        },
        "decoder": {
            "max_iterations": cfg.max_iterations,
            "early_termination": cfg.early_termination,
        },
        "campaign": {
            "batch_size": cfg.batch_size,
            "min_trials": cfg.min_trials,
            "frames_per_point": cfg.frames_per_point,
            "seed": cfg.seed,
            "workers": cfg.workers,
            "lane_budget": cfg.lane_budget,
            "encode_mode": cfg.encode_mode,
        },
        "definitions": dict(METRIC_DEFINITIONS),
    }


def run_campaign(cfg):
    """Measure FER/iterations/latency/throughput at every SNR point."""
    base = load_base_matrix(cfg.matrix_path)
    desc = descriptor(base)
    schedule = greedy_schedule(base) if cfg.merged_schedule else single_row_schedule(base)
    index = build_compact_index(base, schedule)
    decoder = LayeredDecoder(
        index,
        schedule,
        DecoderConfig(
            max_iterations=cfg.max_iterations, early_termination=cfg.early_termination
        ),
    )
    rows = expand(base) if cfg.encode_mode else None
    util = utilization(schedule, k2=cfg.batch_size, z=base.z, lane_budget=cfg.lane_budget)

    n = desc.block_length
    m = desc.n_checks
    frames = cfg.frames_per_point
    pool = ThreadPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None

    cells = []
    try:
        for snr_idx, snr in enumerate(cfg.snr_list):
            chan = ChannelConfig(snr=snr, seed=cfg.seed)
            errors = 0
            iterations_total = 0
            wall = 0.0
            for start in range(0, frames, cfg.batch_size):
                batch = min(cfg.batch_size, frames - start)
                truths = np.zeros((batch, n), dtype=np.uint8)
                llrs = np.empty((batch, n))
                for i in range(batch):
                    rng = frame_rng(cfg.seed, snr_idx, start + i)
                    if cfg.encode_mode:
                        truths[i] = rng.integers(0, 2, size=n, dtype=np.uint8)
                    llrs[i] = init_llr(transmit(truths[i], chan, rng), chan)
                if cfg.encode_mode:
                    syndromes = syndrome_of(truths, rows)
                else:
                    syndromes = np.zeros((batch, m), dtype=np.uint8)

                t0 = time.perf_counter()
                words, converged, iterations = _decode_block(
                    decoder, llrs, syndromes, pool, cfg.workers
                )
                wall += time.perf_counter() - t0

                errors += int((~converged).sum())
                errors += int((converged & (words != truths).any(axis=1)).sum())
                iterations_total += int(iterations.sum())

            cells.append(
                CampaignCell(
                    snr=snr,
                    fer=errors / frames,
                    avg_iterations=iterations_total / frames,
                    latency_per_iteration_s=wall / iterations_total,
                    throughput_mbits_per_s=frames * n / wall / 1e6,
                    beta=beta(desc.rate, snr),
                    total_expanded_edges=desc.total_expanded_edges,
                    utilization=util.utilization,
                )
            )
    finally:
        if pool is not None:
            pool.shutdown()

    return CampaignReport(
        cells=tuple(cells), metadata=_campaign_metadata(cfg, base, desc, schedule)
    )


def compare_schedules(cfg):
    """Run the same campaign with single-row layers and with merged layers."""
    single = run_campaign(replace(cfg, merged_schedule=False))
    merged = run_campaign(replace(cfg, merged_schedule=True))
    return ScheduleComparison(
        single=single,
        merged=merged,
        single_layer_count=single.metadata["schedule"]["layer_count"],
        merged_layer_count=merged.metadata["schedule"]["layer_count"],
    )


def report_to_dict(report):
    if isinstance(report, ScheduleComparison):
        return {
            "schema_version": SCHEMA_VERSION,
            "single": report_to_dict(report.single),
            "merged": report_to_dict(report.merged),
            "single_layer_count": report.single_layer_count,
            "merged_layer_count": report.merged_layer_count,
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "metadata": report.metadata,
        "cells": [asdict(cell) for cell in report.cells],
    }


def emit_report(report, fmt, path):
    """Write a campaign report (or comparison) as csv or json."""
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(report_to_dict(report), indent=2) + "\n")
        return path
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")

    comparison = isinstance(report, ScheduleComparison)
    header = (("schedule",) + CSV_COLUMNS) if comparison else CSV_COLUMNS
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        if comparison:
            for label, rep in (("single", report.single), ("merged", report.merged)):
                for cell in rep.cells:
                    writer.writerow((label,) + tuple(asdict(cell)[c] for c in CSV_COLUMNS))
        else:
            for cell in report.cells:
                writer.writerow(tuple(asdict(cell)[c] for c in CSV_COLUMNS))
    return path
