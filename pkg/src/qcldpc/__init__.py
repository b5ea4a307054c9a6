"""Layered belief-propagation decoding for quasi-cyclic LDPC codes.

Library layout:

- qc_code: base-matrix parsing, expansion, compact edge index
- layer_schedule: conflict-free row grouping and lane utilization
- channel: binary-input AWGN simulation and reconciliation efficiency
- decoder: layered and flooding syndrome decoders
- bench: Monte-Carlo FER/latency/throughput campaigns
- cli: the decode-bench command
"""

from qcldpc.bench import (
    CampaignCell,
    CampaignConfig,
    CampaignReport,
    ScheduleComparison,
    compare_schedules,
    emit_report,
    run_campaign,
)
from qcldpc.channel import ChannelConfig, beta, frame_rng, init_llr, transmit
from qcldpc.decoder import (
    DecodeOutcome,
    DecoderConfig,
    DecoderState,
    FloodingDecoder,
    LayeredDecoder,
    decode,
    decode_batch,
    flooding_decode,
    phi,
    syndrome_of,
)
from qcldpc.layer_schedule import (
    LANE_BUDGET,
    LayerSchedule,
    UtilizationReport,
    conflict_graph,
    format_schedule,
    greedy_schedule,
    single_row_schedule,
    utilization,
)
from qcldpc.qc_code import (
    BaseMatrix,
    CodeDescriptor,
    CompactIndex,
    EdgeRecord,
    MatrixFormatError,
    build_compact_index,
    descriptor,
    expand,
    load_base_matrix,
    parse_base_matrix,
    serialize_base_matrix,
)

__version__ = "0.1.0"
