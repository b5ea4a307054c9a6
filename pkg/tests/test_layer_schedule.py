import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    MERGE_EXAMPLE_FULL,
    MERGE_EXAMPLE_OUTER_PAIR,
    MERGE_EXAMPLE_TOP_PAIR,
    random_base_matrix,
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
from qcldpc.qc_code import BaseMatrix, expand


def base_of(shifts, z=4):
    return BaseMatrix(len(shifts), len(shifts[0]), z, shifts)


# -------------------------------------------------------- conflict graph


def test_conflict_graph_full_example_is_complete():
    adj = conflict_graph(base_of(MERGE_EXAMPLE_FULL))
    expected = ~np.eye(3, dtype=bool)
    assert np.array_equal(adj, expected)


def test_conflict_graph_top_pair_example():
    adj = conflict_graph(base_of(MERGE_EXAMPLE_TOP_PAIR))
    assert not adj[0, 1] and not adj[1, 0]
    assert adj[0, 2] and adj[2, 0]
    assert adj[1, 2] and adj[2, 1]


def test_conflict_graph_single_row_is_empty():
    adj = conflict_graph(BaseMatrix(1, 3, 4, [[1, 0, 2]]))
    assert adj.shape == (1, 1) and not adj.any()


# ---------------------------------------------------------- scheduling


def test_greedy_full_example_three_singletons():
    assert greedy_schedule(base_of(MERGE_EXAMPLE_FULL)).layers == ((0,), (1,), (2,))


def test_greedy_top_pair_example():
    assert greedy_schedule(base_of(MERGE_EXAMPLE_TOP_PAIR)).layers == ((0, 1), (2,))


def test_greedy_outer_pair_example():
    assert greedy_schedule(base_of(MERGE_EXAMPLE_OUTER_PAIR)).layers == ((0, 2), (1,))


def test_single_row_schedule():
    sched = single_row_schedule(base_of(MERGE_EXAMPLE_FULL))
    assert sched.layers == ((0,), (1,), (2,))
    assert sched.k1 == 1


def test_schedule_validation():
    with pytest.raises(ValueError, match="no layers"):
        LayerSchedule(layers=())
    with pytest.raises(ValueError, match="empty layer"):
        LayerSchedule(layers=((0,), ()))
    with pytest.raises(ValueError, match="partition"):
        LayerSchedule(layers=((0, 1), (1,)))
    with pytest.raises(ValueError, match="partition"):
        LayerSchedule(layers=((0,), (2,)))


def test_schedule_determinism():
    rng = np.random.default_rng(11)
    for _ in range(20):
        shifts, z = random_base_matrix(rng)
        base = base_of(shifts, z)
        assert greedy_schedule(base).layers == greedy_schedule(base).layers


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_greedy_schedule_invariants(seed):
    shifts, z = random_base_matrix(np.random.default_rng(seed))
    base = base_of(shifts, z)
    sched = greedy_schedule(base)
    # partition of the base rows
    flat = sorted(r for layer in sched.layers for r in layer)
    assert flat == list(range(base.n_rows))
    # disjoint column support inside every layer
    support = base.shifts >= 0
    for layer in sched.layers:
        assert support[list(layer)].sum(axis=0).max() <= 1
    # layer count bounds
    assert len(sched.layers) <= base.n_rows
    adj = conflict_graph(base)
    if base.n_rows > 1 and adj[~np.eye(base.n_rows, dtype=bool)].all():
        assert len(sched.layers) == base.n_rows
    assert sched.k1 == min(len(layer) for layer in sched.layers)


def test_merged_layer_checks_touch_disjoint_variables():
    # expanded view of the merging guarantee, on a mergeable code
    base = base_of(MERGE_EXAMPLE_TOP_PAIR, z=5)
    sched = greedy_schedule(base)
    rows = expand(base)
    z = base.z
    for layer in sched.layers:
        seen = set()
        for r in layer:
            for k in range(z):
                vars_here = set(rows[r * z + k].tolist())
                assert not (seen & vars_here)
                seen |= vars_here


# ---------------------------------------------------------- utilization


def test_utilization_reference_point():
    report = UtilizationReport(k1=1, k2=128, z=2500)
    assert report.utilization == pytest.approx(0.00477, abs=1e-5)
    assert report.utilization == 1 * 128 * 2500 / 67108864


def test_utilization_saturation():
    assert UtilizationReport(k1=1, k2=1, z=LANE_BUDGET).utilization == 1.0


def test_utilization_small_case():
    report = UtilizationReport(k1=2, k2=64, z=100)
    assert report.utilization == pytest.approx(12800 / 67108864)


def test_utilization_rejects_oversubscription():
    with pytest.raises(ValueError, match="exceed"):
        UtilizationReport(k1=2, k2=1, z=LANE_BUDGET)
    with pytest.raises(ValueError, match="positive"):
        UtilizationReport(k1=0, k2=1, z=1)


def test_utilization_of_schedule_uses_min_layer_size():
    sched = LayerSchedule(layers=((0, 1), (2,)))
    report = utilization(sched, k2=64, z=100)
    assert report.k1 == 1
    assert report.per_layer == (
        2 * 64 * 100 / LANE_BUDGET,
        1 * 64 * 100 / LANE_BUDGET,
    )
    with pytest.raises(ValueError, match="positive"):
        utilization(sched, k2=0, z=100)


def test_utilization_custom_lane_budget():
    report = utilization(LayerSchedule(layers=((0,),)), k2=4, z=8, lane_budget=64)
    assert report.utilization == 0.5


# ------------------------------------------------------------- dumping


def test_format_schedule():
    sched = LayerSchedule(layers=((0, 2), (1,)))
    assert format_schedule(sched) == "0 2\n1\n"
