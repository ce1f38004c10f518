import numpy as np
import pytest

from netcap.errors import EmptyDatasetError, UndefinedCapacityError, ValidationError
from netcap.measurements import (
    bias_indicator,
    capacity_demand,
    class_balance,
    generalization_ratio,
    measurement_report,
    mec,
    mec_trace,
)
from netcap.network import EvalReport, NetworkState, Params, evaluate, init_params
from netcap.topology import (
    AddSkipEdge,
    RemoveEdge,
    ToggleEdge,
    Topology,
    apply_edit,
)

from _helpers import demand_oracle, random_topology, view_from_rows


def report_with(acc_pos, acc_neg, n_pos=50, n_neg=50):
    total = n_pos + n_neg
    correct = int(round(acc_pos * n_pos + acc_neg * n_neg))
    return EvalReport(
        total=total,
        correct_count=correct,
        accuracy=correct / total,
        acc_positive=acc_pos,
        acc_negative=acc_neg,
        mean_loss=0.0,
        positive_count=n_pos,
        negative_count=n_neg,
    )


# --- memory-equivalent capacity -------------------------------------------------


def test_mec_single_output_neuron():
    bits, per_layer = mec(Topology.dense(("x1", "x2"), ()))
    assert bits == 3  # 2 weights + 1 bias
    assert per_layer == [3]


def test_mec_one_hidden_layer_hand_count():
    bits, per_layer = mec(Topology.dense(("x1", "x2"), (3,)))
    assert per_layer == [9, 3]  # 3*(2+1); then min(3+1, 3 one-bit sources)
    assert bits == 12


def test_mec_widening_a_capped_layer_changes_nothing():
    totals = {}
    for k in (1, 2, 3, 5, 8):
        topo = Topology.dense(("x1", "x2"), (3, k))
        bits, per_layer = mec(topo)
        assert per_layer[1] == 3  # min(4k, 3) for every k >= 1
        totals[k] = bits
    assert totals[2] == totals[5] == totals[8]


def test_mec_counts_only_enabled_edges():
    topo = Topology.dense(("x1", "x2"), (3,))
    masked = apply_edit(topo, ToggleEdge("x1", (1, 0)))
    assert mec(masked)[0] == mec(topo)[0] - 1


def test_mec_input_skip_adds_exactly_one_bit():
    for hidden in [(3,), (4, 2), (3, 3, 2)]:
        topo = Topology.dense(("x1", "x2"), hidden)
        base, _ = mec(topo)
        target_layer = len(hidden) if len(hidden) > 1 else 1
        skipped = apply_edit(topo, AddSkipEdge("x2", (target_layer + 1, 0)))
        assert mec(skipped)[0] == base + 1


def test_mec_disabling_never_increases(seed=3):
    rng = np.random.default_rng(seed)
    for _ in range(40):
        topo = random_topology(rng, mask_fraction=0.1, skip_edges=2)
        enabled = [e for e, on in topo.edges.items() if on]
        if not enabled:
            continue
        edge = enabled[int(rng.integers(0, len(enabled)))]
        before, _ = mec(topo)
        after, _ = mec(apply_edit(topo, ToggleEdge(*edge)))
        assert after <= before


def test_mec_layer_one_additions_never_decrease():
    rng = np.random.default_rng(8)
    for _ in range(25):
        topo = random_topology(rng, mask_fraction=0.3)
        before, _ = mec(topo)
        if len(topo.hidden) >= 1 and topo.hidden[0] < 8:
            from netcap.topology import SetWidth

            wider = apply_edit(topo, SetWidth(1, topo.hidden[0] + 1))
            assert mec(wider)[0] >= before
        disabled = [e for e, on in topo.edges.items() if not on and e[1][0] == 1]
        if disabled:
            edge = disabled[int(rng.integers(0, len(disabled)))]
            assert mec(apply_edit(topo, ToggleEdge(*edge)))[0] >= before


def test_mec_trace_reports_layer_accounting():
    trace = mec_trace(Topology.dense(("x1", "x2"), (3,)))
    assert trace[0].neuron_params == 3  # biases only, inputs carry the rest
    assert trace[0].input_params == 6
    assert trace[0].incoming_bits is None
    assert trace[1].incoming_bits == 3
    assert trace[1].contribution == 3


def test_mec_stranded_deep_layer_contributes_nothing():
    topo = Topology.dense(("x1",), (2, 1))
    for src in ((1, 0), (1, 1)):
        topo = apply_edit(topo, RemoveEdge(src, (2, 0)))
    bits, per_layer = mec(topo)
    assert per_layer[1] == 0
    assert per_layer[2] == 0  # nothing flows through the stranded relay
    assert bits == per_layer[0]


# --- capacity demand ----------------------------------------------------------------


def test_demand_all_labels_identical_is_zero():
    view = view_from_rows([[0.0, 1.0], [2.0, 1.0], [3.0, 0.0]], [1, 1, 1])
    bits, trace = capacity_demand(view)
    assert bits == 0
    assert trace.transition_count_t == 0


def test_demand_xor_hand_value():
    view = view_from_rows([[0, 0], [0, 1], [1, 0], [1, 1]], [-1, 1, 1, -1])
    bits, trace = capacity_demand(view)
    assert trace.dimension_d == 2
    assert list(trace.sorted_labels) == [-1, 1, 1, -1]
    assert trace.transition_count_t == 2
    assert bits == 6


def test_demand_linearly_separable_by_sum_costs_one_threshold():
    rows = [[float(i), 0.5] for i in range(10)]
    labels = [-1] * 5 + [1] * 5
    bits, trace = capacity_demand(view_from_rows(rows, labels))
    assert trace.transition_count_t == 1
    assert bits == 3  # d + 1


def test_demand_tie_break_minimizes_transitions():
    # Equal sums mix labels; ordering -1 before +1 keeps a single boundary.
    rows = [[1.0], [2.0], [2.0], [3.0]]
    labels = [-1, -1, 1, 1]
    bits, trace = capacity_demand(view_from_rows(rows, labels))
    assert trace.transition_count_t == 1
    assert bits == 2


def test_demand_matches_oracle_on_random_cases():
    rng = np.random.default_rng(4)
    for _ in range(300):
        n = int(rng.integers(1, 13))
        d = int(rng.integers(1, 4))
        rows = rng.integers(-4, 5, size=(n, d)).astype(float)
        labels = rng.choice([-1, 1], size=n)
        bits, _ = capacity_demand(view_from_rows(rows, labels))
        assert bits == demand_oracle([list(r) for r in rows], list(labels))


def test_demand_bounds():
    rng = np.random.default_rng(9)
    for _ in range(100):
        n = int(rng.integers(1, 20))
        d = int(rng.integers(1, 4))
        rows = rng.normal(size=(n, d))
        labels = rng.choice([-1, 1], size=n)
        bits, _ = capacity_demand(view_from_rows(rows, labels))
        assert 0 <= bits <= (n - 1) * (d + 1)


def test_demand_empty_view_rejected():
    view = view_from_rows(np.empty((0, 2)), [])
    with pytest.raises(EmptyDatasetError):
        capacity_demand(view)


def test_demand_subsamples_large_views_as_estimate():
    rng = np.random.default_rng(5)
    view = view_from_rows(rng.normal(size=(200, 2)), rng.choice([-1, 1], size=200))
    bits, trace = capacity_demand(view, max_rows=50)
    assert trace.estimated
    assert len(trace.sorted_labels) == 50
    assert 0 <= bits <= 49 * 3
    again, _ = capacity_demand(view, max_rows=50)
    assert again == bits  # seeded subsample


# --- generalization ratio --------------------------------------------------------------


def test_generalization_reported_figure():
    g = generalization_ratio(500, 12)
    assert round(g, 2) == 41.67


def test_generalization_zero_numerator():
    for m in (1, 7, 500):
        assert generalization_ratio(0, m) == 0.0


def test_generalization_boundary_value_is_one():
    assert generalization_ratio(10, 10) == 1.0


def test_generalization_zero_capacity_is_an_error():
    with pytest.raises(UndefinedCapacityError):
        generalization_ratio(5, 0)
    with pytest.raises(ValidationError):
        generalization_ratio(-1, 10)


# --- balance and bias --------------------------------------------------------------------


def test_class_balance_values():
    assert class_balance([1, 1, 1]) == 1.0
    assert class_balance([-1, -1]) == 0.0
    assert class_balance([1] * 45 + [-1] * 55) == pytest.approx(0.45)
    with pytest.raises(EmptyDatasetError):
        class_balance([])


def test_bias_indicator_no_gap_not_flagged():
    flagged, detail = bias_indicator(report_with(1.0, 1.0), balance=0.2)
    assert not flagged
    assert "gap 0.00" in detail


def test_bias_indicator_full_gap_flagged():
    flagged, detail = bias_indicator(report_with(1.0, 0.0, n_pos=90, n_neg=10), balance=0.9)
    assert flagged
    assert "0.90" in detail


def test_bias_indicator_small_gap_within_default_threshold():
    flagged, _ = bias_indicator(report_with(0.95, 0.90), balance=0.5)
    assert not flagged


def test_bias_indicator_threshold_validated():
    with pytest.raises(ValidationError):
        bias_indicator(report_with(1.0, 1.0), balance=0.5, threshold=0.0)


def test_bias_indicator_notes_empty_classes():
    report = report_with(1.0, 1.0, n_pos=4, n_neg=0)
    _, detail = bias_indicator(report, balance=1.0)
    assert "no negative examples" in detail


# --- combined report -------------------------------------------------------------------------


def test_measurement_report_is_consistent():
    topo = Topology.dense(("x1", "x2"), (3,))
    state = NetworkState(topo, init_params(topo, 2), 0)
    rng = np.random.default_rng(0)
    view = view_from_rows(rng.normal(size=(40, 2)), rng.choice([-1, 1], size=40))
    eval_report = evaluate(state, view)
    report = measurement_report(topo, view, eval_report)
    assert report.mec_bits == 12
    assert report.generalization == pytest.approx(eval_report.correct_count / 12)
    assert report.per_class_acc == (eval_report.acc_positive, eval_report.acc_negative)
    assert 0.0 <= report.balance <= 1.0
