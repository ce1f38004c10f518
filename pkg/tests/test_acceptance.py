"""Acceptance suite: one test per release criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every test also enforces its stated runtime budget.
"""

import itertools
import json
import time

import numpy as np

from netcap.datasets import generate
from netcap.measurements import (
    bias_indicator,
    capacity_demand,
    class_balance,
    generalization_ratio,
    mec,
    mec_trace,
)
from netcap.network import (
    NetworkState,
    Params,
    Trainer,
    TrainingConfig,
    evaluate,
    init_params,
    reconcile_params,
    train_step,
)
from netcap.records import export_record, import_record, record_to_json
from netcap.runner import prepare_data, run_experiment
from netcap.topology import (
    FEATURES,
    AddSkipEdge,
    RemoveEdge,
    SetFeatures,
    SetWidth,
    ToggleEdge,
    Topology,
    apply_edit,
    is_feature,
)

from _helpers import demand_oracle, random_topology, view_from_rows


def _run(name: str, budget: float, fn) -> None:
    start = time.perf_counter()
    try:
        detail = fn() or ""
    except AssertionError as exc:
        print(f"[FAIL] {name}: {exc}")
        raise
    elapsed = time.perf_counter() - start
    print(f"[PASS] {name} ({elapsed:.2f}s{'; ' + detail if detail else ''})")
    assert elapsed < budget, f"{name} exceeded its {budget}s budget: {elapsed:.2f}s"


# --- 1. G arithmetic ------------------------------------------------------------


def test_g_arithmetic():
    def check():
        g = generalization_ratio(500, 12)
        assert abs(g - 41.67) <= 0.005, g
        assert round(g, 2) == 41.67
        return f"G(500, 12) = {round(g, 2)}"

    _run("G arithmetic", 1.0, check)


# --- 2. layer-widening saturation -------------------------------------------------


def _saturated(topology: Topology, layer: int) -> bool:
    """Layer's parameters exceed its incoming bits, and the next layer has
    enough parameters to absorb what this layer relays (so the min stays
    bound by information, not by parameter count, on both sides)."""
    stats = mec_trace(topology)
    here, downstream = stats[layer - 1], stats[layer]
    return (
        here.neuron_params >= (here.incoming_bits or 0)
        and downstream.neuron_params >= (downstream.incoming_bits or 0)
    )


def test_widening_a_saturated_layer_leaves_capacity_unchanged():
    def check():
        rng = np.random.default_rng(20260808)
        checked = 0
        comparisons = 0
        while checked < 50:
            depth = int(rng.integers(2, 4))
            widths = [int(rng.integers(1, 9)) for _ in range(depth)]
            feats = list(
                rng.choice(FEATURES, size=int(rng.integers(1, 4)), replace=False)
            )
            activation = str(rng.choice(["tanh", "relu", "sigmoid", "linear"]))
            layer = int(rng.integers(2, depth + 1))

            variants = {}
            for w in range(1, 9):
                trial = list(widths)
                trial[layer - 1] = w
                variants[w] = Topology.dense(feats, trial, activation)
            saturated_widths = [w for w in range(1, 9) if _saturated(variants[w], layer)]
            if not saturated_widths or saturated_widths[0] == 8:
                continue
            first = saturated_widths[0]
            totals = {w: mec(variants[w])[0] for w in range(first, 9)}
            assert len(set(totals.values())) == 1, (
                f"widths {sorted(totals)} of layer {layer} in {widths} "
                f"changed capacity: {totals}"
            )
            # Per-layer view: the widened layer's own contribution is already
            # constant once its parameters exceed the incoming bits.
            contribs = {
                w: mec(variants[w])[1][layer - 1]
                for w in range(1, 9)
                if mec_trace(variants[w])[layer - 1].neuron_params
                >= (mec_trace(variants[w])[layer - 1].incoming_bits or 0)
            }
            assert len(set(contribs.values())) == 1
            checked += 1
            comparisons += len(totals) - 1
        return f"{checked} topologies, {comparisons} widenings"

    _run("layer-widening saturation", 5.0, check)


# --- 3. gradient check -------------------------------------------------------------


def test_gradient_check_against_central_differences():
    def check():
        rng = np.random.default_rng(77)
        h = 1e-5
        worst = 0.0
        for _ in range(100):
            # Smooth activations only: central differences straddle the relu
            # kink and would measure the wrong thing there.
            topo = random_topology(
                rng, max_hidden_layers=3, max_width=4,
                activations=("tanh", "sigmoid", "linear"),
            )
            params = init_params(topo, int(rng.integers(0, 2**31)))
            d = len(topo.features)
            x = rng.uniform(-2.0, 2.0, size=(3, d))
            y = rng.choice([-1.0, 1.0], size=3)
            view = view_from_rows(x, y.astype(int))
            batch = [(list(row), int(label)) for row, label in zip(x, y)]

            # lr = 1 recovers the analytic gradient as (old - new).
            config = TrainingConfig(learning_rate=1.0, batch_size=3, seed=0)
            stepped, _ = train_step(NetworkState(topo, params, 0), batch, config)

            def loss_at(p: Params) -> float:
                return evaluate(NetworkState(topo, p, 0), view).mean_loss

            for edge, w in params.weights.items():
                analytic = w - stepped.params.weights[edge]
                plus = Params(dict(params.weights), dict(params.biases))
                plus.weights[edge] = w + h
                minus = Params(dict(params.weights), dict(params.biases))
                minus.weights[edge] = w - h
                numeric = (loss_at(plus) - loss_at(minus)) / (2 * h)
                rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-6)
                worst = max(worst, rel)
                assert rel <= 1e-4, f"edge {edge}: {analytic} vs {numeric} (rel {rel})"
            for neuron, b in params.biases.items():
                analytic = b - stepped.params.biases[neuron]
                plus = Params(dict(params.weights), dict(params.biases))
                plus.biases[neuron] = b + h
                minus = Params(dict(params.weights), dict(params.biases))
                minus.biases[neuron] = b - h
                numeric = (loss_at(plus) - loss_at(minus)) / (2 * h)
                rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-6)
                worst = max(worst, rel)
                assert rel <= 1e-4, f"bias {neuron}: {analytic} vs {numeric} (rel {rel})"
        return f"100 networks, worst relative error {worst:.2e}"

    _run("gradient check", 30.0, check)


# --- 4. demand oracle ----------------------------------------------------------------


def test_demand_matches_oracle_exhaustively():
    def check():
        rng = np.random.default_rng(123)
        cases = 0
        for n in range(1, 13):
            for _ in range(2):
                d = int(rng.integers(1, 4))
                rows = rng.integers(-6, 7, size=(n, d)).astype(float)
                row_lists = [list(r) for r in rows]
                for bits_assignment in itertools.product((-1, 1), repeat=n):
                    labels = list(bits_assignment)
                    got, _ = capacity_demand(view_from_rows(rows, labels))
                    want = demand_oracle(row_lists, labels)
                    assert got == want, (rows, labels, got, want)
                    cases += 1
        assert cases >= 10_000, cases
        return f"{cases} exhaustive labelings"

    _run("demand oracle equivalence", 60.0, check)


# --- 5. mask equivalence -----------------------------------------------------------------


def test_mask_equivalence_is_exact():
    def check():
        rng = np.random.default_rng(31)
        done = 0
        while done < 50:
            topo = random_topology(rng, mask_fraction=0.15, skip_edges=1)
            enabled = [e for e, on in topo.edges.items() if on]
            if not enabled:
                continue
            edge = enabled[int(rng.integers(0, len(enabled)))]
            params = init_params(topo, int(rng.integers(0, 2**31)))

            masked_topo = apply_edit(topo, ToggleEdge(*edge))
            masked_params = reconcile_params(params, masked_topo, seed=0)
            zeroed = Params(dict(params.weights), dict(params.biases))
            zeroed.weights[edge] = 0.0

            d = len(topo.features)
            x = rng.uniform(-6, 6, size=(5, d))
            y = rng.choice([-1, 1], size=5).astype(int)
            view = view_from_rows(x, y)
            r1 = evaluate(NetworkState(masked_topo, masked_params, 0), view)
            r2 = evaluate(NetworkState(topo, zeroed, 0), view)
            assert r1.mean_loss == r2.mean_loss
            assert r1.correct_count == r2.correct_count

            config = TrainingConfig(learning_rate=0.2, batch_size=5, seed=1)
            batch = [(list(row), int(label)) for row, label in zip(x, y)]
            s1, loss1 = train_step(NetworkState(masked_topo, masked_params, 0), batch, config)
            s2, loss2 = train_step(NetworkState(topo, zeroed, 0), batch, config)
            assert loss1 == loss2
            for e, w in s1.params.weights.items():
                assert s2.params.weights[e] == w, e
            assert s1.params.biases == s2.params.biases
            done += 1
        return "50 states, exact equality"

    _run("mask equivalence", 30.0, check)


# --- 6. training sanity ---------------------------------------------------------------------


def test_training_reaches_ninety_percent_and_generalizes():
    def check():
        topo = Topology.dense(("x1", "x2"), (8, 4), "tanh")
        config = TrainingConfig(learning_rate=0.03, batch_size=10, seed=7)
        dataset = generate("circle", 500, 0.0, 12)
        data = prepare_data(dataset, topo, 0.5, 3)
        trainer = Trainer(NetworkState(topo, init_params(topo, config.seed), 0), config, data.train_view)
        epochs = 0
        accuracy = 0.0
        while epochs < 4000:
            trainer.run_epochs(25)
            epochs += 25
            report = evaluate(trainer.snapshot(), data.test_view)
            accuracy = report.accuracy
            if accuracy >= 0.9:
                break
        assert accuracy >= 0.9, f"only {accuracy:.3f} after {epochs} epochs"
        report = evaluate(trainer.snapshot(), data.test_view)
        g = generalization_ratio(report.correct_count, mec(topo)[0])
        assert g > 1.0, g
        return f"{accuracy:.3f} accuracy after {epochs} epochs, G = {g:.2f}"

    _run("training sanity", 60.0, check)


# --- 7. bias indicator ------------------------------------------------------------------------


def test_bias_indicator_flags_always_positive_classifier():
    def check():
        topo = Topology.dense(("x1", "x2"), ())
        params = Params(
            {("x1", (1, 0)): 0.0, ("x2", (1, 0)): 0.0}, {(1, 0): 0.1}
        )  # tanh(0.1) > 0: predicts +1 everywhere
        rng = np.random.default_rng(6)
        x = rng.uniform(-6, 6, size=(100, 2))
        labels = np.array([1] * 90 + [-1] * 10)
        view = view_from_rows(x, labels)
        report = evaluate(NetworkState(topo, params, 0), view)
        assert report.acc_positive == 1.0
        assert report.acc_negative == 0.0
        flagged, detail = bias_indicator(report, class_balance(labels))
        assert flagged, detail
        return detail

    _run("bias indicator", 5.0, check)


# --- 8. determinism and persistence --------------------------------------------------------------


def test_determinism_and_persistence():
    def check():
        topo = Topology.dense(("x1", "x2"), (4, 2))
        config = TrainingConfig(learning_rate=0.03, batch_size=10, seed=5, epochs_per_tick=10)
        dataset = generate("circle", 200, 0.1, 9)

        first = run_experiment(topo, config, dataset, epochs=60, split_seed=2)
        second = run_experiment(topo, config, dataset, epochs=60, split_seed=2)
        assert first.frames == second.frames, "same-seed histories diverged"
        assert first.state.params == second.state.params

        record = export_record(
            first.state.topology,
            config,
            first.state.params,
            dataset,
            train_fraction=0.5,
            split_seed=2,
            step=first.state.step,
            frames=first.frames,
        )
        imported = import_record(json.loads(record_to_json(record)))
        state = NetworkState(imported.topology, imported.params, imported.step)
        report = evaluate(state, imported.data.test_view)
        assert report.accuracy == first.test_report.accuracy  # bit-exact
        assert mec(imported.topology)[0] == first.measurements.mec_bits
        assert capacity_demand(imported.data.full_view)[0] == first.measurements.demand_bits
        return "histories identical; re-import bit-exact"

    _run("determinism & persistence", 60.0, check)


# --- 9. measurement-change contract ------------------------------------------------------------


def _information_bearing_edit(rng, topo: Topology):
    """Draw an edit whose parameter change the capacity rule must see:
    feature-side parameters are never capped, layer-1 structure is never
    capped, and neuron edges qualify while their layer is parameter-bound."""
    stats = {s.layer: s for s in mec_trace(topo)}
    choices = []

    l1_edges = [e for e in topo.edges if is_feature(e[0]) and e[1][0] == 1]
    if l1_edges:
        choices.append(("l1_edge", l1_edges))
    input_skips = [e for e in topo.edges if is_feature(e[0]) and e[1][0] >= 2]
    if input_skips:
        choices.append(("toggle_skip", input_skips))
    skip_targets = [
        (f, n)
        for f in topo.features
        for n in topo.neurons()
        if n[0] >= 2 and (f, n) not in topo.edges
    ]
    if skip_targets:
        choices.append(("add_skip", skip_targets))
    if topo.hidden:
        choices.append(("l1_width", [None]))
    unselected = [f for f in FEATURES if f not in topo.features]
    if unselected:
        choices.append(("add_feature", unselected))
    removable = [
        f
        for f in topo.features
        if len(topo.features) > 1
        and any(is_feature(s) and s == f and on for (s, _), on in topo.edges.items())
    ]
    if removable:
        choices.append(("drop_feature", removable))
    sensitive = []
    for (src, tgt), on in topo.edges.items():
        if is_feature(src):
            continue
        layer_stats = stats[tgt[0]]
        incoming = layer_stats.incoming_bits or 0
        if on and layer_stats.neuron_params <= incoming:
            sensitive.append((src, tgt))
        elif not on and layer_stats.neuron_params < incoming:
            sensitive.append((src, tgt))
    if sensitive:
        choices.append(("neuron_edge", sensitive))

    kind, pool = choices[int(rng.integers(0, len(choices)))]
    pick = pool[int(rng.integers(0, len(pool)))]
    if kind == "l1_edge" or kind == "toggle_skip" or kind == "neuron_edge":
        return ToggleEdge(*pick)
    if kind == "add_skip":
        return AddSkipEdge(*pick)
    if kind == "l1_width":
        width = topo.hidden[0]
        new = width + 1 if width < 8 else width - 1
        return SetWidth(1, new)
    if kind == "add_feature":
        return SetFeatures(tuple(list(topo.features) + [pick]))
    return SetFeatures(tuple(f for f in topo.features if f != pick))


def test_every_information_bearing_edit_changes_mec():
    def check():
        rng = np.random.default_rng(404)
        verified = 0
        while verified < 200:
            topo = random_topology(rng, mask_fraction=0.2, skip_edges=1)
            edit = _information_bearing_edit(rng, topo)
            edited = apply_edit(topo, edit)
            if edited.enabled_parameter_count() == topo.enabled_parameter_count():
                continue
            before, after = mec(topo)[0], mec(edited)[0]
            assert after != before, f"{edit} left capacity at {before} for {topo.hidden}"
            verified += 1
        return "200 edits, capacity moved every time"

    _run("measurement-change contract", 30.0, check)
