"""Information-theoretic measurements over networks and datasets.

Memory-equivalent capacity (MEC) counts how many bits of labeled data a
network can memorize. The count walks the layers in order and treats
parameters as memory, capped by the information that can actually reach them:

* Layer 1 sees continuous inputs, so every enabled weight and bias counts
  in full: C(1) = R(1).
* A layer-1 neuron's output is a threshold decision worth at most 1 bit, so
  the bits arriving at a later layer from layer-1 sources equal the number
  of distinct layer-1 neurons wired into it.
* A deeper layer can never emit more information than it could absorb, so a
  source layer m >= 2 relays min(R_neuron(m), B(m)) bits onward, where B(m)
  is the bit budget that reached m itself.
* For layers l >= 2, the neuron-fed parameters are capped by the incoming
  bits while feature-fed skip weights stay uncapped (inputs are continuous):
  C(l) = min(R_neuron(l), B(l)) + R_input(l).

mec_bits is the sum of the per-layer contributions. The cap is what makes
widening an already-saturated layer a no-op for total capacity, and it is
also why disabling an edge can never increase the total.

Expected capacity demand estimates the bits a labeling requires: sort rows
by the sum of their feature values (ties put -1 before +1), count adjacent
label transitions t, and charge one threshold unit of d+1 parameters per
transition: demand = t * (d + 1).

The generalization ratio G divides correctly predicted instances by
mec_bits; G <= 1 means the network may merely be memorizing, G > 1 means it
compresses beyond memorization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from netcap.errors import EmptyDatasetError, UndefinedCapacityError, ValidationError
from netcap.network import EvalReport
from netcap.topology import Topology, is_feature

DEMAND_SAMPLE_LIMIT = 100_000
DEFAULT_BIAS_THRESHOLD = 0.1


@dataclass(frozen=True)
class LayerCapacity:
    """Per-layer accounting behind a MEC total."""

    layer: int
    neuron_params: int  # weights from neuron sources + one bias per neuron
    input_params: int  # weights from feature sources (uncapped)
    incoming_bits: int | None  # None for layer 1 (continuous inputs)
    contribution: int
    relay_bits: int  # bits this layer can pass to later layers


@dataclass
class DemandTrace:
    """Intermediate values of the capacity-demand estimate, for display and tests."""

    dimension_d: int
    row_sums: np.ndarray
    sorted_labels: np.ndarray
    transition_count_t: int
    estimated: bool = False


@dataclass(frozen=True)
class MeasurementReport:
    mec_bits: int
    demand_bits: int
    generalization: float
    balance: float
    bias_flagged: bool
    per_class_acc: tuple[float, float]
    bias_detail: str = ""

    def as_dict(self) -> dict:
        return {
            "mec_bits": self.mec_bits,
            "demand_bits": self.demand_bits,
            "generalization": self.generalization,
            "balance": self.balance,
            "bias_flagged": self.bias_flagged,
            "acc_positive": self.per_class_acc[0],
            "acc_negative": self.per_class_acc[1],
            "bias_detail": self.bias_detail,
        }


def mec_trace(topology: Topology) -> list[LayerCapacity]:
    """Layer-by-layer capacity accounting; disabled edges are invisible."""
    n_layers = topology.layer_count
    input_params = [0] * (n_layers + 1)
    neuron_edges = [0] * (n_layers + 1)
    sources: list[set] = [set() for _ in range(n_layers + 1)]
    for (src, tgt), enabled in topology.edges.items():
        if not enabled:
            continue
        layer = tgt[0]
        if is_feature(src):
            input_params[layer] += 1
        else:
            neuron_edges[layer] += 1
            sources[layer].add(src)

    trace: list[LayerCapacity] = []
    relay = [0] * (n_layers + 1)
    for layer in range(1, n_layers + 1):
        neuron_params = neuron_edges[layer] + topology.width(layer)
        if layer == 1:
            contribution = neuron_params + input_params[layer]
            incoming = None
        else:
            incoming = 0
            source_layers = {src[0] for src in sources[layer]}
            for m in sorted(source_layers):
                if m == 1:
                    incoming += sum(1 for src in sources[layer] if src[0] == 1)
                else:
                    incoming += relay[m]
            contribution = min(neuron_params, incoming) + input_params[layer]
        # What this layer can pass on: its neuron-fed capacity. Feature-fed
        # skip weights do not widen the channel out of the layer.
        relay[layer] = neuron_params if layer == 1 else min(neuron_params, incoming)
        trace.append(
            LayerCapacity(
                layer=layer,
                neuron_params=neuron_params,
                input_params=input_params[layer],
                incoming_bits=incoming,
                contribution=contribution,
                relay_bits=relay[layer],
            )
        )
    return trace


def mec(topology: Topology) -> tuple[int, list[int]]:
    """Memory-equivalent capacity in bits, with per-layer contributions."""
    trace = mec_trace(topology)
    per_layer = [t.contribution for t in trace]
    return sum(per_layer), per_layer


def capacity_demand(
    view,
    *,
    max_rows: int = DEMAND_SAMPLE_LIMIT,
    sample_seed: int = 17,
) -> tuple[int, DemandTrace]:
    """Estimate the capacity in bits this labeling demands.

    Rows beyond `max_rows` are reduced to a seeded uniform subsample and the
    trace is marked as an estimate, keeping the interactive path bounded.
    """
    x = np.asarray(view.x, dtype=float)
    labels = np.asarray(view.labels, dtype=int)
    n = len(labels)
    if n == 0:
        raise EmptyDatasetError("capacity demand needs at least one row")
    d = x.shape[1]
    estimated = n > max_rows
    if estimated:
        keep = np.random.default_rng(sample_seed).choice(n, max_rows, replace=False)
        x = x[keep]
        labels = labels[keep]
    sums = x.sum(axis=1)
    order = np.lexsort((labels, sums))
    sorted_labels = labels[order]
    t = int(np.count_nonzero(sorted_labels[1:] != sorted_labels[:-1]))
    demand = t * (d + 1)
    return demand, DemandTrace(
        dimension_d=d,
        row_sums=sums,
        sorted_labels=sorted_labels,
        transition_count_t=t,
        estimated=estimated,
    )


def generalization_ratio(correct_count: int, mec_bits: int) -> float:
    """Correctly predicted instances per bit of capacity, full precision.

    Display paths round to two decimals; keep the raw value for arithmetic.
    """
    if correct_count < 0:
        raise ValidationError("correct_count must be >= 0")
    if mec_bits <= 0:
        raise UndefinedCapacityError(
            "generalization ratio is undefined for a zero-capacity network"
        )
    return correct_count / mec_bits


def class_balance(labels) -> float:
    """Fraction of +1 labels."""
    arr = np.asarray(labels)
    if arr.size == 0:
        raise EmptyDatasetError("class balance needs at least one label")
    return float(np.mean(arr == 1))


def bias_indicator(
    report: EvalReport,
    balance: float,
    threshold: float = DEFAULT_BIAS_THRESHOLD,
) -> tuple[bool, str]:
    """Flag when per-class accuracies diverge more than `threshold`.

    The detail pairs the accuracy gap with the class balance so the user can
    judge whether imbalance explains the gap.
    """
    if not 0.0 < threshold < 1.0:
        raise ValidationError("bias threshold must be in (0, 1)")
    gap = abs(report.acc_positive - report.acc_negative)
    flagged = gap > threshold
    notes = []
    if not report.acc_positive_defined:
        notes.append("no positive examples")
    if not report.acc_negative_defined:
        notes.append("no negative examples")
    suffix = f" ({'; '.join(notes)})" if notes else ""
    detail = (
        f"class accuracy gap {gap:.2f} "
        f"(positive {report.acc_positive:.2f}, negative {report.acc_negative:.2f}) "
        f"with balance {balance:.2f}{suffix}"
    )
    return flagged, detail


def measurement_report(
    topology: Topology,
    view,
    eval_report: EvalReport,
    threshold: float = DEFAULT_BIAS_THRESHOLD,
) -> MeasurementReport:
    """Bundle all live measurements for one network/dataset pair."""
    mec_bits, _ = mec(topology)
    demand_bits, _ = capacity_demand(view)
    balance = class_balance(view.labels)
    flagged, detail = bias_indicator(eval_report, balance, threshold)
    return MeasurementReport(
        mec_bits=mec_bits,
        demand_bits=demand_bits,
        generalization=generalization_ratio(eval_report.correct_count, mec_bits),
        balance=balance,
        bias_flagged=flagged,
        per_class_acc=(eval_report.acc_positive, eval_report.acc_negative),
        bias_detail=detail,
    )
