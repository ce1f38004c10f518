"""Dense-network training engine: seeded init, forward pass, SGD with masks.

The engine is deterministic end to end: identical (topology, seed, config,
data ordering) reproduce bitwise-identical parameter trajectories. Disabled
edges are materialized as zero entries that never receive updates, which makes
"edge disabled" and "edge enabled with weight zero" exactly equivalent for
both forward outputs and the surviving parameters after a step.

Labels are -1/+1 and the loss is squared error against a tanh output, so
predictions live in [-1, 1] and the classification threshold sits at 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from netcap.errors import DivergenceError, InputShapeError, ValidationError
from netcap.topology import EdgeKey, Neuron, Node, Topology, edge_sort_key, is_feature

INIT_WEIGHT_SPAN = 0.5
INIT_BIAS = 0.1

REGULARIZATIONS = ("none", "l1", "l2")


@dataclass(frozen=True)
class TrainingConfig:
    learning_rate: float = 0.03
    batch_size: int = 10
    regularization: str = "none"
    regularization_rate: float = 0.0
    seed: int = 42
    epochs_per_tick: int = 10

    def validate(self) -> None:
        if not 0.0 < self.learning_rate <= 10.0:
            raise ValidationError("learning_rate must be in (0, 10]")
        if self.batch_size < 1:
            raise ValidationError("batch_size must be >= 1")
        if self.regularization not in REGULARIZATIONS:
            raise ValidationError(f"regularization must be one of {REGULARIZATIONS}")
        if self.regularization_rate < 0.0:
            raise ValidationError("regularization_rate must be >= 0")
        if self.epochs_per_tick < 1:
            raise ValidationError("epochs_per_tick must be >= 1")


@dataclass(frozen=True)
class Params:
    """Weights keyed by enabled edge, biases keyed by neuron."""

    weights: dict[EdgeKey, float]
    biases: dict[Neuron, float]

    def copy(self) -> "Params":
        return Params(dict(self.weights), dict(self.biases))


@dataclass(frozen=True)
class NetworkState:
    topology: Topology
    params: Params
    step: int = 0


@dataclass(frozen=True)
class EvalReport:
    total: int
    correct_count: int
    accuracy: float
    acc_positive: float
    acc_negative: float
    mean_loss: float
    positive_count: int
    negative_count: int

    @property
    def acc_positive_defined(self) -> bool:
        return self.positive_count > 0

    @property
    def acc_negative_defined(self) -> bool:
        return self.negative_count > 0


def init_params(topology: Topology, seed: int) -> Params:
    """Seeded parameter init: weights uniform in [-0.5, 0.5), biases 0.1.

    Edges are visited in canonical order so the same (topology, seed) always
    yields the same values. Disabled edges get no weight entry.
    """
    enabled = sorted(topology.enabled_edges(), key=edge_sort_key)
    rng = np.random.default_rng(seed)
    draws = rng.uniform(-INIT_WEIGHT_SPAN, INIT_WEIGHT_SPAN, len(enabled))
    weights = {edge: float(w) for edge, w in zip(enabled, draws)}
    biases = {neuron: INIT_BIAS for neuron in topology.neurons()}
    return Params(weights, biases)


def reconcile_params(params: Params, topology: Topology, seed: int) -> Params:
    """Carry surviving parameters over to an edited topology.

    Weights of edges that remain enabled are kept; new enabled edges draw
    fresh seeded values; stale entries are dropped. Biases behave the same
    with 0.1 for new neurons.
    """
    enabled = sorted(topology.enabled_edges(), key=edge_sort_key)
    fresh = [e for e in enabled if e not in params.weights]
    rng = np.random.default_rng(seed)
    draws = rng.uniform(-INIT_WEIGHT_SPAN, INIT_WEIGHT_SPAN, len(fresh))
    fresh_weights = dict(zip(fresh, (float(w) for w in draws)))
    weights = {e: params.weights.get(e, fresh_weights.get(e, 0.0)) for e in enabled}
    biases = {n: params.biases.get(n, INIT_BIAS) for n in topology.neurons()}
    return Params(weights, biases)


# --- Compiled form ----------------------------------------------------------
#
# The dict-of-edges contract is convenient for editing and persistence but too
# slow for tight training loops. _Compiled packs each layer into a weight
# matrix over every earlier slot (features first, then neurons layer by
# layer); masks mark which entries correspond to enabled edges.


class _Compiled:
    def __init__(self, topology: Topology, params: Params):
        self.topology = topology
        self.activation = topology.activation
        d = len(topology.features)
        self.d = d
        self.layer_widths = [topology.width(l) for l in range(1, topology.layer_count + 1)]
        self.slots: list[Node] = list(topology.features)
        for layer in range(1, topology.layer_count + 1):
            self.slots.extend((layer, j) for j in range(topology.width(layer)))
        self.slot_index = {node: i for i, node in enumerate(self.slots)}
        self.layer_start: list[int] = []
        offset = d
        for w in self.layer_widths:
            self.layer_start.append(offset)
            offset += w

        self.weights: list[np.ndarray] = []
        self.masks: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        for layer, w in enumerate(self.layer_widths, start=1):
            start = self.layer_start[layer - 1]
            self.weights.append(np.zeros((start, w)))
            self.masks.append(np.zeros((start, w), dtype=bool))
            self.biases.append(
                np.array([params.biases[(layer, j)] for j in range(w)], dtype=float)
            )
        for (src, tgt), on in topology.edges.items():
            if not on:
                continue
            layer, j = tgt
            row = self.slot_index[src]
            self.weights[layer - 1][row, j] = params.weights[(src, tgt)]
            self.masks[layer - 1][row, j] = True

    def _act(self, z: np.ndarray, layer: int) -> np.ndarray:
        if layer == len(self.layer_widths):  # output neuron is always tanh
            return np.tanh(z)
        if self.activation == "tanh":
            return np.tanh(z)
        if self.activation == "relu":
            return np.maximum(z, 0.0)
        if self.activation == "sigmoid":
            return 1.0 / (1.0 + np.exp(-z))
        return z

    def _act_grad(self, z: np.ndarray, a: np.ndarray, layer: int) -> np.ndarray:
        if layer == len(self.layer_widths) or self.activation == "tanh":
            return 1.0 - a * a
        if self.activation == "relu":
            return (z > 0.0).astype(float)
        if self.activation == "sigmoid":
            return a * (1.0 - a)
        return np.ones_like(z)

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[np.ndarray]]:
        """Returns (predictions, slot matrix, pre-activations per layer)."""
        n = x.shape[0]
        slots = np.empty((n, len(self.slots)))
        slots[:, : self.d] = x
        zs: list[np.ndarray] = []
        # Overflow shows up as non-finite values and is reported as divergence
        # by the training step, not as a warning here.
        with np.errstate(over="ignore", invalid="ignore"):
            for layer, w in enumerate(self.layer_widths, start=1):
                start = self.layer_start[layer - 1]
                z = slots[:, :start] @ self.weights[layer - 1] + self.biases[layer - 1]
                slots[:, start : start + w] = self._act(z, layer)
                zs.append(z)
        return slots[:, -1], slots, zs

    def sgd_step(self, x: np.ndarray, y: np.ndarray, config: TrainingConfig, step: int) -> float:
        with np.errstate(over="ignore", invalid="ignore"):
            pred, slots, zs = self.forward(x)
            n = x.shape[0]
            loss = 0.5 * float(np.mean((pred - y) ** 2))

            d_slots = np.zeros_like(slots)
            d_slots[:, -1] = (pred - y) / n
            grads_w: list[np.ndarray] = [None] * len(self.layer_widths)  # type: ignore[list-item]
            grads_b: list[np.ndarray] = [None] * len(self.layer_widths)  # type: ignore[list-item]
            for layer in range(len(self.layer_widths), 0, -1):
                start = self.layer_start[layer - 1]
                w = self.layer_widths[layer - 1]
                a = slots[:, start : start + w]
                dz = d_slots[:, start : start + w] * self._act_grad(zs[layer - 1], a, layer)
                grads_w[layer - 1] = slots[:, :start].T @ dz
                grads_b[layer - 1] = dz.sum(axis=0)
                if start:
                    d_slots[:, :start] += dz @ self.weights[layer - 1].T

            lr = config.learning_rate
            rate = config.regularization_rate
            for i, mask in enumerate(self.masks):
                gw = grads_w[i]
                if config.regularization == "l2":
                    gw = gw + rate * self.weights[i]
                elif config.regularization == "l1":
                    gw = gw + rate * np.sign(self.weights[i])
                self.weights[i] -= lr * np.where(mask, gw, 0.0)
                self.biases[i] -= lr * grads_b[i]

        if not np.isfinite(loss) or any(
            not (np.isfinite(w).all() and np.isfinite(b).all())
            for w, b in zip(self.weights, self.biases)
        ):
            raise DivergenceError(step)
        return loss

    def to_params(self) -> Params:
        weights: dict[EdgeKey, float] = {}
        for (src, tgt), on in self.topology.edges.items():
            if not on:
                continue
            layer, j = tgt
            weights[(src, tgt)] = float(self.weights[layer - 1][self.slot_index[src], j])
        biases = {
            (layer, j): float(self.biases[layer - 1][j])
            for layer in range(1, self.topology.layer_count + 1)
            for j in range(self.topology.width(layer))
        }
        return Params(weights, biases)


def _as_matrix(topology: Topology, x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.shape[1] != len(topology.features):
        raise InputShapeError(
            f"expected {len(topology.features)} feature columns, got {arr.shape[1]}"
        )
    return arr


def forward(state: NetworkState, x: Sequence[float]) -> tuple[float, dict[Neuron, float]]:
    """Single-sample forward pass.

    Returns the prediction (tanh output in [-1, 1]) and every neuron's
    activation, keyed by (layer, index).
    """
    compiled = _Compiled(state.topology, state.params)
    arr = _as_matrix(state.topology, x)
    pred, slots, _ = compiled.forward(arr)
    activations = {
        node: float(slots[0, i])
        for i, node in enumerate(compiled.slots)
        if not is_feature(node)
    }
    return float(pred[0]), activations


def train_step(
    state: NetworkState,
    batch: Iterable[tuple[Sequence[float], float]],
    config: TrainingConfig,
) -> tuple[NetworkState, float]:
    """One SGD update on a batch of (x, label) pairs; returns (state, loss).

    Loss is the mean of 0.5 * (prediction - label)^2 over the batch.
    Regularization (if any) applies to weights only, never biases, and
    disabled edges receive no gradient.
    """
    config.validate()
    pairs = list(batch)
    if not pairs:
        raise ValidationError("batch must be non-empty")
    for _, y in pairs:
        if y not in (-1, 1):
            raise ValidationError(f"labels must be -1 or +1, got {y!r}")
    x = _as_matrix(state.topology, [p[0] for p in pairs])
    y = np.asarray([p[1] for p in pairs], dtype=float)
    compiled = _Compiled(state.topology, state.params)
    loss = compiled.sgd_step(x, y, config, state.step)
    return NetworkState(state.topology, compiled.to_params(), state.step + 1), loss


def evaluate(state: NetworkState, view) -> EvalReport:
    """Accuracy report over a labeled feature view.

    Predicted class is +1 when the output is >= 0 (ties count as positive).
    Per-class accuracy over an empty class is reported as 1.0; the class
    counts expose that the value is undefined.
    """
    if len(view.labels) == 0:
        raise ValidationError("cannot evaluate on an empty view")
    compiled = _Compiled(state.topology, state.params)
    x = _as_matrix(state.topology, view.x)
    pred, _, _ = compiled.forward(x)
    y = np.asarray(view.labels, dtype=float)
    predicted = np.where(pred >= 0.0, 1.0, -1.0)
    correct = predicted == y
    pos = y == 1.0
    neg = ~pos
    n_pos = int(pos.sum())
    n_neg = int(neg.sum())
    return EvalReport(
        total=len(y),
        correct_count=int(correct.sum()),
        accuracy=float(correct.mean()),
        acc_positive=float(correct[pos].mean()) if n_pos else 1.0,
        acc_negative=float(correct[neg].mean()) if n_neg else 1.0,
        mean_loss=0.5 * float(np.mean((pred - y) ** 2)),
        positive_count=n_pos,
        negative_count=n_neg,
    )


class Trainer:
    """Single-writer training engine bound to one train view.

    Owns the compiled parameters between snapshots; readers should only see
    immutable NetworkState values taken via :meth:`snapshot`. Batch order is
    a seeded shuffle, re-drawn each epoch, so trajectories replay exactly.
    """

    def __init__(self, state: NetworkState, config: TrainingConfig, train_view):
        config.validate()
        if len(train_view.labels) == 0:
            raise ValidationError("training view is empty")
        if config.batch_size > len(train_view.labels):
            raise ValidationError("batch_size exceeds the training-set size")
        self.config = config
        self.topology = state.topology
        self.step = state.step
        self._compiled = _Compiled(state.topology, state.params)
        self._x = _as_matrix(state.topology, train_view.x)
        self._y = np.asarray(train_view.labels, dtype=float)
        self._shuffle = np.random.default_rng(config.seed)
        self._pending: list[np.ndarray] = []
        self.last_loss: float | None = None

    @property
    def batches_per_epoch(self) -> int:
        return -(-len(self._y) // self.config.batch_size)

    def _next_batch(self) -> np.ndarray:
        if not self._pending:
            order = self._shuffle.permutation(len(self._y))
            size = self.config.batch_size
            self._pending = [order[i : i + size] for i in range(0, len(order), size)]
        return self._pending.pop(0)

    def step_batches(self, count: int) -> float:
        """Run exactly `count` SGD steps; returns the last batch loss."""
        loss = self.last_loss if self.last_loss is not None else 0.0
        for _ in range(count):
            idx = self._next_batch()
            loss = self._compiled.sgd_step(
                self._x[idx], self._y[idx], self.config, self.step
            )
            self.step += 1
        self.last_loss = loss
        return loss

    def run_epochs(self, epochs: int) -> float:
        return self.step_batches(epochs * self.batches_per_epoch)

    def snapshot(self) -> NetworkState:
        return NetworkState(self.topology, self._compiled.to_params(), self.step)
