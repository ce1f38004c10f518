"""Layered network topology with per-edge enable masks and skip connections.

Nodes are either input features (string ids from ``FEATURES``) or neurons,
addressed as ``(layer, index)`` tuples. Layers are numbered 1..L where layer L
is the single output neuron; features sit conceptually at layer 0. Every edge
points to a strictly later layer, so the graph is acyclic by construction.
An edge whose target is more than one layer past its source is a skip
(residual) connection.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Union

from netcap.errors import ValidationError

FEATURES = ("x1", "x2", "x1^2", "x2^2", "x1*x2", "sin(x1)", "sin(x2)")
ACTIVATIONS = ("tanh", "relu", "sigmoid", "linear")

# Interactive scale limits; bound the size of anything built through edits.
MAX_HIDDEN_LAYERS = 6
MAX_LAYER_WIDTH = 8

Neuron = tuple[int, int]
Node = Union[str, Neuron]
EdgeKey = tuple[Node, Node]

_FEATURE_POS = {name: i for i, name in enumerate(FEATURES)}


def is_feature(node: Node) -> bool:
    return isinstance(node, str)


def node_layer(node: Node) -> int:
    return 0 if is_feature(node) else node[0]


def node_sort_key(node: Node) -> tuple[int, int]:
    """Canonical ordering: features first (fixed order), then neurons by (layer, index)."""
    if is_feature(node):
        return (0, _FEATURE_POS[node])
    return node


def edge_sort_key(edge: EdgeKey) -> tuple:
    src, tgt = edge
    return (node_sort_key(tgt), node_sort_key(src))


def normalize_features(names: Iterable[str]) -> tuple[str, ...]:
    """Validate a feature selection and return it in canonical column order."""
    chosen = set(names)
    unknown = chosen - set(FEATURES)
    if unknown:
        raise ValidationError(f"unknown features: {sorted(unknown)}")
    if not chosen:
        raise ValidationError("at least one input feature must be selected")
    return tuple(f for f in FEATURES if f in chosen)


@dataclass(frozen=True)
class Topology:
    """Immutable network structure. Build with :meth:`dense`, mutate via edits.

    Attributes:
        features: selected input features, canonical order.
        hidden: widths of the hidden layers (possibly empty).
        edges: (source, target) -> enabled flag. Disabled edges keep their
            slot in the structure but contribute nothing anywhere.
        activation: hidden-neuron activation. The output neuron is always tanh.
    """

    features: tuple[str, ...]
    hidden: tuple[int, ...]
    edges: dict[EdgeKey, bool]
    activation: str = "tanh"

    @property
    def layer_count(self) -> int:
        """Number of neuron layers including the output."""
        return len(self.hidden) + 1

    def width(self, layer: int) -> int:
        if layer == self.layer_count:
            return 1
        return self.hidden[layer - 1]

    def neurons(self) -> Iterator[Neuron]:
        for layer in range(1, self.layer_count + 1):
            for idx in range(self.width(layer)):
                yield (layer, idx)

    def has_node(self, node: Node) -> bool:
        if is_feature(node):
            return node in self.features
        layer, idx = node
        return 1 <= layer <= self.layer_count and 0 <= idx < self.width(layer)

    def enabled_edges(self) -> list[EdgeKey]:
        return [e for e, on in self.edges.items() if on]

    def enabled_parameter_count(self) -> int:
        """Enabled weights plus one bias per neuron."""
        n_neurons = sum(self.width(layer) for layer in range(1, self.layer_count + 1))
        return len(self.enabled_edges()) + n_neurons

    @classmethod
    def dense(
        cls,
        features: Iterable[str] = ("x1", "x2"),
        hidden: Iterable[int] = (),
        activation: str = "tanh",
    ) -> "Topology":
        """Fully connected adjacent layers, every edge enabled."""
        feats = normalize_features(features)
        widths = tuple(int(w) for w in hidden)
        edges: dict[EdgeKey, bool] = {}
        n_layers = len(widths) + 1

        def layer_nodes(layer: int) -> list[Node]:
            if layer == 0:
                return list(feats)
            w = 1 if layer == n_layers else widths[layer - 1]
            return [(layer, j) for j in range(w)]

        for layer in range(1, n_layers + 1):
            for src in layer_nodes(layer - 1):
                for tgt in layer_nodes(layer):
                    edges[(src, tgt)] = True
        topo = cls(features=feats, hidden=widths, edges=edges, activation=activation)
        topo.validate()
        return topo

    def validate(self) -> None:
        if not self.features:
            raise ValidationError("at least one input feature must be selected")
        if tuple(normalize_features(self.features)) != self.features:
            raise ValidationError("features must be unique and in canonical order")
        if len(self.hidden) > MAX_HIDDEN_LAYERS:
            raise ValidationError(f"at most {MAX_HIDDEN_LAYERS} hidden layers supported")
        for w in self.hidden:
            if not 1 <= w <= MAX_LAYER_WIDTH:
                raise ValidationError(f"layer width must be in 1..{MAX_LAYER_WIDTH}, got {w}")
        if self.activation not in ACTIVATIONS:
            raise ValidationError(f"unknown activation {self.activation!r}")
        for src, tgt in self.edges:
            if is_feature(tgt):
                raise ValidationError(f"edge target {tgt!r} is not a neuron")
            if not self.has_node(tgt):
                raise ValidationError(f"edge target {tgt} does not exist")
            if not self.has_node(src):
                raise ValidationError(f"edge source {src!r} does not exist")
            if node_layer(src) >= node_layer(tgt):
                raise ValidationError(
                    f"edge {src!r} -> {tgt!r} must point to a strictly later layer"
                )


# --- Edits ------------------------------------------------------------------
#
# Each edit is a small value object; apply_edit returns a new validated
# Topology and never mutates its input. Callers own re-initializing params
# for nodes the edit touched.


@dataclass(frozen=True)
class ToggleEdge:
    source: Node
    target: Neuron


@dataclass(frozen=True)
class AddSkipEdge:
    source: Node
    target: Neuron


@dataclass(frozen=True)
class RemoveEdge:
    source: Node
    target: Neuron


@dataclass(frozen=True)
class SetWidth:
    layer: int
    width: int


@dataclass(frozen=True)
class AddLayer:
    width: int
    position: int | None = None  # 1-based insertion slot; default appends last


@dataclass(frozen=True)
class RemoveLayer:
    layer: int


@dataclass(frozen=True)
class SetActivation:
    activation: str


@dataclass(frozen=True)
class SetFeatures:
    features: tuple[str, ...]


Edit = Union[
    ToggleEdge,
    AddSkipEdge,
    RemoveEdge,
    SetWidth,
    AddLayer,
    RemoveLayer,
    SetActivation,
    SetFeatures,
]


def _as_node(value) -> Node:
    if isinstance(value, str):
        return value
    layer, idx = value
    return (int(layer), int(idx))


def apply_edit(topology: Topology, edit: Edit) -> Topology:
    """Apply one structural edit, returning a new valid topology.

    Raises ValidationError for edits that reference missing nodes, create
    duplicates, or would leave the structure invalid. Untouched structure
    (including previously disabled edges and skip connections) is preserved.
    """
    if isinstance(edit, ToggleEdge):
        key = (_as_node(edit.source), _as_node(edit.target))
        if key not in topology.edges:
            raise ValidationError(f"edge {key[0]!r} -> {key[1]!r} does not exist")
        edges = dict(topology.edges)
        edges[key] = not edges[key]
        out = replace(topology, edges=edges)
    elif isinstance(edit, AddSkipEdge):
        src, tgt = _as_node(edit.source), _as_node(edit.target)
        if not topology.has_node(src):
            raise ValidationError(f"source {src!r} does not exist")
        if is_feature(tgt) or not topology.has_node(tgt):
            raise ValidationError(f"target {tgt!r} is not an existing neuron")
        if node_layer(src) >= node_layer(tgt):
            raise ValidationError("skip edge must target a strictly later layer")
        if (src, tgt) in topology.edges:
            raise ValidationError(f"edge {src!r} -> {tgt!r} already exists")
        edges = dict(topology.edges)
        edges[(src, tgt)] = True
        out = replace(topology, edges=edges)
    elif isinstance(edit, RemoveEdge):
        key = (_as_node(edit.source), _as_node(edit.target))
        if key not in topology.edges:
            raise ValidationError(f"edge {key[0]!r} -> {key[1]!r} does not exist")
        edges = dict(topology.edges)
        del edges[key]
        out = replace(topology, edges=edges)
    elif isinstance(edit, SetWidth):
        out = _set_width(topology, edit.layer, edit.width)
    elif isinstance(edit, AddLayer):
        out = _add_layer(topology, edit.width, edit.position)
    elif isinstance(edit, RemoveLayer):
        out = _remove_layer(topology, edit.layer)
    elif isinstance(edit, SetActivation):
        out = replace(topology, activation=edit.activation)
    elif isinstance(edit, SetFeatures):
        out = _set_features(topology, edit.features)
    else:
        raise ValidationError(f"unknown edit {edit!r}")
    out.validate()
    return out


def _layer_nodes(topology: Topology, layer: int, widths: tuple[int, ...] | None = None) -> list[Node]:
    if layer == 0:
        return list(topology.features)
    widths = topology.hidden if widths is None else widths
    n_layers = len(widths) + 1
    w = 1 if layer == n_layers else widths[layer - 1]
    return [(layer, j) for j in range(w)]


def _set_width(topology: Topology, layer: int, width: int) -> Topology:
    if not 1 <= layer <= len(topology.hidden):
        raise ValidationError(f"hidden layer {layer} does not exist")
    if not 1 <= width <= MAX_LAYER_WIDTH:
        raise ValidationError(f"width must be in 1..{MAX_LAYER_WIDTH}")
    old = topology.hidden[layer - 1]
    widths = list(topology.hidden)
    widths[layer - 1] = width
    edges = dict(topology.edges)
    if width < old:
        dropped = {(layer, j) for j in range(width, old)}
        edges = {e: on for e, on in edges.items() if e[0] not in dropped and e[1] not in dropped}
    else:
        # New neurons wire densely to the adjacent layers, enabled.
        next_nodes = _layer_nodes(topology, layer + 1)
        prev_nodes = _layer_nodes(topology, layer - 1)
        for j in range(old, width):
            neuron = (layer, j)
            for src in prev_nodes:
                edges[(src, neuron)] = True
            for tgt in next_nodes:
                edges[(neuron, tgt)] = True
    return replace(topology, hidden=tuple(widths), edges=edges)


def _shift_layers(edges: dict[EdgeKey, bool], at: int, delta: int) -> dict[EdgeKey, bool]:
    def move(node: Node) -> Node:
        if is_feature(node) or node[0] < at:
            return node
        return (node[0] + delta, node[1])

    return {(move(s), move(t)): on for (s, t), on in edges.items()}


def _add_layer(topology: Topology, width: int, position: int | None) -> Topology:
    if len(topology.hidden) >= MAX_HIDDEN_LAYERS:
        raise ValidationError(f"at most {MAX_HIDDEN_LAYERS} hidden layers supported")
    if not 1 <= width <= MAX_LAYER_WIDTH:
        raise ValidationError(f"width must be in 1..{MAX_LAYER_WIDTH}")
    pos = len(topology.hidden) + 1 if position is None else position
    if not 1 <= pos <= len(topology.hidden) + 1:
        raise ValidationError(f"layer position {pos} out of range")
    widths = list(topology.hidden)
    widths.insert(pos - 1, width)
    # Existing edges keep their endpoints; anything spanning the insertion
    # point simply becomes a skip connection.
    edges = _shift_layers(dict(topology.edges), pos, 1)
    new_topo = replace(topology, hidden=tuple(widths), edges=edges)
    prev_nodes = _layer_nodes(new_topo, pos - 1)
    next_nodes = _layer_nodes(new_topo, pos + 1)
    for j in range(width):
        neuron = (pos, j)
        for src in prev_nodes:
            edges[(src, neuron)] = True
        for tgt in next_nodes:
            edges[(neuron, tgt)] = True
    return replace(new_topo, edges=edges)


def _remove_layer(topology: Topology, layer: int) -> Topology:
    if not 1 <= layer <= len(topology.hidden):
        raise ValidationError(f"hidden layer {layer} does not exist")
    widths = list(topology.hidden)
    del widths[layer - 1]
    edges = {
        e: on
        for e, on in topology.edges.items()
        if node_layer(e[0]) != layer and node_layer(e[1]) != layer
    }
    edges = _shift_layers(edges, layer + 1, -1)
    return replace(topology, hidden=tuple(widths), edges=edges)


def _set_features(topology: Topology, features: Iterable[str]) -> Topology:
    feats = normalize_features(features)
    added = set(feats) - set(topology.features)
    edges = {
        e: on for e, on in topology.edges.items() if not (is_feature(e[0]) and e[0] not in feats)
    }
    # Newly selected features wire densely into the first layer, like the
    # default construction would have.
    first = _layer_nodes(replace(topology, features=feats), 1)
    for f in feats:
        if f in added:
            for tgt in first:
                edges[(f, tgt)] = True
    return replace(topology, features=feats, edges=edges)
