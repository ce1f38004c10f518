"""Experiment records: a JSON schema that reproduces a run exactly.

A record captures the topology, training config, dataset recipe (or the
inline points for uploads), final parameters, and a downsampled metrics
history. Importing a record rebuilds the same dataset, split, and parameters,
so capacity, demand, and accuracy come back bit-for-bit.

Records are plain dicts; `record_to_json` produces a stable, sorted encoding
so exports are byte-identical apart from the timestamp.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone

from netcap.datasets import Dataset, RawPoint, generate
from netcap.errors import SchemaError, ValidationError
from netcap.network import Params, TrainingConfig
from netcap.runner import ExperimentData, MetricsFrame, prepare_data
from netcap.topology import (
    AddLayer,
    AddSkipEdge,
    Edit,
    Node,
    RemoveEdge,
    RemoveLayer,
    SetActivation,
    SetFeatures,
    SetWidth,
    ToggleEdge,
    Topology,
    edge_sort_key,
    is_feature,
)

SCHEMA_VERSION = 1
MAX_HISTORY = 500


def node_to_obj(node: Node):
    return node if is_feature(node) else [node[0], node[1]]


def node_from_obj(obj) -> Node:
    if isinstance(obj, str):
        return obj
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return (int(obj[0]), int(obj[1]))
    raise ValidationError(f"malformed node {obj!r}")


def topology_to_obj(topology: Topology) -> dict:
    edges = sorted(topology.edges.items(), key=lambda kv: edge_sort_key(kv[0]))
    return {
        "features": list(topology.features),
        "hidden": list(topology.hidden),
        "activation": topology.activation,
        "edges": [[node_to_obj(s), node_to_obj(t), bool(on)] for (s, t), on in edges],
    }


def topology_from_obj(obj: dict) -> Topology:
    try:
        features = tuple(obj["features"])
        hidden = tuple(int(w) for w in obj["hidden"])
        activation = obj.get("activation", "tanh")
        raw_edges = obj.get("edges")
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed topology object: {exc}") from None
    if raw_edges is None:
        return Topology.dense(features, hidden, activation)
    edges = {}
    for entry in raw_edges:
        src, tgt, on = entry
        edges[(node_from_obj(src), node_from_obj(tgt))] = bool(on)
    topo = Topology(features=features, hidden=hidden, edges=edges, activation=activation)
    topo.validate()
    return topo


def config_to_obj(config: TrainingConfig) -> dict:
    return {
        "learning_rate": config.learning_rate,
        "batch_size": config.batch_size,
        "regularization": config.regularization,
        "regularization_rate": config.regularization_rate,
        "seed": config.seed,
        "epochs_per_tick": config.epochs_per_tick,
    }


def config_from_obj(obj: dict) -> TrainingConfig:
    known = {f for f in config_to_obj(TrainingConfig())}
    unknown = set(obj) - known
    if unknown:
        raise ValidationError(f"unknown config fields: {sorted(unknown)}")
    config = TrainingConfig(**obj)
    config.validate()
    return config


def params_to_obj(params: Params) -> dict:
    weights = sorted(params.weights.items(), key=lambda kv: edge_sort_key(kv[0]))
    biases = sorted(params.biases.items())
    return {
        "weights": [[node_to_obj(s), node_to_obj(t), w] for (s, t), w in weights],
        "biases": [[layer, idx, b] for (layer, idx), b in biases],
    }


def params_from_obj(obj: dict) -> Params:
    weights = {
        (node_from_obj(s), node_from_obj(t)): float(w) for s, t, w in obj["weights"]
    }
    biases = {(int(l), int(i)): float(b) for l, i, b in obj["biases"]}
    return Params(weights, biases)


def dataset_spec_to_obj(dataset: Dataset, train_fraction: float, split_seed: int) -> dict:
    spec = {
        "source": dataset.source,
        "train_fraction": train_fraction,
        "split_seed": split_seed,
    }
    if dataset.source == "uploaded":
        spec["points"] = [[p.x1, p.x2, p.label] for p in dataset.points]
    else:
        spec["n"] = len(dataset)
        spec["noise"] = dataset.noise
        spec["seed"] = dataset.seed
    return spec


def dataset_from_spec(spec: dict) -> tuple[Dataset, float, int]:
    source = spec.get("source")
    train_fraction = float(spec.get("train_fraction", 0.5))
    split_seed = int(spec.get("split_seed", 0))
    if source == "uploaded":
        points = tuple(RawPoint(float(a), float(b), int(l)) for a, b, l in spec["points"])
        dataset = Dataset(points, source="uploaded")
    else:
        dataset = generate(source, int(spec["n"]), float(spec["noise"]), int(spec["seed"]))
    return dataset, train_fraction, split_seed


def _downsample(frames) -> list[dict]:
    frames = list(frames)
    if len(frames) > MAX_HISTORY:
        stride = -(-len(frames) // MAX_HISTORY)
        kept = frames[::stride]
        if kept[-1] is not frames[-1]:
            kept.append(frames[-1])
        frames = kept
    return [f.as_dict() for f in frames]


def export_record(
    topology: Topology,
    config: TrainingConfig,
    params: Params,
    dataset: Dataset,
    *,
    train_fraction: float,
    split_seed: int,
    step: int,
    frames=(),
    created_at: str | None = None,
) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "created_at": created_at or datetime.now(timezone.utc).isoformat(),
        "topology": topology_to_obj(topology),
        "config": config_to_obj(config),
        "dataset": dataset_spec_to_obj(dataset, train_fraction, split_seed),
        "params": params_to_obj(params),
        "step": step,
        "metrics": _downsample(frames),
    }


def record_to_json(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class ImportedExperiment:
    topology: Topology
    config: TrainingConfig
    params: Params
    dataset: Dataset
    data: ExperimentData
    step: int
    frames: tuple[MetricsFrame, ...]


def import_record(record: dict) -> ImportedExperiment:
    """Rebuild a full experiment from a record dict.

    Raises SchemaError for missing or incompatible schema versions and
    ValidationError for structurally broken content.
    """
    version = record.get("schema_version")
    if version is None:
        raise SchemaError("record is missing schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(
            f"record schema_version {version} is not supported (expected {SCHEMA_VERSION})"
        )
    try:
        topology = topology_from_obj(record["topology"])
        config = config_from_obj(record["config"])
        params = params_from_obj(record["params"])
        dataset, train_fraction, split_seed = dataset_from_spec(record["dataset"])
    except KeyError as exc:
        raise ValidationError(f"record is missing field {exc}") from None
    frames = tuple(MetricsFrame(**f) for f in record.get("metrics", ()))
    data = prepare_data(dataset, topology, train_fraction, split_seed)
    return ImportedExperiment(
        topology=topology,
        config=config,
        params=params,
        dataset=dataset,
        data=data,
        step=int(record.get("step", 0)),
        frames=frames,
    )


# --- Edit wire format ---------------------------------------------------------

_EDIT_KINDS = {
    "toggle_edge": ToggleEdge,
    "add_skip_edge": AddSkipEdge,
    "remove_edge": RemoveEdge,
    "set_width": SetWidth,
    "add_layer": AddLayer,
    "remove_layer": RemoveLayer,
    "set_activation": SetActivation,
    "set_features": SetFeatures,
}


def edit_from_obj(obj: dict) -> Edit:
    kind = obj.get("kind")
    if kind not in _EDIT_KINDS:
        raise ValidationError(
            f"unknown edit kind {kind!r}; expected one of {sorted(_EDIT_KINDS)}"
        )
    if kind in ("toggle_edge", "add_skip_edge", "remove_edge"):
        return _EDIT_KINDS[kind](
            source=node_from_obj(obj["source"]), target=node_from_obj(obj["target"])
        )
    if kind == "set_width":
        return SetWidth(layer=int(obj["layer"]), width=int(obj["width"]))
    if kind == "add_layer":
        position = obj.get("position")
        return AddLayer(width=int(obj["width"]), position=None if position is None else int(position))
    if kind == "remove_layer":
        return RemoveLayer(layer=int(obj["layer"]))
    if kind == "set_activation":
        return SetActivation(activation=str(obj["activation"]))
    return SetFeatures(features=tuple(obj["features"]))
