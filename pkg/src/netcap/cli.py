"""Headless runner for scripted experiments and capacity sweeps."""

from __future__ import annotations

import itertools
import json
import re
from pathlib import Path

import click

from netcap.datasets import GENERATED_KINDS, generate, parse_csv
from netcap.errors import NetcapError
from netcap.network import TrainingConfig
from netcap.records import (
    config_from_obj,
    dataset_from_spec,
    export_record,
    import_record,
    record_to_json,
    topology_from_obj,
)
from netcap.runner import RunResult, run_experiment
from netcap.topology import Topology

REPORT_FIELDS = (
    "mec_bits",
    "demand_bits",
    "accuracy",
    "acc_positive",
    "acc_negative",
    "generalization",
    "balance",
    "bias_flagged",
)

SWEEP_LIMIT = 200


def _report_row(result: RunResult) -> dict:
    m = result.measurements
    r = result.test_report
    return {
        "mec_bits": m.mec_bits,
        "demand_bits": m.demand_bits,
        "accuracy": r.accuracy,
        "acc_positive": r.acc_positive,
        "acc_negative": r.acc_negative,
        "generalization": m.generalization,
        "balance": m.balance,
        "bias_flagged": m.bias_flagged,
        "train_loss": result.frames[-1].train_loss,
        "test_loss": result.frames[-1].test_loss,
        "step": result.state.step,
    }


def _format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.2f}"
    return str(value)


def _emit(rows: list[dict], fields: tuple[str, ...], fmt: str):
    if fmt == "jsonl":
        for row in rows:
            click.echo(json.dumps({k: row[k] for k in fields}, sort_keys=True))
    elif fmt == "csv":
        click.echo(",".join(fields))
        for row in rows:
            click.echo(",".join(repr(row[k]) if isinstance(row[k], float) else _format_value(row[k]) for k in fields))
    else:
        widths = {
            k: max(len(k), max((len(_format_value(r[k])) for r in rows), default=0))
            for k in fields
        }
        click.echo("  ".join(k.ljust(widths[k]) for k in fields))
        for row in rows:
            click.echo("  ".join(_format_value(row[k]).ljust(widths[k]) for k in fields))


def _load_spec(
    spec_path: str | None,
    dataset_path: str | None,
    hidden: str,
    features: str,
    activation: str,
    kind: str,
    n: int,
    noise: float,
    data_seed: int,
    train_fraction: float,
    seed: int,
    lr: float,
    batch_size: int,
    regularization: str,
    reg_rate: float,
):
    """Resolve the run inputs: an experiment record, a spec file, or flags."""
    params = None
    initial_step = 0
    if spec_path is not None:
        payload = json.loads(Path(spec_path).read_text())
        if "params" in payload:  # full experiment record
            if dataset_path is not None:
                raise NetcapError(
                    "--dataset cannot be combined with an experiment record; "
                    "the record already carries its dataset"
                )
            imported = import_record(payload)
            return (
                imported.topology,
                imported.config,
                imported.dataset,
                imported.data.train_fraction,
                imported.data.split_seed,
                imported.params,
                imported.step,
            )
        topology = topology_from_obj(
            payload.get("topology", {"features": ["x1", "x2"], "hidden": [4, 2]})
        )
        config = config_from_obj(payload.get("config", {}))
        if "dataset" in payload and dataset_path is None:
            dataset, train_fraction, split_seed = dataset_from_spec(payload["dataset"])
            return topology, config, dataset, train_fraction, split_seed, params, initial_step
    else:
        topology = Topology.dense(
            [f.strip() for f in features.split(",") if f.strip()],
            [int(w) for w in hidden.split(",") if w.strip()] if hidden else [],
            activation,
        )
        config = TrainingConfig(
            learning_rate=lr,
            batch_size=batch_size,
            regularization=regularization,
            regularization_rate=reg_rate,
            seed=seed,
        )
        config.validate()
    if dataset_path is not None:
        dataset = parse_csv(Path(dataset_path).read_bytes())
    else:
        dataset = generate(kind, n, noise, data_seed)
    return topology, config, dataset, train_fraction, data_seed, params, initial_step


run_options = [
    click.option("--spec", "spec_path", type=click.Path(exists=True), default=None,
                 help="Experiment record or inline spec JSON."),
    click.option("--dataset", "dataset_path", type=click.Path(exists=True), default=None,
                 help="CSV dataset (x1,x2,label)."),
    click.option("--epochs", default=1000, show_default=True),
    click.option("--seed", default=42, show_default=True, help="Training seed."),
    click.option("--format", "fmt", type=click.Choice(["table", "csv", "jsonl"]),
                 default="table", show_default=True),
    click.option("--hidden", default="4,2", show_default=True,
                 help="Comma-separated hidden layer widths."),
    click.option("--features", default="x1,x2", show_default=True),
    click.option("--activation", default="tanh", show_default=True),
    click.option("--kind", type=click.Choice(GENERATED_KINDS), default="circle",
                 show_default=True),
    click.option("--n", default=500, show_default=True, help="Generated dataset size."),
    click.option("--noise", default=0.0, show_default=True),
    click.option("--data-seed", default=1, show_default=True),
    click.option("--train-fraction", default=0.5, show_default=True),
    click.option("--lr", default=0.03, show_default=True),
    click.option("--batch-size", default=10, show_default=True),
    click.option("--regularization", type=click.Choice(["none", "l1", "l2"]),
                 default="none", show_default=True),
    click.option("--reg-rate", default=0.0, show_default=True),
]


def _with_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn

    return wrap


@click.group()
def main():
    """Capacity workbench: train small networks and measure what they can hold."""


@main.command()
@_with_options(run_options)
@click.option("--figures", "figures_dir", type=click.Path(), default=None,
              help="Directory for training-curve and decision-map images.")
@click.option("--export-record", "record_path", type=click.Path(), default=None,
              help="Write the finished run as an importable experiment record.")
def run(spec_path, dataset_path, epochs, seed, fmt, hidden, features, activation,
        kind, n, noise, data_seed, train_fraction, lr, batch_size, regularization,
        reg_rate, figures_dir, record_path):
    """Train one network and print its measurement report."""
    try:
        topology, config, dataset, fraction, split_seed, params, step = _load_spec(
            spec_path, dataset_path, hidden, features, activation, kind, n, noise,
            data_seed, train_fraction, seed, lr, batch_size, regularization, reg_rate,
        )
        result = run_experiment(
            topology,
            config,
            dataset,
            epochs=epochs,
            train_fraction=fraction,
            split_seed=split_seed,
            params=params,
            initial_step=step,
        )
    except NetcapError as exc:
        raise click.ClickException(str(exc)) from exc
    _emit([_report_row(result)], REPORT_FIELDS + ("train_loss", "test_loss", "step"), fmt)
    if figures_dir is not None:
        from netcap import figures

        out = Path(figures_dir)
        curves = figures.training_curves(result.frames, out / "training_curves.png")
        dmap = figures.decision_map(result.state, result.data.dataset, out / "decision_map.png")
        click.echo(f"figures: {curves} {dmap}", err=True)
    if record_path is not None:
        record = export_record(
            result.state.topology,
            config,
            result.state.params,
            dataset,
            train_fraction=fraction,
            split_seed=split_seed,
            step=result.state.step,
            frames=result.frames,
        )
        Path(record_path).write_text(record_to_json(record))
        click.echo(f"record: {record_path}", err=True)


_SWEEP_RE = re.compile(r"^layer(\d+)=(\d+)\.\.(\d+)$")


def _parse_sweep(specs: tuple[str, ...]) -> list[tuple[int, list[int]]]:
    axes = []
    for spec in specs:
        match = _SWEEP_RE.match(spec.strip())
        if not match:
            raise click.ClickException(
                f"bad sweep spec {spec!r}; expected layerN=LO..HI, e.g. layer2=1..5"
            )
        layer, lo, hi = (int(g) for g in match.groups())
        if hi < lo:
            raise click.ClickException(f"bad sweep range in {spec!r}")
        axes.append((layer, list(range(lo, hi + 1))))
    return axes


@main.command()
@_with_options(run_options)
@click.option("--sweep", "sweep_specs", multiple=True, required=True,
              help='Width range per layer, e.g. --sweep "layer2=1..5".')
@click.option("--figures", "figures_dir", type=click.Path(), default=None,
              help="Directory for the capacity-vs-generalization chart.")
def sweep(spec_path, dataset_path, epochs, seed, fmt, hidden, features, activation,
          kind, n, noise, data_seed, train_fraction, lr, batch_size, regularization,
          reg_rate, sweep_specs, figures_dir):
    """Train one network per architecture and rank by G, then capacity.

    Rows sort by descending generalization and ascending capacity, so the top
    row is the smallest network that explains the data best.
    """
    axes = _parse_sweep(sweep_specs)
    combos = list(itertools.product(*(widths for _, widths in axes)))
    if len(combos) > SWEEP_LIMIT:
        raise click.ClickException(
            f"sweep of {len(combos)} combinations exceeds the limit of {SWEEP_LIMIT}"
        )
    try:
        topology, config, dataset, fraction, split_seed, _, _ = _load_spec(
            spec_path, dataset_path, hidden, features, activation, kind, n, noise,
            data_seed, train_fraction, seed, lr, batch_size, regularization, reg_rate,
        )
        rows = []
        for combo in combos:
            widths = list(topology.hidden)
            for (layer, _), width in zip(axes, combo):
                if not 1 <= layer <= len(widths):
                    raise click.ClickException(
                        f"swept layer {layer} does not exist in base widths {widths}"
                    )
                widths[layer - 1] = width
            arch_topology = Topology.dense(topology.features, widths, topology.activation)
            result = run_experiment(
                arch_topology,
                config,
                dataset,
                epochs=epochs,
                train_fraction=fraction,
                split_seed=split_seed,
            )
            row = _report_row(result)
            row["architecture"] = "-".join(str(w) for w in widths) + "-1"
            rows.append(row)
    except NetcapError as exc:
        raise click.ClickException(str(exc)) from exc
    rows.sort(key=lambda r: (-r["generalization"], r["mec_bits"], r["architecture"]))
    _emit(rows, ("architecture", "mec_bits", "accuracy", "generalization"), fmt)
    if figures_dir is not None:
        from netcap import figures

        chart = figures.sweep_chart(rows, Path(figures_dir) / "sweep.png")
        click.echo(f"figures: {chart}", err=True)


@main.command()
@click.option("--host", default=None, help="Bind address (default NETCAP_HOST or 127.0.0.1).")
@click.option("--port", default=None, type=int, help="Port (default NETCAP_PORT or 8410).")
@click.option("--max-sessions", default=None, type=int)
@click.option("--cadence", default=None, type=int, help="Default epochs per metrics frame.")
def serve(host, port, max_sessions, cadence):
    """Run the session service."""
    from dataclasses import replace

    from netcap.service import ServiceSettings, serve as _serve

    settings = ServiceSettings.from_env()
    if host is not None:
        settings = replace(settings, host=host)
    if port is not None:
        settings = replace(settings, port=port)
    if max_sessions is not None:
        settings = replace(settings, max_sessions=max_sessions)
    if cadence is not None:
        settings = replace(settings, cadence=cadence)
    _serve(settings)


if __name__ == "__main__":
    main()
