"""Headless experiment runner shared by the CLI and the session service."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from netcap.datasets import Dataset, FeatureView, apply_features, split
from netcap.measurements import (
    DEFAULT_BIAS_THRESHOLD,
    MeasurementReport,
    bias_indicator,
    capacity_demand,
    class_balance,
    generalization_ratio,
    mec,
    measurement_report,
)
from netcap.network import (
    EvalReport,
    NetworkState,
    Params,
    Trainer,
    TrainingConfig,
    evaluate,
    init_params,
)
from netcap.topology import Topology


@dataclass(frozen=True)
class MetricsFrame:
    """One step's measurement snapshot, as streamed to clients."""

    step: int
    train_loss: float
    test_loss: float
    accuracy: float
    acc_positive: float
    acc_negative: float
    mec_bits: int
    demand_bits: int
    generalization: float
    balance: float
    bias_flagged: bool

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ExperimentData:
    """A dataset plus its split and feature views for one topology."""

    dataset: Dataset
    train: Dataset
    test: Dataset
    train_view: FeatureView
    test_view: FeatureView
    full_view: FeatureView
    train_fraction: float
    split_seed: int


def prepare_data(
    dataset: Dataset,
    topology: Topology,
    train_fraction: float = 0.5,
    split_seed: int = 0,
) -> ExperimentData:
    train, test = split(dataset, train_fraction, split_seed)
    return ExperimentData(
        dataset=dataset,
        train=train,
        test=test,
        train_view=apply_features(train, topology.features),
        test_view=apply_features(test, topology.features),
        full_view=apply_features(dataset, topology.features),
        train_fraction=train_fraction,
        split_seed=split_seed,
    )


def build_frame(
    state: NetworkState,
    data: ExperimentData,
    threshold: float = DEFAULT_BIAS_THRESHOLD,
) -> MetricsFrame:
    """Evaluate a snapshot on train and test data and attach measurements.

    Accuracy, per-class accuracy, and the generalization numerator come from
    the held-out test set; demand and balance describe the full dataset.
    """
    train_report = evaluate(state, data.train_view)
    test_report = evaluate(state, data.test_view)
    mec_bits, _ = mec(state.topology)
    demand_bits, _ = capacity_demand(data.full_view)
    balance = class_balance(data.full_view.labels)
    flagged, _ = bias_indicator(test_report, balance, threshold)
    return MetricsFrame(
        step=state.step,
        train_loss=train_report.mean_loss,
        test_loss=test_report.mean_loss,
        accuracy=test_report.accuracy,
        acc_positive=test_report.acc_positive,
        acc_negative=test_report.acc_negative,
        mec_bits=mec_bits,
        demand_bits=demand_bits,
        generalization=generalization_ratio(test_report.correct_count, mec_bits),
        balance=balance,
        bias_flagged=flagged,
    )


@dataclass(frozen=True)
class RunResult:
    frames: tuple[MetricsFrame, ...]
    state: NetworkState
    train_report: EvalReport
    test_report: EvalReport
    measurements: MeasurementReport
    data: ExperimentData


def run_experiment(
    topology: Topology,
    config: TrainingConfig,
    dataset: Dataset,
    *,
    epochs: int,
    train_fraction: float = 0.5,
    split_seed: int = 0,
    params: Params | None = None,
    initial_step: int = 0,
    bias_threshold: float = DEFAULT_BIAS_THRESHOLD,
) -> RunResult:
    """Train for a fixed epoch budget, recording a frame every tick.

    Parameters default to the seeded init; pass `params` to continue from a
    saved experiment.
    """
    topology.validate()
    config.validate()
    data = prepare_data(dataset, topology, train_fraction, split_seed)
    start_params = params if params is not None else init_params(topology, config.seed)
    trainer = Trainer(NetworkState(topology, start_params, initial_step), config, data.train_view)
    frames = [build_frame(trainer.snapshot(), data, bias_threshold)]
    done = 0
    while done < epochs:
        chunk = min(config.epochs_per_tick, epochs - done)
        trainer.run_epochs(chunk)
        done += chunk
        frames.append(build_frame(trainer.snapshot(), data, bias_threshold))
    final = trainer.snapshot()
    test_report = evaluate(final, data.test_view)
    return RunResult(
        frames=tuple(frames),
        state=final,
        train_report=evaluate(final, data.train_view),
        test_report=test_report,
        measurements=measurement_report(final.topology, data.full_view, test_report, bias_threshold),
        data=data,
    )
