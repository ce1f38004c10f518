"""Interactive sessions: one training loop per session, snapshot readers.

A session owns its trainer; the background loop is the only writer. Readers
(metric streams, descriptors, exports) see immutable snapshots taken under
the session lock between ticks. Edits and uploads pause the loop, apply,
then resume, so live tinkering never errors out a running experiment.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone

from netcap.datasets import Dataset, generate, parse_csv
from netcap.errors import NetcapError, ValidationError
from netcap.measurements import (
    DEFAULT_BIAS_THRESHOLD,
    MeasurementReport,
    measurement_report,
)
from netcap.network import (
    NetworkState,
    Trainer,
    TrainingConfig,
    evaluate,
    init_params,
    reconcile_params,
)
from netcap.records import config_to_obj, export_record, import_record, topology_to_obj
from netcap.runner import MetricsFrame, build_frame, prepare_data
from netcap.topology import Edit, Topology, apply_edit


class UnknownSessionError(NetcapError):
    pass


class IllegalTransitionError(NetcapError):
    pass


class SessionLimitError(NetcapError):
    pass


@dataclass(frozen=True)
class DatasetSpec:
    kind: str = "circle"
    n: int = 200
    noise: float = 0.0
    seed: int = 1
    train_fraction: float = 0.5
    split_seed: int = 0

    def build(self) -> Dataset:
        return generate(self.kind, self.n, self.noise, self.seed)


IDLE, RUNNING, PAUSED = "idle", "running", "paused"


class Session:
    def __init__(
        self,
        topology: Topology,
        config: TrainingConfig,
        dataset: Dataset,
        *,
        train_fraction: float = 0.5,
        split_seed: int = 0,
        session_id: str | None = None,
        params=None,
        step: int = 0,
        bias_threshold: float = DEFAULT_BIAS_THRESHOLD,
    ):
        topology.validate()
        config.validate()
        self.session_id = session_id or uuid.uuid4().hex
        self.created_at = datetime.now(timezone.utc).isoformat()
        self.bias_threshold = bias_threshold
        self._lock = threading.RLock()
        self._thread: threading.Thread | None = None
        self._stop = threading.Event()
        self.state = IDLE
        self.generation = 0
        self.frames: list[MetricsFrame] = []
        self.config = config
        self._edit_counter = 0
        self._install(
            topology,
            dataset,
            train_fraction,
            split_seed,
            params if params is not None else init_params(topology, config.seed),
            step,
        )
        self._append_frame()

    # -- wiring ---------------------------------------------------------------

    def _install(self, topology, dataset, train_fraction, split_seed, params, step):
        # Build everything before assigning so a validation failure (say, a
        # batch size larger than an uploaded training set) leaves the session
        # untouched.
        data = prepare_data(dataset, topology, train_fraction, split_seed)
        trainer = Trainer(NetworkState(topology, params, step), self.config, data.train_view)
        self.topology = topology
        self.dataset = dataset
        self.data = data
        self.trainer = trainer

    def _append_frame(self):
        frame = build_frame(self.trainer.snapshot(), self.data, self.bias_threshold)
        if self.frames and frame.step <= self.frames[-1].step:
            return
        self.frames.append(frame)

    # -- read side --------------------------------------------------------------

    def descriptor(self) -> dict:
        with self._lock:
            return {
                "schema_version": 1,
                "session_id": self.session_id,
                "state": self.state,
                "step": self.trainer.step,
                "created_at": self.created_at,
                "topology": topology_to_obj(self.topology),
                "config": config_to_obj(self.config),
                "dataset": {
                    "source": self.dataset.source,
                    "n": len(self.dataset),
                    "noise": self.dataset.noise,
                    "seed": self.dataset.seed,
                    "train_fraction": self.data.train_fraction,
                },
                "measurements": self.measurements().as_dict(),
            }

    def snapshot(self) -> NetworkState:
        with self._lock:
            return self.trainer.snapshot()

    def measurements(self) -> MeasurementReport:
        with self._lock:
            snapshot = self.trainer.snapshot()
            report = evaluate(snapshot, self.data.test_view)
            return measurement_report(
                self.topology, self.data.full_view, report, self.bias_threshold
            )

    def frames_after(self, cursor: int, generation: int) -> tuple[list[MetricsFrame], int, bool]:
        """Frames past `cursor` for a given stream generation.

        Returns (frames, new_cursor, still_valid); a reset bumps the
        generation and invalidates old cursors so streams can end cleanly.
        """
        with self._lock:
            if generation != self.generation:
                return [], cursor, False
            return list(self.frames[cursor:]), len(self.frames), True

    def latest_cursor(self) -> tuple[int, int]:
        with self._lock:
            return max(0, len(self.frames) - 1), self.generation

    # -- control ----------------------------------------------------------------

    def control(self, action: str, steps: int = 1) -> dict:
        if action == "start":
            self._start()
        elif action == "pause":
            self._pause()
        elif action == "step":
            self._step(steps)
        elif action == "reset":
            self.reset()
        else:
            raise ValidationError(f"unknown action {action!r}")
        return self.descriptor()

    def _start(self):
        with self._lock:
            if self.state == RUNNING:
                raise IllegalTransitionError("session is already running")
            self.state = RUNNING
            self._stop.clear()
            self._thread = threading.Thread(target=self._loop, daemon=True)
            self._thread.start()

    def _loop(self):
        while not self._stop.is_set():
            with self._lock:
                if self.state != RUNNING:
                    break
                self.trainer.run_epochs(self.config.epochs_per_tick)
                self._append_frame()

    def _halt_loop(self):
        self._stop.set()
        thread = self._thread
        if thread is not None and thread is not threading.current_thread():
            thread.join(timeout=10.0)
        self._thread = None

    def _pause(self):
        if self.state != RUNNING:
            raise IllegalTransitionError(f"cannot pause a session that is {self.state}")
        self._halt_loop()
        with self._lock:
            self.state = PAUSED

    def _step(self, steps: int):
        if steps < 1:
            raise ValidationError("steps must be >= 1")
        with self._lock:
            if self.state == RUNNING:
                raise IllegalTransitionError("pause the session before stepping")
            self.trainer.step_batches(steps)
            self._append_frame()

    def reset(self):
        """Back to step 0 with freshly seeded parameters and a new stream."""
        self._halt_loop()
        with self._lock:
            self.state = IDLE
            self._install(
                self.topology,
                self.dataset,
                self.data.train_fraction,
                self.data.split_seed,
                init_params(self.topology, self.config.seed),
                0,
            )
            self.frames = []
            self.generation += 1
            self._append_frame()

    # -- mutation -----------------------------------------------------------------

    def patch_topology(self, edit: Edit) -> tuple[dict, MeasurementReport]:
        """Apply an edit; if training is running it pauses, applies, resumes."""
        was_running = self.state == RUNNING
        if was_running:
            self._pause()
        try:
            with self._lock:
                new_topology = apply_edit(self.topology, edit)
                old = self.trainer.snapshot()
                self._edit_counter += 1
                params = reconcile_params(
                    old.params,
                    new_topology,
                    seed=hash((self.config.seed, self._edit_counter)) & 0x7FFFFFFF,
                )
                self._install(
                    new_topology,
                    self.dataset,
                    self.data.train_fraction,
                    self.data.split_seed,
                    params,
                    old.step,
                )
                report = self.measurements()
        finally:
            if was_running:
                self._start()
        return self.descriptor(), report

    def upload_dataset(self, csv_bytes: bytes) -> dict:
        """Replace the session dataset from CSV and reset training."""
        dataset = parse_csv(csv_bytes)
        self._halt_loop()
        with self._lock:
            self.state = IDLE
            self._install(
                self.topology,
                dataset,
                self.data.train_fraction,
                self.data.split_seed,
                init_params(self.topology, self.config.seed),
                0,
            )
            self.frames = []
            self.generation += 1
            self._append_frame()
            report = self.measurements()
            return {
                "n": len(dataset),
                "balance": report.balance,
                "demand_bits": report.demand_bits,
                "descriptor": self.descriptor(),
            }

    # -- persistence ----------------------------------------------------------------

    def export(self) -> dict:
        with self._lock:
            snapshot = self.trainer.snapshot()
            return export_record(
                self.topology,
                self.config,
                snapshot.params,
                self.dataset,
                train_fraction=self.data.train_fraction,
                split_seed=self.data.split_seed,
                step=snapshot.step,
                frames=self.frames,
            )

    @classmethod
    def from_record(cls, record: dict) -> "Session":
        imported = import_record(record)
        session = cls(
            imported.topology,
            imported.config,
            imported.dataset,
            train_fraction=imported.data.train_fraction,
            split_seed=imported.data.split_seed,
            params=imported.params,
            step=imported.step,
        )
        with session._lock:
            session.frames = list(imported.frames) or session.frames
        return session

    def close(self):
        self._halt_loop()


class SessionRegistry:
    """Thread-safe session store with an upper bound on live sessions."""

    def __init__(self, max_sessions: int = 16):
        self.max_sessions = max_sessions
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def add(self, session: Session) -> Session:
        with self._lock:
            if len(self._sessions) >= self.max_sessions:
                raise SessionLimitError(f"session limit of {self.max_sessions} reached")
            self._sessions[session.session_id] = session
            return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSessionError(f"no session {session_id!r}")
        return session

    def close_all(self):
        with self._lock:
            sessions = list(self._sessions.values())
        for session in sessions:
            session.close()
