"""Synthetic binary-classification datasets, CSV ingestion, and feature views.

All points live in the canonical square [-6, 6]^2 with labels in {-1, +1}.
Generators are pure functions of (kind, n, noise, seed). Uploaded CSVs are
rescaled into the square when they fall outside it.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from netcap.errors import EmptyDatasetError, ParseError, ValidationError
from netcap.topology import normalize_features

SQUARE = 6.0
_RADIUS = 5.0

GENERATED_KINDS = ("circle", "xor", "gauss", "spiral")


@dataclass(frozen=True)
class RawPoint:
    x1: float
    x2: float
    label: int


@dataclass(frozen=True)
class Dataset:
    points: tuple[RawPoint, ...]
    source: str
    seed: int = 0
    noise: float = 0.0

    def __len__(self) -> int:
        return len(self.points)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(p.label for p in self.points)


_FEATURE_FN = {
    "x1": lambda x1, x2: x1,
    "x2": lambda x1, x2: x2,
    "x1^2": lambda x1, x2: x1 * x1,
    "x2^2": lambda x1, x2: x2 * x2,
    "x1*x2": lambda x1, x2: x1 * x2,
    "sin(x1)": lambda x1, x2: np.sin(x1),
    "sin(x2)": lambda x1, x2: np.sin(x2),
}


@dataclass(frozen=True)
class FeatureView:
    """n x d matrix of selected feature values plus aligned labels."""

    x: np.ndarray
    labels: np.ndarray
    feature_ids: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.labels)


def apply_features(dataset: Dataset, selection) -> FeatureView:
    """Map raw points through the selected feature formulas.

    Columns follow the canonical feature order regardless of how the
    selection was written.
    """
    feats = normalize_features(selection)
    x1 = np.array([p.x1 for p in dataset.points], dtype=float)
    x2 = np.array([p.x2 for p in dataset.points], dtype=float)
    cols = [np.asarray(_FEATURE_FN[f](x1, x2), dtype=float) for f in feats]
    matrix = np.column_stack(cols) if cols else np.empty((len(dataset), 0))
    labels = np.array([p.label for p in dataset.points], dtype=int)
    return FeatureView(matrix, labels, feats)


def _clip(values: np.ndarray) -> np.ndarray:
    return np.clip(values, -SQUARE, SQUARE)


def _jitter(rng: np.random.Generator, values: np.ndarray, noise: float) -> np.ndarray:
    if noise == 0.0:
        return values
    return values + rng.uniform(-_RADIUS, _RADIUS, values.shape) * noise


def _make_points(x1, x2, labels) -> tuple[RawPoint, ...]:
    return tuple(
        RawPoint(float(a), float(b), int(l)) for a, b, l in zip(x1, x2, labels)
    )


def _circle(n: int, noise: float, rng: np.random.Generator):
    n_pos = n // 2
    counts = (n_pos, n - n_pos)
    radii = [(0.0, _RADIUS * 0.5), (_RADIUS * 0.7, _RADIUS)]
    xs, ys, labels = [], [], []
    for (lo, hi), count, label in zip(radii, counts, (1, -1)):
        r = rng.uniform(lo, hi, count)
        angle = rng.uniform(0.0, 2.0 * math.pi, count)
        xs.append(r * np.cos(angle))
        ys.append(r * np.sin(angle))
        labels.extend([label] * count)
    x1 = _clip(_jitter(rng, np.concatenate(xs), noise))
    x2 = _clip(_jitter(rng, np.concatenate(ys), noise))
    return x1, x2, labels


def _xor(n: int, noise: float, rng: np.random.Generator):
    # Quadrant parity; the first half gets positive-parity quadrants so both
    # classes are always present. A small pad keeps points off the axes.
    labels = [1 if i < n // 2 else -1 for i in range(n)]
    mag1 = rng.uniform(0.3, _RADIUS, n)
    mag2 = rng.uniform(0.3, _RADIUS, n)
    s1 = rng.choice([-1.0, 1.0], n)
    s2 = np.array([a if l == 1 else -a for a, l in zip(s1, labels)])
    x1 = _clip(_jitter(rng, mag1 * s1, noise))
    x2 = _clip(_jitter(rng, mag2 * s2, noise))
    return x1, x2, labels


def _gauss(n: int, noise: float, rng: np.random.Generator):
    n_pos = n // 2
    sigma = 0.5 + 2.0 * noise
    xs, ys, labels = [], [], []
    for center, count, label in (((2.0, 2.0), n_pos, 1), ((-2.0, -2.0), n - n_pos, -1)):
        xs.append(rng.normal(center[0], sigma, count))
        ys.append(rng.normal(center[1], sigma, count))
        labels.extend([label] * count)
    return _clip(np.concatenate(xs)), _clip(np.concatenate(ys)), labels


def _spiral(n: int, noise: float, rng: np.random.Generator):
    n_pos = n // 2
    xs, ys, labels = [], [], []
    for count, (delta, label) in zip((n_pos, n - n_pos), ((0.0, 1), (math.pi, -1))):
        i = np.arange(count)
        r = i / max(count - 1, 1) * _RADIUS
        t = 1.75 * i / max(count - 1, 1) * 2.0 * math.pi + delta
        xs.append(r * np.sin(t))
        ys.append(r * np.cos(t))
        labels.extend([label] * count)
    x1 = _clip(_jitter(rng, np.concatenate(xs), noise))
    x2 = _clip(_jitter(rng, np.concatenate(ys), noise))
    return x1, x2, labels


_GENERATORS = {"circle": _circle, "xor": _xor, "gauss": _gauss, "spiral": _spiral}


def generate(kind: str, n: int, noise: float, seed: int) -> Dataset:
    """Deterministic synthetic dataset of one of the four classic shapes."""
    if kind not in _GENERATORS:
        raise ValidationError(f"unknown dataset kind {kind!r}; expected one of {GENERATED_KINDS}")
    if n < 4:
        raise ValidationError("need at least 4 points")
    if not 0.0 <= noise <= 0.5:
        raise ValidationError("noise must be in [0, 0.5]")
    rng = np.random.default_rng(seed)
    x1, x2, labels = _GENERATORS[kind](n, noise, rng)
    return Dataset(_make_points(x1, x2, labels), source=kind, seed=seed, noise=noise)


def _rescale_axis(values: list[float]) -> list[float]:
    lo, hi = min(values), max(values)
    if -SQUARE <= lo and hi <= SQUARE:
        return values
    if hi == lo:
        return [0.0] * len(values)
    return [-SQUARE + 2.0 * SQUARE * (v - lo) / (hi - lo) for v in values]


def parse_csv(data: bytes | str) -> Dataset:
    """Read an uploaded dataset: header x1,x2,label; labels -1/+1 or 0/1.

    A 0 label maps to -1. Axes that fall outside [-6, 6] are linearly
    rescaled to span the square exactly; axes already inside it are kept
    as-is so canonical files round-trip unchanged.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"file is not valid UTF-8: {exc}") from None
    reader = csv.reader(io.StringIO(data))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ParseError("file is empty")
    header = [cell.strip().lower() for cell in rows[0]]
    required = ["x1", "x2", "label"]
    missing = [c for c in required if c not in header]
    if missing:
        raise ParseError(f"missing required columns: {', '.join(missing)}", line=1)
    extra = [c for c in header if c not in required]
    if extra:
        raise ParseError(
            f"only x1, x2, label columns are supported; drop: {', '.join(extra)}", line=1
        )
    idx = {c: header.index(c) for c in required}

    x1s: list[float] = []
    x2s: list[float] = []
    labels: list[int] = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} cells, got {len(row)}", line=line_no)
        try:
            a = float(row[idx["x1"]])
            b = float(row[idx["x2"]])
        except ValueError:
            raise ParseError("x1 and x2 must be numeric", line=line_no) from None
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ParseError("coordinates must be finite", line=line_no)
        raw_label = row[idx["label"]].strip()
        try:
            lab = float(raw_label)
        except ValueError:
            raise ParseError(f"label {raw_label!r} is not numeric", line=line_no) from None
        if lab not in (-1.0, 0.0, 1.0):
            raise ParseError(f"label must be -1, 0, or 1, got {raw_label}", line=line_no)
        x1s.append(a)
        x2s.append(b)
        labels.append(1 if lab == 1.0 else -1)

    if len(labels) < 4:
        raise ParseError(f"need at least 4 data rows, got {len(labels)}")
    if len(set(labels)) < 2:
        raise ParseError("dataset contains a single class; both labels are required")

    x1s = _rescale_axis(x1s)
    x2s = _rescale_axis(x2s)
    return Dataset(_make_points(x1s, x2s, labels), source="uploaded")


def serialize_csv(dataset: Dataset) -> str:
    lines = ["x1,x2,label"]
    lines.extend(f"{p.x1!r},{p.x2!r},{p.label}" for p in dataset.points)
    return "\n".join(lines) + "\n"


def split(dataset: Dataset, train_fraction: float = 0.5, seed: int = 0) -> tuple[Dataset, Dataset]:
    """Seeded shuffle, then a floor-rule split into train and test halves."""
    if not 0.1 <= train_fraction <= 0.9:
        raise ValidationError("train_fraction must be in [0.1, 0.9]")
    if len(dataset) == 0:
        raise EmptyDatasetError("cannot split an empty dataset")
    order = np.random.default_rng(seed).permutation(len(dataset))
    n_train = math.floor(train_fraction * len(dataset) + 1e-9)
    if n_train == 0 or n_train == len(dataset):
        raise ValidationError(
            f"split of {len(dataset)} points at fraction {train_fraction} leaves a side empty"
        )
    points = dataset.points

    def take(indices):
        picked = tuple(points[i] for i in indices)
        return Dataset(picked, dataset.source, dataset.seed, dataset.noise)

    return take(order[:n_train]), take(order[n_train:])
