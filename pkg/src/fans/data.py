"""Dataset container and CSV ingestion/export.

The on-disk format is a UTF-8, comma-separated file with a header row,
'.' decimal numeric cells, and (optionally) a 0/1 label column.
"""

import csv
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import InvalidDataError, ShapeError


@dataclass
class Dataset:
    features: np.ndarray
    labels: Optional[np.ndarray] = None
    feature_names: Optional[List[str]] = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.ndim != 2:
            raise ShapeError("features must be a 2-D matrix")
        if self.features.size and not np.all(np.isfinite(self.features)):
            raise InvalidDataError("features must be finite")
        if self.labels is not None:
            self.labels = np.asarray(self.labels)
            if self.labels.shape != (self.features.shape[0],):
                raise ShapeError("labels must have one entry per row")
            if not np.all(np.isin(self.labels, (0, 1))):
                raise InvalidDataError("labels must be 0/1")
            self.labels = self.labels.astype(np.int64)
        if self.feature_names is not None:
            if len(self.feature_names) != self.features.shape[1]:
                raise ShapeError("one name per feature column required")
            self.feature_names = list(self.feature_names)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> tuple:
        if self.labels is None:
            raise InvalidDataError("dataset has no labels")
        return int((self.labels == 0).sum()), int((self.labels == 1).sum())


def load_csv(path, label_column: Optional[str] = None) -> Dataset:
    """Load a dataset; the label column (if named) is split off features."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidDataError(f"{path}: empty file") from None
        header = [name.strip() for name in header]
        label_idx = None
        if label_column is not None:
            try:
                label_idx = header.index(label_column)
            except ValueError:
                raise InvalidDataError(
                    f"{path}: no column named {label_column!r}"
                ) from None
        feature_names = [h for i, h in enumerate(header) if i != label_idx]
        rows: List[List[float]] = []
        labels: List[int] = []
        for row_number, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise InvalidDataError(
                    f"{path}: row {row_number} has {len(row)} cells, expected {len(header)}"
                )
            values = []
            for i, cell in enumerate(row):
                if i == label_idx:
                    continue
                try:
                    value = float(cell)
                except ValueError:
                    raise InvalidDataError(
                        f"{path}: row {row_number}, column {header[i]!r}: "
                        f"non-numeric cell {cell.strip()!r}"
                    ) from None
                if not math.isfinite(value):
                    raise InvalidDataError(
                        f"{path}: row {row_number}, column {header[i]!r}: "
                        "non-finite value"
                    )
                values.append(value)
            if label_idx is not None:
                cell = row[label_idx].strip()
                if cell not in ("0", "1"):
                    raise InvalidDataError(
                        f"{path}: row {row_number}, column {label_column!r}: "
                        f"label must be 0 or 1, got {cell!r}"
                    )
                labels.append(int(cell))
            rows.append(values)
    features = np.array(rows, dtype=np.float64) if rows else np.empty((0, len(feature_names)))
    return Dataset(
        features=features,
        labels=np.array(labels, dtype=np.int64) if label_idx is not None else None,
        feature_names=feature_names,
    )


def save_csv(dataset: Dataset, path, label_column: str = "label") -> None:
    """Write a dataset in the same format ``load_csv`` reads."""
    names = dataset.feature_names or [f"x{j + 1}" for j in range(dataset.p)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        header = list(names) + ([label_column] if dataset.labels is not None else [])
        writer.writerow(header)
        for i in range(dataset.n):
            row = [repr(float(v)) for v in dataset.features[i]]
            if dataset.labels is not None:
                row.append(str(int(dataset.labels[i])))
            writer.writerow(row)
