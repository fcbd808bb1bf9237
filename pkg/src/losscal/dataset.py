"""The score/label dataset type shared by the diagnostics, simulator, and CLI."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, EmptyDataset


@dataclass(eq=False)
class ScoredDataset:
    """Rows of (confidence score, integer label).

    Binary datasets store the positive-class score as a 1-D array; multi-class
    datasets store one score column per class in a (rows, n_classes) array.
    Scores lie in [0, 1] and labels in [0, n_classes).
    """

    n_classes: int
    scores: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=float)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.n_classes < 2:
            raise DomainError(f"n_classes must be >= 2, got {self.n_classes}")
        if self.labels.ndim != 1 or self.labels.shape[0] == 0:
            raise EmptyDataset("dataset must contain at least one row")
        n_rows = self.labels.shape[0]
        if self.scores.ndim == 1:
            if self.n_classes != 2:
                raise DimensionMismatch(
                    "scalar score rows are only valid for binary datasets"
                )
            if self.scores.shape[0] != n_rows:
                raise DimensionMismatch("scores and labels disagree on row count")
        elif self.scores.ndim == 2:
            if self.scores.shape != (n_rows, self.n_classes):
                raise DimensionMismatch(
                    f"expected score shape {(n_rows, self.n_classes)}, got {self.scores.shape}"
                )
        else:
            raise DimensionMismatch(f"scores must be 1-D or 2-D, got ndim {self.scores.ndim}")
        if np.any(self.scores < 0.0) or np.any(self.scores > 1.0):
            raise DomainError("scores must lie in [0, 1]")
        if np.any(self.labels < 0) or np.any(self.labels >= self.n_classes):
            raise DomainError(f"labels must lie in [0, {self.n_classes})")

    @property
    def n_rows(self):
        return self.labels.shape[0]

    @property
    def is_binary(self):
        return self.scores.ndim == 1

    def score_column(self, class_index):
        """One-vs-rest score column for ``class_index``.

        For binary datasets the stored column is the positive-class score;
        class index 0 returns its complement.
        """
        if not 0 <= class_index < self.n_classes:
            raise DomainError(f"class_index must lie in [0, {self.n_classes})")
        if self.is_binary:
            return self.scores if class_index == 1 else 1.0 - self.scores
        return self.scores[:, class_index]
