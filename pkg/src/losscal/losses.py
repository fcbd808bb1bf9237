"""Strictly proper base losses and their class-weighted extensions.

Two base families are provided, log loss and Brier (squared error).  Both are
differentiable on (0, 1) with derivatives of the form w(a)(a-1) on a positive
outcome and w(a)a on a negative one, for a positive weight function w:
w(a) = 1/(a(1-a)) for log loss and w(a) = 2 for Brier.  Class weighting
multiplies the per-label loss terms by positive weights, either a scalar
weight on the positive class (binary) or an n-by-n matrix (multi-class).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, DomainError


class LossFamily(str, Enum):
    LOG = "log"
    BRIER = "brier"


@dataclass(frozen=True)
class LossSpec:
    """A differentiable strictly proper base loss, identified by family.

    ``clamp_epsilon`` bounds scores away from {0, 1} before evaluating the
    loss, so values stay finite for boundary scores in real data.
    """

    family: LossFamily = LossFamily.LOG
    clamp_epsilon: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "family", LossFamily(self.family))
        if not 0.0 < self.clamp_epsilon < 0.5:
            raise DomainError(
                f"clamp_epsilon must lie in (0, 0.5), got {self.clamp_epsilon}"
            )

    def clamp(self, score):
        return np.clip(score, self.clamp_epsilon, 1.0 - self.clamp_epsilon)

    def weight(self, score):
        """The derivative weight function w evaluated at ``score``."""
        if self.family is LossFamily.LOG:
            return 1.0 / (score * (1.0 - score))
        if np.ndim(score):
            return np.full_like(np.asarray(score, dtype=float), 2.0)
        return 2.0


LOG_LOSS = LossSpec(LossFamily.LOG)
BRIER_LOSS = LossSpec(LossFamily.BRIER)


def _check_outcome(outcome):
    if outcome not in (0, 1):
        raise DomainError(f"outcome must be 0 or 1, got {outcome!r}")


def base_loss(spec, score, outcome):
    """Loss of a (clamped) score against a binary outcome.

    Log loss is -log(a) on outcome 1 and -log(1-a) on outcome 0; Brier is
    (a - outcome)^2.  Scores are clamped into
    [clamp_epsilon, 1 - clamp_epsilon] first, so the result is always finite.
    Accepts scalar or array scores.
    """
    _check_outcome(outcome)
    a = spec.clamp(np.asarray(score, dtype=float))
    if spec.family is LossFamily.LOG:
        value = -np.log(a) if outcome == 1 else -np.log1p(-a)
    else:
        value = np.square(a - outcome)
    return value if value.ndim else float(value)


def loss_derivative(spec, score, outcome):
    """Analytic derivative of ``base_loss`` with respect to the score.

    Equals w(a)(a-1) on outcome 1 and w(a)a on outcome 0.  The score must be
    strictly inside the clamp interval, where the loss is differentiable.
    """
    _check_outcome(outcome)
    a = np.asarray(score, dtype=float)
    eps = spec.clamp_epsilon
    if np.any(a <= eps) or np.any(a >= 1.0 - eps):
        raise DomainError(
            f"score must lie strictly inside ({eps}, {1.0 - eps}) for the derivative"
        )
    w = spec.weight(a)
    value = w * (a - 1.0) if outcome == 1 else w * a
    return value if np.ndim(value) else float(value)


def weighted_loss_binary(spec, beta1, score1, label):
    """Class-weighted binary loss: beta1 on label 1, (1 - beta1) on label 0."""
    if not 0.0 < beta1 < 1.0:
        raise DomainError(f"beta1 must lie in (0, 1), got {beta1}")
    _check_outcome(label)
    factor = beta1 if label == 1 else 1.0 - beta1
    return factor * base_loss(spec, score1, label)


def weighted_loss_multi(spec, beta, scores, label):
    """Matrix-weighted multi-class loss.

    Sums, over score coordinates y', the base loss of scores[y'] against the
    indicator of label == y', weighted by row ``label`` of the matrix.
    """
    beta = np.asarray(beta, dtype=float)
    scores = np.asarray(scores, dtype=float)
    n = beta.shape[0]
    if beta.ndim != 2 or beta.shape[0] != beta.shape[1]:
        raise DimensionMismatch(f"weight matrix must be square, got shape {beta.shape}")
    if scores.shape != (n,):
        raise DimensionMismatch(
            f"scores must have length {n} to match the weight matrix, got {scores.shape}"
        )
    if not 0 <= label < n:
        raise DomainError(f"label must lie in [0, {n}), got {label}")
    indicator = np.arange(n) == label
    per_coord = np.where(
        indicator, base_loss(spec, scores, 1), base_loss(spec, scores, 0)
    )
    return float(beta[label] @ per_coord)


@dataclass(frozen=True)
class BinaryWeights:
    """Scalar weight beta1 in (0, 1) on the positive class."""

    beta1: float

    def __post_init__(self):
        if not 0.0 < self.beta1 < 1.0:
            raise DomainError(f"beta1 must lie strictly in (0, 1), got {self.beta1}")

    @property
    def equivalent_delta(self):
        """The resampling ratio with the same correction formula."""
        return (1.0 - self.beta1) / self.beta1


@dataclass(frozen=True, eq=False)
class MatrixWeights:
    """Strictly positive n-by-n class-weight matrix, n >= 2."""

    beta: np.ndarray

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=float)
        if beta.ndim != 2 or beta.shape[0] != beta.shape[1]:
            raise DimensionMismatch(f"weight matrix must be square, got shape {beta.shape}")
        if beta.shape[0] < 2:
            raise DomainError("weight matrix needs at least 2 classes")
        if not np.all(beta > 0.0):
            raise DomainError("weight matrix entries must be strictly positive")
        object.__setattr__(self, "beta", beta)

    @property
    def n_classes(self):
        return self.beta.shape[0]


WeightSpec = BinaryWeights | MatrixWeights
