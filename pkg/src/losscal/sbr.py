"""Signal-based simulator: statistical experiment, Bayes updating, optimal scoring.

Models a scorer that draws a label from a prior, observes a signal from
per-label signal likelihoods, forms the Bayes posterior, and reports the
loss-minimizing score for that posterior.  Simulated datasets therefore have
known ground truth (the per-row posterior), which the rest of the package is
validated against.

Sampling uses numpy's PCG64 generator (``numpy.random.default_rng``) seeded
with the configured 64-bit seed; outputs are bit-stable for a fixed seed
within a release.
"""

from dataclasses import dataclass

import numpy as np

from .dataset import ScoredDataset
from .errors import DimensionMismatch, DomainError, UnknownSignal
from .losses import BinaryWeights, LossSpec, MatrixWeights
from .scoring import SIMPLEX_ATOL, optimal_score_binary, optimal_score_multi


@dataclass(frozen=True, eq=False)
class StatisticalExperiment:
    """A prior over labels plus per-label signal likelihoods.

    ``conditionals`` has one row per signal and one column per label; column y
    is the distribution of signals given label y and must sum to 1.  Every
    signal must have positive marginal probability under the prior.
    """

    prior: np.ndarray
    conditionals: np.ndarray

    def __post_init__(self):
        prior = np.asarray(self.prior, dtype=float)
        conditionals = np.asarray(self.conditionals, dtype=float)
        if prior.ndim != 1 or prior.shape[0] < 2:
            raise DimensionMismatch("prior must be a vector over >= 2 labels")
        if np.any(prior < 0.0) or abs(prior.sum() - 1.0) > SIMPLEX_ATOL:
            raise DomainError("prior must be a probability vector summing to 1")
        if conditionals.ndim != 2 or conditionals.shape[1] != prior.shape[0]:
            raise DimensionMismatch(
                "conditionals must have shape (n_signals, n_labels) matching the prior"
            )
        if np.any(conditionals < 0.0):
            raise DomainError("signal likelihoods must be nonnegative")
        column_sums = conditionals.sum(axis=0)
        if np.any(np.abs(column_sums - 1.0) > SIMPLEX_ATOL):
            raise DomainError("each label's signal distribution must sum to 1")
        if np.any(conditionals @ prior <= 0.0):
            raise DomainError("every signal must have positive marginal probability")
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "conditionals", conditionals)

    @property
    def n_labels(self):
        return self.prior.shape[0]

    @property
    def n_signals(self):
        return self.conditionals.shape[0]

    @property
    def signal_marginals(self):
        return self.conditionals @ self.prior


def posterior(experiment, signal):
    """Bayes posterior over labels after observing ``signal``."""
    if not 0 <= signal < experiment.n_signals:
        raise UnknownSignal(f"signal {signal} outside [0, {experiment.n_signals})")
    joint = experiment.conditionals[signal] * experiment.prior
    return joint / joint.sum()


def posterior_matrix(experiment):
    """All signals' posteriors as a (n_signals, n_labels) array."""
    joint = experiment.conditionals * experiment.prior
    return joint / joint.sum(axis=1, keepdims=True)


def signal_scores(experiment, loss, weights):
    """Optimal score for each signal's posterior.

    Returns a length-m array of positive-class scores for binary weights, or
    an (m, n) array of per-class scores for matrix weights.  The optimum of a
    weighted strictly proper loss does not depend on the base family, so
    ``loss`` only fixes the evaluation context.
    """
    posteriors = posterior_matrix(experiment)
    if isinstance(weights, BinaryWeights):
        if experiment.n_labels != 2:
            raise DimensionMismatch("binary weights require a 2-label experiment")
        return optimal_score_binary(weights.beta1, posteriors[:, 1])
    if isinstance(weights, MatrixWeights):
        if weights.n_classes != experiment.n_labels:
            raise DimensionMismatch(
                "weight matrix size must match the experiment's label count"
            )
        return np.vstack([optimal_score_multi(weights.beta, g) for g in posteriors])
    raise TypeError(f"unsupported weight spec {type(weights).__name__}")


@dataclass(frozen=True)
class SimulationConfig:
    experiment: StatisticalExperiment
    loss: LossSpec
    weights: BinaryWeights | MatrixWeights
    sample_count: int
    seed: int

    def __post_init__(self):
        if self.sample_count < 1:
            raise DomainError(f"sample_count must be >= 1, got {self.sample_count}")


@dataclass
class SimulationResult:
    """Simulated dataset plus, when requested, the per-row ground truth."""

    data: ScoredDataset
    signals: np.ndarray | None = None
    posteriors: np.ndarray | None = None


def simulate(config, include_sidecar=False):
    """Draw sample_count i.i.d. rows (optimal score for the drawn signal, label).

    Labels are drawn from the prior and signals from the label's conditional,
    so the emitted joint distribution is the one the scoring model induces.
    Deterministic for a fixed seed.  When ``include_sidecar`` is set, the
    result carries each row's true signal index and posterior.
    """
    experiment = config.experiment
    rng = np.random.default_rng(config.seed)
    n = experiment.n_labels
    count = config.sample_count

    labels = rng.choice(n, size=count, p=experiment.prior)
    signals = np.empty(count, dtype=np.int64)
    for y in range(n):
        mask = labels == y
        n_y = int(mask.sum())
        if n_y:
            signals[mask] = rng.choice(
                experiment.n_signals, size=n_y, p=experiment.conditionals[:, y]
            )

    score_map = signal_scores(experiment, config.loss, config.weights)
    scores = score_map[signals]
    data = ScoredDataset(n_classes=n, scores=scores, labels=labels)
    if not include_sidecar:
        return SimulationResult(data=data)
    post = posterior_matrix(experiment)[signals]
    if isinstance(config.weights, BinaryWeights):
        post = post[:, 1]
    return SimulationResult(data=data, signals=signals, posteriors=post)


def imbalance_preset(positive_rate, signal_count, informativeness):
    """Binary experiment spanning the decades around an imbalanced prior.

    Signal log-likelihood-ratios are evenly spaced on [-W, W] with
    W = 2 * informativeness * log(10), so posterior log-odds sit evenly
    spaced around the prior log-odds, spanning two probability decades each
    way at full informativeness.  Posteriors are strictly increasing in the
    signal index.
    """
    if not 0.0 < positive_rate < 1.0:
        raise DomainError(f"positive_rate must lie in (0, 1), got {positive_rate}")
    if signal_count < 2:
        raise DomainError(f"signal_count must be >= 2, got {signal_count}")
    if not 0.0 < informativeness <= 1.0:
        raise DomainError(f"informativeness must lie in (0, 1], got {informativeness}")

    half_width = 2.0 * informativeness * np.log(10.0)
    log_ratios = np.linspace(-half_width, half_width, signal_count)
    # sigma(s)/sigma(-s) = exp(s), so these columns give signal s the
    # log-likelihood-ratio log_ratios[s] while both columns share one
    # normalizer (the grid is symmetric).
    positive_column = 1.0 / (1.0 + np.exp(-log_ratios))
    negative_column = positive_column[::-1].copy()
    normalizer = positive_column.sum()
    conditionals = np.column_stack(
        [negative_column / normalizer, positive_column / normalizer]
    )
    prior = np.array([1.0 - positive_rate, positive_rate])
    return StatisticalExperiment(prior=prior, conditionals=conditionals)
