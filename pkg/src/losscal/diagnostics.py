"""Binned calibration curves, the loss-calibration regret test, and SBR checks.

A dataset is loss-calibrated when no score bin can lower its expected loss by
wholesale switching to a different score.  The regret test quantifies this
per bin: realized expected loss at the bin's mean score minus the minimum
achievable at the bin's empirical label distribution.  Zero regret everywhere
is equivalent to the existence of a signal-based representation, whose
canonical form (signals = score bins) this module constructs.
"""

from dataclasses import dataclass, field

import numpy as np

from .dataset import ScoredDataset
from .errors import DimensionMismatch, DomainError, EmptyDataset
from .losses import (
    BinaryWeights,
    LossSpec,
    MatrixWeights,
    weighted_loss_binary,
    weighted_loss_multi,
)
from .sbr import StatisticalExperiment
from .scoring import (
    argmin_oracle_binary,
    argmin_oracle_multi,
    optimal_score_binary,
    optimal_score_multi,
)

Z_95 = 1.959963984540054
MULTI_CELL_CAP = 10_000
MULTI_MIN_CELL_ROWS = 20


@dataclass(frozen=True)
class Binning:
    """How scores are grouped into bins.

    mode "quantile" builds k equal-count bins (ties never split: a run of
    identical scores straddling a boundary joins the lower bin), "width"
    builds k equal-width bins on [0, 1], and "distinct" makes every distinct
    score value its own bin (the atom-level view used for simulator output).
    """

    mode: str = "quantile"
    k: int = 10

    def __post_init__(self):
        if self.mode not in ("quantile", "width", "distinct"):
            raise DomainError(f"unknown binning mode {self.mode!r}")
        if self.mode != "distinct" and self.k < 2:
            raise DomainError(f"binning needs k >= 2, got {self.k}")


def _groups_1d(scores, binning):
    """Row-index groups ordered by ascending score, plus dropped-bin count."""
    n = scores.shape[0]
    degenerate = bool(np.all(scores == scores[0]))
    if binning.mode == "distinct" or degenerate:
        _, inverse = np.unique(scores, return_inverse=True)
        order = np.argsort(inverse, kind="stable")
        boundaries = np.flatnonzero(np.diff(inverse[order])) + 1
        groups = np.split(order, boundaries)
        return groups, 0, degenerate
    if binning.mode == "width":
        idx = np.minimum((scores * binning.k).astype(np.int64), binning.k - 1)
        groups = [np.flatnonzero(idx == b) for b in range(binning.k)]
        kept = [g for g in groups if g.size]
        return kept, binning.k - len(kept), False
    order = np.argsort(scores, kind="stable")
    ranked = scores[order]
    cuts = []
    for j in range(1, binning.k):
        c = round(j * n / binning.k)
        while 0 < c < n and ranked[c] == ranked[c - 1]:
            c += 1
        cuts.append(c)
    edges = [0, *cuts, n]
    groups = [order[a:b] for a, b in zip(edges[:-1], edges[1:]) if b > a]
    return groups, binning.k - len(groups), False


def _groups_vector(scores, binning):
    """Bin full score vectors; per-coordinate quantiles with small-cell merging."""
    n_rows, n_classes = scores.shape
    if binning.mode == "distinct":
        _, inverse = np.unique(scores, axis=0, return_inverse=True)
        order = np.argsort(inverse, kind="stable")
        boundaries = np.flatnonzero(np.diff(inverse[order])) + 1
        return list(np.split(order, boundaries)), 0
    per_coord = max(2, min(binning.k, int(MULTI_CELL_CAP ** (1.0 / n_classes))))
    idx = np.empty((n_rows, n_classes), dtype=np.int64)
    for j in range(n_classes):
        interior = np.quantile(scores[:, j], np.arange(1, per_coord) / per_coord)
        idx[:, j] = np.searchsorted(interior, scores[:, j], side="right")
    cell_ids = np.ravel_multi_index(idx.T, (per_coord,) * n_classes)
    order = np.argsort(cell_ids, kind="stable")
    boundaries = np.flatnonzero(np.diff(cell_ids[order])) + 1
    cells = np.split(order, boundaries)
    # Cells below the minimum row count merge into the previous kept cell
    # (lexicographic cell order), so merging is deterministic.
    merged = []
    for cell in cells:
        if merged and (cell.size < MULTI_MIN_CELL_ROWS or merged[-1].size < MULTI_MIN_CELL_ROWS):
            merged[-1] = np.concatenate([merged[-1], cell])
        else:
            merged.append(cell)
    return merged, 0


@dataclass
class CalibrationCurve:
    """Binned reliability data: mean score vs. empirical label frequency."""

    mean_score: np.ndarray
    freq: np.ndarray
    count: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    dropped_bins: int = 0
    degenerate: bool = False

    @property
    def n_bins(self):
        return self.mean_score.shape[0]


def build_curve(data, class_index=1, binning=Binning()):
    """Decile-style calibration curve for one class, one-vs-rest.

    Bins partition rows by the class's score column; each bin reports its mean
    score, the fraction of rows labeled ``class_index``, and a 95% binomial
    proportion interval (normal approximation).  Empty bins are dropped and
    counted; if all scores are identical a single flagged bin is returned.
    """
    if not isinstance(data, ScoredDataset):
        raise TypeError("data must be a ScoredDataset")
    scores = data.score_column(class_index)
    hits = (data.labels == class_index).astype(float)
    groups, dropped, degenerate = _groups_1d(scores, binning)
    if not groups:
        raise EmptyDataset("no usable bins")
    mean_score = np.array([scores[g].mean() for g in groups])
    freq = np.array([hits[g].mean() for g in groups])
    count = np.array([g.size for g in groups], dtype=np.int64)
    half = Z_95 * np.sqrt(freq * (1.0 - freq) / count)
    return CalibrationCurve(
        mean_score=mean_score,
        freq=freq,
        count=count,
        lo=np.maximum(freq - half, 0.0),
        hi=np.minimum(freq + half, 1.0),
        dropped_bins=dropped,
        degenerate=degenerate,
    )


def expected_calibration_error(curve):
    """Count-weighted mean absolute gap between bin frequency and mean score."""
    if curve.n_bins == 0:
        raise EmptyDataset("curve has no bins")
    weights = curve.count / curve.count.sum()
    return float(np.sum(weights * np.abs(curve.freq - curve.mean_score)))


def theoretical_curve(beta1, gamma_grid):
    """Score/implied-frequency pairs a loss-calibrated scorer traces out.

    For each posterior gamma in the grid the emitted score is
    ``optimal_score_binary(beta1, gamma)`` and the label frequency at that
    score is gamma itself; at beta1 = 0.5 this is the diagonal.
    """
    grid = np.asarray(gamma_grid, dtype=float)
    if np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise DomainError("gamma grid must be interior to (0, 1)")
    return optimal_score_binary(beta1, grid), grid


@dataclass
class RegretReport:
    """Per-bin realized vs. minimal expected loss under the stated weights."""

    bin_score: np.ndarray
    count: np.ndarray
    label_counts: np.ndarray
    realized: np.ndarray
    minimal: np.ndarray
    regret: np.ndarray
    argmin_score: np.ndarray
    max_regret: float
    mean_regret: float
    dropped_bins: int = 0
    warnings: list = field(default_factory=list)

    @property
    def n_bins(self):
        return self.count.shape[0]

    @property
    def min_count(self):
        return int(self.count.min())

    @property
    def label_probs(self):
        return self.label_counts / self.count[:, None]


def default_tolerance(report):
    """Finite-sample loss-calibration tolerance: max(5e-3, 3/sqrt(min bin count))."""
    return max(5e-3, 3.0 / np.sqrt(report.min_count))


def _bin_expected_loss(loss, weights, rep, probs, n_rows, count, label_counts, form):
    """Expected weighted loss of one bin at score ``rep``, per row of the bin.

    The conditional form weights by label frequencies within the bin; the
    joint form weights by joint cell probabilities and rescales by the bin's
    probability.  The two are algebraically identical (law of conditional
    probability) and must agree to float precision.
    """
    if isinstance(weights, BinaryWeights):
        losses = np.array(
            [
                weighted_loss_binary(loss, weights.beta1, rep, y)
                for y in (0, 1)
            ]
        )
    else:
        losses = np.array(
            [
                weighted_loss_multi(loss, weights.beta, rep, y)
                for y in range(weights.n_classes)
            ]
        )
    if form == "conditional":
        return float(probs @ losses)
    joint = label_counts / n_rows
    return float((joint @ losses) * (n_rows / count))


def regret_test(
    data,
    loss,
    weights,
    binning=Binning(),
    mode="analytic",
    grid_size=100_001,
    form="conditional",
):
    """Loss-calibration regret per score bin.

    Each bin is summarized by its count-weighted mean score and its empirical
    label distribution; regret is the bin's expected weighted loss at that
    mean score minus the minimum expected loss over all scores.  "analytic"
    mode locates the minimum with the closed-form optimal score, "grid" mode
    with the brute-force oracles (the bin's own score is always admitted as a
    candidate, so grid regret is never negative).  ``form`` selects the
    conditional or joint probability weighting; both give the same report.
    """
    if mode not in ("analytic", "grid"):
        raise DomainError(f"unknown regret mode {mode!r}")
    if form not in ("conditional", "joint"):
        raise DomainError(f"unknown probability form {form!r}")

    binary = isinstance(weights, BinaryWeights)
    if binary:
        if not data.is_binary:
            raise DimensionMismatch("binary weights require a binary dataset")
        groups, dropped, _ = _groups_1d(data.scores, binning)
        n_classes = 2
    elif isinstance(weights, MatrixWeights):
        if data.is_binary:
            raise DimensionMismatch("matrix weights require vector score rows")
        if weights.n_classes != data.n_classes:
            raise DimensionMismatch(
                f"weight matrix is {weights.n_classes}-class but data has {data.n_classes}"
            )
        groups, dropped = _groups_vector(data.scores, binning)
        n_classes = data.n_classes
    else:
        raise TypeError(f"unsupported weight spec {type(weights).__name__}")

    n_rows = data.n_rows
    n_bins = len(groups)
    reps = np.empty(n_bins) if binary else np.empty((n_bins, n_classes))
    counts = np.empty(n_bins, dtype=np.int64)
    label_counts = np.empty((n_bins, n_classes), dtype=np.int64)
    realized = np.empty(n_bins)
    minimal = np.empty(n_bins)
    argmins = np.empty_like(reps)

    for i, rows in enumerate(groups):
        counts[i] = rows.size
        label_counts[i] = np.bincount(data.labels[rows], minlength=n_classes)
        probs = label_counts[i] / counts[i]
        rep = data.scores[rows].mean(axis=0) if not binary else float(data.scores[rows].mean())
        reps[i] = rep
        realized[i] = _bin_expected_loss(
            loss, weights, rep, probs, n_rows, counts[i], label_counts[i], form
        )
        if binary:
            if mode == "analytic":
                best = optimal_score_binary(weights.beta1, probs[1])
            else:
                best = argmin_oracle_binary(loss, weights.beta1, probs[1], grid_size)
        else:
            if mode == "analytic":
                best = optimal_score_multi(weights.beta, probs)
            else:
                best = argmin_oracle_multi(loss, weights.beta, probs, grid_size)
        argmins[i] = best
        minimal[i] = _bin_expected_loss(
            loss, weights, best, probs, n_rows, counts[i], label_counts[i], form
        )
        if mode == "grid" and minimal[i] > realized[i]:
            minimal[i] = realized[i]
            argmins[i] = rep

    regret = np.maximum(realized - minimal, 0.0)
    weights_per_bin = counts / counts.sum()
    return RegretReport(
        bin_score=reps,
        count=counts,
        label_counts=label_counts,
        realized=realized,
        minimal=minimal,
        regret=regret,
        argmin_score=argmins,
        max_regret=float(regret.max()),
        mean_regret=float(weights_per_bin @ regret),
        dropped_bins=dropped,
    )


@dataclass
class SbrCheck:
    """Outcome of the signal-based-representation test."""

    has_sbr: bool
    canonical: StatisticalExperiment | None
    signal_scores: np.ndarray | None
    report: RegretReport
    tolerance: float


def verify_sbr(
    data,
    loss,
    weights,
    tolerance=None,
    binning=Binning(),
    mode="analytic",
    grid_size=100_001,
):
    """Test loss-calibration and, when it holds, build the canonical experiment.

    The dataset is loss-calibrated at the tolerance iff the max bin regret is
    within it; in that case the observed score bins themselves serve as
    signals: the canonical experiment has the empirical label marginal as its
    prior, the per-label bin frequencies as signal likelihoods, and the bins'
    mean scores as the (identity) scoring map.
    """
    report = regret_test(data, loss, weights, binning=binning, mode=mode, grid_size=grid_size)
    if tolerance is None:
        tolerance = default_tolerance(report)
    if report.max_regret > tolerance:
        return SbrCheck(False, None, None, report, tolerance)

    total = report.count.sum()
    per_label = report.label_counts.sum(axis=0)
    prior = per_label / total
    conditionals = np.empty((report.n_bins, prior.shape[0]))
    for y in range(prior.shape[0]):
        if per_label[y]:
            conditionals[:, y] = report.label_counts[:, y] / per_label[y]
        else:
            conditionals[:, y] = 1.0 / report.n_bins
    # Renormalize columns so float rounding over many bins cannot trip the
    # experiment's simplex validation.
    conditionals /= conditionals.sum(axis=0, keepdims=True)
    canonical = StatisticalExperiment(prior=prior, conditionals=conditionals)
    return SbrCheck(True, canonical, report.bin_score.copy(), report, tolerance)
