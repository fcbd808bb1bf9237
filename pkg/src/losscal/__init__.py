"""Recover calibrated probabilities from classifiers trained with class-weighted losses.

The package models a scorer that minimizes a class-weighted strictly proper
loss given posterior beliefs: the closed-form optimal scores, their analytic
inversions (loss-corrections), a loss-calibration regret test over binned
score/label data, the equivalent prior-shift correction, and a seeded
simulator that generates datasets with known ground truth.
"""

from .corrections import beta_to_delta, delta_to_beta, prior_shift_correct
from .dataio import emit_dataset, ingest
from .dataset import ScoredDataset
from .diagnostics import (
    Binning,
    CalibrationCurve,
    RegretReport,
    SbrCheck,
    build_curve,
    default_tolerance,
    expected_calibration_error,
    regret_test,
    theoretical_curve,
    verify_sbr,
)
from .errors import (
    DimensionMismatch,
    DomainError,
    EmptyDataset,
    LosscalError,
    NoConsistentPosterior,
    ParseError,
    RangeError,
    UnknownSignal,
)
from .losses import (
    BRIER_LOSS,
    LOG_LOSS,
    BinaryWeights,
    LossFamily,
    LossSpec,
    MatrixWeights,
    WeightSpec,
    base_loss,
    loss_derivative,
    weighted_loss_binary,
    weighted_loss_multi,
)
from .sbr import (
    SimulationConfig,
    SimulationResult,
    StatisticalExperiment,
    imbalance_preset,
    posterior,
    posterior_matrix,
    signal_scores,
    simulate,
)
from .scoring import (
    argmin_oracle_binary,
    argmin_oracle_multi,
    loss_correct_binary,
    loss_correct_multi,
    optimal_score_binary,
    optimal_score_multi,
)

__version__ = "0.1.0"

__all__ = [
    "BRIER_LOSS",
    "LOG_LOSS",
    "BinaryWeights",
    "Binning",
    "CalibrationCurve",
    "DimensionMismatch",
    "DomainError",
    "EmptyDataset",
    "LossFamily",
    "LossSpec",
    "LosscalError",
    "MatrixWeights",
    "NoConsistentPosterior",
    "ParseError",
    "RangeError",
    "RegretReport",
    "SbrCheck",
    "ScoredDataset",
    "SimulationConfig",
    "SimulationResult",
    "StatisticalExperiment",
    "UnknownSignal",
    "WeightSpec",
    "argmin_oracle_binary",
    "argmin_oracle_multi",
    "base_loss",
    "beta_to_delta",
    "build_curve",
    "default_tolerance",
    "delta_to_beta",
    "emit_dataset",
    "expected_calibration_error",
    "imbalance_preset",
    "ingest",
    "loss_correct_binary",
    "loss_correct_multi",
    "loss_derivative",
    "optimal_score_binary",
    "optimal_score_multi",
    "posterior",
    "posterior_matrix",
    "prior_shift_correct",
    "regret_test",
    "signal_scores",
    "simulate",
    "theoretical_curve",
    "verify_sbr",
    "weighted_loss_binary",
    "weighted_loss_multi",
]
