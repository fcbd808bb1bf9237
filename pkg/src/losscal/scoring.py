"""Optimal posterior scoring under class-weighted proper losses, and its inverse.

The forward map gives the score a loss-minimizing scorer reports for a
posterior belief; the inverse map (the loss-correction) recovers the implied
posterior from an emitted score.  Brute-force grid minimizers provide
independent oracles for both the binary and multi-class closed forms.
"""

import numpy as np

from .errors import DimensionMismatch, DomainError, NoConsistentPosterior
from .losses import base_loss

SIMPLEX_ATOL = 1e-12


def _check_beta1(beta1):
    if not 0.0 < beta1 < 1.0:
        raise DomainError(f"beta1 must lie in (0, 1), got {beta1}")


def _check_unit_interval(name, value):
    arr = np.asarray(value, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")


def check_posterior(gamma, atol=SIMPLEX_ATOL):
    """Validate and return a posterior belief vector (length >= 2 simplex)."""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim != 1 or gamma.shape[0] < 2:
        raise DimensionMismatch(f"posterior must be a vector of length >= 2, got {gamma.shape}")
    if np.any(gamma < 0.0):
        raise DomainError("posterior entries must be nonnegative")
    if abs(gamma.sum() - 1.0) > atol:
        raise DomainError(f"posterior must sum to 1 within {atol}, got {gamma.sum()!r}")
    return gamma


def _check_weight_matrix(beta):
    beta = np.asarray(beta, dtype=float)
    if beta.ndim != 2 or beta.shape[0] != beta.shape[1]:
        raise DimensionMismatch(f"weight matrix must be square, got shape {beta.shape}")
    if not np.all(beta > 0.0):
        raise DomainError("weight matrix entries must be strictly positive")
    return beta


def optimal_score_binary(beta1, gamma1):
    """Loss-minimizing positive-class score for posterior gamma1 under weight beta1.

    Computed as b*g / (b*g + (1-b)*(1-g)), which equals the expanded form
    b*g / (1 - b - g + 2*b*g) but is exact at g = 0.5 (where the result is
    beta1) and at the boundaries g in {0, 1}, which map to themselves.
    Symmetric in (beta1, gamma1) and strictly increasing in gamma1.  Accepts
    scalar or array gamma1.
    """
    _check_beta1(beta1)
    _check_unit_interval("gamma1", gamma1)
    g = np.asarray(gamma1, dtype=float)
    num = beta1 * g
    value = num / (num + (1.0 - beta1) * (1.0 - g))
    return value if value.ndim else float(value)


def loss_correct_binary(beta1, a1):
    """Invert ``optimal_score_binary``: the posterior implied by emitted score a1.

    Computed as (1-b)*a / ((1-b)*a + b*(1-a)); the denominator is bounded
    below by min(beta1, 1-beta1) > 0 on all of [0, 1].  At beta1 = 0.5 this
    is exactly the identity.  Accepts scalar or array a1.
    """
    _check_beta1(beta1)
    _check_unit_interval("a1", a1)
    a = np.asarray(a1, dtype=float)
    num = (1.0 - beta1) * a
    value = num / (num + beta1 * (1.0 - a))
    return value if value.ndim else float(value)


def optimal_score_multi(beta, gamma):
    """Per-class loss-minimizing scores for posterior ``gamma`` under matrix weights.

    Coordinate y equals gamma[y] * beta[y, y] / sum_y' gamma[y'] * beta[y', y].
    With an all-ones matrix the scores reduce to the posterior itself; with
    n = 2 and column 1 equal to (1 - b, b), coordinate 1 reduces to
    ``optimal_score_binary(b, gamma[1])``.
    """
    beta = _check_weight_matrix(beta)
    gamma = check_posterior(gamma)
    if gamma.shape[0] != beta.shape[0]:
        raise DimensionMismatch(
            f"posterior length {gamma.shape[0]} != weight matrix size {beta.shape[0]}"
        )
    denom = beta.T @ gamma
    return gamma * np.diag(beta) / denom


def loss_correct_multi(beta, scores, residual_tol=1e-6, negativity_tol=1e-10):
    """Recover the posterior that ``optimal_score_multi`` maps to ``scores``.

    The defining identities gamma[y]*beta[y,y] = scores[y] * sum_y'
    gamma[y']*beta[y',y] form a homogeneous linear system; it is solved by
    least squares jointly with the normalization sum(gamma) = 1.

    Raises
    ------
    NoConsistentPosterior
        If the residual of the homogeneous system at the normalized solution
        exceeds ``residual_tol`` (the scores are not in the scoring rule's
        image, e.g. corrupted bins), or a recovered coordinate is more
        negative than ``negativity_tol``.  Coordinates within the tolerance
        are clamped to zero and the vector renormalized.
    """
    beta = _check_weight_matrix(beta)
    scores = np.asarray(scores, dtype=float)
    n = beta.shape[0]
    if scores.shape != (n,):
        raise DimensionMismatch(
            f"scores must have length {n} to match the weight matrix, got {scores.shape}"
        )
    _check_unit_interval("scores", scores)

    homogeneous = np.diag(np.diag(beta)) - scores[:, None] * beta.T
    system = np.vstack([homogeneous, np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    solution, *_ = np.linalg.lstsq(system, rhs, rcond=None)

    total = solution.sum()
    if not np.isfinite(total) or abs(total) < 1e-12:
        raise NoConsistentPosterior("recovered posterior has vanishing total mass")
    gamma = solution / total

    residual = float(np.linalg.norm(homogeneous @ gamma))
    if residual > residual_tol:
        raise NoConsistentPosterior(
            f"no posterior reproduces these scores (residual {residual:.3e} > {residual_tol:.1e})"
        )
    if np.any(gamma < -negativity_tol):
        raise NoConsistentPosterior(
            f"recovered posterior has negative mass {gamma.min():.3e}"
        )
    gamma = np.clip(gamma, 0.0, None)
    return gamma / gamma.sum()


def _grid(spec, grid_size):
    if grid_size < 3:
        raise DomainError(f"grid_size must be >= 3, got {grid_size}")
    eps = spec.clamp_epsilon
    return np.linspace(eps, 1.0 - eps, grid_size)


def argmin_oracle_binary(spec, beta1, gamma1, grid_size):
    """Brute-force minimizer of posterior-expected weighted loss on a score grid.

    Independent check of ``optimal_score_binary``: returns the grid point on
    [clamp_epsilon, 1 - clamp_epsilon] minimizing
    gamma1*beta1*L(a, 1) + (1-gamma1)*(1-beta1)*L(a, 0), which lies within
    one grid step of the closed form.
    """
    _check_beta1(beta1)
    _check_unit_interval("gamma1", gamma1)
    grid = _grid(spec, grid_size)
    expected = gamma1 * beta1 * base_loss(spec, grid, 1) + (1.0 - gamma1) * (
        1.0 - beta1
    ) * base_loss(spec, grid, 0)
    return float(grid[np.argmin(expected)])


def argmin_oracle_multi(spec, beta, gamma, grid_size):
    """Coordinate-wise brute-force minimizer for matrix-weighted loss.

    The matrix-weighted expected loss separates across score coordinates, so
    each coordinate is an independent 1-D minimization with positive-outcome
    weight gamma[y]*beta[y,y] and negative-outcome weight
    sum_{y' != y} gamma[y']*beta[y',y].
    """
    beta = _check_weight_matrix(beta)
    gamma = check_posterior(gamma)
    if gamma.shape[0] != beta.shape[0]:
        raise DimensionMismatch(
            f"posterior length {gamma.shape[0]} != weight matrix size {beta.shape[0]}"
        )
    grid = _grid(spec, grid_size)
    loss_pos = base_loss(spec, grid, 1)
    loss_neg = base_loss(spec, grid, 0)
    column_mass = beta.T @ gamma
    positive = gamma * np.diag(beta)
    negative = column_mass - positive
    out = np.empty(beta.shape[0])
    for y in range(beta.shape[0]):
        expected = positive[y] * loss_pos + negative[y] * loss_neg
        out[y] = grid[np.argmin(expected)]
    return out
