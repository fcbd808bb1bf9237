"""Prior-shift (resampling) correction and its mapping to the loss-correction.

The resampling correction rescales a score by the ratio delta of positive to
negative instances used at training time.  It is pointwise identical to the
weighted-loss correction under delta = (1 - beta1) / beta1, although the two
procedures address different distortions.
"""

import numpy as np

from .errors import DomainError


def prior_shift_correct(delta, a1):
    """Adjust a score from a model trained on a resampled class ratio ``delta``.

    Computed as d*a / (d*a + (1-a)), equal to the textbook form
    d*a / (1 + (d-1)*a).  Strictly increasing bijection of [0, 1] fixing
    {0, 1}; the identity at delta = 1.  Accepts scalar or array a1.
    """
    if not delta > 0.0:
        raise DomainError(f"delta must be positive, got {delta}")
    a = np.asarray(a1, dtype=float)
    if np.any(a < 0.0) or np.any(a > 1.0):
        raise DomainError("a1 must lie in [0, 1]")
    num = delta * a
    value = num / (num + (1.0 - a))
    return value if value.ndim else float(value)


def beta_to_delta(beta1):
    """The resampling ratio whose correction matches weight ``beta1``."""
    if not 0.0 < beta1 < 1.0:
        raise DomainError(f"beta1 must lie in (0, 1), got {beta1}")
    return (1.0 - beta1) / beta1


def delta_to_beta(delta):
    """Inverse of ``beta_to_delta``: beta1 = 1 / (1 + delta)."""
    if not delta > 0.0:
        raise DomainError(f"delta must be positive, got {delta}")
    return 1.0 / (1.0 + delta)
