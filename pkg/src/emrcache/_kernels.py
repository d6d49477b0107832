"""Hot sampling kernel with a numba fast path and a pure-numpy fallback.

The numba path is used when importable; set EMRCACHE_NO_NUMBA=1 to force the
numpy path. Both map uniform draws through a categorical cdf and return the
sum and sum of squares of the selected values, so they agree to float
round-off and either can back the Monte Carlo estimator.
"""

from __future__ import annotations

import os

import numpy as np

ENV_FLAG = "EMRCACHE_NO_NUMBA"


def numpy_sample_sums(u, cum_weights, values):
    """Vectorized categorical accumulation over uniform draws in [0, 1)."""
    idx = np.searchsorted(cum_weights, u, side="right")
    # Guard the float edge where the cdf tops out a hair under 1.0.
    idx = np.minimum(idx, len(values) - 1)
    picked = values[idx]
    return float(picked.sum()), float(np.square(picked).sum())


def _numba_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in ("1", "true", "yes")


numba_sample_sums = None
if not _numba_disabled():
    try:
        from numba import njit

        @njit(cache=True)
        def _sample_sums_jit(u, cum_weights, values):  # pragma: no cover - jitted
            n_levels = cum_weights.shape[0]
            total = 0.0
            total_sq = 0.0
            for i in range(u.shape[0]):
                x = u[i]
                j = 0
                while j < n_levels - 1 and x >= cum_weights[j]:
                    j += 1
                v = values[j]
                total += v
                total_sq += v * v
            return total, total_sq

        numba_sample_sums = _sample_sums_jit
    except ImportError:
        numba_sample_sums = None

if numba_sample_sums is not None:
    sample_sums = numba_sample_sums
    BACKEND = "numba"
else:
    sample_sums = numpy_sample_sums
    BACKEND = "numpy"
