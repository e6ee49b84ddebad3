"""Pure-numpy implementation of the batched trig evaluation kernel."""

from __future__ import annotations

import numpy as np


def eval_modes(K, cre, cim, theta, out):
    """out[p] = sum_m cre[m] cos(K[m].theta[p]) - cim[m] sin(K[m].theta[p])."""
    phases = theta @ K.T.astype(np.float64)  # (N, M)
    np.matmul(np.cos(phases), cre, out=out)
    out -= np.sin(phases) @ cim
