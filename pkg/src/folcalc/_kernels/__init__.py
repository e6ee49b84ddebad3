"""Numeric evaluation kernels.

The hot inner loop of every numeric pipeline here is the batched mode sum

    out[p] = sum_m  cre[m] * cos(K[m] . theta[p]) - cim[m] * sin(K[m] . theta[p]),

i.e. evaluating a trig polynomial at many points at once.  A Cython extension
(_core) implements it with a tight nogil loop; _fallback is a vectorized numpy
version.  The backend is selected at import time and can be forced with
FOLCALC_KERNEL=python|compiled.  FOLCALC_THREADS > 1 chunks large batches
across a thread pool (the compiled kernel releases the GIL).
"""

from __future__ import annotations

import os

import numpy as np

from . import _fallback

_requested = os.environ.get("FOLCALC_KERNEL", "auto").lower()
_core = None
if _requested in ("auto", "compiled"):
    try:
        import importlib

        _core = importlib.import_module("._core", __name__)
    except ImportError:
        if _requested == "compiled":
            raise
        _core = None

BACKEND = "compiled" if _core is not None else "python"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("FOLCALC_THREADS", "1")))
    except ValueError:
        return 1


def _eval_single(K, cre, cim, theta, out):
    if _core is not None:
        _core.eval_modes(K, cre, cim, theta, out)
    else:
        _fallback.eval_modes(K, cre, cim, theta, out)


def trig_eval(K: np.ndarray, cre: np.ndarray, cim: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Evaluate one mode table at a batch of points, shape (N, n) -> (N,)."""
    theta = np.ascontiguousarray(theta, dtype=np.float64)
    N = theta.shape[0]
    out = np.empty(N, dtype=np.float64)
    if K.shape[0] == 0:
        out[:] = 0.0
        return out
    K = np.ascontiguousarray(K, dtype=np.int64)
    nthreads = _threads()
    if nthreads == 1 or N < 4096:
        _eval_single(K, cre, cim, theta, out)
        return out
    from concurrent.futures import ThreadPoolExecutor

    bounds = np.linspace(0, N, nthreads + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=nthreads) as pool:
        futs = [
            pool.submit(_eval_single, K, cre, cim, theta[lo:hi], out[lo:hi])
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        for f in futs:
            f.result()
    return out
