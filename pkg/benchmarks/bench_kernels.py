#!/usr/bin/env python3
"""Benchmark the compiled trig-evaluation kernel against the numpy fallback.

Runs the raw mode-sum kernel over a grid of (mode count, batch size) shapes
and one end-to-end Moser field evaluation, printing a timing table.  The
compiled backend must be importable; build it with

    pip install -e . --no-build-isolation
"""

import time

import numpy as np

from folcalc._kernels import _fallback

try:
    from folcalc._kernels import _core
except ImportError:
    _core = None


def time_backend(fn, K, cre, cim, theta, repeats=5):
    out = np.empty(theta.shape[0])
    fn(K, cre, cim, theta, out)  # warm up
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(K, cre, cim, theta, out)
        best = min(best, time.perf_counter() - start)
    return best, out


def random_mode_table(rng, modes, dim):
    half = [tuple(rng.integers(-3, 4, dim)) for _ in range(modes // 2)]
    ks, cre, cim = [], [], []
    for k in half:
        c = rng.normal() + 1j * rng.normal()
        for sign, cc in ((1, c), (-1, np.conj(c))):
            ks.append([sign * a for a in k])
            cre.append(cc.real)
            cim.append(cc.imag)
    return (
        np.array(ks, dtype=np.int64),
        np.array(cre),
        np.array(cim),
    )


def main():
    rng = np.random.default_rng(0)
    dim = 4
    print(f"{'modes':>6} {'batch':>8} {'numpy (ms)':>12} {'compiled (ms)':>14} {'speedup':>8}")
    for modes in (4, 16, 64):
        for batch in (1024, 16384, 131072):
            K, cre, cim = random_mode_table(rng, modes, dim)
            theta = rng.uniform(0, 2 * np.pi, (batch, dim))
            t_np, out_np = time_backend(_fallback.eval_modes, K, cre, cim, theta)
            if _core is None:
                print(f"{modes:6d} {batch:8d} {t_np*1e3:12.3f} {'n/a':>14} {'n/a':>8}")
                continue
            t_c, out_c = time_backend(_core.eval_modes, K, cre, cim, theta)
            assert np.abs(out_np - out_c).max() < 1e-10
            print(
                f"{modes:6d} {batch:8d} {t_np*1e3:12.3f} {t_c*1e3:14.3f} {t_np/t_c:8.2f}x"
            )

    # end-to-end: one Moser field evaluation on the twisted T^3 model
    import os

    from folcalc.foliated import BigradedForm
    from folcalc.gotay import build_gotay
    from folcalc.models import cospower_kernel_form, t3_infinite_kernel
    from folcalc.moser import NumericMoser
    from folcalc.trig_algebra import TrigPoly

    pres = t3_infinite_kernel()
    model = build_gotay(pres)
    beta = cospower_kernel_form(pres, 2)
    ext = BigradedForm(
        pres.base,
        {((), (0,)): beta.blocks[((), (0,))], ((2,), ()): TrigPoly.cosine(3, 1, 1, 2)},
    )
    numeric = NumericMoser(model, ext)
    pts = np.concatenate(
        [rng.uniform(0, 2 * np.pi, (32**3, 3)), rng.uniform(-0.05, 0.05, (32**3, 1))],
        axis=1,
    )
    numeric.field(0.05, pts)
    start = time.perf_counter()
    for _ in range(3):
        numeric.field(0.05, pts)
    elapsed = (time.perf_counter() - start) / 3
    backend = "compiled" if _core is not None else "numpy"
    print(f"\nMoser field on 32^3 grid points [{backend} backend in use]: {elapsed*1e3:.1f} ms")


if __name__ == "__main__":
    main()
