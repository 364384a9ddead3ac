"""Time the compiled kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--n 20000] [--repeat 5]

Both back ends are built in-process, so SEMITORIC_NO_NUMBA does not matter here.
The first call of each numba kernel is a warm-up and is not timed.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from semitoric import _kernels as K


def cases(n: int, rng):
    x, y, z = rng.uniform(0.1, 2.0, (3, n))
    pp = rng.uniform(0.05, 2.0, n)
    c = rng.normal(size=(4, n))
    c[0] = np.where(np.abs(c[0]) < 0.1, 1.0, c[0])
    ll, hh = rng.uniform(-0.3, 0.3, (2, n))
    return {
        "rf": (x, y, z),
        "rd": (x, y, z),
        "rj": (x, y, z, pp),
        "cubic_roots": tuple(c),
        "area_action": (ll, hh, 2.0, 0.5),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if K.numba_impl is None:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<12} {'numpy [ms]':>11} {'numba [ms]':>11} {'speed-up':>9} {'max |diff|':>11}")
    for name, a in cases(args.n, rng).items():
        f_np, f_nb = getattr(K.numpy_impl, name), getattr(K.numba_impl, name)
        r_nb = f_nb(*a)
        r_np = f_np(*a)
        diff = max(float(np.nanmax(np.abs(np.asarray(u, float) - np.asarray(v, float))))
                   for u, v in zip(np.atleast_2d(r_np) if name != "cubic_roots" else r_np,
                                   np.atleast_2d(r_nb) if name != "cubic_roots" else r_nb))
        t_np = min(timeit.repeat(lambda: f_np(*a), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: f_nb(*a), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<12} {t_np:11.2f} {t_nb:11.2f} {t_np / t_nb:9.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
