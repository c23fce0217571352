#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure python/numpy fallback.

The two hot loops are the brute-force cartesianness decision and the
commuting-square enumeration behind the comma construction.  The workload is
the cod functor on the arrow category of a finite-set skeleton; size 2
gives 249 total morphisms and 6427 comma squares.  (Size 3 would need a
74k-morphism arrow category whose materialized composition table no longer
fits in memory; the representation is meant for desk-scale models.)

Usage: python benchmarks/bench_backends.py [--n 1|2] [--repeat 3]
"""

import argparse
import time

import numpy as np

from subfib.fincat import _arrow_category
from subfib.kernels import get_backend
from subfib.models import finset_skeleton
from subfib.tables import FibTables


def workload(n):
    C = finset_skeleton(n)
    arrow, forget, _sq = _arrow_category(C)
    ft = FibTables(arrow, C, forget.object_map, forget.morphism_map)
    return arrow, ft


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2, choices=(1, 2))
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    arrow, ft = workload(args.n)
    print(f"workload: cod on arrow(finset_skeleton({args.n})): "
          f"{len(arrow.objects)} objects, {len(arrow.morphisms)} morphisms")
    do_squares = True

    backends = {}
    for name in ("python", "numba"):
        impl = get_backend(name)
        if name == "numba":  # compile outside the timed region
            impl.cartesian_flags(ft.total.arrays, ft.base.arrays,
                                 ft.p_obj, ft.p_mor)
            if do_squares:
                impl.comma_squares(ft.total.arrays, ft.p_mor, ft.is_ident_base)
        flags, t_flags = timed(
            lambda: impl.cartesian_flags(ft.total.arrays, ft.base.arrays,
                                         ft.p_obj, ft.p_mor), args.repeat)
        line = (f"{name:>7}: cartesian_flags {t_flags * 1e3:9.2f} ms   "
                f"({int(flags.sum())} cartesian)")
        squares, t_sq = (None, None)
        if do_squares:
            squares, t_sq = timed(
                lambda: impl.comma_squares(ft.total.arrays, ft.p_mor,
                                           ft.is_ident_base), args.repeat)
            line += (f"   comma_squares {t_sq * 1e3:9.2f} ms"
                     f"   ({len(squares[1])} squares)")
        backends[name] = (flags, squares, t_flags, t_sq)
        print(line)

    f_py, s_py, tf_py, ts_py = backends["python"]
    f_nb, s_nb, tf_nb, ts_nb = backends["numba"]
    assert np.array_equal(f_py, f_nb), "backends disagree on flags"
    out = f"agreement: ok   speedup: flags x{tf_py / tf_nb:.1f}"
    if do_squares:
        assert all(np.array_equal(a, b) for a, b in zip(s_py, s_nb)), \
            "backends disagree on squares"
        out += f", squares x{ts_py / ts_nb:.1f}"
    print(out)


if __name__ == "__main__":
    main()
