#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the energy and gradient kernels on random states over a range of disk
sizes, checks that both paths agree, and prints per-call times and speedups.

    python3 benchmarks/bench_kernels.py [--repeats N]

The installed package picks its backend at import time (GLDISK_NO_NUMBA=1
forces numpy); this script imports both kernel modules directly so a single
run compares them side by side.
"""

import argparse
import time

import numpy as np

from gldisk import _kernels_numpy
from gldisk.energy import field_on_plaquettes, initial_state
from gldisk.fields import constant_field
from gldisk.lattice import build_lattice

try:
    from gldisk import _kernels_numba
except ImportError:
    _kernels_numba = None


def best_of(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=20)
    opts = ap.parse_args()

    spec = constant_field(0.5)
    print(f"{'R_dom':>6} {'sites':>8} {'kernel':>10} "
          f"{'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>8}")
    for R in (4.0, 8.0, 16.0, 24.0):
        lat = build_lattice(R, 0.25)
        st = initial_state(lat, "random", 1)
        hp = field_on_plaquettes(lat, spec)
        args = (st.psi, st.a, lat.link_src, lat.link_dst, lat.plaq_links, hp,
                lat.cell_area)
        for name in ("energy_terms", "gradient_kernel"):
            np_fn = getattr(_kernels_numpy, name)
            t_np = best_of(np_fn, args, opts.repeats)
            if _kernels_numba is not None:
                nb_fn = getattr(_kernels_numba, name)
                nb_fn(*args)  # JIT warmup outside the timing loop
                t_nb = best_of(nb_fn, args, opts.repeats)
                ref = np_fn(*args)
                got = nb_fn(*args)
                if name == "energy_terms":
                    assert all(abs(a - b) <= 1e-10 * (1 + abs(a))
                               for a, b in zip(ref, got)), "backend mismatch"
                else:
                    assert np.allclose(ref[0], got[0], rtol=1e-10, atol=1e-12)
                    assert np.allclose(ref[1], got[1], rtol=1e-10, atol=1e-12)
                print(f"{R:6.0f} {lat.n_sites:8d} {name[:10]:>10} "
                      f"{t_np * 1e3:12.3f} {t_nb * 1e3:12.3f} "
                      f"{t_np / t_nb:8.1f}x")
            else:
                print(f"{R:6.0f} {lat.n_sites:8d} {name[:10]:>10} "
                      f"{t_np * 1e3:12.3f} {'n/a':>12} {'':>8}")


if __name__ == "__main__":
    main()
