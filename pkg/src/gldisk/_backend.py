"""Kernel backend selection.

The numba kernels are used when numba imports cleanly; set GLDISK_NO_NUMBA=1
(or "true"/"yes") to force the pure-numpy fallback.  Both paths implement
identical formulas; they may differ in the last bits through summation order.
"""

import os

from . import _kernels_numpy

_flag = os.environ.get("GLDISK_NO_NUMBA", "").strip().lower()
NUMBA_DISABLED = _flag in ("1", "true", "yes")

if not NUMBA_DISABLED:
    try:
        from . import _kernels_numba as _impl
        BACKEND = "numba"
    except ImportError:
        _impl = _kernels_numpy
        BACKEND = "numpy"
else:
    _impl = _kernels_numpy
    BACKEND = "numpy"

curl_kernel = _impl.curl_kernel
energy_terms = _impl.energy_terms
gradient_kernel = _impl.gradient_kernel


def backend() -> str:
    """Active kernel backend, "numba" or "numpy"."""
    return BACKEND
