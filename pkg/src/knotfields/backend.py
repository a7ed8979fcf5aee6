"""Kernel backend selection.

The heavy inner loops (segment sweeps over grids, O(N^2) pair sums) exist in
two implementations: numba-jitted loops and vectorised numpy. The numba path
is the default whenever numba imports; set the environment variable
``KNOTFIELDS_DISABLE_NUMBA=1`` before import to force the numpy path.

``benchmarks/benchmark_backends.py`` compares the two.
"""

import os

_DISABLE = os.environ.get("KNOTFIELDS_DISABLE_NUMBA", "0").lower() in ("1", "true", "yes")

NUMBA_AVAILABLE = False
if not _DISABLE:
    try:
        import numba  # noqa: F401

        NUMBA_AVAILABLE = True
    except ImportError:
        NUMBA_AVAILABLE = False

#: Name of the active kernel backend, "numba" or "numpy".
BACKEND = "numba" if NUMBA_AVAILABLE else "numpy"


def get_kernels():
    """Return the active kernel module."""
    if NUMBA_AVAILABLE:
        from . import _kernels_numba

        return _kernels_numba
    from . import _kernels_numpy

    return _kernels_numpy
