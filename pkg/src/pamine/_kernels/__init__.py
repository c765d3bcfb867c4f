"""Kernel backend selection.

Prefers the compiled extension and falls back to the pure-Python twin when
it is unavailable. ``PAMINE_PURE_PYTHON=1`` forces the fallback (useful for
benchmarking and debugging).
"""
import os

import numpy as np

from . import reference

if os.environ.get("PAMINE_PURE_PYTHON"):
    _impl = reference
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = reference

BACKEND = _impl.BACKEND_NAME


def solve_selection(weights, type_rows, same_head, invalid, k, penalty, n_types=10):
    """Exact phrase-selection optimum; see ``reference.solve_selection``."""
    return _impl.solve_selection(weights, type_rows, same_head, invalid,
                                 k, penalty, n_types)


def leader_cluster(vectors, tau):
    """Greedy leader clustering; see ``reference.leader_cluster``."""
    if _impl is reference:
        return reference.leader_cluster(vectors, tau)
    arr = np.ascontiguousarray(vectors, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D array of row vectors")
    return _impl.leader_cluster(arr, float(tau))
