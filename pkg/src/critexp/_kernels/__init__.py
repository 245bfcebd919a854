"""Kernel backend dispatch.

The hot numeric paths (per-period run scans, the extension DFS, batch
exponent evaluation) have two interchangeable implementations: numba-jitted
loops and a pure-numpy fallback.  Selection is by the CRITEXP_BACKEND
environment variable ("numba" or "numpy"); default is numba when importable.
Both backends are contract-identical, including search visit counts, so
reports do not depend on the backend.
"""

from __future__ import annotations

import os
import warnings

_requested = os.environ.get("CRITEXP_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ImportError(f"CRITEXP_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numpy":
    from . import np_impl as _impl

    BACKEND = "numpy"
else:
    try:
        from . import nb_impl as _impl

        BACKEND = "numba"
    except ImportError as exc:
        if _requested == "numba":
            raise
        warnings.warn(f"numba backend unavailable ({exc}); falling back to numpy kernels")
        from . import np_impl as _impl

        BACKEND = "numpy"

MAX_KERNEL_LENGTH = _impl.MAX_KERNEL_LENGTH
prefix_exponents = _impl.prefix_exponents
exponent_batch = _impl.exponent_batch
find_witness = _impl.find_witness
dfs_minima = _impl.dfs_minima
warmup = _impl.warmup
