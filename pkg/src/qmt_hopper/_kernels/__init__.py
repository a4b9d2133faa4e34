"""Hot integer kernels with two interchangeable backends.

The numba backend JIT-compiles the inner loops; the numpy backend is pure
vectorized numpy.  Selection: set QMT_KERNELS to "numba" or "numpy"
("auto", the default, prefers numba when importable).  Both backends work on
int64 arrays only; callers fall back to exact big-integer code paths whenever
int64 could overflow.
"""

import os

_choice = os.environ.get("QMT_KERNELS", "auto").lower()
if _choice not in {"auto", "numba", "numpy"}:
    raise ValueError(f"QMT_KERNELS must be auto|numba|numpy, got {_choice!r}")

if _choice == "numpy":
    from . import _numpy_impl as _impl

    ACTIVE_BACKEND = "numpy"
else:
    try:
        from . import _numba_impl as _impl

        ACTIVE_BACKEND = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        from . import _numpy_impl as _impl

        ACTIVE_BACKEND = "numpy"

dp_evolve = _impl.dp_evolve
tally_phase_counts = _impl.tally_phase_counts
expand_paths = _impl.expand_paths
subset_sums = _impl.subset_sums
