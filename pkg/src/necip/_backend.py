"""Kernel backend selection.

The hot enumeration kernels exist twice: a numba ``@njit`` version and a
vectorized pure-numpy version.  ``NECIP_BACKEND`` picks one:

* ``auto``  (default) -- numba when it imports cleanly, numpy otherwise;
* ``numba`` -- force numba, raise if unavailable;
* ``numpy`` -- force the pure-numpy path.
"""

import os

_ENV_VAR = "NECIP_BACKEND"
_cached: str | None = None


def selected_backend() -> str:
    """Return 'numba' or 'numpy' (resolving 'auto'), cached per process."""
    global _cached
    if _cached is not None:
        return _cached
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"{_ENV_VAR} must be auto|numba|numpy, got {choice!r}")
    if choice == "numpy":
        _cached = "numpy"
    elif choice == "numba":
        import numba  # noqa: F401  (fail loudly if forced and missing)

        _cached = "numba"
    else:
        try:
            import numba  # noqa: F401

            _cached = "numba"
        except ImportError:
            _cached = "numpy"
    return _cached


def using_numba() -> bool:
    return selected_backend() == "numba"


def reset() -> None:
    """Drop the cached choice (used by tests and the benchmark driver)."""
    global _cached
    _cached = None
