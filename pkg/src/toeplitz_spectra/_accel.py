"""Numba switch.

Hot kernels exist twice: a loop form compiled with numba, and a vectorized
numpy form. ``TOEPLITZ_SPECTRA_JIT=0`` forces the numpy path; the numpy path
is also used when numba cannot be imported.
``TOEPLITZ_SPECTRA_THREADS`` caps the numba thread pool.
"""
import os

try:
    import numba
    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAS_NUMBA = False

if HAS_NUMBA and "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
    # an outdated TBB only produces a warning; try it last
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


def _flag(name, default):
    value = os.environ.get(name, default).strip().lower()
    return value not in ("0", "false", "no", "off", "")


USE_JIT = HAS_NUMBA and _flag("TOEPLITZ_SPECTRA_JIT", "1")


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity decorator otherwise."""
    kwargs.setdefault("cache", True)
    if HAS_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]):
        return args[0]
    return lambda fn: fn


prange = numba.prange if HAS_NUMBA else range


def thread_cap():
    raw = os.environ.get("TOEPLITZ_SPECTRA_THREADS")
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        return None
    return n if n > 0 else None


def apply_thread_cap():
    n = thread_cap()
    if n is not None and HAS_NUMBA:
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
    return n


apply_thread_cap()
