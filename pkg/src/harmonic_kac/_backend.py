"""Kernel backend selection.

Set ``KRH_BACKEND=numpy`` to force the pure-numpy kernels; the default is
``numba`` whenever numba imports cleanly.
"""
import os

try:
    import numba  # noqa: F401
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def requested_backend():
    name = os.environ.get("KRH_BACKEND", "numba").strip().lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"KRH_BACKEND must be 'numba' or 'numpy', got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        return "numpy"
    return name


BACKEND = requested_backend()
