"""Dispatch to the numba or numpy kernel set (see ``_backend``)."""
import numpy as np

from ._backend import BACKEND

if BACKEND == "numba":
    from . import _kernels_numba as _impl
else:
    from . import _kernels_numpy as _impl

__all__ = ["BACKEND", "horner", "newton_ratio", "aberth", "power_sums", "det_lu"]


def horner(c, zs):
    return _impl.horner(np.ascontiguousarray(c, dtype=np.complex128),
                        np.ascontiguousarray(zs, dtype=np.complex128))


def newton_ratio(c, zs):
    """Return ``(p'/p, backward_error)`` at each point, overflow-safe."""
    return _impl.newton_ratio(np.ascontiguousarray(c, dtype=np.complex128),
                              np.ascontiguousarray(zs, dtype=np.complex128))


def aberth(c, z0, max_iter, tol):
    return _impl.aberth(np.ascontiguousarray(c, dtype=np.complex128),
                        np.ascontiguousarray(z0, dtype=np.complex128),
                        int(max_iter), float(tol))


def power_sums(logw, lw, shift):
    """Scaled sums of t_j = exp(logw_j + j*lw - shift).

    Rows of the result: sum t_j, sum j t_j, sum j^2 t_j and the centred
    sum t_j (j - mu)^2 with mu = row1/row0.
    """
    return _impl.power_sums(np.ascontiguousarray(logw, dtype=np.float64),
                            np.ascontiguousarray(lw, dtype=np.float64),
                            np.ascontiguousarray(shift, dtype=np.float64))


def det_lu(m):
    return _impl.det_lu(np.ascontiguousarray(m, dtype=np.complex128))
