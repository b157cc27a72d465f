"""numba kernels. Signatures and semantics mirror ``_kernels_numpy``."""
import math

import numpy as np
from numba import njit

_opts = dict(cache=True, nogil=True)


@njit(**_opts)
def horner(c, zs):
    out = np.empty(zs.shape[0], dtype=np.complex128)
    n = c.shape[0]
    for i in range(zs.shape[0]):
        z = zs[i]
        acc = 0j
        for k in range(n - 1, -1, -1):
            acc = acc * z + c[k]
        out[i] = acc
    return out


@njit(**_opts)
def _log_ratio(c, ac, z):
    # Returns (p'/p, |p| / sum|c_k||z|^k). Uses the reversed polynomial
    # outside the unit disk so that |z|^n never overflows.
    n = c.shape[0] - 1
    az = abs(z)
    if az <= 1.0:
        p = c[n]
        dp = 0j
        s = ac[n]
        for k in range(n - 1, -1, -1):
            dp = dp * z + p
            p = p * z + c[k]
            s = s * az + ac[k]
        if p == 0:
            return complex(np.inf, 0.0), 0.0
        return dp / p, abs(p) / s
    y = 1.0 / z
    ay = 1.0 / az
    r = c[0]
    dr = 0j
    s = ac[0]
    for k in range(1, n + 1):
        dr = dr * y + r
        r = r * y + c[k]
        s = s * ay + ac[k]
    if r == 0:
        return complex(np.inf, 0.0), 0.0
    return y * (n - y * dr / r), abs(r) / s


@njit(**_opts)
def newton_ratio(c, zs):
    ac = np.abs(c)
    g = np.empty(zs.shape[0], dtype=np.complex128)
    be = np.empty(zs.shape[0])
    for i in range(zs.shape[0]):
        g[i], be[i] = _log_ratio(c, ac, zs[i])
    return g, be


@njit(**_opts)
def aberth(c, z0, max_iter, tol):
    n = c.shape[0] - 1
    ac = np.abs(c)
    z = z0.copy()
    active = np.ones(n, dtype=np.bool_)
    for it in range(max_iter):
        znew = z.copy()
        still = False
        for i in range(n):
            if not active[i]:
                continue
            g, be = _log_ratio(c, ac, z[i])
            if be == 0.0:
                active[i] = False
                continue
            s = 0j
            for j in range(n):
                if j != i:
                    s += 1.0 / (z[i] - z[j])
            d = g - s
            if d != 0:
                znew[i] = z[i] - 1.0 / d
            if be <= tol:
                active[i] = False
            else:
                still = True
        z = znew
        if not still:
            return z, it + 1, True
    return z, max_iter, False


@njit(**_opts)
def power_sums(logw, lw, shift):
    npt = lw.shape[0]
    n1 = logw.shape[0]
    out = np.zeros((4, npt))
    t = np.empty(n1)
    for i in range(npt):
        sa = 0.0
        ea = 0.0
        sb = 0.0
        eb = 0.0
        sc = 0.0
        ec = 0.0
        for j in range(n1):
            lj = logw[j]
            if lj == -np.inf:
                t[j] = 0.0
                continue
            tj = math.exp(lj + j * lw[i] - shift[i])
            t[j] = tj
            # Kahan updates
            y = tj - ea
            u = sa + y
            ea = (u - sa) - y
            sa = u
            y = j * tj - eb
            u = sb + y
            eb = (u - sb) - y
            sb = u
            y = j * j * tj - ec
            u = sc + y
            ec = (u - sc) - y
            sc = u
        mu = sb / sa if sa > 0 else 0.0
        ss = 0.0
        es = 0.0
        for j in range(n1):
            d = j - mu
            y = t[j] * d * d - es
            u = ss + y
            es = (u - ss) - y
            ss = u
        out[0, i] = sa
        out[1, i] = sb
        out[2, i] = sc
        out[3, i] = ss
    return out


@njit(**_opts)
def det_lu(m):
    a = m.astype(np.complex128).copy()
    d = a.shape[0]
    det = 1.0 + 0j
    for k in range(d):
        piv = k
        best = abs(a[k, k])
        for r in range(k + 1, d):
            v = abs(a[r, k])
            if v > best:
                best = v
                piv = r
        if best == 0.0:
            return 0j
        if piv != k:
            for c in range(d):
                tmp = a[k, c]
                a[k, c] = a[piv, c]
                a[piv, c] = tmp
            det = -det
        pk = a[k, k]
        det *= pk
        for r in range(k + 1, d):
            f = a[r, k] / pk
            if f != 0:
                for c in range(k + 1, d):
                    a[r, c] -= f * a[k, c]
    return det
