"""Pure-numpy kernels, used when numba is unavailable or disabled."""
import numpy as np


def horner(c, zs):
    acc = np.zeros(zs.shape[0], dtype=np.complex128)
    for k in range(c.shape[0] - 1, -1, -1):
        acc = acc * zs + c[k]
    return acc


def newton_ratio(c, zs):
    c = np.asarray(c, dtype=np.complex128)
    zs = np.asarray(zs, dtype=np.complex128)
    n = c.shape[0] - 1
    ac = np.abs(c)
    g = np.empty(zs.shape[0], dtype=np.complex128)
    be = np.empty(zs.shape[0])
    az = np.abs(zs)
    inner = az <= 1.0

    z = zs[inner]
    p = np.full(z.shape, c[n])
    dp = np.zeros(z.shape, dtype=np.complex128)
    s = np.full(z.shape, ac[n])
    aa = az[inner]
    for k in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[k]
        s = s * aa + ac[k]
    with np.errstate(divide="ignore", invalid="ignore"):
        g[inner] = np.where(p == 0, np.inf, dp / np.where(p == 0, 1, p))
    be[inner] = np.abs(p) / s

    outer = ~inner
    y = 1.0 / zs[outer]
    ay = 1.0 / az[outer]
    r = np.full(y.shape, c[0])
    dr = np.zeros(y.shape, dtype=np.complex128)
    s = np.full(y.shape, ac[0])
    for k in range(1, n + 1):
        dr = dr * y + r
        r = r * y + c[k]
        s = s * ay + ac[k]
    safe = np.where(r == 0, 1, r)
    g[outer] = np.where(r == 0, np.inf, y * (n - y * dr / safe))
    be[outer] = np.abs(r) / s
    return g, be


def aberth(c, z0, max_iter, tol):
    n = c.shape[0] - 1
    z = np.array(z0, dtype=np.complex128)
    active = np.ones(n, dtype=bool)
    eye = np.eye(n, dtype=bool)
    for it in range(max_iter):
        idx = np.flatnonzero(active)
        g, be = newton_ratio(c, z[idx])
        diff = z[idx, None] - z[None, :]
        diff[eye[idx]] = 1.0
        inv = 1.0 / diff
        inv[eye[idx]] = 0.0
        s = inv.sum(axis=1)
        d = g - s
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where((d != 0) & (be != 0), 1.0 / d, 0.0)
        z = z.copy()
        z[idx] = z[idx] - step
        active[idx[be <= tol]] = False
        if not active.any():
            return z, it + 1, True
    return z, max_iter, False


def power_sums(logw, lw, shift):
    j = np.arange(logw.shape[0], dtype=np.float64)
    with np.errstate(invalid="ignore"):
        expo = logw[None, :] + j[None, :] * lw[:, None] - shift[:, None]
    t = np.where(np.isneginf(logw)[None, :], 0.0, np.exp(expo))
    a = t.sum(axis=1)
    b = (t * j).sum(axis=1)
    c = (t * j * j).sum(axis=1)
    mu = np.divide(b, a, out=np.zeros_like(b), where=a > 0)
    s = (t * (j[None, :] - mu[:, None]) ** 2).sum(axis=1)
    return np.vstack([a, b, c, s])


def det_lu(m):
    a = np.array(m, dtype=np.complex128)
    d = a.shape[0]
    det = 1.0 + 0j
    for k in range(d):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if a[piv, k] == 0:
            return 0j
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            det = -det
        pk = a[k, k]
        det *= pk
        f = a[k + 1:, k] / pk
        a[k + 1:, k + 1:] -= np.outer(f, a[k, k + 1:])
    return det
