"""Independent reference computations used only by the tests."""
import math

import numpy as np


def brute_sums(alphas, w):
    """Power sums a, b, c by plain Python summation."""
    a = math.fsum(al * w ** j for j, al in enumerate(alphas))
    b = math.fsum(j * al * w ** j for j, al in enumerate(alphas))
    c = math.fsum(j * j * al * w ** j for j, al in enumerate(alphas))
    return a, b, c


def grid_zeros(p, q, radius, size=600, tol=1e-6):
    """Zeros of p(z) + conj(q(z)) by a dense grid scan plus Newton.

    Every grid cell whose corners show a sign change in both Re H and Im H
    seeds a Newton iteration on the real 2x2 system. ``p`` and ``q`` are
    ascending coefficient arrays.
    """
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    pd = np.polyder(p[::-1])
    qd = np.polyder(q[::-1]) if q.shape[0] > 1 else np.zeros(1, complex)

    def H(z):
        return np.polyval(p[::-1], z) + np.conj(np.polyval(q[::-1], z))

    xs = np.linspace(-radius, radius, size)
    X, Y = np.meshgrid(xs, xs)
    V = H(X + 1j * Y)
    re, im = np.sign(V.real), np.sign(V.imag)

    def changes(s):
        c = s[:-1, :-1]
        return (s[1:, :-1] != c) | (s[:-1, 1:] != c) | (s[1:, 1:] != c)

    ii, jj = np.nonzero(changes(re) & changes(im))
    h = 0.5 * (xs[1] - xs[0])
    seeds = (X[ii, jj] + h) + 1j * (Y[ii, jj] + h)
    found = []
    for z in seeds:
        for _ in range(60):
            h = H(z)
            a = np.polyval(pd, z)
            b = np.conj(np.polyval(qd, z))
            # real Jacobian of (Re H, Im H) in (x, y)
            J = np.array([[(a + b).real, (1j * (a - b)).real],
                          [(a + b).imag, (1j * (a - b)).imag]])
            try:
                dx = np.linalg.solve(J, [-h.real, -h.imag])
            except np.linalg.LinAlgError:
                break
            z = z + dx[0] + 1j * dx[1]
            if math.hypot(*dx) < 1e-15 * max(1.0, abs(z)):
                break
        if abs(H(z)) < 1e-9 * (1 + abs(z)) ** len(p) and abs(z) < 2 * radius:
            if all(abs(z - f) > tol for f in found):
                found.append(z)
    return np.array(found)
