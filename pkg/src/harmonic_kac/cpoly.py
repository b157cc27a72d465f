"""Dense complex polynomials: evaluation, roots, resultants and interpolation.

Coefficients are stored in ascending order, ``coeffs[k]`` multiplying ``z**k``.
"""
import numpy as np

from . import kernels
from .errors import DegenerateLeadingCoefficient, NonConvergence

__all__ = [
    "ComplexPolynomial",
    "evaluate",
    "derivative",
    "conj_coeffs",
    "roots_aberth",
    "det_lu",
    "sylvester_matrix",
    "sylvester_resultant_at",
    "interpolate_dft",
    "cauchy_bound",
    "newton_polygon_start",
]

ROOT_TOL = 1e-10
DFT_RADIUS = 1.2


class ComplexPolynomial:
    """Polynomial with complex coefficients in ascending degree order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = np.array(coeffs, dtype=np.complex128).ravel()
        self.coeffs = c

    @property
    def degree(self):
        return self.coeffs.shape[0] - 1

    def canonical(self):
        c = self.coeffs
        nz = np.flatnonzero(c)
        if nz.size == 0:
            return ComplexPolynomial([])
        return ComplexPolynomial(c[: nz[-1] + 1])

    def is_zero(self):
        return not np.any(self.coeffs)

    def __call__(self, z):
        return evaluate(self, z)

    def __len__(self):
        return self.coeffs.shape[0]

    def __eq__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        a, b = self.canonical().coeffs, other.canonical().coeffs
        return a.shape == b.shape and bool(np.all(a == b))

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self), len(other))
        out = np.zeros(n, dtype=np.complex128)
        out[: len(self)] += self.coeffs
        out[: len(other)] += other.coeffs
        return ComplexPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial(-self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __mul__(self, other):
        if np.isscalar(other):
            return ComplexPolynomial(self.coeffs * other)
        other = _as_poly(other)
        if len(self) == 0 or len(other) == 0:
            return ComplexPolynomial([])
        return ComplexPolynomial(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __repr__(self):
        return f"ComplexPolynomial({self.coeffs.tolist()!r})"

    def derivative(self):
        return derivative(self)

    def conj_coeffs(self):
        return conj_coeffs(self)


def _as_poly(p):
    if isinstance(p, ComplexPolynomial):
        return p
    if np.isscalar(p):
        return ComplexPolynomial([p])
    return ComplexPolynomial(p)


def evaluate(p, z):
    """Horner evaluation at a scalar or array of points."""
    p = _as_poly(p)
    zs = np.asarray(z, dtype=np.complex128)
    if len(p) == 0:
        out = np.zeros(zs.shape, dtype=np.complex128)
    else:
        out = kernels.horner(p.coeffs, zs.ravel()).reshape(zs.shape)
    return out[()] if out.ndim == 0 else out


def derivative(p):
    p = _as_poly(p)
    if len(p) <= 1:
        return ComplexPolynomial([])
    k = np.arange(1, len(p))
    return ComplexPolynomial(p.coeffs[1:] * k)


def conj_coeffs(p):
    """Polynomial with conjugated coefficients: ``conj_coeffs(p)(conj(z)) == conj(p(z))``."""
    p = _as_poly(p)
    return ComplexPolynomial(np.conj(p.coeffs))


def cauchy_bound(p):
    c = _as_poly(p).canonical().coeffs
    return 1.0 + float(np.max(np.abs(c[:-1] / c[-1]))) if c.shape[0] > 1 else 1.0


def newton_polygon_start(c, stagger=0.4):
    """Initial Aberth points from the upper convex hull of ``(k, log|c_k|)``.

    Each hull edge from k_i to k_j contributes ``k_j - k_i`` points on the
    circle of radius ``(|c_{k_i}| / |c_{k_j}|) ** (1 / (k_j - k_i))``.
    """
    c = np.asarray(c, dtype=np.complex128)
    n = c.shape[0] - 1
    ks = np.flatnonzero(c)
    with np.errstate(divide="ignore"):
        lg = np.log(np.abs(c[ks]))
    hull = []
    for k, v in zip(ks, lg):
        while len(hull) >= 2:
            (k1, v1), (k2, v2) = hull[-2], hull[-1]
            if (v2 - v1) * (k - k1) <= (v - v1) * (k2 - k1):
                hull.pop()
            else:
                break
        hull.append((k, v))
    pts = []
    for (k1, v1), (k2, v2) in zip(hull[:-1], hull[1:]):
        m = k2 - k1
        rad = np.exp((v1 - v2) / m)
        ang = 2 * np.pi * np.arange(m) / m + stagger + 2 * np.pi * k1 / n
        pts.append(rad * np.exp(1j * ang))
    return np.concatenate(pts)


def roots_aberth(p, max_iter=500, tol=ROOT_TOL, start="newton"):
    """All roots of ``p`` by simultaneous Aberth-Ehrlich iteration.

    A root is accepted once its backward error
    ``|p(r)| / sum_k |c_k| |r|^k`` drops below ``tol``; it then receives one
    more correction and is frozen.

    ``start="newton"`` places the initial points by the Newton polygon of the
    coefficient moduli. ``start="cauchy"`` uses the single circle of radius
    ``1 + max|c_k / c_n|``, which needs O(deg) sweeps when the roots sit
    well inside it. Both use angular stagger ``2*pi*k/deg + 0.4``.

    Raises
    ------
    NonConvergence
        If some root still misses ``tol`` after ``max_iter`` sweeps.
    """
    p = _as_poly(p).canonical()
    n = p.degree
    if n < 1:
        raise ValueError("roots_aberth needs a nonconstant polynomial")
    c = p.coeffs
    low = int(np.flatnonzero(c)[0])
    if low:
        zeros = np.zeros(low, dtype=np.complex128)
        if low == n:
            return zeros
        return np.concatenate([zeros, roots_aberth(c[low:], max_iter, tol, start)])
    if n == 1:
        return np.array([-c[0] / c[1]])
    if start == "newton":
        z0 = newton_polygon_start(c)
    elif start == "cauchy":
        k = np.arange(n)
        z0 = cauchy_bound(p) * np.exp(1j * (2 * np.pi * k / n + 0.4))
    else:
        raise ValueError(f"unknown start {start!r}")
    z, _, ok = kernels.aberth(c, z0, max_iter, tol)
    if not ok:
        _, be = kernels.newton_ratio(c, z)
        if np.max(be) > tol:
            raise NonConvergence(
                f"Aberth: worst backward error {np.max(be):.3e} > {tol:.1e} "
                f"after {max_iter} iterations (degree {n})"
            )
    return z


def det_lu(m):
    """Determinant by LU with row-max partial pivoting."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("det_lu needs a square matrix")
    if m.shape[0] == 0:
        return 1.0 + 0j
    return complex(kernels.det_lu(m))


def sylvester_matrix(f, g):
    """Sylvester matrix of ``f`` (degree m) and ``g`` (degree n), both ascending."""
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    m, n = f.shape[0] - 1, g.shape[0] - 1
    d = m + n
    s = np.zeros((d, d), dtype=np.complex128)
    fr, gr = f[::-1], g[::-1]
    for i in range(n):
        s[i, i: i + m + 1] = fr
    for i in range(m):
        s[n + i, i: i + n + 1] = gr
    return s


def sylvester_resultant_at(f_coeffs_in_w, g_coeffs_in_w, z0):
    """Evaluate ``Res_w(f, g)`` at ``z = z0``.

    ``f_coeffs_in_w[k]`` is the polynomial in z multiplying ``w**k``.
    """
    fv = np.array([evaluate(c, z0) for c in f_coeffs_in_w], dtype=np.complex128)
    gv = np.array([evaluate(c, z0) for c in g_coeffs_in_w], dtype=np.complex128)
    for name, v in (("f", fv), ("g", gv)):
        if v.shape[0] < 2:
            raise ValueError(f"{name} must have w-degree >= 1")
        if abs(v[-1]) <= 1e-14:
            raise DegenerateLeadingCoefficient(
                f"leading w-coefficient of {name} vanishes at z0={z0!r}")
    return det_lu(sylvester_matrix(fv, gv))


def interpolate_dft(values, scale=DFT_RADIUS):
    """Coefficients of the polynomial through ``values`` at ``scale*exp(2*pi*i*k/N)``."""
    v = np.asarray(values, dtype=np.complex128)
    n = v.shape[0]
    d = np.fft.fft(v) / n
    return ComplexPolynomial(d / float(scale) ** np.arange(n))
