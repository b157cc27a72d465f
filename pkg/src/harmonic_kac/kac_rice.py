"""Kac-Rice radial densities for random harmonic polynomials.

Everything here is expressed in the squared-modulus coordinate ``w = |z|^2``:
integrating a radial density over ``(a, b)`` gives the expected number of
zeros in the annulus ``a < |z|^2 < b``.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .quadrature import QuadratureResult, integrate

__all__ = [
    "VarianceProfile",
    "PowerSums",
    "power_sums",
    "closed_form_sums",
    "integrand_general",
    "integrand_iid_equal",
    "analytic_density",
    "iid_index_moments",
    "expected_zeros_annulus",
    "partition_breakpoints",
    "partition_report",
    "fit_expansion",
    "intensity_profile",
    "limit_constant_interior",
    "limit_constant_exterior",
    "interior_limit_intensity",
    "analytic_interior_limit_intensity",
    "fn_upper_bound",
]


@dataclass(frozen=True)
class VarianceProfile:
    """Variances of the coefficients A_0..A_n of p and B_0..B_m of q.

    ``log_alphas``/``log_betas`` are filled from the variances when not
    given; pass them directly (see ``from_logs``) for profiles such as
    ``1/j!`` whose top entries underflow.
    """

    alphas: tuple
    betas: tuple
    log_alphas: tuple = None
    log_betas: tuple = None

    def __post_init__(self):
        for name in ("alphas", "betas"):
            v = tuple(float(x) for x in getattr(self, name))
            if not v:
                raise ValueError("both variance lists must be nonempty")
            if min(v) < 0:
                raise ValueError("variances must be nonnegative")
            object.__setattr__(self, name, v)
            lname = "log_" + name
            lv = getattr(self, lname)
            lv = tuple(_logs(v).tolist()) if lv is None else tuple(float(x) for x in lv)
            if len(lv) != len(v):
                raise ValueError(f"{lname} has the wrong length")
            if lv[-1] == -math.inf:
                raise ValueError("top-degree variances must be positive")
            object.__setattr__(self, lname, lv)
        if len(self.betas) > len(self.alphas):
            raise ValueError("need deg p >= deg q")

    @classmethod
    def from_logs(cls, log_alphas, log_betas):
        la = np.asarray(log_alphas, dtype=np.float64)
        lb = np.asarray(log_betas, dtype=np.float64)
        return cls(tuple(np.exp(la)), tuple(np.exp(lb)), tuple(la), tuple(lb))

    @property
    def n(self):
        return len(self.alphas) - 1

    @property
    def m(self):
        return len(self.betas) - 1

    @classmethod
    def kac(cls, n, m=None):
        m = n if m is None else m
        return cls((1.0,) * (n + 1), (1.0,) * (m + 1))

    @property
    def is_iid_equal(self):
        return self.n == self.m and all(x == 0.0 for x in self.log_alphas + self.log_betas)


@dataclass(frozen=True)
class PowerSums:
    """``a = sum alpha_j w^j``, ``b = sum j alpha_j w^j``, ``c = sum j^2 alpha_j w^j``.

    ``spread`` is the centred sum ``sum alpha_j w^j (j - b/a)^2``, so that
    ``a*c - b**2 == a*spread`` without cancellation.
    """

    a: float
    b: float
    c: float
    spread: float


def _logs(v):
    v = np.asarray(v, dtype=np.float64)
    with np.errstate(divide="ignore"):
        return np.log(v)


def power_sums(alphas, w):
    """Unscaled power sums at a single ``w >= 0``.

    Raises ``OverflowError`` when the largest term leaves double range;
    the integrands use a common log-shift instead.
    """
    w = float(w)
    if w < 0:
        raise ValueError("w must be nonnegative")
    la = _logs(alphas)
    j = np.arange(la.shape[0])
    if w == 0.0:
        a0 = float(alphas[0])
        return PowerSums(a0, 0.0, 0.0, 0.0)
    top = float(np.max(la + j * math.log(w)))
    if top > 700.0:
        raise OverflowError(f"power sums overflow at w={w} (log term {top:.1f})")
    out = kernels.power_sums(la, np.array([math.log(w)]), np.zeros(1))
    return PowerSums(*(float(x) for x in out[:, 0]))


def closed_form_sums(n, w):
    """Geometric-series closed forms of the all-ones sums, valid for ``w != 1``."""
    w = float(w)
    if w == 1.0:
        raise ValueError("closed forms are singular at w = 1")
    u = 1.0 - w
    wn = w ** n
    a = (1.0 - wn * w) / u
    b = w * (n * wn * w - (n + 1) * wn + 1.0) / u ** 2
    c = w * (-n * n * wn * w * w + (2 * n * n + 2 * n - 1) * wn * w
             - (n + 1) ** 2 * wn + w + 1.0) / u ** 3
    return a, b, c


def _scaled_sums(profile, w):
    """Power sums of p and q scaled by a shared factor exp(-shift)."""
    lw = np.log(w)
    la, lb = np.array(profile.log_alphas), np.array(profile.log_betas)
    ja, jb = np.arange(la.shape[0]), np.arange(lb.shape[0])
    with np.errstate(invalid="ignore"):
        ma = np.max(la[None, :] + ja[None, :] * lw[:, None], axis=1)
        mb = np.max(lb[None, :] + jb[None, :] * lw[:, None], axis=1)
    shift = np.maximum(ma, mb)
    return kernels.power_sums(la, lw, shift), kernels.power_sums(lb, lw, shift)


def integrand_general(profile, w, form="stable"):
    """Radial density of zeros for an arbitrary diagonal variance profile.

    With r3 = a_p + a_q, r12 = b_p b_q, r1 = r3 c_p - b_p^2 and
    r2 = r3 c_q - b_q^2 the density is

        (r1^2 + r2^2 - 2 r12^2) / (w r3^2 sqrt((r1 + r2)^2 - 4 r12^2)).

    ``form="stable"`` rewrites numerator and discriminant as
    ``(r1 - r2)^2 + 2D`` and ``(r1 - r2)^2 + 4D`` where ``D = r1 r2 - r12^2``
    is assembled from positive terms only (via the centred spreads), so no
    cancellation occurs. ``form="literal"`` evaluates the textbook
    expression and raises ``DomainError`` when the discriminant cancels
    to zero or below.
    """
    w = np.asarray(w, dtype=np.float64)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    if np.any(w <= 0):
        raise ValueError("w must be positive")
    (ap, bp, cp, sp), (aq, bq, cq, sq) = _scaled_sums(profile, w)
    r3 = ap + aq
    if form == "literal":
        r1 = r3 * cp - bp * bp
        r2 = r3 * cq - bq * bq
        r12 = bp * bq
        disc = (r1 + r2) ** 2 - 4 * r12 ** 2
        scale = (r1 + r2) ** 2 + 4 * r12 ** 2
        if np.any(disc <= 0) and np.any(disc <= 1e-12 * scale):
            raise DomainError("Kac-Rice discriminant lost to cancellation; use form='stable'")
        num = r1 * r1 + r2 * r2 - 2 * r12 * r12
        out = num / (w * r3 * r3 * np.sqrt(np.maximum(disc, 0.0)))
    elif form == "stable":
        r1 = aq * cp + ap * sp
        r2 = ap * cq + aq * sq
        d = (2 * ap * aq * sp * sq + ap * sp * bq * bq + aq * sq * bp * bp
             + aq * aq * cp * sq + ap * ap * cq * sp)
        dr = (r1 - r2) ** 2
        disc = dr + 4 * d
        if np.any(~np.isfinite(disc)) or np.any(disc < 0):
            raise DomainError("non-finite Kac-Rice discriminant")
        with np.errstate(invalid="ignore", divide="ignore"):
            out = (dr + 2 * d) / (w * r3 * r3 * np.sqrt(disc))
        out = np.where(disc == 0, 0.0, out)
    else:
        raise ValueError(f"unknown form {form!r}")
    return float(out[0]) if scalar else out


def analytic_density(n, w):
    """Radial zero density of the analytic Kac polynomial of degree n."""
    w = np.asarray(w, dtype=np.float64)
    _, var = iid_index_moments(n, w)
    return var / w


# Series for sinh(y) - y and y cosh(y) - sinh(y); both entire, and |y| < 2
# wherever they are used, so 20 terms reach double precision.
_K = np.arange(1, 21)
_SINH_MINUS = np.array([1.0 / math.factorial(2 * k + 1) for k in _K])
_YCOSH_MINUS = np.array([2.0 * k / math.factorial(2 * k + 1) for k in _K])


def _odd_series(coef, y):
    y2 = y * y
    acc = np.zeros_like(y)
    for cf in coef[::-1]:
        acc = acc * y2 + cf
    return acc * y * y2


def _langevin(y):
    """coth(y) - 1/y, for |y| <= 2."""
    y = np.asarray(y, dtype=np.float64)
    tiny = np.abs(y) < 1e-6
    ys = np.where(tiny, 1.0, y)
    out = _odd_series(_YCOSH_MINUS, ys) / (ys * np.sinh(ys))
    return np.where(tiny, y / 3.0, out)


def _langevin_prime(y):
    """1/y^2 - 1/sinh(y)^2, for |y| <= 2."""
    y = np.asarray(y, dtype=np.float64)
    tiny = np.abs(y) < 1e-6
    ys = np.where(tiny, 1.0, y)
    sh = np.sinh(ys)
    out = _odd_series(_SINH_MINUS, ys) * (sh + ys) / (ys * sh) ** 2
    return np.where(tiny, 1.0 / 3.0 - y * y / 15.0, out)


def _near(x):
    # mean and variance of U on {0..K} with weights e^{Ux}, minus the K factor
    return 0.5 + 0.5 * _langevin(0.5 * x), 0.25 * _langevin_prime(0.5 * x)


_SEAM = 4.0


def iid_index_moments(n, w):
    """Mean and variance of j under weights ``w**j`` on ``{0, ..., n}``.

    These are ``b_n/a_n`` and ``(a_n c_n - b_n^2)/a_n^2`` for the all-ones
    profile, obtained as derivatives of ``log a_n`` in ``L = log w``. For
    ``|(n+1) L| >= 4`` the geometric closed forms are used directly; inside
    that band both quantities are differences of smooth functions evaluated
    by series, which removes the 0/0 at ``w = 1``.
    """
    w = np.asarray(w, dtype=np.float64)
    L = np.log(w)
    s = (n + 1) * L
    far = np.abs(s) >= _SEAM
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        mu_far = (n + 1) / (-np.expm1(-s)) - 1.0 / (-np.expm1(-L))
        aL, aS = np.abs(L), np.abs(s)
        var_far = (np.exp(-aL) / np.expm1(-aL) ** 2
                   - (n + 1) ** 2 * np.exp(-aS) / np.expm1(-aS) ** 2)
    sn = np.where(far, 0.0, s)
    Ln = np.where(far, 0.0, L)
    hs, vs = _near(sn)
    hl, vl = _near(Ln)
    mu = np.where(far, mu_far, (n + 1) * hs - hl)
    var = np.where(far, var_far, (n + 1) ** 2 * vs - vl)
    return mu, var


def integrand_iid_equal(n, w):
    """``F_n(w)``: radial zero density for i.i.d. coefficients with deg p = deg q = n.

    ``F_n = (1 / 2 sqrt(w)) sqrt(c_n/a_n) sqrt((a_n c_n - b_n^2) / (w a_n^2))``,
    evaluated overflow-free for any n and w > 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    w = np.asarray(w, dtype=np.float64)
    mu, var = iid_index_moments(n, w)
    second = var + mu * mu
    return np.sqrt(second * var) / (2.0 * w)


def fn_upper_bound(n, w):
    """Envelope ``n / (2 sqrt(w) |w - 1|)`` dominating F_n away from w = 1."""
    w = np.asarray(w, dtype=np.float64)
    return n / (2.0 * np.sqrt(w) * np.abs(w - 1.0))


def partition_breakpoints(n):
    """Radii (in w) of the proof partition around the unit circle."""
    pts = [1.0, 2.0]
    if n >= 1:
        pts += [1.0 - 1.0 / n, 1.0 + 1.0 / n]
    if n >= 2:
        ln = math.log(n)
        pts += [1.0 - ln / n, 1.0 + ln * ln / n, 1.0 + 1.0 / ln]
    return sorted({p for p in pts if p > 0 and math.isfinite(p)})


def _tail_envelope(n, w0):
    # integral of n / (2 sqrt(w) (w - 1)) over (w0, inf)
    r = math.sqrt(w0)
    return 0.5 * n * math.log((r + 1.0) / (r - 1.0))


def expected_zeros_annulus(profile, a=0.0, b=math.inf, rel_tol=1e-8, limit=10_000):
    """Expected number of zeros with ``a < |z|^2 < b``.

    Adaptive GK15 over ``(a, b)`` with forced breakpoints at the proof
    partition radii. An infinite ``b`` is integrated exactly through the
    substitution ``w = W/t^2`` beyond ``W = max(4, a)``; ``tail_bound``
    then reports the envelope integral over that piece (i.i.d. equal
    degrees only).
    """
    if not 0 <= a < b:
        if a == b:
            return QuadratureResult(0.0, 0.0, 0)
        raise ValueError("need 0 <= a < b")
    n = profile.n
    if profile.is_iid_equal:
        def f(w):
            return integrand_iid_equal(n, w)
    else:
        def f(w):
            return integrand_general(profile, w)
    res = integrate(f, a, b, partition_breakpoints(n), rel_tol=rel_tol, limit=limit,
                    tail_start=max(4.0, a))
    if math.isinf(b) and profile.is_iid_equal:
        res = QuadratureResult(res.value, res.abs_error_estimate, res.subintervals_used,
                               _tail_envelope(n, max(4.0, a)), res.converged)
    return res


def partition_report(n, rel_tol=1e-8, profile=None):
    """Inner, middle and outer parts of the expectation (i.i.d. equal degrees by default).

    Splits at ``1 + (log n)^2/n`` and ``1 + 1/log n``. For small n the two
    radii come in the opposite order; the middle part is then the oriented
    integral (negative), so the three parts still add up to the total.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    ln = math.log(n)
    w1 = 1.0 + ln * ln / n
    w2 = 1.0 + 1.0 / ln
    prof = VarianceProfile.kac(n) if profile is None else profile
    if w1 <= w2:
        mid = expected_zeros_annulus(prof, w1, w2, rel_tol)
    else:
        r = expected_zeros_annulus(prof, w2, w1, rel_tol)
        mid = QuadratureResult(-r.value, r.abs_error_estimate, r.subintervals_used,
                               r.tail_bound, r.converged)
    return (expected_zeros_annulus(prof, 0.0, w1, rel_tol), mid,
            expected_zeros_annulus(prof, w2, math.inf, rel_tol))


def fit_expansion(ns, totals):
    """Least-squares ``total ~ a n ln n + b n ln ln n + c n``; returns ``(a, b, c)``.

    Rows are divided by ``n ln n`` first so every n weighs the same.
    """
    n = np.asarray(ns, dtype=np.float64)
    t = np.asarray(totals, dtype=np.float64)
    if n.shape[0] < 3:
        raise ValueError("need at least three points")
    ln = np.log(n)
    X = np.column_stack([np.ones_like(n), np.log(ln) / ln, 1.0 / ln])
    coef, *_ = np.linalg.lstsq(X, t / (n * ln), rcond=None)
    return tuple(float(c) for c in coef)


def intensity_profile(n, m, radii):
    """First intensity (zeros per unit area) along a ray, harmonic vs analytic.

    Returns a list of dicts with keys radius, harmonic_intensity,
    analytic_intensity and difference (harmonic minus analytic).
    """
    r = np.asarray(radii, dtype=np.float64)
    if np.any(r <= 0):
        raise ValueError("radii must be positive")
    w = r * r
    prof = VarianceProfile.kac(n, m)
    if prof.is_iid_equal:
        dens = integrand_iid_equal(n, w)
    else:
        dens = integrand_general(prof, w)
    h = dens / math.pi
    an = analytic_density(n, w) / math.pi
    return [dict(radius=float(ri), harmonic_intensity=float(hi),
                 analytic_intensity=float(ai), difference=float(hi - ai))
            for ri, hi, ai in zip(r, h, an)]


def interior_limit_intensity(r):
    r = np.asarray(r, dtype=np.float64)
    return np.sqrt(1 + r * r) / (1 - r * r) ** 2 / (2 * math.pi)


def analytic_interior_limit_intensity(r):
    r = np.asarray(r, dtype=np.float64)
    return 1.0 / (math.pi * (1 - r * r) ** 2)


def limit_constant_interior(r_inner, r_outer, rel_tol=1e-12):
    """Limit of the expected count in ``r_inner < |z| < r_outer`` inside the disk."""
    if not 0 <= r_inner <= r_outer < 1:
        raise ValueError("need 0 <= r_inner <= r_outer < 1")
    if r_inner == r_outer:
        return 0.0

    def g(t):
        return 0.5 * np.sqrt(1 + t) / (1 - t) ** 2

    return integrate(g, r_inner ** 2, r_outer ** 2, rel_tol=rel_tol).value


def limit_constant_exterior(r_inner, r_outer):
    """Limit of (expected count in ``r_inner < |z| < r_outer``) / n outside the disk."""
    if not 1 < r_inner <= r_outer:
        raise ValueError("need 1 < r_inner <= r_outer")
    if r_inner == r_outer:
        return 0.0

    def anti(r):
        return 0.5 * math.log((r - 1.0) / (r + 1.0))

    if math.isinf(r_outer):
        return -anti(r_inner)
    return anti(r_outer) - anti(r_inner)
