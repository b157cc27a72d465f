"""Conditional law of the Jacobian factor at a zero, and the resulting intensity.

At a point z with |z|^2 = w, the pair (xi1, xi2) = (z P'(z), conj(z Q'(z)))
conditioned on H(z) = 0 is a centred complex Gaussian vector with covariance
Gamma. ``Y = |xi1|^2 - |xi2|^2`` is w times the Jacobian of H at z, and its
mean absolute value gives the first intensity.

The sums below are computed directly from the variances, independently of
``kac_rice``, so the two modules can check each other.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCovariance

__all__ = [
    "ConditionalCovariance",
    "conditional_covariance",
    "char_function",
    "pdf_Y",
    "cdf_Y",
    "expected_abs_Y",
    "intensity_from_density",
    "sample_conditioned",
    "empirical_covariance",
]


@dataclass(frozen=True)
class ConditionalCovariance:
    gamma11: float
    gamma22: float
    gamma12: float
    w: float = float("nan")
    r3: float = float("nan")

    def __post_init__(self):
        det = self.gamma11 * self.gamma22 - self.gamma12 ** 2
        scale = max(abs(self.gamma11), abs(self.gamma22), 1e-300) ** 2
        # semidefinite is allowed: q constant gives gamma22 = 0
        if not (self.gamma11 > 0 and self.gamma22 >= 0 and det >= -1e-12 * scale):
            raise DegenerateCovariance(
                f"covariance not positive semidefinite: "
                f"{self.gamma11}, {self.gamma22}, {self.gamma12}")

    @property
    def det(self):
        return self.gamma11 * self.gamma22 - self.gamma12 ** 2

    @property
    def disc(self):
        """sqrt((g11 + g22)^2 - 4 g12^2)."""
        return math.sqrt((self.gamma11 + self.gamma22) ** 2 - 4 * self.gamma12 ** 2)

    def matrix(self):
        return np.array([[self.gamma11, self.gamma12], [self.gamma12, self.gamma22]])


def _sums(var, w):
    v = np.asarray(var, dtype=np.float64)
    j = np.arange(v.shape[0], dtype=np.float64)
    t = v * w ** j
    return t.sum(), (j * t).sum(), (j * j * t).sum()


def conditional_covariance(profile, w):
    """Covariance of (z P', conj(z Q')) given H(z) = 0, at |z|^2 = w.

    Unconditionally the pair has diagonal covariance (c_p, c_q), with
    c = sum j^2 alpha_j w^j, and covariance (b_p, b_q) against H, whose
    variance is r3 = a_p + a_q. Gaussian conditioning subtracts the
    rank-one projection, leaving ``(1/r3) [[r1, -r12], [-r12, r2]]``.
    """
    w = float(w)
    if w <= 0:
        raise ValueError("w must be positive")
    ap, bp, cp = _sums(profile.alphas, w)
    aq, bq, cq = _sums(profile.betas, w)
    r3 = ap + aq
    r1 = r3 * cp - bp * bp
    r2 = r3 * cq - bq * bq
    r12 = bp * bq
    return ConditionalCovariance(r1 / r3, r2 / r3, -r12 / r3, w, r3)


def char_function(G, t):
    """E exp(i t Y) = 1 / (1 + i t (g22 - g11) + t^2 det)."""
    t = np.asarray(t, dtype=np.float64)
    return 1.0 / (1.0 + 1j * t * (G.gamma22 - G.gamma11) + t * t * G.det)


def _rates(G):
    """(disc, rate of the positive tail, rate of the negative tail).

    The rates are (disc +- delta) / (2 det) with delta = g22 - g11; since
    disc^2 - delta^2 = 4 det, the smaller one is rewritten as
    2 / (disc -+ delta) so that a singular Gamma gives an infinite rate
    (an empty tail) instead of 0/0.
    """
    d = np.float64(G.disc)
    delta = np.float64(G.gamma22 - G.gamma11)
    det = np.float64(G.det)
    with np.errstate(divide="ignore", over="ignore"):
        if delta >= 0:
            lp, lm = (d + delta) / (2 * det), 2.0 / (d + delta)
        else:
            lp, lm = 2.0 / (d - delta), (d - delta) / (2 * det)
    return d, np.float64(lp), np.float64(lm)


def pdf_Y(G, y):
    """Two-sided exponential density of Y.

    Equal to exp((-y (g22 - g11) - |y| disc) / (2 det)) / disc.
    """
    y = np.asarray(y, dtype=np.float64)
    d, lp, lm = _rates(G)
    with np.errstate(invalid="ignore", over="ignore"):
        out = np.where(y >= 0, np.exp(-lp * np.abs(y)), np.exp(-lm * np.abs(y))) / d
    return out


def cdf_Y(G, y):
    y = np.asarray(y, dtype=np.float64)
    d, lp, lm = _rates(G)
    with np.errstate(invalid="ignore", over="ignore"):
        neg = np.exp(lm * np.minimum(y, 0.0)) / (d * lm)
    pos = 1.0 - np.exp(-lp * np.maximum(y, 0.0)) / (d * lp)
    return np.where(y < 0, neg, pos)


def expected_abs_Y(G):
    return (G.gamma11 ** 2 + G.gamma22 ** 2 - 2 * G.gamma12 ** 2) / G.disc


def intensity_from_density(profile, w):
    """First intensity (per unit area) at |z|^2 = w: E|Y| / (pi w r3)."""
    G = conditional_covariance(profile, w)
    return expected_abs_Y(G) / (math.pi * G.w * G.r3)


def _cgauss(rng, var, size):
    s = np.sqrt(np.asarray(var, dtype=np.float64) / 2.0)
    return s * (rng.standard_normal((size, s.shape[0]))
                + 1j * rng.standard_normal((size, s.shape[0])))


def sample_conditioned(profile, w, samples, rng, phase=0.3):
    """Monte Carlo draws of (xi1, xi2) conditioned on H(z) = 0.

    Coefficients are sampled, the pair and H(z) evaluated at
    ``z = sqrt(w) exp(i phase)``, and H is regressed out using the sample
    covariances. For Gaussians this residual has exactly the conditional law.
    """
    z = math.sqrt(w) * np.exp(1j * phase)
    A = _cgauss(rng, profile.alphas, samples)
    B = _cgauss(rng, profile.betas, samples)
    ja = np.arange(A.shape[1])
    jb = np.arange(B.shape[1])
    P = A @ z ** ja
    Q = B @ z ** jb
    x1 = A @ (ja * z ** ja)
    x2 = np.conj(B @ (jb * z ** jb))
    h = P + np.conj(Q)
    hh = np.vdot(h, h).real
    xi1 = x1 - (np.vdot(h, x1) / hh) * h
    xi2 = x2 - (np.vdot(h, x2) / hh) * h
    return xi1, xi2


def empirical_covariance(xi1, xi2):
    """Sample (g11, g22, g12) with g12 = Re E[xi1 conj(xi2)]."""
    return (float(np.mean(np.abs(xi1) ** 2)), float(np.mean(np.abs(xi2) ** 2)),
            float(np.mean(xi1 * np.conj(xi2)).real))
