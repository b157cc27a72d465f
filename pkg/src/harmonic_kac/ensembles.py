"""Random harmonic polynomial ensembles and Monte Carlo zero counts."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateLeadingCoefficient, NonConvergence, NotGaussian,
                     PhaseStepTooLarge, TooManyFailures, UnboundedZeroSet)
from .harmonic_solver import HarmonicPolynomial, find_zeros
from .kac_rice import VarianceProfile
from .rng import ordered_map, trial_rng

__all__ = [
    "KINDS",
    "GAUSSIAN_KINDS",
    "EnsembleSpec",
    "EmpiricalEstimate",
    "variance_profile",
    "sample",
    "unimodular_coefficients",
    "unimodular_polynomial",
    "empirical_expected_zeros",
    "universality_probe",
]

GAUSSIAN_KINDS = ("kac_iid", "kostlan", "weyl", "truncated")
KINDS = GAUSSIAN_KINDS + ("iid_rademacher", "iid_uniform_modulus",
                          "unimodular_construction", "littlewood")
MAX_FAILURE_RATE = 0.02


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    n: int
    m: int = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}; choose from {KINDS}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        m = self.m
        if self.kind == "unimodular_construction":
            if m is not None and m != self.n - 1:
                raise ValueError("unimodular_construction has m = n - 1")
            m = self.n - 1
        elif m is None:
            m = self.n
        if not 0 <= m <= self.n:
            raise ValueError("need 0 <= m <= n")
        object.__setattr__(self, "m", int(m))


@dataclass(frozen=True)
class EmpiricalEstimate:
    mean: float
    std_error: float
    trials: int
    seed: int
    failures: int


def _log_binom(n, j):
    j = np.arange(j + 1) if np.isscalar(j) else np.asarray(j)
    return (math.lgamma(n + 1) - np.array([math.lgamma(k + 1) for k in j])
            - np.array([math.lgamma(n - k + 1) for k in j]))


def _log_inv_factorial(n):
    return -np.array([math.lgamma(k + 1) for k in range(n + 1)])


def variance_profile(spec):
    """Coefficient variances of a Gaussian ensemble."""
    n, m = spec.n, spec.m
    if spec.kind == "kac_iid":
        return VarianceProfile.kac(n, m)
    if spec.kind == "kostlan":
        return VarianceProfile.from_logs(_log_binom(n, n), _log_binom(m, m))
    if spec.kind == "truncated":
        return VarianceProfile.from_logs(_log_binom(n, n), _log_binom(n, m))
    if spec.kind == "weyl":
        return VarianceProfile.from_logs(_log_inv_factorial(n), _log_inv_factorial(m))
    raise NotGaussian(f"{spec.kind} has no Gaussian variance profile")


def _complex_gaussian(rng, log_var):
    # real and imaginary parts N(0, 1/2) each, scaled to variance exp(log_var)
    k = len(log_var)
    x = rng.normal(0.0, math.sqrt(0.5), k) + 1j * rng.normal(0.0, math.sqrt(0.5), k)
    return np.exp(0.5 * np.asarray(log_var)) * x


def unimodular_coefficients(n, rng):
    """Angles theta_0..theta_{n-1} uniform on [0, 2 pi) and a sign beta."""
    thetas = rng.uniform(0.0, 2 * math.pi, n)
    beta = 1 if rng.integers(0, 2) else -1
    return thetas, beta


def unimodular_polynomial(thetas, beta):
    """``q = sum e^{i theta_k} z^k`` and ``p = beta z^n + q``, as a HarmonicPolynomial."""
    q = np.exp(1j * np.asarray(thetas, dtype=np.float64))
    p = np.r_[q, beta]
    return HarmonicPolynomial(p, q)


def sample(spec, rng):
    """Draw one harmonic polynomial from the ensemble."""
    n, m = spec.n, spec.m
    kind = spec.kind
    if kind in GAUSSIAN_KINDS:
        prof = variance_profile(spec)
        return HarmonicPolynomial(_complex_gaussian(rng, prof.log_alphas),
                                  _complex_gaussian(rng, prof.log_betas))
    if kind in ("iid_rademacher", "littlewood"):
        # same law; "littlewood" names the +-1 coefficient problem
        p = rng.choice(np.array([-1.0, 1.0]), n + 1)
        q = rng.choice(np.array([-1.0, 1.0]), m + 1)
        return HarmonicPolynomial(p, q)
    if kind == "iid_uniform_modulus":
        return HarmonicPolynomial(np.exp(1j * rng.uniform(0, 2 * math.pi, n + 1)),
                                  np.exp(1j * rng.uniform(0, 2 * math.pi, m + 1)))
    thetas, beta = unimodular_coefficients(n, rng)
    return unimodular_polynomial(thetas, beta)


_SOLVER_ERRORS = (UnboundedZeroSet, PhaseStepTooLarge, NonConvergence,
                  DegenerateLeadingCoefficient)


def _count_one(spec, a, b, seed, stream, index):
    H = sample(spec, trial_rng(seed, index, stream))
    try:
        zs = find_zeros(H, quiet=True)
    except _SOLVER_ERRORS:
        return None
    if not zs.validated:
        return None
    return zs.count_in(a, b)


def trial_counts(spec, trials, seed, region=(0.0, math.inf), threads=1, stream=0):
    """Per-trial zero counts in ``a < |z|^2 < b``; ``None`` marks a failed trial."""
    a, b = region
    return ordered_map(lambda i: _count_one(spec, a, b, seed, stream, i),
                       range(trials), threads)


def summarize(counts, seed, strict=True):
    good = np.array([c for c in counts if c is not None], dtype=np.float64)
    failures = len(counts) - good.shape[0]
    if strict and failures > MAX_FAILURE_RATE * len(counts):
        raise TooManyFailures(f"{failures} of {len(counts)} trials failed to validate")
    if good.shape[0] == 0:
        return EmpiricalEstimate(math.nan, math.nan, len(counts), seed, failures)
    mean = math.fsum(good) / good.shape[0]
    if good.shape[0] > 1:
        var = math.fsum((good - mean) ** 2) / (good.shape[0] - 1)
        se = math.sqrt(var / good.shape[0])
    else:
        se = math.nan
    return EmpiricalEstimate(mean, se, len(counts), seed, failures)


def empirical_expected_zeros(spec, region=(0.0, math.inf), trials=1000, seed=0,
                             threads=1, strict=True):
    """Monte Carlo mean number of zeros with ``a < |z|^2 < b``.

    Trial i uses its own counter-based stream ``(seed, i)``, so the result
    does not depend on ``threads``. Unvalidated trials are excluded from
    the mean; more than 2% of them raises ``TooManyFailures`` unless
    ``strict`` is false.
    """
    counts = trial_counts(spec, trials, seed, region, threads)
    return summarize(counts, seed, strict)


def universality_probe(n, m, kinds=("kac_iid", "iid_rademacher", "iid_uniform_modulus"),
                       trials=1000, seed=0, threads=1):
    """Side-by-side Monte Carlo means for several coefficient laws.

    Every kind uses the same per-trial streams. Returns ``{kind: estimate}``;
    failure caps are not enforced here, so degenerate laws show up in the
    ``failures`` column instead of aborting the table.
    """
    out = {}
    for kind in kinds:
        spec = EnsembleSpec(kind, n, m)
        out[kind] = empirical_expected_zeros(spec, trials=trials, seed=seed,
                                             threads=threads, strict=False)
    return out
