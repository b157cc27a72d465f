"""Harmonic polynomials with many zeros from unimodular coefficients.

For ``q(z) = sum_{k<n} e^{i theta_k} z^k`` and ``p = beta z^n + q`` the map
``H = p + conj(q) = beta z^n + 2 Re q(z)`` can only vanish where ``z^n`` is
real, i.e. on the n lines through the origin at angles ``j pi / n``.
Writing ``z = r e^{i j pi/n}`` with real r turns ``H = 0`` into the real
polynomial equation

    (-1)^j beta r^n + sum_{k<n} 2 cos(k j pi/n + theta_k) r^k = 0,

so the zero count of H is the sum over lines of real-root counts.
"""
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .cpoly import roots_aberth
from .ensembles import unimodular_coefficients, unimodular_polynomial
from .errors import BoundaryAmbiguity
from .rng import ordered_map, trial_rng

__all__ = [
    "LineRestriction",
    "Witness",
    "restrict_to_line",
    "count_real_roots",
    "real_roots",
    "construct_candidate",
    "search_best",
    "kac_real_zero_trend",
    "scaling_probe",
    "witness_polynomial",
    "witness_checksum",
    "witness_to_json",
    "witness_from_json",
    "verify_witness",
]

IMAG_THRESHOLD = 1e-8
EXTREMAL_STREAM = 0x4C494E45  # separates these streams from the Monte Carlo ones
WITNESS_VERSION = 1


@dataclass(frozen=True)
class LineRestriction:
    j: int
    theta_j: float
    real_coeffs: np.ndarray


@dataclass(frozen=True)
class Witness:
    n: int
    beta: int
    thetas: tuple
    total_zeros: int
    per_line_counts: tuple
    seed: int


def restrict_to_line(thetas, beta, j, n):
    """Real polynomial (ascending) whose real roots r give the zeros ``r e^{i j pi/n}``."""
    if not 0 <= j < n:
        raise ValueError("need 0 <= j < n")
    thetas = np.asarray(thetas, dtype=np.float64)
    if thetas.shape[0] != n:
        raise ValueError("need n angles")
    th = j * math.pi / n
    k = np.arange(n)
    c = np.empty(n + 1)
    c[:n] = 2.0 * np.cos(k * th + thetas)
    # z^n = (-1)^j r^n on this line
    c[n] = beta if j % 2 == 0 else -beta
    return LineRestriction(j, th, c)


def count_real_roots(coeffs, threshold=IMAG_THRESHOLD):
    """Number of distinct real roots; see ``real_roots``."""
    return real_roots(coeffs, threshold).shape[0]


def real_roots(coeffs, threshold=IMAG_THRESHOLD):
    """Distinct real roots of a real polynomial (ascending coefficients).

    A complex root counts as real when ``|Im| <= threshold (1 + |Re|)`` and
    real Newton from its real part converges. Roots whose imaginary part is
    within a factor 10 of the threshold raise ``BoundaryAmbiguity``, as does
    a vanishing constant term.
    """
    c = np.asarray(coeffs, dtype=np.float64)
    if c[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    if abs(c[0]) < 1e-14 * np.max(np.abs(c)):
        raise BoundaryAmbiguity("root at r = 0")
    if c.shape[0] == 2:
        return np.array([-c[0] / c[1]])
    z = roots_aberth(c)
    tol = threshold * (1.0 + np.abs(z.real))
    im = np.abs(z.imag)
    if np.any((im > tol / 10) & (im < tol * 10)):
        raise BoundaryAmbiguity("root imaginary part near the real threshold")
    xs = z.real[im <= tol]
    found = []
    for x in xs:
        # real Newton with the overflow-safe ratio p'/p (reversed beyond |x| = 1)
        for _ in range(8):
            g, be = kernels.newton_ratio(c, np.array([x]))
            if not np.isfinite(g[0]) or g[0] == 0:
                break
            step = 1.0 / g[0].real
            x -= step
            if abs(step) <= 1e-15 * max(1.0, abs(x)):
                break
        _, be = kernels.newton_ratio(c, np.array([x]))
        if not np.isfinite(x) or be[0] > 1e-9:
            raise BoundaryAmbiguity(f"real Newton failed to confirm root near {x}")
        if all(abs(x - y) > 1e-9 * max(1.0, abs(x)) for y in found):
            found.append(x)
    return np.array(found)


def _line_counts(thetas, beta):
    n = len(thetas)
    return tuple(count_real_roots(restrict_to_line(thetas, beta, j, n).real_coeffs)
                 for j in range(n))


def construct_candidate(n, seed):
    """Sample the angles and sign from ``seed`` and count zeros line by line."""
    if n < 2:
        raise ValueError("n must be >= 2")
    thetas, beta = unimodular_coefficients(n, trial_rng(seed, 0, EXTREMAL_STREAM))
    counts = _line_counts(thetas, beta)
    return Witness(n, beta, tuple(float(t) for t in thetas), sum(counts), counts, int(seed))


def witness_polynomial(w):
    """The harmonic polynomial a witness describes."""
    return unimodular_polynomial(w.thetas, w.beta)


def _try_candidate(n, seed):
    try:
        return construct_candidate(n, seed)
    except BoundaryAmbiguity:
        return None


def search_best(n, num_seeds, base_seed=0, threads=1):
    """Best candidate over seeds ``base_seed, base_seed + 1, ...``.

    Ties go to the smallest seed; ambiguous candidates are skipped. Returns
    ``(witness, rejected_count)``.
    """
    seeds = [(base_seed + i) & ((1 << 64) - 1) for i in range(num_seeds)]
    cands = ordered_map(lambda s: _try_candidate(n, s), seeds, threads)
    best = None
    for c in cands:
        if c is not None and (best is None or c.total_zeros > best.total_zeros):
            best = c
    return best, sum(c is None for c in cands)


def _line0_count(n, seed, stream, index):
    thetas, beta = unimodular_coefficients(n, trial_rng(seed, index, stream))
    try:
        return count_real_roots(restrict_to_line(thetas, beta, 0, n).real_coeffs)
    except BoundaryAmbiguity:
        return None


def kac_real_zero_trend(n_values, trials, seed=0, threads=1):
    """Mean real-root count of the line-0 restriction, and its slope in log n.

    Returns ``(means, slope, intercept, rejected)`` where ``means[n]`` is the
    average over accepted trials and the line ``mean ~ slope * ln n +
    intercept`` is a least-squares fit.
    """
    means = {}
    rejected = 0
    for n in n_values:
        counts = ordered_map(lambda i: _line0_count(n, seed, 1000 + n, i), range(trials), threads)
        good = [c for c in counts if c is not None]
        rejected += len(counts) - len(good)
        means[n] = math.fsum(good) / len(good)
    x = np.log(np.array(list(means), dtype=np.float64))
    y = np.array(list(means.values()))
    if x.shape[0] >= 2:
        slope, intercept = np.polyfit(x, y, 1)
    else:
        slope, intercept = math.nan, math.nan
    return means, float(slope), float(intercept), rejected


def _outside_counts(n, seed, index):
    thetas, beta = unimodular_coefficients(n, trial_rng(seed, index, 2000 + n))
    try:
        r = np.abs(real_roots(restrict_to_line(thetas, beta, 0, n).real_coeffs))
    except BoundaryAmbiguity:
        return None
    return int(np.count_nonzero(r > 1.0)), int(np.count_nonzero(r > 0.5))


def scaling_probe(n, trials, seed=0, threads=1):
    """Mean number of real roots with |r| > 1 and with |r| > 1/2 on line 0."""
    res = [c for c in ordered_map(lambda i: _outside_counts(n, seed, i), range(trials), threads)
           if c is not None]
    a = np.array(res, dtype=np.float64).reshape(-1, 2)
    return {"mean_roots_outside_unit": float(a[:, 0].mean()),
            "mean_roots_outside_half": float(a[:, 1].mean())}


FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def _fnv1a64(data):
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def witness_checksum(thetas):
    """64-bit FNV-1a over the comma-joined shortest round-trip reprs of the angles."""
    text = ",".join(repr(float(t)) for t in thetas)
    return f"{_fnv1a64(text.encode('ascii')):016x}"


def witness_to_json(w, version=None):
    d = asdict(w)
    d["thetas"] = list(w.thetas)
    d["per_line_counts"] = list(w.per_line_counts)
    out = {"version": version or WITNESS_VERSION, "n": d["n"], "beta": d["beta"],
           "thetas": d["thetas"], "per_line_counts": d["per_line_counts"],
           "total_zeros": d["total_zeros"], "seed": d["seed"],
           "checksum": witness_checksum(w.thetas)}
    return json.dumps(out, indent=1)


def witness_from_json(text):
    d = json.loads(text)
    return Witness(int(d["n"]), int(d["beta"]), tuple(float(t) for t in d["thetas"]),
                   int(d["total_zeros"]), tuple(int(c) for c in d["per_line_counts"]),
                   int(d["seed"])), d.get("checksum")


def verify_witness(text):
    """Recount a persisted witness from its angles alone.

    Returns ``(ok, messages, recount)``; ``ok`` is false on checksum
    mismatch, malformed fields or any disagreement with the stored counts.
    """
    msgs = []
    try:
        w, checksum = witness_from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        return False, [f"malformed witness: {exc}"], None
    if len(w.thetas) != w.n:
        msgs.append(f"expected {w.n} angles, found {len(w.thetas)}")
    if w.beta not in (1, -1):
        msgs.append(f"beta must be +-1, found {w.beta}")
    if checksum != witness_checksum(w.thetas):
        msgs.append("checksum mismatch")
    if msgs:
        return False, msgs, None
    try:
        counts = _line_counts(w.thetas, w.beta)
    except BoundaryAmbiguity as exc:
        return False, [f"recount ambiguous: {exc}"], None
    if tuple(counts) != w.per_line_counts:
        msgs.append(f"per-line counts differ: stored {list(w.per_line_counts)}, "
                    f"recounted {list(counts)}")
    if sum(counts) != w.total_zeros:
        msgs.append(f"total differs: stored {w.total_zeros}, recounted {sum(counts)}")
    return not msgs, msgs, sum(counts)
