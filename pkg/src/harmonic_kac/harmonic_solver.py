"""Zeros of concrete harmonic polynomials H(z) = p(z) + conj(q(z)).

Candidates come from eliminating the conjugate variable: with w standing
for conj(z), the zeros of H are the solutions with w = conj(z) of

    f(z, w) = p(z) + q~(w) = 0,    g(z, w) = p~(w) + q(z) = 0,

where ~ conjugates coefficients. The resultant Res_w(f, g) is a polynomial
in z of degree at most n^2; it is sampled on a circle, interpolated by FFT
and its roots are polished by Newton's method on H itself. Spurious roots
(solutions with w != conj(z)) fail to converge and are dropped. The signed
count of the survivors is checked against the winding number of H on a
large circle.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .cpoly import ComplexPolynomial, derivative, evaluate, roots_aberth
from .errors import (DegenerateLeadingCoefficient, DegenerateZero, NonConvergence,
                     PhaseStepTooLarge, UnboundedZeroSet, ValidationFailed)

__all__ = [
    "HarmonicPolynomial",
    "ZeroRecord",
    "ZeroSet",
    "find_zeros",
    "winding_number",
    "root_bound",
    "resultant_candidates",
]

RELIABLE_DEGREE = 12


class HarmonicPolynomial:
    """``H(z) = p(z) + conj(q(z))`` with deg p = n >= 1 and deg q = m <= n."""

    def __init__(self, p, q=()):
        p = ComplexPolynomial(p.coeffs if isinstance(p, ComplexPolynomial) else p).canonical()
        q = ComplexPolynomial(q.coeffs if isinstance(q, ComplexPolynomial) else q).canonical()
        if len(q) == 0:
            q = ComplexPolynomial([0.0])
        if p.degree < 1:
            raise ValueError("p must have degree >= 1")
        if q.degree > p.degree:
            raise ValueError("need deg q <= deg p")
        self.p, self.q = p, q
        self.dp, self.dq = derivative(p), derivative(q)

    @property
    def n(self):
        return self.p.degree

    @property
    def m(self):
        return self.q.degree

    def __call__(self, z):
        return evaluate(self.p, z) + np.conj(evaluate(self.q, z))

    def jacobian(self, z):
        """``|p'(z)|^2 - |q'(z)|^2``."""
        return np.abs(evaluate(self.dp, z)) ** 2 - np.abs(evaluate(self.dq, z)) ** 2

    def scale(self, z):
        """``sum |p_k| |z|^k + sum |q_k| |z|^k``, the natural size of H at z."""
        r = np.abs(np.asarray(z))
        return (evaluate(np.abs(self.p.coeffs), r).real
                + evaluate(np.abs(self.q.coeffs), r).real)

    def __repr__(self):
        return f"HarmonicPolynomial(p={self.p.coeffs.tolist()}, q={self.q.coeffs.tolist()})"


@dataclass(frozen=True)
class ZeroRecord:
    location: complex
    orientation: int
    residual: float


@dataclass
class ZeroSet:
    records: list
    validated: bool
    winding: int = 0
    degenerate: list = field(default_factory=list)

    @property
    def n_plus(self):
        return sum(1 for r in self.records if r.orientation > 0)

    @property
    def n_minus(self):
        return sum(1 for r in self.records if r.orientation < 0)

    @property
    def total(self):
        return len(self.records)

    @property
    def locations(self):
        return np.array([r.location for r in self.records], dtype=np.complex128)

    def count_in(self, a, b):
        """Zeros with ``a < |z|^2 < b``; ``a <= 0`` includes the origin."""
        w = np.abs(self.locations) ** 2
        low = (w > a) if a > 0 else np.ones(w.shape, bool)
        return int(np.count_nonzero(low & (w < b)))


def root_bound(H):
    """Radius R >= 1 such that every zero of H lies in |z| < R.

    Uses |H| >= |lead| R^N - sum_{k<N} (|p_k| + |q_k|) R^k on |z| = R,
    where N = n and lead is the top coefficient of p (or the difference of
    the top moduli when the degrees agree).
    """
    n, m = H.n, H.m
    pc, qc = np.abs(H.p.coeffs), np.abs(H.q.coeffs)
    if n == m:
        lead = abs(pc[n] - qc[n])
        if lead <= 1e-12 * max(pc[n], qc[n]):
            raise UnboundedZeroSet("equal degrees with equal leading moduli")
    else:
        lead = pc[n]
    low = pc[:n].copy()
    low[: min(m + 1, n)] += qc[: min(m + 1, n)]

    def ok(r):
        # divide through by r^n to keep everything bounded
        k = np.arange(n)
        return lead > float(np.sum(low * r ** (k - n)))

    if ok(1.0):
        return 1.0
    hi = 2.0
    while not ok(hi):
        hi *= 2.0
    lo = hi / 2.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def winding_number(H, radius, samples=None, retries=3):
    """Winding number of ``H`` around 0 along ``|z| = radius``.

    Accumulates unwrapped phase increments; if any single step exceeds
    pi/2 the sampling is doubled, at most ``retries`` times.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    samples = max(64 * H.n, 256) if samples is None else int(samples)
    for _ in range(retries + 1):
        th = 2 * np.pi * np.arange(samples + 1) / samples
        v = H(radius * np.exp(1j * th))
        if np.any(v == 0):
            raise PhaseStepTooLarge(f"H vanishes on the contour |z| = {radius}")
        steps = np.angle(v[1:] / v[:-1])
        if np.max(np.abs(steps)) <= np.pi / 2:
            return int(round(float(np.sum(steps)) / (2 * np.pi)))
        samples *= 2
    raise PhaseStepTooLarge(f"phase step above pi/2 at radius {radius} after {retries} retries")


def _w_coefficients(H):
    """Coefficients in w of f and g, each a list of polynomials in z."""
    p, q = H.p.coeffs, H.q.coeffs
    f = [ComplexPolynomial(p + np.r_[np.conj(q[0]), np.zeros(len(p) - 1)])]
    f += [ComplexPolynomial([np.conj(c)]) for c in q[1:]]
    g = [ComplexPolynomial(q + np.r_[np.conj(p[0]), np.zeros(len(q) - 1)])]
    g += [ComplexPolynomial([np.conj(c)]) for c in p[1:]]
    return f, g


def _sylvester_det(fv, gv):
    m, n = fv.shape[0] - 1, gv.shape[0] - 1
    d = m + n
    s = np.zeros((d, d), dtype=np.complex128)
    fr, gr = fv[::-1], gv[::-1]
    for i in range(n):
        s[i, i: i + m + 1] = fr
    for i in range(m):
        s[n + i, i: i + n + 1] = gr
    return kernels.det_lu(s)


def resultant_candidates(H, radius, trim=1e-12):
    """Roots of Res_w(f, g)(z), interpolated from samples on ``|z| = radius``.

    The resultant is sampled at ``N = n^2 + n + 1`` points, normalised by
    its largest sample and interpolated in the scaled variable u = z/radius;
    trailing scaled coefficients below ``trim`` times the largest are
    dropped before root finding.
    """
    n = H.n
    N = n * n + n + 1
    f, g = _w_coefficients(H)
    zs = radius * np.exp(2j * np.pi * np.arange(N) / N)
    fconst = np.array([c.coeffs[0] for c in f[1:]], dtype=np.complex128)
    gconst = np.array([c.coeffs[0] for c in g[1:]], dtype=np.complex128)
    if abs(fconst[-1]) <= 1e-14 or abs(gconst[-1]) <= 1e-14:
        raise DegenerateLeadingCoefficient("leading w-coefficient vanishes")
    f0 = evaluate(f[0], zs)
    g0 = evaluate(g[0], zs)
    vals = np.empty(N, dtype=np.complex128)
    for i in range(N):
        vals[i] = _sylvester_det(np.r_[f0[i], fconst], np.r_[g0[i], gconst])
    top = np.max(np.abs(vals))
    if not top > 0:
        raise UnboundedZeroSet("resultant vanishes identically: zero set is not isolated")
    vals /= top
    d = np.fft.fft(vals) / N
    big = np.max(np.abs(d))
    keep = np.flatnonzero(np.abs(d) > trim * big)
    d = d[: keep[-1] + 1]
    if d.shape[0] < 2:
        return np.empty(0, dtype=np.complex128)
    return radius * roots_aberth(d, max_iter=1000, tol=1e-13)


def _ratio(h, s):
    h = np.abs(h)
    out = np.full(h.shape, np.inf)
    np.divide(h, s, out=out, where=s > 0)
    return np.where(h == 0, 0.0, out)


def _newton(H, z, iters, tol):
    """Damped Newton on the real 2-D system; returns (z, residual_ratio)."""
    z = np.array(z, dtype=np.complex128)
    h = H(z)
    res = _ratio(h, H.scale(z))
    for _ in range(iters):
        live = res > tol * 1e-3
        if not live.any():
            break
        zl, hl = z[live], h[live]
        a = evaluate(H.dp, zl)
        b = np.conj(evaluate(H.dq, zl))
        jac = np.abs(a) ** 2 - np.abs(b) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            step = (-np.conj(a) * hl + b * np.conj(hl)) / jac
        step = np.where(np.isfinite(step), step, 0.0)
        cur = np.abs(hl)
        t = np.ones(zl.shape[0])
        znew, hnew = zl + step, H(zl + step)
        for _ in range(8):
            worse = ~(np.abs(hnew) < cur) & (t > 1e-3)
            if not worse.any():
                break
            t[worse] *= 0.5
            znew[worse] = zl[worse] + t[worse] * step[worse]
            hnew[worse] = H(znew[worse])
        better = np.abs(hnew) < cur
        zl = np.where(better, znew, zl)
        hl = np.where(better, hnew, hl)
        z[live], h[live] = zl, hl
        newres = _ratio(hl, H.scale(zl))
        stalled = ~better
        res_l = res[live]
        res_l = np.where(stalled, res_l, newres)
        res[live] = res_l
        if stalled.all():
            break
    return z, res


def _dedupe(z, res, radius):
    order = np.argsort(res, kind="stable")
    kept = []
    for i in order:
        zi = z[i]
        if all(abs(zi - z[j]) > radius * max(1.0, abs(zi)) for j in kept):
            kept.append(i)
    return np.array(sorted(kept), dtype=np.intp)


def find_zeros(H, dedupe_radius=1e-7, residual_tol=1e-8, newton_iters=50, radii=None,
               quiet=False):
    """All zeros of ``H`` with orientation and an argument-principle check.

    ``radii`` lists the sampling radii for the resultant (default: the unit
    circle and 1.2 times the root bound); candidates from every radius are
    pooled before polishing. If the signed count disagrees with the
    winding number, additional radii are tried before the set is returned
    with ``validated=False`` and a ``ValidationFailed`` warning
    (suppressed by ``quiet``, which Monte Carlo workers use because warning
    filters are process-global).
    """
    if H.n > RELIABLE_DEGREE and not quiet:
        warnings.warn(f"degree {H.n} exceeds {RELIABLE_DEGREE}; resultant path may be inaccurate",
                      RuntimeWarning, stacklevel=2)
    if H.n == H.m:
        c = H.q.coeffs[-1] / H.p.coeffs[-1]
        if (abs(abs(c) - 1.0) <= 1e-12
                and np.linalg.norm(H.q.coeffs - c * H.p.coeffs) <= 1e-12 * np.linalg.norm(H.p.coeffs)):
            raise UnboundedZeroSet("q is a unimodular multiple of p: the zero set is a curve")
    try:
        R = root_bound(H)
    except UnboundedZeroSet:
        # equal leading moduli: no a priori bound, so the contour is placed
        # outside every zero found and only that region is certified
        R = None
    if R is not None:
        # nearly equal leading moduli make the phase turn quickly on the contour
        fixed_wind = winding_number(H, 2.0 * R + 1.0, retries=14)
    if H.m == 0:
        base, extra = [None], []
    else:
        Rs = 2.0 if R is None else R
        base = list(radii) if radii is not None else [1.0, 1.2 * Rs]
        extra = [0.5, math.sqrt(Rs), 0.6 * Rs, 2.5 * Rs, 0.25, 8.0 * Rs]
    cands = []
    zs, wind = None, 0
    for rads in [base] + [[r] for r in extra]:
        for rad in rads:
            try:
                if rad is None:
                    c0 = H.p.coeffs.copy()
                    c0[0] += np.conj(H.q.coeffs[0])
                    cands.append(roots_aberth(c0))
                else:
                    cands.append(resultant_candidates(H, rad))
            except (NonConvergence, DegenerateLeadingCoefficient):
                continue
        if not cands:
            continue
        zs = _polish(H, np.concatenate(cands), dedupe_radius, residual_tol, newton_iters)
        if R is None:
            far = float(np.max(np.abs(zs.z))) if zs.z.size else 0.0
            try:
                wind = winding_number(H, 2.0 * max(far, 1.0) + 1.0, retries=14)
            except PhaseStepTooLarge as exc:
                raise UnboundedZeroSet(
                    "H vanishes near a contour outside all isolated zeros; "
                    "the zero set is likely a curve") from exc
        else:
            wind = fixed_wind
        if zs.validated_against(wind):
            break
    if zs is None:
        zs = _Polished(np.empty(0, complex), np.empty(0), np.empty(0), np.empty(0, bool))
        wind = fixed_wind if R is not None else 0
    records = [ZeroRecord(complex(z), int(np.sign(j)), float(r))
               for z, j, r, dg in zip(zs.z, zs.jac, zs.res, zs.degenerate) if not dg]
    degenerate = [ZeroRecord(complex(z), 0, float(r))
                  for z, r, dg in zip(zs.z, zs.res, zs.degenerate) if dg]
    if degenerate and not quiet:
        warnings.warn(f"{len(degenerate)} degenerate zero(s) excluded", DegenerateZero, stacklevel=2)
    out = ZeroSet(records, zs.validated_against(wind), wind, degenerate)
    if not out.validated and not quiet:
        warnings.warn(f"signed count {out.n_plus - out.n_minus} != winding {wind}",
                      ValidationFailed, stacklevel=2)
    return out


@dataclass
class _Polished:
    z: np.ndarray
    res: np.ndarray
    jac: np.ndarray
    degenerate: np.ndarray

    def validated_against(self, wind):
        good = ~self.degenerate
        signed = int(np.sum(np.sign(self.jac[good])))
        return signed == wind and not self.degenerate.any()


def _step_size(H, z):
    a = evaluate(H.dp, z)
    b = np.conj(evaluate(H.dq, z))
    h = H(z)
    jac = np.abs(a) ** 2 - np.abs(b) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        st = np.abs((-np.conj(a) * h + b * np.conj(h)) / jac)
    return np.where(h == 0, 0.0, np.where(np.isfinite(st), st, np.inf))


def _polish(H, cand, dedupe_radius, residual_tol, newton_iters):
    cand = cand[np.isfinite(cand)]
    z, res = _newton(H, cand, newton_iters, residual_tol)
    ok = res <= residual_tol
    z, res = z[ok], res[ok]
    r = np.abs(z)
    jac = H.jacobian(z)
    jscale = (evaluate(np.abs(H.dp.coeffs), r).real
              + evaluate(np.abs(H.dq.coeffs), r).real) ** 2
    # a simple zero has converged quadratically, so one more Newton step is
    # negligible; near a singular zero Newton stalls and leaves a cloud
    simple = ((_step_size(H, z) <= dedupe_radius * np.maximum(1.0, r))
              & (np.abs(jac) >= 1e-10 * np.maximum(jscale, 1e-300)))
    kd = np.flatnonzero(~simple)
    # members of a singular cluster can pass the test individually
    if kd.size:
        near = np.abs(z[:, None] - z[None, kd]).min(axis=1) <= 1e-3 * np.maximum(1.0, r)
        simple &= ~near
    ks = np.flatnonzero(simple)
    ks = ks[_dedupe(z[ks], res[ks], dedupe_radius)]
    kd = kd[_dedupe(z[kd], res[kd], 1e-3)]
    keep = np.r_[ks, kd]
    degenerate = np.r_[np.zeros(ks.shape[0], bool), np.ones(kd.shape[0], bool)]
    return _Polished(z[keep], res[keep], jac[keep], degenerate)
