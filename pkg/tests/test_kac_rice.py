import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmonic_kac.errors import DomainError
from harmonic_kac.kac_rice import (VarianceProfile, analytic_density, closed_form_sums,
                                   expected_zeros_annulus, fit_expansion, fn_upper_bound,
                                   integrand_general, integrand_iid_equal,
                                   intensity_profile, interior_limit_intensity,
                                   limit_constant_exterior, limit_constant_interior,
                                   partition_breakpoints, partition_report, power_sums)
from harmonic_kac.quadrature import integrate

from oracles import brute_sums

mp.mp.dps = 50


def mp_density(alphas, betas, w):
    """Textbook radial density evaluated in 50-digit arithmetic."""
    w = mp.mpf(w)

    def sums(v):
        a = mp.fsum(mp.mpf(x) * w ** j for j, x in enumerate(v))
        b = mp.fsum(j * mp.mpf(x) * w ** j for j, x in enumerate(v))
        c = mp.fsum(j * j * mp.mpf(x) * w ** j for j, x in enumerate(v))
        return a, b, c

    ap, bp, cp = sums(alphas)
    aq, bq, cq = sums(betas)
    r3 = ap + aq
    r12 = bp * bq
    r1 = r3 * cp - bp ** 2
    r2 = r3 * cq - bq ** 2
    num = r1 ** 2 + r2 ** 2 - 2 * r12 ** 2
    return num / (w * r3 ** 2 * mp.sqrt((r1 + r2) ** 2 - 4 * r12 ** 2))


def test_power_sums_vs_brute():
    rng = np.random.default_rng(0)
    al = rng.uniform(0.1, 3, 12)
    for w in (0.3, 1.0, 2.7):
        ps = power_sums(al, w)
        a, b, c = brute_sums(al, w)
        assert ps.a == pytest.approx(a, rel=1e-13)
        assert ps.b == pytest.approx(b, rel=1e-13)
        assert ps.c == pytest.approx(c, rel=1e-13)
        assert ps.a * ps.spread == pytest.approx(a * c - b * b, rel=1e-10)
    with pytest.raises(OverflowError):
        power_sums(np.ones(2000), 2.0)


@pytest.mark.parametrize("n", [1, 4, 13])
@pytest.mark.parametrize("w", [0.2, 0.9, 1.3, 3.0])
def test_closed_form_sums(n, w):
    a, b, c = closed_form_sums(n, w)
    ra, rb, rc = brute_sums(np.ones(n + 1), w)
    assert (a, b, c) == pytest.approx((ra, rb, rc), rel=1e-10)


@pytest.mark.parametrize("n,m", [(1, 0), (1, 1), (3, 2), (6, 6), (9, 4)])
def test_general_integrand_vs_mpmath(n, m):
    rng = np.random.default_rng(n * 10 + m)
    al = rng.uniform(0.2, 2, n + 1)
    be = rng.uniform(0.2, 2, m + 1)
    prof = VarianceProfile(al, be)
    for w in (0.05, 0.6, 1.0, 1.7, 9.0):
        want = float(mp_density(al, be, w))
        assert integrand_general(prof, w) == pytest.approx(want, rel=1e-11)


@pytest.mark.parametrize("n", [1, 2, 7, 40])
def test_iid_integrand_two_routes_and_mpmath(n):
    prof = VarianceProfile.kac(n)
    w = np.array([0.01, 0.5, 0.97, 1.0, 1.0 + 1e-9, 1.04, 2.0, 30.0])
    a = integrand_iid_equal(n, w)
    b = integrand_general(prof, w)
    assert np.allclose(a, b, rtol=1e-11)
    for wi, ai in zip(w, a):
        assert ai == pytest.approx(float(mp_density([1] * (n + 1), [1] * (n + 1), wi)), rel=1e-11)


def test_iid_integrand_large_n_finite():
    w = np.array([1e-3, 0.999999, 1.0, 1.000001, 1e3])
    v = integrand_iid_equal(10 ** 6, w)
    assert np.all(np.isfinite(v)) and np.all(v > 0)


def test_literal_form_agrees_where_valid():
    prof = VarianceProfile.kac(5, 3)
    w = np.linspace(0.2, 3, 9)
    assert np.allclose(integrand_general(prof, w, "literal"), integrand_general(prof, w),
                       rtol=1e-9)
    with pytest.raises(ValueError):
        integrand_general(prof, 1.0, form="other")
    with pytest.raises(ValueError):
        integrand_general(prof, 0.0)


def test_literal_form_breaks_down_by_cancellation():
    # large w with n = m: r1, r2 and r12 agree to many digits and the
    # textbook discriminant cancels; the stable form keeps full accuracy
    prof = VarianceProfile.kac(30)
    ones = [1] * 31
    want = float(mp_density(ones, ones, 1e10))
    assert integrand_general(prof, 1e10) == pytest.approx(want, rel=1e-12)
    assert abs(integrand_general(prof, 1e10, "literal") / want - 1) > 1e-6
    assert integrand_general(prof, 1e14) == pytest.approx(float(mp_density(ones, ones, 1e14)),
                                                          rel=1e-12)
    with pytest.raises(DomainError):
        integrand_general(prof, 1e14, "literal")


@pytest.mark.parametrize("n", [1, 2, 5, 17, 50])
def test_m_zero_gives_n(n):
    # p + conj(const): an analytic polynomial shifted by a constant has n zeros
    r = expected_zeros_annulus(VarianceProfile.kac(n, 0))
    assert r.value == pytest.approx(n, rel=1e-7)


def test_linear_case_is_one():
    r = expected_zeros_annulus(VarianceProfile.kac(1, 1))
    assert r.value == pytest.approx(1.0, abs=1e-9)
    assert r.tail_bound > 0


def test_analytic_density_is_log_derivative():
    # (1/4 pi) Laplacian of log a_n(|z|^2), radially: d/dw (w d/dw log a_n)
    n = 6
    for w in (0.3, 0.8, 1.0, 2.5):
        f = lambda t: t * mp.diff(lambda s: mp.log(mp.fsum(s ** j for j in range(n + 1))), t)  # noqa: E731
        want = float(mp.diff(f, w))
        assert analytic_density(n, w) == pytest.approx(want, rel=1e-12)
    # and it integrates to n
    assert integrate(lambda w: analytic_density(n, w), 0, math.inf).value == pytest.approx(n)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 400), st.floats(0.01, 50).filter(lambda w: abs(w - 1) > 1e-3))
def test_fn_below_envelope(n, w):
    assert integrand_iid_equal(n, w) <= fn_upper_bound(n, w) * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(0, 8), st.floats(0.05, 20))
def test_general_integrand_positive(n, m, w):
    m = min(m, n)
    v = integrand_general(VarianceProfile.kac(n, m), w)
    assert v > 0 and math.isfinite(v)


def test_partition_adds_up():
    for n in (30, 100, 1000):
        parts = partition_report(n)
        total = expected_zeros_annulus(VarianceProfile.kac(n)).value
        assert sum(p.value for p in parts) == pytest.approx(total, rel=1e-8)
    inner, mid, outer = partition_report(30)
    assert mid.value < 0  # the two radii cross at small n
    bp = partition_breakpoints(100)
    assert bp == sorted(bp) and 1.0 in bp


def test_kostlan_constant():
    # E N / n^1.5 decreases to pi / 4 (not into the wider (0.8, 1.2) band)
    from harmonic_kac.ensembles import EnsembleSpec, variance_profile
    vals = [expected_zeros_annulus(variance_profile(EnsembleSpec("kostlan", n))).value
            / n ** 1.5 for n in (50, 200, 800)]
    assert vals[0] > vals[1] > vals[2] > math.pi / 4
    assert vals[2] - math.pi / 4 < 0.25 * (vals[0] - math.pi / 4)


def test_limit_constants():
    assert limit_constant_exterior(1.5, 2.0) == pytest.approx(0.5 * math.log(5 / 3), rel=1e-14)
    assert limit_constant_exterior(2.0, math.inf) == pytest.approx(0.5 * math.log(3))
    # interior: integral of the limit intensity over the disk of radius 1/2
    want = mp.quad(lambda r: 2 * mp.pi * r * mp.sqrt(1 + r * r) / (1 - r * r) ** 2
                   / (2 * mp.pi), [0, 0.5])
    assert limit_constant_interior(0, 0.5) == pytest.approx(float(want), rel=1e-12)
    assert interior_limit_intensity(0.0) == pytest.approx(1 / (2 * math.pi))
    with pytest.raises(ValueError):
        limit_constant_interior(0.5, 1.2)


def test_intensity_profile_shape():
    rows = intensity_profile(30, 30, [0.8, 0.95, 1.05, 1.2])
    d = [r["difference"] for r in rows]
    assert d[0] < 0 and d[1] < 0 and d[2] > 0
    for r in rows:
        assert r["difference"] == pytest.approx(r["harmonic_intensity"] - r["analytic_intensity"])


def test_fit_expansion_recovers_exact_model():
    ns = np.array([1e2, 1e3, 1e4, 1e5])
    t = 0.5 * ns * np.log(ns) + 0.3 * ns * np.log(np.log(ns)) - 0.2 * ns
    a, b, c = fit_expansion(ns, t)
    assert (a, b, c) == pytest.approx((0.5, 0.3, -0.2), abs=1e-9)


def test_profile_validation():
    with pytest.raises(ValueError):
        VarianceProfile((1.0,), (1.0, 1.0))
    with pytest.raises(ValueError):
        VarianceProfile((1.0, -1.0), (1.0,))
    with pytest.raises(ValueError):
        VarianceProfile((1.0, 0.0), (1.0,))
    p = VarianceProfile.from_logs([0.0, -800.0], [0.0])
    assert p.alphas[1] == 0.0 and p.log_alphas[1] == -800.0
    assert VarianceProfile.kac(3).is_iid_equal and not VarianceProfile.kac(3, 2).is_iid_equal
