import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmonic_kac.cpoly import (ComplexPolynomial, cauchy_bound, derivative, det_lu, evaluate,
                                interpolate_dft, roots_aberth, sylvester_matrix,
                                sylvester_resultant_at)
from harmonic_kac.errors import DegenerateLeadingCoefficient

cplx = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def test_arithmetic_matches_numpy():
    a = ComplexPolynomial([1, 2j, -3])
    b = ComplexPolynomial([0.5, 1 - 1j])
    assert (a + b) == ComplexPolynomial([1.5, 1 + 1j, -3])
    assert (a - a).is_zero()
    prod = np.convolve(a.coeffs, b.coeffs)
    assert np.allclose((a * b).coeffs, prod)
    assert derivative(a) == ComplexPolynomial([2j, -6])
    assert a.degree == 2 and len(a) == 3


def test_canonical_strips_trailing_zeros():
    p = ComplexPolynomial([1, 2, 0, 0])
    assert p.canonical().degree == 1
    assert ComplexPolynomial([0, 0]).canonical().degree == -1


@given(st.lists(cplx, min_size=1, max_size=12), cplx)
def test_horner_matches_polyval(c, z):
    got = evaluate(c, z)
    want = np.polyval(np.array(c[::-1], dtype=complex), z)
    scale = sum(abs(x) * max(1.0, abs(z)) ** k for k, x in enumerate(c))
    assert abs(got - want) <= 1e-12 * max(scale, 1.0)


def test_cauchy_bound_contains_roots():
    rng = np.random.default_rng(1)
    c = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    assert np.all(np.abs(np.roots(c[::-1])) <= cauchy_bound(c) + 1e-12)


@pytest.mark.parametrize("deg", [1, 2, 5, 17, 60])
def test_roots_aberth_vs_numpy(deg):
    rng = np.random.default_rng(deg)
    c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
    got = np.sort_complex(roots_aberth(c))
    want = np.sort_complex(np.roots(c[::-1]))
    # match each numpy root to its nearest Aberth root
    d = np.abs(got[:, None] - want[None, :]).min(axis=0)
    assert np.max(d) < 1e-8


def test_roots_aberth_leading_zero_roots_and_starts():
    c = [0, 0, 2, 1]   # z^2 (z + 2)
    r = np.sort_complex(roots_aberth(c))
    assert np.allclose(r, [-2, 0, 0])
    r2 = roots_aberth([1, 0, 0, 0, 1], start="cauchy")
    assert np.allclose(np.abs(r2), 1)
    with pytest.raises(ValueError):
        roots_aberth([3])


@settings(max_examples=60, deadline=None)
@given(st.lists(cplx.filter(lambda z: abs(z) > 0.1), min_size=1, max_size=8))
def test_roots_small_backward_error(roots):
    # multiple roots are ill-conditioned, so check |p(r)| relative to the
    # coefficient scale rather than distances to the true roots
    c = np.poly(np.array(roots))[::-1]
    r = roots_aberth(c)
    assert r.shape[0] == len(roots)
    for z in r:
        scale = np.sum(np.abs(c) * np.abs(z) ** np.arange(c.shape[0]))
        assert abs(evaluate(c, z)) <= 1e-9 * scale


def test_det_lu_vs_numpy():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
    assert abs(det_lu(m) - np.linalg.det(m)) < 1e-10 * abs(np.linalg.det(m))
    assert det_lu(np.zeros((0, 0))) == 1


def test_sylvester_resultant_is_product_over_roots():
    f = np.array([2, -3, 1], dtype=complex)   # (w-1)(w-2)
    g = np.array([-3, 1], dtype=complex)      # w - 3
    # Res(f, g) = lc(f)^deg g * prod g(roots of f) = (1-3)(2-3) = 2
    assert abs(det_lu(sylvester_matrix(f, g)) - 2) < 1e-12
    fz = [[2], [-3], [1]]
    gz = [[0, -1], [1]]                        # w - z
    assert abs(sylvester_resultant_at(fz, gz, 3.0) - 2) < 1e-12
    with pytest.raises(DegenerateLeadingCoefficient):
        sylvester_resultant_at(fz, [[1], [0, 1]], 0.0)


def test_interpolate_dft_recovers_coefficients():
    c = np.array([1, -2j, 0.5, 3 + 1j])
    N = 8
    pts = 1.2 * np.exp(2j * np.pi * np.arange(N) / N)
    got = interpolate_dft(evaluate(c, pts)).coeffs
    assert np.allclose(got[:4], c) and np.allclose(got[4:], 0, atol=1e-12)
