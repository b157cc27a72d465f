"""Expected and actual zero counts of random harmonic polynomials p(z) + conj(q(z))."""
__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: E402
from .cpoly import ComplexPolynomial, roots_aberth  # noqa: E402
from .kac_rice import (VarianceProfile, expected_zeros_annulus,  # noqa: E402
                       integrand_general, integrand_iid_equal)
from .harmonic_solver import HarmonicPolynomial, find_zeros  # noqa: E402

__all__ = [
    "__version__",
    "BACKEND",
    "ComplexPolynomial",
    "roots_aberth",
    "VarianceProfile",
    "expected_zeros_annulus",
    "integrand_general",
    "integrand_iid_equal",
    "HarmonicPolynomial",
    "find_zeros",
]
