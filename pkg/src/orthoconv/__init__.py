"""Convolution identities for Askey-scheme polynomials.

Modules: ``numerics`` (special functions and hypergeometric sums),
``polynomials`` (the families), ``spectral`` (Jacobi operators and Gauss
rules), ``coupling`` (Clebsch-Gordan, Racah and linearisation
coefficients), ``verify`` (the identity catalog) and ``cli``.
"""

__version__ = "0.1.0"

from .polynomials import evaluate, orthonormal_eval, recurrence  # noqa: E402
from .verify import SampleConfig, list_identities, verify  # noqa: E402

__all__ = ["__version__", "evaluate", "orthonormal_eval", "recurrence", "SampleConfig", "list_identities", "verify"]
