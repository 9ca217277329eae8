"""Classical and basic hypergeometric orthogonal polynomials.

Two layers live here. Plain functions (``meixner_pollaczek``, ``askey_wilson``,
...) evaluate a polynomial from its series definition for arbitrary, possibly
complex, parameters; the identity checks call these directly because their
parameters change from point to point. On top of them sit small immutable
family values (``MeixnerPollaczek``, ``AskeyWilson``, ...) that validate their
parameter domains and feed the generic ``evaluate``, ``orthonormal_eval``,
``recurrence`` and ``weight`` operations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .numerics import (
    NumericsError,
    hyp,
    hyp43_balanced_stable,
    kahan_sum,
    log_gamma,
    pochhammer,
    q_binomial,
    q_pochhammer,
    q_pochhammer_product,
    qphi,
    qphi32_stable,
    qphi43_balanced_stable,
)

__all__ = [
    "DomainError",
    "RealificationError",
    "UnsupportedFamilyError",
    "ArgumentMap",
    "argument",
    "mu",
    "meixner_pollaczek",
    "continuous_hahn",
    "hahn",
    "hahn_scaled",
    "jacobi",
    "jacobi_homogeneous",
    "laguerre",
    "meixner",
    "krawtchouk",
    "krawtchouk_scaled",
    "charlier",
    "hermite",
    "racah",
    "askey_wilson",
    "askey_wilson_series",
    "al_salam_chihara",
    "q_hahn",
    "q_hahn_at",
    "q_racah",
    "q_racah_at",
    "dual_q_krawtchouk",
    "dual_q_krawtchouk_at",
    "MeixnerPollaczek",
    "ContinuousHahn",
    "Hahn",
    "Jacobi",
    "Laguerre",
    "Meixner",
    "Krawtchouk",
    "Charlier",
    "Hermite",
    "Racah",
    "AskeyWilson",
    "AlSalamChihara",
    "QHahn",
    "QRacah",
    "DualQKrawtchouk",
    "Family",
    "evaluate",
    "orthonormal_eval",
    "norm_squared",
    "recurrence",
    "weight",
    "AskeyWilsonWeight",
]

REAL_TOL = 1e-10


class DomainError(ValueError):
    """Parameters or arguments outside the domain of a family."""


class RealificationError(NumericsError):
    """A value that must be real came out with a sizeable imaginary part."""


class UnsupportedFamilyError(ValueError):
    """The requested operation is not provided for this family."""


# ---------------------------------------------------------------------------
# argument maps


def mu(w: complex) -> complex:
    """mu(w) = (w + 1/w) / 2."""
    if w == 0:
        raise DomainError("mu: argument must be nonzero")
    return (w + 1.0 / w) / 2.0


@dataclass(frozen=True)
class ArgumentMap:
    """Map from a polynomial's natural argument to a spectral variable.

    kinds: ``identity``; ``affine`` (y = scale*x + shift); ``mu``;
    ``racah_lambda`` (gamma, delta); ``qracah_nu`` (gamma, delta, q);
    ``dualqk`` (a, N, q, optional scale and shift applied afterwards).
    """

    kind: str
    params: tuple[tuple[str, float], ...] = ()
    description: str = ""

    _KINDS = ("identity", "affine", "mu", "racah_lambda", "qracah_nu", "dualqk")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise DomainError(f"unknown argument map kind {self.kind!r}")

    @classmethod
    def make(cls, kind: str, description: str = "", **params) -> "ArgumentMap":
        return cls(kind, tuple(sorted(params.items())), description)

    def param(self, name: str):
        return dict(self.params)[name]

    def __call__(self, x):
        return argument(self, x)


def argument(amap: ArgumentMap, x):
    """Apply an argument map."""
    p = dict(amap.params)
    if amap.kind == "identity":
        return x
    if amap.kind == "affine":
        return p["scale"] * x + p["shift"]
    if amap.kind == "mu":
        return mu(x)
    if amap.kind == "racah_lambda":
        return x * (x + p["gamma"] + p["delta"] + 1.0)
    if amap.kind == "qracah_nu":
        q = p["q"]
        return q ** (-x) + p["gamma"] * p["delta"] * q ** (x + 1.0)
    if amap.kind == "dualqk":
        q = p["q"]
        y = q ** (-x) - q ** (x - p["N"]) / p["a"]
        return p.get("scale", 1.0) * y + p.get("shift", 0.0)
    raise DomainError(f"unknown argument map kind {amap.kind!r}")


# ---------------------------------------------------------------------------
# series-level evaluators


def _fact(n: int) -> float:
    return float(math.factorial(n))


def meixner_pollaczek(n: int, lam: complex, phi: float, x: complex, *, method: str = "recurrence") -> complex:
    """P_n^(lam)(x; phi) = (2 lam)_n / n! e^{i n phi} 2F1(-n, lam+ix; 2 lam; 1 - e^{-2i phi}).

    The 2F1 has |z| = 2 sin(phi) and cancels badly at moderate degree, so by
    default the value comes from
    (n+1) P_{n+1} = 2 (x sin(phi) + (n+lam) cos(phi)) P_n - (n+2lam-1) P_{n-1}.
    ``method="series"`` sums the 2F1.
    """
    if method == "recurrence":
        s, c = math.sin(phi), math.cos(phi)
        prev, cur = 0.0, 1.0 + 0j
        for m in range(n):
            prev, cur = cur, (2 * (x * s + (m + lam) * c) * cur - (m + 2 * lam - 1) * prev) / (m + 1)
        return cur
    if method != "series":
        raise ValueError(f"unknown method {method!r}")
    z = 1.0 - cmath.exp(-2j * phi)
    series = hyp((-n, lam + 1j * x), (2 * lam,), z, n)
    return pochhammer(2 * lam, n) / _fact(n) * cmath.exp(1j * n * phi) * series


def _balanced_recurrence(n: int, lam: complex, A: Callable, C: Callable) -> Optional[complex]:
    # y_0 = 1 and lam y_m = A_m y_{m+1} - (A_m + C_m) y_m + C_m y_{m-1};
    # None when some A_m vanishes and the recurrence cannot be run forward
    prev, cur = 0.0, 1.0 + 0j
    for m in range(n):
        a_m = A(m)
        if a_m == 0:
            return None
        c_m = C(m) if m else 0.0
        prev, cur = cur, ((lam + a_m + c_m) * cur - c_m * prev) / a_m
    return cur


def _check_method(method: str):
    if method not in ("recurrence", "series"):
        raise ValueError(f"unknown method {method!r}")


def continuous_hahn(
    n: int, x: complex, a: complex, b: complex, c: complex, d: complex, *, method: str = "recurrence"
) -> complex:
    """p_n(x; a,b,c,d) = i^n (a+c)_n (a+d)_n / n! 3F2(-n, n+a+b+c+d-1, a+ix; a+c, a+d; 1).

    The 3F2 factor comes from its three-term recurrence in n unless
    ``method="series"``; the terms of the 3F2 itself cancel heavily.
    """
    _check_method(method)
    s = a + b + c + d
    value = None
    if method == "recurrence":
        value = _balanced_recurrence(
            n,
            a + 1j * x,
            lambda m: -(m + s - 1) * (m + a + c) * (m + a + d) / ((2 * m + s - 1) * (2 * m + s)),
            lambda m: m * (m + b + c - 1) * (m + b + d - 1) / ((2 * m + s - 2) * (2 * m + s - 1)),
        )
    if value is None:
        value = hyp((-n, n + s - 1, a + 1j * x), (a + c, a + d), 1.0, n)
    return (1j) ** n * pochhammer(a + c, n) * pochhammer(a + d, n) / _fact(n) * value


def hahn(n: int, x: complex, a: complex, b: complex, N: complex, *, method: str = "recurrence") -> complex:
    """Q_n(x; a, b, N) = 3F2(-n, n+a+b+1, -x; a+1, -N; 1).

    N need not be an integer here; the identity checks use it with a
    continuous upper parameter. The default runs the recurrence in n and
    falls back to the series where a recurrence coefficient vanishes.
    """
    _check_method(method)
    if method == "recurrence" and _is_nonneg_int(x) and x < n:
        # (-x)_k stops the series after x + 1 terms, fewer than the recurrence steps
        method = "series"
    if method == "recurrence":
        s = a + b
        value = _balanced_recurrence(
            n,
            -x,
            lambda m: (m + s + 1) * (m + a + 1) * (N - m) / ((2 * m + s + 1) * (2 * m + s + 2)),
            lambda m: m * (m + s + N + 1) * (m + b) / ((2 * m + s) * (2 * m + s + 1)),
        )
        if value is not None:
            return value
    return hyp((-n, n + a + b + 1, -x), (a + 1, -N), 1.0, n)


def _hahn_scaled_terms(n, x, a, b, N):
    terms = []
    t = 1.0 + 0j
    for k in range(n + 1):
        terms.append(t * pochhammer(-N + k, n - k))
        if k == n:
            break
        t = t * (-n + k) * (n + a + b + 1 + k) * (-x + k) / ((a + 1 + k) * (k + 1))
    return terms


def hahn_scaled(n: int, x: complex, a: complex, b: complex, N: complex) -> complex:
    """(-N)_n Q_n(x; a, b, N), a polynomial in N without the poles of Q_n.

    Uses (-N)_n / (-N)_k = (-N+k)_{n-k} termwise, and sums whichever of this
    series and its reflection (-1)^n (b+1)_n / (a+1)_n (-N)_n Q_n(N - x; b, a, N)
    has the smaller absolute term sum.
    """
    candidates = [(1.0, _hahn_scaled_terms(n, x, a, b, N))]
    lower = pochhammer(a + 1, n)
    if lower != 0:
        candidates.append(((-1) ** n * pochhammer(b + 1, n) / lower, _hahn_scaled_terms(n, N - x, b, a, N)))
    best, best_size = None, math.inf
    for pre, terms in candidates:
        size = abs(pre) * sum(abs(t) for t in terms)
        if size < best_size:
            best, best_size = pre * kahan_sum(terms), size
    return best


def jacobi(n: int, a: float, b: float, x: complex) -> complex:
    """P_n^(a,b)(x) = (a+1)_n / n! 2F1(-n, n+a+b+1; a+1; (1-x)/2)."""
    return pochhammer(a + 1, n) / _fact(n) * hyp((-n, n + a + b + 1), (a + 1,), (1 - x) / 2, n)


def jacobi_homogeneous(n: int, a: float, b: float, u: complex, v: complex) -> complex:
    """u^n P_n^(a,b)(1 - 2v/u), written as a polynomial in (u, v).

    The Jacobi argument (1-x)/2 becomes v/u, so every term of the 2F1 is
    multiplied out and the expression stays finite at u = 0.
    """
    terms = []
    t = 1.0 + 0j
    for k in range(n + 1):
        terms.append(t * v**k * u ** (n - k))
        if k == n:
            break
        t = t * (-n + k) * (n + a + b + 1 + k) / ((a + 1 + k) * (k + 1))
    return pochhammer(a + 1, n) / _fact(n) * kahan_sum(terms)


def laguerre(n: int, a: float, x: complex) -> complex:
    """L_n^(a)(x) = (a+1)_n / n! 1F1(-n; a+1; x)."""
    return pochhammer(a + 1, n) / _fact(n) * hyp((-n,), (a + 1,), x, n)


def meixner(n: int, x: complex, beta: float, c: float) -> complex:
    """M_n(x; beta, c) = 2F1(-n, -x; beta; 1 - 1/c)."""
    return hyp((-n, -x), (beta,), 1.0 - 1.0 / c, n)


def krawtchouk(n: int, x: complex, p: float, N: complex, *, method: str = "recurrence") -> complex:
    """K_n(x; p, N) = 2F1(-n, -x; -N; 1/p).

    For small p the series terms grow like p^-k. On the integer grid the
    default goes through ``krawtchouk_scaled``; elsewhere it runs the
    recurrence in n. ``method="series"`` sums the 2F1.
    """
    _check_method(method)
    if method == "recurrence" and _is_nonneg_int(x) and _is_nonneg_int(N) and x <= N and n <= N:
        return krawtchouk_scaled(n, x, p, N) / pochhammer(-N, n)
    if method == "recurrence":
        value = _balanced_recurrence(n, -x, lambda m: p * (N - m), lambda m: m * (1 - p))
        if value is not None:
            return value
    return hyp((-n, -x), (-N,), 1.0 / p, n)


def _krawtchouk_scaled_terms(n, x, p, N):
    terms = []
    t = 1.0 + 0j
    for k in range(n + 1):
        terms.append(t * pochhammer(-N + k, n - k))
        if k == n:
            break
        t = t * (-n + k) * (-x + k) / (p * (k + 1))
    return terms


def krawtchouk_scaled(n: int, x: complex, p: float, N: complex) -> complex:
    """(-N)_n K_n(x; p, N), free of the poles in N.

    Uses (-N)_n / (-N)_k = (-N+k)_{n-k} termwise, and sums whichever of this
    series and its reflection (1 - 1/p)^n (-N)_n K_n(N - x; 1 - p, N) has
    the smaller absolute term sum.
    """
    best, best_size = None, math.inf
    for pre, terms in (
        (1.0, _krawtchouk_scaled_terms(n, x, p, N)),
        ((1.0 - 1.0 / p) ** n, _krawtchouk_scaled_terms(n, N - x, 1.0 - p, N)),
    ):
        size = abs(pre) * sum(abs(t) for t in terms)
        if size < best_size:
            best, best_size = pre * kahan_sum(terms), size
    return best


def charlier(n: int, x: complex, a: float) -> complex:
    """C_n(x; a) = 2F0(-n, -x; -; 1/a).

    The argument is +1/a; the familiar textbook normalisation uses -1/a. With
    +1/a the Charlier convolution identity holds with the (-1)^j factor shown
    on its right-hand side.
    """
    return hyp((-n, -x), (), 1.0 / a, n)


def hermite(n: int, x: complex) -> complex:
    """H_n(x) = (2x)^n 2F0(-n/2, -(n-1)/2; -; -x^{-2}).

    Summed in the multiplied-out form 2^n sum_k (-n/2)_k (-(n-1)/2)_k (-1)^k
    x^{n-2k} / k!, which is the same series without the x^{-2} at x = 0.
    """
    terms = []
    t = 1.0 + 0j
    for k in range(n // 2 + 1):
        terms.append(t * x ** (n - 2 * k))
        t = t * (-n / 2 + k) * (-(n - 1) / 2 + k) * (-1.0) / (k + 1)
    return 2.0**n * kahan_sum(terms)


def racah(
    n: int, x: complex, alpha: complex, beta: complex, gamma: complex, delta: complex, *, method: str = "transform"
) -> complex:
    """R_n(lambda(x); alpha, beta, gamma, delta) as a balanced 4F3 at 1.

    By default the 4F3 is summed in the best-conditioned of its Whipple
    rewrites; ``method="series"`` sums it as written.
    """
    if method == "transform":
        return hyp43_balanced_stable(
            n, (n + alpha + beta + 1, -x, x + gamma + delta + 1), (alpha + 1, beta + delta + 1, gamma + 1)
        )
    if method != "series":
        raise ValueError(f"unknown method {method!r}")
    return hyp(
        (-n, n + alpha + beta + 1, -x, x + gamma + delta + 1),
        (alpha + 1, beta + delta + 1, gamma + 1),
        1.0,
        n,
    )


def _z_from_x(x: complex) -> complex:
    # any root of z + 1/z = 2x will do: the polynomials only see z + 1/z
    x = complex(x)
    return x + cmath.sqrt(x * x - 1.0)


def askey_wilson_series(n: int, x: complex, a: complex, b: complex, c: complex, d: complex, q: float) -> complex:
    """p_n(x; a,b,c,d | q) summed from its 4phi3 definition.

    Exact in exact arithmetic, but for small q the terms grow like
    q^{-n(n-1)/2} while the value stays moderate, so beyond low degree the
    recurrence route of ``askey_wilson`` is the one to trust.
    """
    if a == 0:
        raise DomainError("askey_wilson: evaluate with a nonzero first parameter")
    z = _z_from_x(x)
    series = qphi(
        (q ** (-n), a * b * c * d * q ** (n - 1), a * z, a / z),
        (a * b, a * c, a * d),
        q,
        q,
        n,
    )
    return a ** (-n) * q_pochhammer_product((a * b, a * c, a * d), q, n) * series


def _aw_monic_coeffs(n: int, a, b, c, d, q: float):
    """(b_n, u_n) in x P_n = P_{n+1} + b_n P_n + u_n P_{n-1} for monic P_n.

    b_n is written through the elementary symmetric functions of a, b, c, d
    so that no 1/a survives; it is symmetric in the four parameters.
    """
    e1 = a + b + c + d
    e3 = a * b * c + a * b * d + a * c * d + b * c * d
    e4 = a * b * c * d
    if n == 0:
        # the general form has a removable 0/0 at abcd = q^2
        return 0.5 * (e1 - e3) / (1 - e4), 0.0
    t = q**n
    num = q * (e3 + q * e1) - t * (1 + q) * (e1 * e4 + q * e3) + t * t * e4 * (e3 + q * e1)
    diag = 0.5 * t * num / ((q * q - e4 * t * t) * (1 - e4 * t * t))
    s = q ** (n - 1)
    top = (1 - a * b * s) * (1 - a * c * s) * (1 - a * d * s) * (1 - b * c * s) * (1 - b * d * s) * (1 - c * d * s)
    top *= 1 - t
    den = (1 - e4 * s * s) ** 2 * (1 - e4 * s * s * q)
    if n > 1:
        # at n = 1 this pair cancels exactly
        top *= 1 - e4 * s / q
        den *= 1 - e4 * s * s / q
    return diag, 0.25 * top / den


def askey_wilson(
    n: int, x: complex, a: complex, b: complex, c: complex, d: complex, q: float, *, method: str = "recurrence"
) -> complex:
    """p_n(x; a,b,c,d | q), x = cos(theta).

    The default runs the monic three-term recurrence and rescales by the
    leading coefficient 2^n (abcd q^{n-1}; q)_n, which is stable on and off
    the support. ``method="series"`` sums the 4phi3 instead.
    """
    if method == "series":
        return askey_wilson_series(n, x, a, b, c, d, q)
    if method != "recurrence":
        raise ValueError(f"unknown method {method!r}")
    x = complex(x)
    prev, cur = 0.0, 1.0 + 0j
    for m in range(n):
        diag, off = _aw_monic_coeffs(m, a, b, c, d, q)
        prev, cur = cur, (x - diag) * cur - off * prev
    lead = 2.0**n * q_pochhammer(a * b * c * d * q ** (n - 1), q, n)
    return lead * cur


def al_salam_chihara(n: int, x: complex, a: complex, b: complex, q: float, *, method: str = "recurrence") -> complex:
    """s_n(x; a, b | q): Askey-Wilson with c = d = 0."""
    if method == "series":
        if a == 0:
            raise DomainError("al_salam_chihara: evaluate with a nonzero first parameter")
        z = _z_from_x(x)
        series = qphi((q ** (-n), a * z, a / z), (a * b, 0.0), q, q, n)
        return a ** (-n) * q_pochhammer(a * b, q, n) * series
    return askey_wilson(n, x, a, b, 0.0, 0.0, q, method=method)


def q_hahn(n: int, qx: complex, a: complex, b: complex, N: int, q: float) -> complex:
    """Q_n(q^{-x}; a, b, N | q) = 3phi2(q^-n, ab q^{n+1}, q^-x; aq, q^-N; q, q).

    ``qx`` is the value q^{-x} itself.
    """
    return qphi((q ** (-n), a * b * q ** (n + 1), qx), (a * q, q ** (-N)), q, q, n)


def _mono(v):
    # a parameter given as coef or as (coef, k) meaning coef * q^k
    return (v[0], int(v[1])) if isinstance(v, tuple) else (v, 0)


def q_hahn_at(n: int, x: int, a, b, N: int, q: float) -> complex:
    """Q_n(q^{-x}; a, b, N | q) at an integer grid point x.

    Summed in the best-conditioned of its transformed forms, with every
    power of q taken exactly once. ``a`` and ``b`` may be given as
    (coef, k) for coef * q^k.
    """
    am, bm = _mono(a), _mono(b)
    abq = (am[0] * bm[0], am[1] + bm[1] + n + 1)
    return qphi32_stable(n, (1.0, -x), abq, (am[0], am[1] + 1), (1.0, -N), q)


def q_racah(n: int, qx: complex, alpha, beta, gamma, delta, q: float) -> complex:
    """R_n(nu(x); alpha, beta, gamma, delta | q) with ``qx`` = q^{-x}.

    The 4phi3 has upper parameters q^-n, alpha beta q^{n+1}, q^-x and
    gamma delta q^{x+1} = gamma delta q / qx.
    """
    return qphi(
        (q ** (-n), alpha * beta * q ** (n + 1), qx, gamma * delta * q / qx),
        (alpha * q, beta * delta * q, gamma * q),
        q,
        q,
        n,
    )


def q_racah_at(n: int, x: int, alpha, beta, gamma, delta, q: float) -> complex:
    """R_n(nu(x); alpha, beta, gamma, delta | q) at an integer grid point x.

    The series is balanced, so it is summed in the best-conditioned of its
    Sears forms. Parameters may be given as (coef, k) for coef * q^k, which
    keeps values like q^{-N-1} exact relative to the other powers.
    """
    al, be, ga, de = (_mono(v) for v in (alpha, beta, gamma, delta))
    nums = (
        (1.0, -x),
        (al[0] * be[0], al[1] + be[1] + n + 1),
        (ga[0] * de[0], ga[1] + de[1] + x + 1),
    )
    dens = ((al[0], al[1] + 1), (be[0] * de[0], be[1] + de[1] + 1), (ga[0], ga[1] + 1))
    return qphi43_balanced_stable(n, nums, dens, q)


def dual_q_krawtchouk(n: int, qx: complex, a: float, N: int, q: float, *, orthonormal: bool = False) -> complex:
    """Dual q-Krawtchouk R_n(q^-x - q^{x-N}/a; a, N | q) with ``qx`` = q^{-x}.

    With ``orthonormal=True`` returns r_n = (-1)^n a^{n/2} q^{n(n-1)/4}
    [N choose n]_q^{1/2} R_n.
    """
    value = qphi((q ** (-n), qx, -(q ** (-N)) / (a * qx)), (q ** (-N), 0.0), q, q, n)
    if orthonormal:
        value *= (-1) ** n * a ** (n / 2) * q ** (n * (n - 1) / 4) * math.sqrt(q_binomial(N, n, q))
    return value


def dual_q_krawtchouk_at(n: int, x: int, a: float, N: int, q: float, *, orthonormal: bool = False) -> complex:
    """``dual_q_krawtchouk`` at the grid point q^-x, x an integer in [0, N].

    Same transform selection as ``q_hahn_at``; the plain series loses
    everything near x = N once q is small.
    """
    value = qphi32_stable(n, (1.0, -x), (-1.0 / a, x - N), (1.0, -N), (0.0, 0), q)
    if orthonormal:
        value *= (-1) ** n * a ** (n / 2) * q ** (n * (n - 1) / 4) * math.sqrt(q_binomial(N, n, q))
    return value


# ---------------------------------------------------------------------------
# family values


def _real(x) -> bool:
    return isinstance(x, (int, float)) or (isinstance(x, complex) and x.imag == 0.0)


def _require(cond: bool, message: str):
    if not cond:
        raise DomainError(message)


def _check_q(q: float):
    _require(isinstance(q, (int, float)) and 0.0 < q < 1.0, "q must lie in (0, 1)")


def _is_nonneg_int(N) -> bool:
    return isinstance(N, int) and not isinstance(N, bool) and N >= 0


@dataclass(frozen=True)
class MeixnerPollaczek:
    lam: float
    phi: float

    def __post_init__(self):
        _require(_real(self.lam) and self.lam > 0, "MeixnerPollaczek: lambda must be > 0")
        _require(_real(self.phi) and 0.0 < self.phi < math.pi, "MeixnerPollaczek: phi must lie in (0, pi)")

    def value(self, n, x):
        return meixner_pollaczek(n, self.lam, self.phi, x)

    def real_at(self, x) -> bool:
        return _real(x)


@dataclass(frozen=True)
class ContinuousHahn:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            _require(complex(getattr(self, name)).real > 0, f"ContinuousHahn: Re {name} must be > 0")

    def value(self, n, x):
        return continuous_hahn(n, x, self.a, self.b, self.c, self.d)

    def positive_measure(self) -> bool:
        a, b, c, d = (complex(v) for v in (self.a, self.b, self.c, self.d))
        return a == c.conjugate() and b == d.conjugate()

    def real_at(self, x) -> bool:
        return _real(x) and self.positive_measure()


@dataclass(frozen=True)
class Hahn:
    a: float
    b: float
    N: int

    def __post_init__(self):
        _require(self.a > -1 and self.b > -1, "Hahn: a, b must be > -1")
        _require(_is_nonneg_int(self.N), "Hahn: N must be a nonnegative integer")

    max_degree = property(lambda self: self.N)

    def value(self, n, x):
        return hahn(n, x, self.a, self.b, self.N)

    def real_at(self, x) -> bool:
        return _real(x)


@dataclass(frozen=True)
class Jacobi:
    a: float
    b: float

    def __post_init__(self):
        _require(self.a > -1 and self.b > -1, "Jacobi: a, b must be > -1")

    def value(self, n, x):
        return jacobi(n, self.a, self.b, x)

    def real_at(self, x) -> bool:
        return _real(x)


@dataclass(frozen=True)
class Laguerre:
    a: float

    def __post_init__(self):
        _require(self.a > -1, "Laguerre: a must be > -1")

    def value(self, n, x):
        return laguerre(n, self.a, x)

    def real_at(self, x) -> bool:
        return _real(x)


@dataclass(frozen=True)
class Meixner:
    beta: float
    c: float

    def __post_init__(self):
        _require(self.beta > 0, "Meixner: beta must be > 0")
        _require(0 < self.c < 1, "Meixner: c must lie in (0, 1)")

    def value(self, n, x):
        return meixner(n, x, self.beta, self.c)

    def real_at(self, x) -> bool:
        return _real(x)


@dataclass(frozen=True)
class Krawtchouk:
    p: float
    N: int

    def __post_init__(self):
        _require(0 < self.p < 1, "Krawtchouk: p must lie in (0, 1)")
        _require(_is_nonneg_int(self.N), "Krawtchouk: N must be a nonnegative integer")

    max_degree = property(lambda self: self.N)

    def value(self, n, x):
        return krawtchouk(n, x, self.p, self.N)

    def real_at(self, x) -> bool:
        return _real(x)


@dataclass(frozen=True)
class Charlier:
    a: float

    def __post_init__(self):
        _require(self.a > 0, "Charlier: a must be > 0")

    def value(self, n, x):
        return charlier(n, x, self.a)

    def real_at(self, x) -> bool:
        return _real(x)


@dataclass(frozen=True)
class Hermite:
    def value(self, n, x):
        return hermite(n, x)

    def real_at(self, x) -> bool:
        return _real(x)


@dataclass(frozen=True)
class Racah:
    alpha: float
    beta: float
    gamma: float
    delta: float
    N: int = field(init=False)

    def __post_init__(self):
        lowers = (self.alpha + 1, self.beta + self.delta + 1, self.gamma + 1)
        found = [int(round(-v)) for v in lowers if abs(v - round(v)) < 1e-12 and round(v) <= 0]
        _require(bool(found), "Racah: one of alpha+1, beta+delta+1, gamma+1 must equal -N")
        object.__setattr__(self, "N", min(found))

    max_degree = property(lambda self: self.N)

    def value(self, n, x):
        return racah(n, x, self.alpha, self.beta, self.gamma, self.delta)

    def real_at(self, x) -> bool:
        return _real(x)


@dataclass(frozen=True)
class AskeyWilson:
    a: complex
    b: complex
    c: complex
    d: complex
    q: float

    def __post_init__(self):
        _check_q(self.q)

    @property
    def params(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    def value(self, n, x):
        return askey_wilson(n, x, self.a, self.b, self.c, self.d, self.q)

    def admissible(self) -> bool:
        """Real or conjugate-paired parameters with pairwise products < 1."""
        ps = [complex(v) for v in self.params]
        rest = list(ps)
        while rest:
            v = rest.pop(0)
            if v.imag == 0:
                continue
            partner = [i for i, w in enumerate(rest) if w == v.conjugate()]
            if not partner:
                return False
            rest.pop(partner[0])
        for i in range(4):
            for j in range(i + 1, 4):
                prod = ps[i] * ps[j]
                if abs(prod.imag) <= 1e-14 * max(1.0, abs(prod)) and prod.real >= 1.0:
                    return False
        return True

    def real_at(self, x) -> bool:
        return _real(x) and self.admissible()


@dataclass(frozen=True)
class AlSalamChihara:
    a: complex
    b: complex
    q: float

    def __post_init__(self):
        _check_q(self.q)

    def value(self, n, x):
        return al_salam_chihara(n, x, self.a, self.b, self.q)

    def as_askey_wilson(self) -> AskeyWilson:
        return AskeyWilson(self.a, self.b, 0.0, 0.0, self.q)

    def real_at(self, x) -> bool:
        return _real(x) and self.as_askey_wilson().admissible()


@dataclass(frozen=True)
class QHahn:
    a: float
    b: float
    N: int
    q: float

    def __post_init__(self):
        _check_q(self.q)
        _require(_is_nonneg_int(self.N), "QHahn: N must be a nonnegative integer")

    max_degree = property(lambda self: self.N)

    def value(self, n, x):
        if _is_nonneg_int(x):
            return q_hahn_at(n, int(x), self.a, self.b, self.N, self.q)
        return q_hahn(n, self.q ** (-x), self.a, self.b, self.N, self.q)

    def real_at(self, x) -> bool:
        return _real(x)


@dataclass(frozen=True)
class QRacah:
    alpha: float
    beta: float
    gamma: float
    delta: float
    q: float
    N: int = field(init=False)

    def __post_init__(self):
        _check_q(self.q)
        q = self.q
        found = []
        for v in (self.alpha * q, self.beta * self.delta * q, self.gamma * q):
            if v > 0:
                m = -math.log(v) / math.log(q)
                if abs(m - round(m)) < 1e-9 and round(m) >= 0:
                    found.append(int(round(m)))
        _require(bool(found), "QRacah: one of alpha q, beta delta q, gamma q must equal q^-N")
        object.__setattr__(self, "N", min(found))

    max_degree = property(lambda self: self.N)

    def value(self, n, x):
        if _is_nonneg_int(x):
            # the parameter that carries q^{-N-1} is passed as an exact power
            top = self.q ** (-self.N - 1)
            al, ga = self.alpha, self.gamma
            al = (1.0, -self.N - 1) if abs(al - top) <= 1e-12 * top else al
            ga = (1.0, -self.N - 1) if abs(ga - top) <= 1e-12 * top else ga
            return q_racah_at(n, int(x), al, self.beta, ga, self.delta, self.q)
        return q_racah(n, self.q ** (-x), self.alpha, self.beta, self.gamma, self.delta, self.q)

    def real_at(self, x) -> bool:
        return _real(x)


@dataclass(frozen=True)
class DualQKrawtchouk:
    a: float
    N: int
    q: float

    def __post_init__(self):
        _check_q(self.q)
        _require(self.a > 0, "DualQKrawtchouk: a must be > 0")
        _require(_is_nonneg_int(self.N), "DualQKrawtchouk: N must be a nonnegative integer")

    max_degree = property(lambda self: self.N)

    def value(self, n, x):
        if _is_nonneg_int(x) and x <= self.N:
            return dual_q_krawtchouk_at(n, x, self.a, self.N, self.q)
        return dual_q_krawtchouk(n, self.q ** (-x), self.a, self.N, self.q)

    def real_at(self, x) -> bool:
        return _real(x)

    def grid_x(self, y: float) -> float:
        """Invert y = q^-x - q^{x-N}/a for the real x of the positive root."""
        q, N, a = self.q, self.N, self.a
        c = q ** (-N) / a
        root = math.sqrt(y * y + 4.0 * c)
        # u is a root of u^2 - y u - c = 0; pick the form without cancellation
        u = (y + root) / 2.0 if y >= 0 else 2.0 * c / (root - y)
        return -math.log(u) / math.log(q)


Family = Union[
    MeixnerPollaczek,
    ContinuousHahn,
    Hahn,
    Jacobi,
    Laguerre,
    Meixner,
    Krawtchouk,
    Charlier,
    Hermite,
    Racah,
    AskeyWilson,
    AlSalamChihara,
    QHahn,
    QRacah,
    DualQKrawtchouk,
]


def _realify(value: complex) -> float:
    value = complex(value)
    if abs(value.imag) > REAL_TOL * (1.0 + abs(value.real)):
        raise RealificationError(
            f"imaginary part {value.imag:.3e} exceeds the realification bound for {value.real:.6e}"
        )
    return value.real


def evaluate(family: Family, n: int, x: complex) -> complex | float:
    """Value of the degree-n polynomial of ``family`` at ``x``.

    Returns a float when the parameters guarantee a real value, after
    checking |Im| <= 1e-10 (1 + |Re|); otherwise returns the complex value.
    """
    if n < 0 or int(n) != n:
        raise DomainError("degree must be a nonnegative integer")
    top = getattr(family, "max_degree", None)
    if top is not None and n > top:
        raise DomainError(f"degree {n} exceeds N = {top}")
    value = complex(family.value(int(n), x))
    if family.real_at(x):
        return _realify(value)
    return value


# ---------------------------------------------------------------------------
# norms, recurrences, weights


def norm_squared(family: Family, n: int) -> float:
    """h_n with respect to the normalised orthogonality measure."""
    if isinstance(family, MeixnerPollaczek):
        # normalised measure w / Gamma(2 lam): h_n = (2 lam)_n / n!
        return math.exp(
            (log_gamma(n + 2 * family.lam) - log_gamma(2 * family.lam)).real - math.lgamma(n + 1)
        )
    if isinstance(family, AlSalamChihara):
        q = family.q
        ab = family.a * family.b
        return _realify(q_pochhammer(q, q, n) * q_pochhammer(ab, q, n))
    if isinstance(family, AskeyWilson):
        a, b, c, d = family.params
        q = family.q
        abcd = a * b * c * d
        h = (1 - q ** (n - 1) * abcd) / (1 - q ** (2 * n - 1) * abcd)
        h *= q_pochhammer_product((q, a * b, a * c, a * d, b * c, b * d, c * d), q, n)
        h /= q_pochhammer(abcd, q, n)
        return _realify(h)
    if isinstance(family, DualQKrawtchouk):
        q, a, N = family.q, family.a, family.N
        return 1.0 / (a**n * q ** (n * (n - 1) / 2) * q_binomial(N, n, q))
    raise UnsupportedFamilyError(f"no orthonormal normalisation for {type(family).__name__}")


def orthonormal_eval(family: Family, n: int, x: float) -> float:
    """Orthonormal polynomial value: evaluate / sqrt(h_n).

    Meixner-Pollaczek is normalised against the unit-mass measure, i.e. the
    weight w^(lam)(x; phi) divided by Gamma(2 lam); this is
    sqrt(n! / (2 lam)_n) P_n and differs from sqrt(n!/Gamma(n+2lam)) P_n by
    the constant Gamma(2 lam)^{1/2}.
    """
    if not isinstance(family, (MeixnerPollaczek, AlSalamChihara, AskeyWilson, DualQKrawtchouk)):
        raise UnsupportedFamilyError(f"no orthonormal normalisation for {type(family).__name__}")
    value = evaluate(family, n, x)
    h = norm_squared(family, n)
    if h <= 0:
        raise DomainError("norm is not positive for these parameters")
    if isinstance(family, DualQKrawtchouk):
        # the orthonormal prefactor carries (-1)^n, giving a positive leading coefficient
        value *= (-1) ** n
    return _realify(value) / math.sqrt(h)


def recurrence(family: Family):
    """Jacobi operator of the orthonormal three-term recurrence.

    Meixner-Pollaczek acts in y = 2x sin(phi), Al-Salam-Chihara in y = 2x and
    dual q-Krawtchouk in y = q^-x - q^{x-N}/a.
    """
    from .spectral import JacobiOperator

    if isinstance(family, MeixnerPollaczek):
        lam, phi = family.lam, family.phi
        return JacobiOperator(
            a=lambda n: math.sqrt((n + 1) * (n + 2 * lam)),
            b=lambda n: -2.0 * (n + lam) * math.cos(phi),
            dimension=None,
            variable_map=ArgumentMap.make("affine", "y = 2 x sin(phi)", scale=2 * math.sin(phi), shift=0.0),
        )
    if isinstance(family, AlSalamChihara):
        q = family.q
        ab = _realify(family.a * family.b)
        apb = _realify(family.a + family.b)
        return JacobiOperator(
            a=lambda n: math.sqrt((1 - ab * q**n) * (1 - q ** (n + 1))),
            b=lambda n: q**n * apb,
            dimension=None,
            variable_map=ArgumentMap.make("affine", "y = 2 x", scale=2.0, shift=0.0),
        )
    if isinstance(family, DualQKrawtchouk):
        a, N, q = family.a, family.N, family.q
        return JacobiOperator(
            a=lambda n: a ** (-0.5) * q ** (-N + n / 2) * math.sqrt((1 - q ** (n + 1)) * (1 - q ** (N - n))),
            b=lambda n: q ** (n - N) * (1 - 1 / a),
            dimension=N + 1,
            variable_map=ArgumentMap.make("dualqk", "y = q^-x - q^(x-N)/a", a=a, N=N, q=q),
        )
    raise UnsupportedFamilyError(f"no three-term recurrence provided for {type(family).__name__}")


@dataclass(frozen=True)
class AskeyWilsonWeight:
    """Normalised Askey-Wilson measure at one angle plus its mass points."""

    density: float
    mass_points: tuple[tuple[float, float], ...]


def _aw_density(theta: float, params, q: float) -> float:
    z = cmath.exp(1j * theta)
    num = q_pochhammer(z * z, q) * q_pochhammer(1 / (z * z), q)
    den = 1.0
    for e in params:
        den *= q_pochhammer(e * z, q) * q_pochhammer(e / z, q)
    return _realify(num / den)


def _aw_h0(params, q: float) -> float:
    a, b, c, d = params
    num = q_pochhammer(a * b * c * d, q)
    den = q_pochhammer_product((q, a * b, a * c, a * d, b * c, b * d, c * d), q, None)
    return _realify(num / den)


def _aw_masses(params, q: float) -> list[tuple[float, float]]:
    points = []
    for idx, e in enumerate(params):
        e = complex(e)
        if abs(e) <= 1:
            continue
        if e.imag != 0:
            raise DomainError("mass points are provided for real parameters only")
        a = e.real
        others = [complex(v).real for i, v in enumerate(params) if i != idx]
        b, c, d = others
        base = q_pochhammer(a ** -2, q) / q_pochhammer_product(
            (q, a * b, b / a, a * c, c / a, a * d, d / a), q, None
        )
        k = 0
        while abs(a * q**k) > 1:
            w = base * (1 - a * a * q ** (2 * k)) / (1 - a * a)
            w *= q_pochhammer_product((a * a, a * b, a * c, a * d), q, k) / q_pochhammer(q, q, k)
            for i in range(k):
                w *= q / (a * (b - a * q ** (i + 1)) * (c - a * q ** (i + 1)) * (d - a * q ** (i + 1)))
            points.append((mu(a * q**k).real, complex(w).real))
            k += 1
    return sorted(points)


def weight(family: Family, point: float):
    """Normalised orthogonality weight.

    Meixner-Pollaczek returns w^(lam)(x; phi) / Gamma(2 lam) at x.
    Continuous Hahn returns Gamma(a+ix)Gamma(b+ix)Gamma(c-ix)Gamma(d-ix) /
    (2 pi h_0) at x. Askey-Wilson and Al-Salam-Chihara take an angle theta in
    [0, pi] and return an ``AskeyWilsonWeight``: the density in theta of the
    normalised measure, w(e^{i theta}) / (2 pi h_0), and the normalised
    mass points (x_k, w_k / h_0) outside [-1, 1].
    """
    if isinstance(family, MeixnerPollaczek):
        lam, phi, x = family.lam, family.phi, float(point)
        log_w = (
            2 * lam * math.log(2 * math.sin(phi))
            - math.log(2 * math.pi)
            + (2 * phi - math.pi) * x
            + 2 * log_gamma(complex(lam, x)).real
            - log_gamma(2 * lam).real
        )
        return math.exp(log_w)
    if isinstance(family, ContinuousHahn):
        if not family.positive_measure():
            raise DomainError("continuous Hahn weight needs a = conj(c), b = conj(d)")
        a, b, c, d = (complex(v) for v in (family.a, family.b, family.c, family.d))
        x = float(point)
        log_w = (
            log_gamma(a + 1j * x)
            + log_gamma(b + 1j * x)
            + log_gamma(c - 1j * x)
            + log_gamma(d - 1j * x)
        )
        s = a + b + c + d
        log_h0 = (
            log_gamma(a + c) + log_gamma(a + d) + log_gamma(b + c) + log_gamma(b + d) - log_gamma(s)
        )
        return _realify(cmath.exp(log_w - log_h0)) / (2 * math.pi)
    if isinstance(family, (AskeyWilson, AlSalamChihara)):
        aw = family if isinstance(family, AskeyWilson) else family.as_askey_wilson()
        if not aw.admissible():
            raise DomainError("Askey-Wilson parameters are not admissible")
        params, q = aw.params, aw.q
        theta = float(point)
        _require(0.0 <= theta <= math.pi, "theta must lie in [0, pi]")
        h0 = _aw_h0(params, q)
        density = _aw_density(theta, params, q) / (2 * math.pi * h0)
        masses = tuple((x, w / h0) for x, w in _aw_masses(params, q))
        return AskeyWilsonWeight(density, masses)
    raise UnsupportedFamilyError(f"no weight provided for {type(family).__name__}; use a Gauss rule")
