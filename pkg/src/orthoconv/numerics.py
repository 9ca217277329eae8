"""Scalar substrate: log-gamma, shifted factorials and terminating series.

Everything here works in complex double precision on plain Python numbers.
Functions are pure and thread-safe.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

__all__ = [
    "NumericsError",
    "PoleError",
    "SeriesError",
    "SeriesSpec",
    "log_gamma",
    "pochhammer",
    "q_pochhammer",
    "q_pochhammer_product",
    "q_binomial",
    "hyp_terms",
    "hyp_terminating",
    "basic_phi_terms",
    "basic_phi_terminating",
    "hyp",
    "qphi",
    "kahan_sum",
    "qphi32_stable",
    "qphi43_balanced_stable",
    "hyp43_balanced_stable",
]


class NumericsError(ArithmeticError):
    """Base class for numerical failures signalled by this package."""


class PoleError(NumericsError, ZeroDivisionError):
    """A Gamma pole or a vanishing denominator was hit."""


class SeriesError(NumericsError, ValueError):
    """A series specification is malformed."""


# Lanczos coefficients for g = 607/128, 15 terms (Godfrey's set).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)


def _log_gamma_lanczos(z: complex) -> complex:
    # valid for Re z >= 1/2
    z = z - 1.0
    series = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        series += _LANCZOS_C[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(series)


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z).

    The branch is the analytic continuation from the positive axis to the
    plane cut along (-inf, 0]; on the cut the value from above is returned.
    For Re z < 1/2 the reflection formula is used with log sin(pi z) written
    as an expansion that stays analytic in the upper half plane, so no
    2*pi*i jumps appear away from the cut.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NumericsError(f"log_gamma: non-finite argument {z!r}")
    if _is_nonpositive_integer(z):
        raise PoleError(f"log_gamma: pole at {z.real:g}")
    if z.real >= 0.5:
        return _log_gamma_lanczos(z)
    if z.real > 0.0:
        # the reflection loses digits near 0; one upward step does not
        return _log_gamma_lanczos(z + 1.0) - cmath.log(z)
    if z.imag < 0.0:
        return log_gamma(z.conjugate()).conjugate()
    # sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z})
    log_sin = -1j * math.pi * z + complex(math.log(0.5), 0.5 * math.pi)
    log_sin += cmath.log(1.0 - cmath.exp(2j * math.pi * z))
    return _LOG_PI - log_sin - _log_gamma_lanczos(1.0 - z)


def pochhammer(a: complex, n: int) -> complex:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1)."""
    if n < 0:
        raise ValueError("pochhammer: n must be nonnegative")
    result = 1.0
    for k in range(n):
        result *= a + k
    return result


def q_pochhammer(a: complex, q: float, n: int | float | None = None) -> complex:
    """q-shifted factorial (a;q)_n.

    ``n=None`` or ``math.inf`` gives the infinite product, truncated once the
    tail bound |a| q^k / (1-q) drops below 1e-17. Negative integer ``n`` uses
    (a;q)_{-m} = 1 / (a q^{-m}; q)_m. Finite ``n`` accepts any base, which is
    convenient for products written in base q^{-1}.
    """
    if n is None or n == math.inf:
        if not 0.0 <= abs(q) < 1.0:
            raise ValueError("q_pochhammer: infinite product needs |q| < 1")
        result = 1.0
        term = a
        while abs(term) / (1.0 - abs(q)) >= 1e-17:
            result *= 1.0 - term
            term *= q
        return result
    if n != int(n):
        raise ValueError("q_pochhammer: n must be an integer or infinity")
    n = int(n)
    if n < 0:
        m = -n
        den = q_pochhammer(a * q**n, q, m)
        if den == 0:
            raise PoleError("q_pochhammer: negative-index product has a zero factor")
        return 1.0 / den
    result = 1.0
    qk = 1.0
    for _ in range(n):
        result *= 1.0 - a * qk
        qk *= q
    return result


def q_pochhammer_product(params: Iterable[complex], q: float, n: int | None) -> complex:
    """Product (a_1, ..., a_r; q)_n of q-shifted factorials."""
    result = 1.0
    for a in params:
        result *= q_pochhammer(a, q, n)
    return result


def q_binomial(n: int, k: int, q: float) -> float:
    """Gaussian binomial coefficient [n choose k]_q, zero outside 0 <= k <= n."""
    if k < 0 or k > n:
        return 0.0
    k = min(k, n - k)
    # product form avoids dividing nearly equal small quantities
    result = 1.0
    for i in range(k):
        result *= (1.0 - q ** (n - i)) / (1.0 - q ** (i + 1))
    return result


def kahan_sum(values: Iterable[complex]) -> complex:
    """Compensated (Kahan) summation of complex values."""
    total = 0j
    comp = 0j
    for v in values:
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


@dataclass(frozen=True)
class SeriesSpec:
    """A terminating (basic) hypergeometric series.

    ``base`` is None for a classical pFq and q for a basic r-phi-s series.
    The series is summed up to and including the term of index ``degree``.
    """

    numerator: tuple[complex, ...]
    denominator: tuple[complex, ...]
    argument: complex
    degree: int
    base: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(self.numerator))
        object.__setattr__(self, "denominator", tuple(self.denominator))
        if self.degree < 0 or self.degree != int(self.degree):
            raise SeriesError("degree must be a nonnegative integer")
        if self.base is not None and not 0.0 < self.base:
            raise SeriesError("base must be positive")

    def is_terminating(self) -> bool:
        """True when some numerator parameter is -degree (or q^-degree)."""
        n = self.degree
        if self.base is None:
            target = -float(n)
            return any(_close(a, target) for a in self.numerator)
        target = self.base ** (-n)
        return any(_close(a, target) for a in self.numerator)


def _close(a: complex, b: float) -> bool:
    return abs(a - b) <= 1e-12 * max(1.0, abs(b))


def _check_finite(value: complex, what: str) -> complex:
    if not (cmath.isfinite(value)):
        raise NumericsError(f"{what}: non-finite value")
    return value


def hyp_terms(spec: SeriesSpec, *, check: bool = True) -> list[complex]:
    """Terms t_0..t_n of a terminating pFq series.

    Uses the running-term update t_{k+1} = t_k * ratio_k. A denominator
    parameter equal to -m with m < degree makes the series undefined and
    raises PoleError.
    """
    if spec.base is not None:
        raise SeriesError("hyp_terminating: classical series expected")
    if check and not spec.is_terminating():
        raise SeriesError("hyp_terminating: no numerator parameter equals -degree")
    n = spec.degree
    z = spec.argument
    term = 1.0 + 0j
    terms = [term]
    for k in range(n):
        num = 1.0 + 0j
        for a in spec.numerator:
            num *= a + k
        den = 1.0 + 0j
        for b in spec.denominator:
            d = b + k
            if d == 0:
                raise PoleError(f"hyp_terminating: denominator pole at term {k + 1}")
            den *= d
        term = term * num * z / (den * (k + 1))
        terms.append(term)
        if term == 0:
            break
    return terms


def hyp_terminating(spec: SeriesSpec, *, check: bool = True) -> complex:
    """Sum a terminating pFq series with compensated accumulation."""
    return _check_finite(kahan_sum(hyp_terms(spec, check=check)), "hyp_terminating")


def basic_phi_terms(spec: SeriesSpec, *, check: bool = True) -> list[complex]:
    """Terms of a terminating basic hypergeometric r-phi-s series.

    Terms are (a_1..a_r;q)_k / (b_1..b_s;q)_k z^k / (q;q)_k times the usual
    factor [(-1)^k q^{k(k-1)/2}]^{1+s-r}, which is 1 for the r+1-phi-r
    series used throughout.
    """
    if spec.base is None:
        raise SeriesError("basic_phi_terminating: basic series expected")
    if check and not spec.is_terminating():
        raise SeriesError("basic_phi_terminating: no numerator parameter equals q^-degree")
    q = spec.base
    n = spec.degree
    z = spec.argument
    excess = 1 + len(spec.denominator) - len(spec.numerator)
    term = 1.0 + 0j
    terms = [term]
    qk = 1.0
    for k in range(n):
        num = 1.0 + 0j
        for a in spec.numerator:
            num *= 1.0 - a * qk
        den = 1.0 + 0j
        for b in spec.denominator:
            d = 1.0 - b * qk
            if d == 0:
                raise PoleError(f"basic_phi_terminating: denominator pole at term {k + 1}")
            den *= d
        ratio = num * z / (den * (1.0 - qk * q))
        if excess:
            ratio *= (-qk) ** excess
        term = term * ratio
        terms.append(term)
        qk *= q
        if term == 0:
            break
    return terms


def basic_phi_terminating(spec: SeriesSpec, *, check: bool = True) -> complex:
    """Sum a terminating basic series with compensated accumulation."""
    return _check_finite(kahan_sum(basic_phi_terms(spec, check=check)), "basic_phi_terminating")


def hyp(numerator: Sequence[complex], denominator: Sequence[complex], z: complex, degree: int) -> complex:
    """Shorthand for ``hyp_terminating(SeriesSpec(...))``."""
    return hyp_terminating(SeriesSpec(tuple(numerator), tuple(denominator), z, degree))


def qphi(numerator: Sequence[complex], denominator: Sequence[complex], q: float, z: complex, degree: int) -> complex:
    """Shorthand for ``basic_phi_terminating(SeriesSpec(...))``."""
    return basic_phi_terminating(SeriesSpec(tuple(numerator), tuple(denominator), z, degree, q))




# ---------------------------------------------------------------------------
# best-conditioned evaluation of terminating 3phi2 and balanced 4phi3
#
# A terminating series can carry huge terms of alternating sign while its sum
# is tiny; for q well below 1 this is the rule rather than the exception. The
# standard transformation formulae rewrite the same value as another series
# times a prefactor. Each rewrite is summed with a running error bound (term
# sizes weighted by the conditioning of every 1 - x factor) and the value with
# the smallest bound wins.
#
# Parameters are monomials (c, e) standing for c q^e with integer e. Factors
# 1 - c q^(e+k) then take a single rounded power of q, which keeps q^-n and
# q^k consistent; rounding them separately is enough to wreck small sums.

Mono = tuple  # (coefficient, integer exponent of q)


def _mul(x: Mono, y: Mono) -> Mono:
    return (x[0] * y[0], x[1] + y[1])


def _div(x: Mono, y: Mono) -> Mono:
    return (x[0] / y[0], x[1] - y[1])


def _factor(x: Mono, q: float, k: int) -> tuple[complex, float]:
    # 1 - c q^(e+k) and its condition number |x| / |1 - x|
    c, e = x
    v = c * q ** (e + k)
    f = 1.0 - v
    if f == 0:
        return 0.0, 0.0
    return f, abs(v) / abs(f)


def _qpoch_mono(x: Mono, q: float, n: int) -> tuple[complex, float]:
    value, cond = 1.0, 0.0
    for k in range(n):
        f, c = _factor(x, q, k)
        value *= f
        cond += c
    return value, cond


def _ratio(num_params, den_params, q, n):
    value, cond = 1.0, 0.0
    for a in num_params:
        v, c = _qpoch_mono(a, q, n)
        value *= v
        cond += c
    for b in den_params:
        v, c = _qpoch_mono(b, q, n)
        if v == 0:
            raise PoleError("prefactor has a vanishing denominator")
        value /= v
        cond += c
    return value, cond


def _power(x: Mono, q: float, n: int) -> complex:
    return x[0] ** n * q ** (x[1] * n)


def _phi_bound(num, den, q, z, n) -> tuple[complex, float]:
    # sum of a terminating r+1 phi r and its error bound in units of eps
    term, cond = 1.0 + 0j, 0.0
    total, bound = term, 1.0
    zv = z[0] * q ** z[1]
    for k in range(n):
        f, c = _factor((1.0, 1), q, k)
        ratio = zv / f
        cond += c
        for a in num:
            f, c = _factor(a, q, k)
            ratio *= f
            cond += c
        if ratio == 0:
            break
        for b in den:
            f, c = _factor(b, q, k)
            if f == 0:
                raise PoleError("transformed series has a pole")
            ratio /= f
            cond += c
        term *= ratio
        total += term
        bound += abs(term) * (1.0 + cond + k)
    return total, bound


def _hall_candidates(n, b, c, d, e):
    # 3phi2(q^-n, b, c; d, e; q, q) and its Hall-type rewrites
    top = (1.0, -n)
    out = []
    for bb, cc in ((b, c), (c, b)):
        for dd, ee in ((d, e), (e, d)):
            out.append(((), (), 1.0, (top, bb, cc), (dd, ee), (1.0, 1)))
            try:
                out.append(((_div(ee, cc),), (ee,), (cc, n), (top, cc, _div(dd, bb)),
                            (dd, _div(_mul(cc, (1.0, 1 - n)), ee)), _div(_mul(bb, (1.0, 1)), ee)))
            except ZeroDivisionError:
                pass
            try:
                de_bc = _div(_mul(dd, ee), _mul(bb, cc))
                out.append(((de_bc,), (ee,), (_div(_mul(bb, cc), dd), n), (top, _div(dd, bb), _div(dd, cc)),
                            (dd, de_bc), (1.0, 1)))
            except ZeroDivisionError:
                pass
    return out


def _sears_candidates(n, nums, dens):
    top = (1.0, -n)
    out = [((), (), 1.0, (top,) + tuple(nums), tuple(dens), (1.0, 1))]
    for i in range(3):
        a = nums[i]
        b, c = (nums[k] for k in range(3) if k != i)
        for m in range(3):
            d = dens[m]
            e, f = (dens[k] for k in range(3) if k != m)
            t = _mul(a, (1.0, 1 - n))
            try:
                out.append(((_div(e, a), _div(f, a)), (e, f), (a, n), (top, a, _div(d, b), _div(d, c)),
                            (d, _div(t, e), _div(t, f)), (1.0, 1)))
            except ZeroDivisionError:
                continue
    return out


def _terminators(nums):
    # indices of parameters that are themselves q^-m with m a nonnegative integer
    return [i for i, (c, e) in enumerate(nums) if c == 1 and e <= 0 and float(e).is_integer()]


def _pick(q, groups) -> complex:
    best_value, best_bound = None, math.inf
    for n, candidates in groups:
        for pre_num, pre_den, power, num, den, z in candidates:
            try:
                pre, pre_cond = _ratio(pre_num, pre_den, q, n)
                if power != 1.0:
                    pre *= _power(power[0], q, power[1])
                if pre == 0 or not cmath.isfinite(pre):
                    continue
                value, bound = _phi_bound(num, den, q, z, n)
            except (PoleError, ZeroDivisionError, OverflowError):
                continue
            value *= pre
            bound *= abs(pre) * (1.0 + pre_cond)
            if cmath.isfinite(value) and not math.isnan(bound) and bound < best_bound:
                best_value, best_bound = value, bound
    if best_value is None:
        raise PoleError("no pole-free representation of the series")
    return best_value


def qphi32_stable(n: int, b: Mono, c: Mono, d: Mono, e: Mono, q: float) -> complex:
    """3phi2(q^-n, b, c; d, e; q, q), summed in its best-conditioned form.

    Parameters are pairs (coef, k) meaning coef * q^k. Candidates are the
    series and its two Hall-type rewrites under the b<->c and d<->e
    symmetries; a numerator of the form q^-m is also tried as the
    terminating parameter.
    """
    groups = [(n, _hall_candidates(n, b, c, d, e))]
    others = [b, c]
    for i in _terminators(others):
        m = int(-others[i][1])
        groups.append((m, _hall_candidates(m, (1.0, -n), others[1 - i], d, e)))
    return _pick(q, groups)


def qphi43_balanced_stable(n: int, nums, dens, q: float) -> complex:
    """Balanced 4phi3(q^-n, a, b, c; d, e, f; q, q) in its best-conditioned form.

    ``nums`` holds (a, b, c), ``dens`` holds (d, e, f), each a pair
    (coef, k) meaning coef * q^k; balance means abc q^(1-n) = def.
    Candidates are the series and its one-step Sears rewrites over every
    choice of distinguished parameters, for each terminating numerator.
    """
    nums, dens = tuple(nums), tuple(dens)
    zero_num = [i for i, a in enumerate(nums) if a[0] == 0]
    zero_den = [i for i, a in enumerate(dens) if a[0] == 0]
    if zero_num and zero_den:
        # (0;q)_k cancels (0;q)_k: this is a 3phi2 and the Hall rewrites apply
        b, c = (nums[k] for k in range(3) if k != zero_num[0])
        d, e = (dens[k] for k in range(3) if k != zero_den[0])
        return qphi32_stable(n, b, c, d, e, q)
    groups = [(n, _sears_candidates(n, nums, dens))]
    for i in _terminators(nums):
        m = int(-nums[i][1])
        rest = tuple(nums[k] for k in range(3) if k != i)
        groups.append((m, _sears_candidates(m, ((1.0, -n),) + rest, dens)))
    return _pick(q, groups)


# The classical counterpart: balanced 4F3 at 1 and its Whipple rewrites.
# A factor a + k is rounded once, with relative error about eps (|a| + k) / |a + k|.


def _hyp_bound(num, den, n) -> tuple[complex, float]:
    term, cond = 1.0 + 0j, 0.0
    total, bound = term, 1.0
    for k in range(n):
        ratio = 1.0 / (k + 1)
        for a in num:
            f = a + k
            ratio *= f
            if f != 0:
                cond += (abs(a) + k) / abs(f)
        if ratio == 0:
            break
        for b in den:
            f = b + k
            if f == 0:
                raise PoleError("transformed series has a pole")
            ratio /= f
            cond += (abs(b) + k) / abs(f)
        term *= ratio
        total += term
        bound += abs(term) * (1.0 + cond + k)
    return total, bound


def _nonpositive_integer(a) -> Optional[int]:
    # m when a == -m for an integer m >= 0
    a = complex(a)
    if a.imag == 0 and a.real <= 0 and a.real == math.floor(a.real):
        return int(-a.real)
    return None


def _whipple_candidates(n, nums, dens):
    out = [((), (), tuple(nums), tuple(dens))]
    for i in range(3):
        a = nums[i]
        b, c = (nums[k] for k in range(3) if k != i)
        for m in range(3):
            d = dens[m]
            e, f = (dens[k] for k in range(3) if k != m)
            out.append(((e - a, f - a), (e, f), (a, d - b, d - c), (d, a - e - n + 1, a - f - n + 1)))
    return out


def hyp43_balanced_stable(n: int, nums, dens) -> complex:
    """Balanced 4F3(-n, a, b, c; d, e, f; 1) in its best-conditioned form.

    Balance means d + e + f = a + b + c - n + 1. Candidates are the series
    and its Whipple rewrites over every choice of distinguished parameters;
    a numerator equal to a nonpositive integer -m is also tried as the
    terminating one.
    """
    nums, dens = tuple(nums), tuple(dens)
    groups = [(n, nums)]
    for i, a in enumerate(nums):
        m = _nonpositive_integer(a)
        if m is not None:
            groups.append((m, (-n,) + tuple(nums[k] for k in range(3) if k != i)))
    best_value, best_bound = None, math.inf
    for m, rest in groups:
        for pre_num, pre_den, num, den in _whipple_candidates(m, rest, dens):
            try:
                pre, pre_size = 1.0 + 0j, 0.0
                for a in pre_num:
                    pre *= pochhammer(a, m)
                for b in pre_den:
                    pre /= pochhammer(b, m)
                if pre_num:
                    pre_size = 4.0 * m
                if pre == 0 or not cmath.isfinite(pre):
                    continue
                value, bound = _hyp_bound((-m,) + num, den, m)
            except (PoleError, ZeroDivisionError, OverflowError):
                continue
            value *= pre
            bound *= abs(pre) * (1.0 + pre_size)
            if cmath.isfinite(value) and not math.isnan(bound) and bound < best_bound:
                best_value, best_bound = value, bound
    if best_value is None:
        raise PoleError("no pole-free representation of the series")
    return best_value
