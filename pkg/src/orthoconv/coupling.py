"""Clebsch-Gordan and Racah coefficients and the U_q(su(2)) eigenbasis data.

Every coefficient is computed from its closed form. Square roots of products
of shifted factorials are taken on sums of logarithms of positive factors;
signs are kept outside the square root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .numerics import hyp, q_binomial, q_pochhammer, qphi43_balanced_stable
from .polynomials import AskeyWilson, DomainError, dual_q_krawtchouk_at, hahn, q_hahn_at

__all__ = [
    "ConstraintError",
    "CgcLabel",
    "RacahLabel",
    "cgc_su11",
    "cgc_uq_su11",
    "racah_su11",
    "racah_uq_su11",
    "c_norm",
    "cgc_uq_su2_n0",
    "eigenbasis_overlap_uq_su2",
    "linearisation_coeffs",
    "linearisation_family",
    "cgc_matrix",
    "racah_matrix",
    "cgc_uq_su2_n0_column",
    "uq_su2_eigenvector",
    "uq_su2_tensor_eigenvector",
    "uq_su2_lowest_vector",
    "overlap_matrix",
]


class ConstraintError(DomainError):
    """Labels violate a selection rule or the coupling constraint system."""


@dataclass(frozen=True)
class CgcLabel:
    """Labels of a Clebsch-Gordan coefficient.

    For ``uq_su2`` the pair (k1, k2) holds the integer dimensions minus one
    (N1, N2) and n must be 0.
    """

    algebra: str
    k1: float
    k2: float
    j: int
    n1: int
    n2: int
    n: int
    q: Optional[float] = None

    def value(self) -> float:
        if self.algebra == "su11":
            return cgc_su11(self.k1, self.k2, self.j, self.n1, self.n2, self.n)
        if self.algebra == "uq_su11":
            return cgc_uq_su11(self.k1, self.k2, self.j, self.n1, self.n2, self.n, _need_q(self.q))
        if self.algebra == "uq_su2":
            if self.n != 0:
                raise ConstraintError("only the n = 0 coefficients are provided for uq_su2")
            return cgc_uq_su2_n0(int(self.k1), int(self.k2), self.j, self.n1, self.n2, _need_q(self.q))
        raise DomainError(f"unknown algebra {self.algebra!r}")


@dataclass(frozen=True)
class RacahLabel:
    """Labels of a Racah coefficient; jprime is implied by j12 + j = j23 + jprime."""

    k1: float
    k2: float
    k3: float
    j12: int
    j23: int
    j: int
    q: Optional[float] = None

    @property
    def jprime(self) -> int:
        return self.j12 + self.j - self.j23

    def value(self) -> float:
        if self.q is None:
            return racah_su11(self.k1, self.k2, self.k3, self.j12, self.j23, self.j)
        return racah_uq_su11(self.k1, self.k2, self.k3, self.j12, self.j23, self.j, self.q)


def _need_q(q):
    if q is None or not 0 < q < 1:
        raise DomainError("q in (0, 1) is required")
    return q


def _nonneg_ints(**labels):
    for name, v in labels.items():
        if int(v) != v or v < 0:
            raise ConstraintError(f"{name} must be a nonnegative integer")


def _log_poch(a: float, n: int) -> float:
    s = 0.0
    for i in range(n):
        f = a + i
        if f <= 0:
            raise DomainError("shifted factorial under a square root is not positive")
        s += math.log(f)
    return s


def _log_qpoch(a: float, base: float, n: int) -> float:
    s = 0.0
    for i in range(n):
        f = 1.0 - a * base**i
        if f <= 0:
            raise DomainError("q-shifted factorial under a square root is not positive")
        s += math.log(f)
    return s


def _log_fact(n: int) -> float:
    return math.lgamma(n + 1)


# ---------------------------------------------------------------------------
# su(1,1) and U_q(su(1,1))


def cgc_su11(k1: float, k2: float, j: int, n1: int, n2: int, n: int) -> float:
    """C^{k1,k2,k}_{n1,n2,n} with k = k1 + k2 + j, as a Hahn polynomial.

    Zero unless n1 + n2 = n + j.
    """
    _nonneg_ints(j=j, n1=n1, n2=n2, n=n)
    if not (k1 > 0 and k2 > 0):
        raise DomainError("k1, k2 must be positive")
    if n1 + n2 != n + j:
        return 0.0
    log_rad = (
        _log_poch(2 * k1, n1)
        + _log_poch(2 * k2, n2)
        + _log_poch(2 * k1, j)
        - _log_fact(n)
        - _log_fact(n1)
        - _log_fact(n2)
        - _log_fact(j)
        - _log_poch(2 * k1 + 2 * k2 + 2 * j, n)
        - _log_poch(2 * k2, j)
        - _log_poch(2 * k1 + 2 * k2 + j - 1, j)
    )
    scale = math.exp(0.5 * log_rad + _log_fact(n + j))
    return scale * hahn(j, n1, 2 * k1 - 1, 2 * k2 - 1, n + j).real


def cgc_uq_su11(k1: float, k2: float, j: int, n1: int, n2: int, n: int, q: float) -> float:
    """U_q(su(1,1)) Clebsch-Gordan coefficient as a q-Hahn polynomial in base q^2."""
    _nonneg_ints(j=j, n1=n1, n2=n2, n=n)
    _need_q(q)
    if not (k1 > 0 and k2 > 0):
        raise DomainError("k1, k2 must be positive")
    if n1 + n2 != n + j:
        return 0.0
    Q = q * q
    log_num = _log_qpoch(Q, Q, n + j) + 0.5 * (
        _log_qpoch(q ** (4 * k1), Q, n1) + _log_qpoch(q ** (4 * k2), Q, n2) + _log_qpoch(q ** (4 * k1), Q, j)
    )
    log_den = 0.5 * (
        _log_qpoch(Q, Q, n)
        + _log_qpoch(Q, Q, n1)
        + _log_qpoch(Q, Q, n2)
        + _log_qpoch(Q, Q, j)
        + _log_qpoch(q ** (4 * k1 + 4 * k2 + 4 * j), Q, n)
        + _log_qpoch(q ** (4 * k2), Q, j)
        + _log_qpoch(q ** (4 * k1 + 4 * k2 + 2 * j - 2), Q, j)
    )
    scale = q ** (2 * k1 * (n - n1)) * math.exp(log_num - log_den)
    alpha, beta = q ** (4 * k1 - 2), q ** (4 * k2 - 2)
    poly = q_hahn_at(j, n1, alpha, beta, n + j, Q)
    return scale * poly.real


def _racah_labels(k1, k2, k3, j12, j23, j):
    _nonneg_ints(j12=j12, j23=j23, j=j)
    if not (k1 > 0 and k2 > 0 and k3 > 0):
        raise DomainError("k1, k2, k3 must be positive")
    jp = j12 + j - j23
    if jp < 0:
        raise ConstraintError("j12 + j = j23 + j' has no solution with j' >= 0")
    return jp


def racah_su11(k1: float, k2: float, k3: float, j12: int, j23: int, j: int) -> float:
    """Racah coefficient U^{k1,k2,k12}_{k3,k,k23} of su(1,1) as a balanced 4F3.

    k12 = k1+k2+j12, k23 = k2+k3+j23 and k = k12+k3+j = k1+k23+j' with
    j' = j12 + j - j23.
    """
    jp = _racah_labels(k1, k2, k3, j12, j23, j)
    k12 = k1 + k2 + j12
    k23 = k2 + k3 + j23
    log_pre = (
        math.log(math.comb(j + j12, j23))
        + _log_poch(2 * k2, j12)
        + _log_poch(2 * k3, j)
        + _log_poch(2 * k1 + 2 * k2 + 2 * k3 + j + j12 - 1, j23)
        - _log_poch(2 * k3, j23)
        - _log_poch(2 * k2 + 2 * k3 + j23 - 1, j23)
        - _log_poch(2 * k2 + 2 * k3 + 2 * j23, jp)
    )
    log_rad = (
        _log_fact(jp)
        + _log_poch(2 * k1, jp)
        + _log_poch(2 * k23, jp)
        + _log_poch(2 * k1 + 2 * k23 + jp - 1, jp)
        + _log_fact(j23)
        + _log_poch(2 * k2, j23)
        + _log_poch(2 * k3, j23)
        + _log_poch(2 * k2 + 2 * k3 + j23 - 1, j23)
        - _log_fact(j)
        - _log_poch(2 * k12, j)
        - _log_poch(2 * k3, j)
        - _log_poch(2 * k12 + 2 * k3 + j - 1, j)
        - _log_fact(j12)
        - _log_poch(2 * k1, j12)
        - _log_poch(2 * k2, j12)
        - _log_poch(2 * k1 + 2 * k2 + j12 - 1, j12)
    )
    series = hyp(
        (2 * k1 + 2 * k2 + j12 - 1, 2 * k2 + 2 * k3 + j23 - 1, -j12, -j23),
        (2 * k2, 2 * k1 + 2 * k2 + 2 * k3 + j + j12 - 1, -j - j12),
        1.0,
        min(j12, j23),
    )
    return math.exp(log_pre + 0.5 * log_rad) * series.real


def _log_qpoch4(a, b, c, d, base, n):
    return sum(_log_qpoch(v, base, n) for v in (a, b, c, d))


def racah_uq_su11(k1: float, k2: float, k3: float, j12: int, j23: int, j: int, q: float) -> float:
    """Racah coefficient of U_q(su(1,1)) as a balanced 4phi3 in base q^2."""
    jp = _racah_labels(k1, k2, k3, j12, j23, j)
    _need_q(q)
    Q = q * q
    k12 = k1 + k2 + j12
    k23 = k2 + k3 + j23
    log_rad = (
        _log_qpoch4(Q, q ** (4 * k1), q ** (4 * k23), q ** (4 * k1 + 4 * k23 + 2 * jp - 2), Q, jp)
        + _log_qpoch4(Q, q ** (4 * k2), q ** (4 * k3), q ** (4 * k2 + 4 * k3 + 2 * j23 - 2), Q, j23)
        - _log_qpoch4(Q, q ** (4 * k12), q ** (4 * k3), q ** (4 * k12 + 4 * k3 + 2 * j - 2), Q, j)
        - _log_qpoch4(Q, q ** (4 * k1), q ** (4 * k2), q ** (4 * k1 + 4 * k2 + 2 * j12 - 2), Q, j12)
    )
    top = 4 * k1 + 4 * k2 + 4 * k3 + 2 * j + 2 * j12 - 2
    log_pre = (
        math.log(q_binomial(j + j12, j23, Q))
        + _log_qpoch(q ** (4 * k3), Q, j)
        + _log_qpoch(q ** (4 * k2), Q, j12)
        + _log_qpoch(q**top, Q, j23)
        - _log_qpoch(q ** (4 * k3), Q, j23)
        - _log_qpoch(q ** (4 * k2 + 4 * k3 + 2 * j23 - 2), Q, j23)
        - _log_qpoch(q ** (4 * k2 + 4 * k3 + 4 * j23), Q, jp)
    )
    # parameters as (coef, k) for coef * Q^k
    series = qphi43_balanced_stable(
        j12,
        ((1.0, -j23), (q ** (4 * k1 + 4 * k2 - 2), j12), (q ** (4 * k2 + 4 * k3 - 2), j23)),
        ((q ** (4 * k2), 0), (q ** (4 * k1 + 4 * k2 + 4 * k3 - 2), j + j12), (1.0, -j - j12)),
        Q,
    )
    return q ** (2 * k2 * (j - j23)) * math.exp(log_pre + 0.5 * log_rad) * series.real


def c_norm(k1: float, k2: float, j: int, q: float) -> float:
    """C_j(k1, k2) = ((q^2, q^{4k1}, q^{4k2}, q^{4k1+4k2+2j-2}; q^2)_j)^{-1/2}."""
    _nonneg_ints(j=j)
    Q = q * q
    return math.exp(-0.5 * _log_qpoch4(Q, q ** (4 * k1), q ** (4 * k2), q ** (4 * k1 + 4 * k2 + 2 * j - 2), Q, j))


# ---------------------------------------------------------------------------
# U_q(su(2))


def _check_su2(N1, N2, j):
    _nonneg_ints(N1=N1, N2=N2, j=j)
    if j > min(N1, N2):
        raise ConstraintError("need 0 <= j <= min(N1, N2)")


def cgc_uq_su2_n0(N1: int, N2: int, j: int, n1: int, n2: int, q: float) -> float:
    """<e^N_0, e^{N1}_{n1} (x) e^{N2}_{n2}> for N = N1 + N2 - 2j, n1 + n2 = j.

    (-1)^{n2} q^{n2(N2-j+1)}
      * sqrt[(q^{2n1+2}; q^2)_{n2} (q^{2N1-2n1}; q^-2)_{n2}
             / ((q^2; q^2)_{n2} (q^{2N2}; q^-2)_{n2})]
      * sqrt[(q^{2N2}; q^-2)_j / (q^{2N1+2N2-4j+4}; q^2)_j]

    The second square root makes the column a unit vector; the coefficient
    with n2 = 0 is positive.
    """
    _check_su2(N1, N2, j)
    _nonneg_ints(n1=n1, n2=n2)
    _need_q(q)
    if n1 + n2 != j:
        raise ConstraintError("n1 + n2 must equal j")
    Q = q * q
    log_rad = (
        _log_qpoch(q ** (2 * n1 + 2), Q, n2)
        + _log_qpoch(q ** (2 * N1 - 2 * n1), 1 / Q, n2)
        - _log_qpoch(Q, Q, n2)
        - _log_qpoch(q ** (2 * N2), 1 / Q, n2)
        + _log_qpoch(q ** (2 * N2), 1 / Q, j)
        - _log_qpoch(q ** (2 * N1 + 2 * N2 - 4 * j + 4), Q, j)
    )
    return (-1) ** n2 * q ** (n2 * (N2 - j + 1)) * math.exp(0.5 * log_rad)


def cgc_uq_su2_n0_column(N1: int, N2: int, j: int, q: float) -> np.ndarray:
    """Coefficients for n1 = 0..j (n2 = j - n1) as a vector."""
    return np.array([cgc_uq_su2_n0(N1, N2, j, n1, j - n1, q) for n1 in range(j + 1)])


def eigenbasis_overlap_uq_su2(N1: int, N2: int, j: int, f1: int, f2: int, p: float, q: float) -> float:
    """<phi^{N1,N2}_{f1,f2}, e^N_0> with N = N1 + N2 - 2j, as a balanced 4phi3.

    Zero unless 0 <= f1 + f2 - j <= N. The phi vectors are the unnormalised
    eigenvectors of Delta(X_p A) built from orthonormal dual q-Krawtchouk
    polynomials, and e^N_0 carries the Clebsch-Gordan sign convention of
    ``cgc_uq_su2_n0``; with that convention the value is (-1)^j times the
    product of the prefactor and the 4phi3.
    """
    _check_su2(N1, N2, j)
    _nonneg_ints(f1=f1, f2=f2)
    if f1 > N1 or f2 > N2:
        raise DomainError("need 0 <= f1 <= N1 and 0 <= f2 <= N2")
    if not p > 0:
        raise DomainError("p must be positive")
    _need_q(q)
    N = N1 + N2 - 2 * j
    if not 0 <= f1 + f2 - j <= N:
        return 0.0
    Q = q * q
    F = f1 + f2
    log_abs = 0.5 * (
        math.log(q_binomial(N2, j, Q))
        - _log_qpoch(q ** (2 * N1), 1 / Q, j)
        - _log_qpoch(q ** (2 * N1 + 2 * N2 - 2 * j + 2), 1 / Q, j)
    )
    pre = (
        p ** (j / 2)
        * q ** (j * (2 * N1 + N2) - 3 * j * (j - 1) / 2)
        * math.exp(log_abs)
        * q_pochhammer(-(q ** (2 * F - 2 * N1 - 2 * N2)) / p, Q, j)
        * q_pochhammer(q ** (-2 * F), Q, j)
    )
    series = qphi43_balanced_stable(
        j,
        ((1.0, j - 1 - N1 - N2), (1.0, -f2), (-1 / p, f2 - N2)),
        ((1.0, -N2), (1.0, -F), (-1 / p, F - N1 - N2)),
        Q,
    )
    return (-1) ** j * pre * complex(series).real


def uq_su2_eigenvector(N: int, f: int, p: float, q: float) -> np.ndarray:
    """phi^N_f(p): coefficients r_n(q^{-2f} - q^{2f-2N}/p; p, N; q^2), n = 0..N."""
    Q = q * q
    return np.array([dual_q_krawtchouk_at(n, f, p, N, Q, orthonormal=True).real for n in range(N + 1)])


def uq_su2_tensor_eigenvector(N1: int, N2: int, f1: int, f2: int, p: float, q: float) -> np.ndarray:
    """phi^{N1,N2}_{f1,f2} in the basis e_{n1} (x) e_{n2}, index n1 (N2+1) + n2."""
    Q = q * q
    a = p * q ** (2 * N2 - 4 * f2)
    first = np.array([dual_q_krawtchouk_at(n, f1, a, N1, Q, orthonormal=True).real for n in range(N1 + 1)])
    return np.kron(first, uq_su2_eigenvector(N2, f2, p, q))


def uq_su2_lowest_vector(N1: int, N2: int, j: int, q: float) -> np.ndarray:
    """e^N_0 for N = N1 + N2 - 2j in the basis e_{n1} (x) e_{n2}."""
    v = np.zeros((N1 + 1) * (N2 + 1))
    for n1 in range(j + 1):
        v[n1 * (N2 + 1) + (j - n1)] = cgc_uq_su2_n0(N1, N2, j, n1, j - n1, q)
    return v


def overlap_matrix(N1: int, N2: int, F: int, p: float, q: float) -> np.ndarray:
    """Normalised overlaps for the eigenvalue label F = f1 + f2.

    Rows run over (f1, f2) with f1 + f2 = F, columns over the admissible j.
    Entry: overlap * |phi^N_{F-j}| / |phi^{N1,N2}_{f1,f2}|. The phi vectors
    are not unit vectors, so this rescaling is what turns the overlaps into
    an orthogonal matrix.
    """
    rows = [(f1, F - f1) for f1 in range(N1 + 1) if 0 <= F - f1 <= N2]
    cols = [j for j in range(min(N1, N2) + 1) if 0 <= F - j <= N1 + N2 - 2 * j]
    M = np.zeros((len(rows), len(cols)))
    for r, (f1, f2) in enumerate(rows):
        norm12 = np.linalg.norm(uq_su2_tensor_eigenvector(N1, N2, f1, f2, p, q))
        for c, j in enumerate(cols):
            norm_n = np.linalg.norm(uq_su2_eigenvector(N1 + N2 - 2 * j, F - j, p, q))
            M[r, c] = eigenbasis_overlap_uq_su2(N1, N2, j, f1, f2, p, q) * norm_n / norm12
    return M


# ---------------------------------------------------------------------------
# coupling matrices


def cgc_matrix(k1: float, k2: float, level: int, q: Optional[float] = None) -> np.ndarray:
    """Clebsch-Gordan matrix at fixed n1 + n2 = level; rows n1, columns j."""
    M = np.zeros((level + 1, level + 1))
    for n1 in range(level + 1):
        for j in range(level + 1):
            if q is None:
                M[n1, j] = cgc_su11(k1, k2, j, n1, level - n1, level - j)
            else:
                M[n1, j] = cgc_uq_su11(k1, k2, j, n1, level - n1, level - j, q)
    return M


def racah_matrix(k1: float, k2: float, k3: float, level: int, q: Optional[float] = None) -> np.ndarray:
    """Racah matrix at fixed j12 + j = level; rows j12, columns j23."""
    M = np.zeros((level + 1, level + 1))
    for j12 in range(level + 1):
        for j23 in range(level + 1):
            j = level - j12
            if q is None:
                M[j12, j23] = racah_su11(k1, k2, k3, j12, j23, j)
            else:
                M[j12, j23] = racah_uq_su11(k1, k2, k3, j12, j23, j, q)
    return M


# ---------------------------------------------------------------------------
# linearisation


def linearisation_family(p: float, r: float, q: float) -> AskeyWilson:
    """The Askey-Wilson family p_l(x; q sqrt(p/r), q sqrt(r/p), -q/sqrt(pr), -q sqrt(pr) | q^2)."""
    if not (p > 0 and r > 0):
        raise DomainError("p, r must be positive")
    _need_q(q)
    return AskeyWilson(q * math.sqrt(p / r), q * math.sqrt(r / p), -q / math.sqrt(p * r), -q * math.sqrt(p * r), q * q)


def linearisation_coeffs(l1: int, l2: int, p: float, r: float, q: float) -> list[float]:
    """c_j with p_{l1} p_{l2} = sum_{j=0}^{2 min(l1,l2)} c_j p_{l1+l2-j}.

    Closed form: a product of two balanced 4phi3 series, one in p and one in
    r. The shifted factorial (q^{2l1+2}; q^2)_{l1-j} has a negative index
    when j > l1 and is read as 1 / (q^{2l1+2} q^{2(l1-j)}; q^2)_{j-l1}.
    """
    _nonneg_ints(l1=l1, l2=l2)
    if not (p > 0 and r > 0):
        raise DomainError("p, r must be positive")
    _need_q(q)
    Q = q * q
    L = l1 + l2
    out = []
    for j in range(2 * min(l1, l2) + 1):
        c = q ** (-j * (j - 1) + j + 4 * j * l1)
        c *= q_pochhammer(Q ** (l1 + 1), Q, l1 - j) * q_pochhammer(Q ** (l2 + 1), Q, l2)
        c *= q_binomial(2 * l2, j, Q)
        c *= q_pochhammer(Q**L, 1 / Q, j) / q_pochhammer(Q ** (L + 1), Q, L - j)
        c *= (1 - q ** (4 * L - 4 * j + 2)) / (1 - q ** (4 * L - 2 * j + 2))
        for z in (p, r):
            c *= z ** (j / 2) * q_pochhammer(-(q ** (-2 * L)) / z, Q, j)
            c *= qphi43_balanced_stable(
                j,
                ((1.0, -l2), (1.0, j - 1 - 2 * L), (-1 / z, -l2)),
                ((1.0, -2 * l2), (1.0, -L), (-1 / z, -L)),
                Q,
            )
        out.append(complex(c).real)
    return out
