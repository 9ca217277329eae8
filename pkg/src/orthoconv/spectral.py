"""Jacobi operators, Gauss rules and the representation operators.

A Jacobi operator is stored as two coefficient callables, so unbounded
operators (like the su(1,1) one with a linearly growing diagonal) are only
ever materialised as finite sections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .numerics import NumericsError
from .polynomials import ArgumentMap, DomainError, mu

__all__ = [
    "ConvergenceError",
    "DimensionError",
    "JacobiOperator",
    "TridiagonalMatrix",
    "QuadratureRule",
    "Su11Xphi",
    "UqSu11YsA",
    "UqSu2XpA",
    "truncate",
    "eig_tridiagonal",
    "gauss_rule",
    "eval_by_recurrence",
    "representation_operator",
    "uq_su2_eigenvalue",
]

DEFLATION_TOL = 1e-14
MAX_SWEEPS = 50


class ConvergenceError(NumericsError):
    """The QL iteration did not converge within the iteration cap."""


class DimensionError(ValueError):
    """A section larger than the operator was requested."""


@dataclass(frozen=True)
class JacobiOperator:
    """Symmetric tridiagonal operator with off-diagonal a(n) and diagonal b(n).

    ``a(n)`` couples levels n and n+1. ``dimension`` is None for an unbounded
    operator. ``variable_map`` sends the natural polynomial argument to the
    spectral variable the recurrence is written in.
    """

    a: Callable[[int], float]
    b: Callable[[int], float]
    dimension: Optional[int]
    variable_map: ArgumentMap


@dataclass(frozen=True)
class TridiagonalMatrix:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or e.shape != (max(len(d) - 1, 0),):
            raise ValueError("offdiag must have length len(diag) - 1")
        if np.any(e <= 0) or not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise DomainError("off-diagonal entries must be finite and positive")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def size(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def truncate(J: JacobiOperator, N: int) -> TridiagonalMatrix:
    """Leading N x N section of J."""
    if N < 1:
        raise DimensionError("section size must be positive")
    if J.dimension is not None and N > J.dimension:
        raise DimensionError(f"section size {N} exceeds operator dimension {J.dimension}")
    diag = np.array([J.b(n) for n in range(N)], dtype=float)
    offdiag = np.array([J.a(n) for n in range(N - 1)], dtype=float)
    return TridiagonalMatrix(diag, offdiag)


def eig_tridiagonal(T: TridiagonalMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and first eigenvector components of a Jacobi matrix.

    Implicit QL sweeps with a Wilkinson shift; only the row of the
    accumulated rotation matrix belonging to the first basis vector is
    tracked, which is all a Gauss rule needs.
    Values are ascending, components nonnegative.
    """
    n = T.size
    d = [float(v) for v in T.diag]
    e = [float(v) for v in T.offdiag]
    z = [0.0] * n
    # QL wants the large entries at the bottom; for a matrix graded the
    # other way, reverse it and follow the last row of Z instead
    if n > 1 and abs(d[0]) + abs(e[0]) > abs(d[-1]) + abs(e[-1]):
        d.reverse()
        e.reverse()
        z[n - 1] = 1.0
    else:
        z[0] = 1.0
    e.append(0.0)
    norm = max(abs(v) for v in d) + 2 * max([abs(v) for v in e] + [0.0])
    floor = 1e-300 + 1e-17 * norm
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= max(DEFLATION_TOL * (abs(d[m]) + abs(d[m + 1])), floor):
                    break
                m += 1
            if m == l:
                break
            if sweeps == MAX_SWEEPS:
                raise ConvergenceError(f"no convergence for eigenvalue {l} after {MAX_SWEEPS} sweeps")
            sweeps += 1
            # shift: eigenvalue of the leading 2x2 block nearer to d[l]
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            split = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                bb = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    split = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * bb
                p = s * r
                d[i + 1] = g + p
                g = c * r - bb
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
            if split:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    order = sorted(range(n), key=lambda i: d[i])
    values = np.array([d[i] for i in order])
    comps = np.array([abs(z[i]) for i in order])
    if n > 1 and not np.all(np.diff(values) > 0):
        raise ConvergenceError("eigenvalues not strictly increasing; a Jacobi matrix has a simple spectrum")
    return values, comps


def gauss_rule(J: JacobiOperator, N: int) -> QuadratureRule:
    """N-point Gauss rule (Golub-Welsch) for the spectral measure of J.

    Nodes are in the spectral variable of J.
    """
    values, comps = eig_tridiagonal(truncate(J, N))
    return QuadratureRule(values, comps**2)


def eval_by_recurrence(J: JacobiOperator, N: int, x: float) -> np.ndarray:
    """Orthonormal values p_0(x) .. p_N(x) from the three-term recurrence.

    x p_n = a_n p_{n+1} + b_n p_n + a_{n-1} p_{n-1}, p_{-1} = 0, p_0 = 1,
    with x in the spectral variable of J.
    """
    if J.dimension is not None and N > J.dimension - 1:
        raise DimensionError(f"degree {N} exceeds operator dimension {J.dimension}")
    p = np.empty(N + 1)
    p[0] = 1.0
    prev, a_prev = 0.0, 0.0
    for n in range(N):
        a_n = J.a(n)
        nxt = ((x - J.b(n)) * p[n] - a_prev * prev) / a_n
        prev, a_prev = p[n], a_n
        p[n + 1] = nxt
    return p


# ---------------------------------------------------------------------------
# representation operators


@dataclass(frozen=True)
class Su11Xphi:
    """X_phi = -cos(phi) H + B - C in the positive discrete series pi_k."""

    k: float
    phi: float

    def __post_init__(self):
        if not (self.k > 0 and 0 < self.phi < math.pi):
            raise DomainError("Su11Xphi needs k > 0 and phi in (0, pi)")


@dataclass(frozen=True)
class UqSu11YsA:
    """Y_s A in the positive discrete series of U_q(su(1,1)).

    s is real and nonzero, or on the unit circle.
    """

    k: float
    s: complex
    q: float

    def __post_init__(self):
        s = complex(self.s)
        on_circle = abs(abs(s) - 1.0) < 1e-14
        if not (self.k > 0 and 0 < self.q < 1 and s != 0 and (s.imag == 0 or on_circle)):
            raise DomainError("UqSu11YsA needs k > 0, q in (0, 1) and s real nonzero or |s| = 1")


@dataclass(frozen=True)
class UqSu2XpA:
    """X_p A in the (N+1)-dimensional representation of U_q(su(2))."""

    N: int
    p: float
    q: float

    def __post_init__(self):
        if not (isinstance(self.N, int) and self.N >= 0 and self.p > 0 and 0 < self.q < 1):
            raise DomainError("UqSu2XpA needs integer N >= 0, p > 0 and q in (0, 1)")


RepnOperatorSpec = Union[Su11Xphi, UqSu11YsA, UqSu2XpA]


def uq_su2_eigenvalue(N: int, f: int, p: float, q: float) -> float:
    """lambda_f^N(p), the eigenvalue of X_p A for the f-th eigenvector."""
    sp = math.sqrt(p)
    return (sp * q ** (N - 2 * f) - q ** (2 * f - N) / sp + 1 / sp - sp) / (1 / q - q)


def representation_operator(spec: RepnOperatorSpec) -> JacobiOperator:
    """Tridiagonal matrix of a representation operator in the standard basis.

    The variable map sends the natural polynomial argument to the eigenvalue
    variable of the operator: y = 2x sin(phi) for X_phi (Meixner-Pollaczek
    argument x), y = 2(x - mu(s)) / (q^-1 - q) for Y_s A (Al-Salam-Chihara
    argument x) and y = lambda_f^N(p) for X_p A (grid label f).
    """
    if isinstance(spec, Su11Xphi):
        k, phi = spec.k, spec.phi
        return JacobiOperator(
            a=lambda n: math.sqrt((n + 1) * (2 * k + n)),
            b=lambda n: -2.0 * (k + n) * math.cos(phi),
            dimension=None,
            variable_map=ArgumentMap.make("affine", "y = 2 x sin(phi)", scale=2 * math.sin(phi), shift=0.0),
        )
    if isinstance(spec, UqSu11YsA):
        k, q = spec.k, spec.q
        s = complex(spec.s)
        s_sum = (s + 1 / s).real
        gap = 1 / q - q
        return JacobiOperator(
            a=lambda n: math.sqrt((1 - q ** (2 * n + 2)) * (1 - q ** (4 * k + 2 * n))) / gap,
            b=lambda n: s_sum * (q ** (2 * k + 2 * n) - 1) / gap,
            dimension=None,
            variable_map=ArgumentMap.make(
                "affine",
                "y = 2 (x - mu(s)) / (q^-1 - q)",
                scale=2 / gap,
                shift=-2 * mu(s).real / gap,
            ),
        )
    if isinstance(spec, UqSu2XpA):
        N, p, q = spec.N, spec.p, spec.q
        sp = math.sqrt(p)
        gap = 1 / q - q
        return JacobiOperator(
            a=lambda n: q ** (n + 1 - N) / (1 - q * q) * math.sqrt((1 - q ** (2 * n + 2)) * (1 - q ** (2 * N - 2 * n))),
            b=lambda n: (sp - 1 / sp) * (q ** (2 * n - N) - 1) / gap,
            dimension=N + 1,
            variable_map=ArgumentMap.make(
                "dualqk",
                "y = lambda_f^N(p)",
                a=p,
                N=N,
                q=q * q,
                scale=sp * q**N / gap,
                shift=-(sp - 1 / sp) / gap,
            ),
        )
    raise DomainError(f"unknown representation operator {spec!r}")
