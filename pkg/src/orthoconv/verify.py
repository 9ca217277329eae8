"""Identity catalog and the sampling engine that checks it.

Each catalog entry pairs a parameter sampler with an evaluator returning
both sides of a convolution identity and the terms of its summed side. The
residual |LHS - RHS| is divided by the sum of the absolute values of those
terms, so cancellation noise in a well-conditioned identity stays near eps
while a genuinely wrong identity shows up at order one.

Samples are drawn from per-index Philox streams keyed by (seed, index), so a
report does not depend on how many workers evaluated it.
"""

from __future__ import annotations

import cmath
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

import numpy as np

from . import coupling
from .numerics import NumericsError, kahan_sum, pochhammer, q_binomial, q_pochhammer
from .polynomials import (
    AlSalamChihara,
    DomainError,
    DualQKrawtchouk,
    MeixnerPollaczek,
    al_salam_chihara,
    askey_wilson,
    charlier,
    continuous_hahn,
    hahn,
    hahn_scaled,
    hermite,
    jacobi,
    jacobi_homogeneous,
    krawtchouk,
    krawtchouk_scaled,
    laguerre,
    meixner,
    meixner_pollaczek,
    orthonormal_eval,
    q_hahn_at,
    q_racah_at,
    racah,
    recurrence,
)
from .spectral import gauss_rule

__all__ = [
    "IdentityId",
    "SampleConfig",
    "SampleResult",
    "IdentityReport",
    "IdentityInfo",
    "Evaluation",
    "DEFAULT_RANGES",
    "DEGENERATIONS",
    "UNITARITY_KINDS",
    "verify",
    "evaluate_sample",
    "scaled_residual",
    "degeneration",
    "orthogonality_suite",
    "unitarity_suite",
    "list_identities",
    "sample_rng",
]

RESIDUAL_GUARD = 1e-300


class IdentityId(str, enum.Enum):
    T3_4 = "T3_4"
    C3_6i = "C3_6i"
    C3_6ii = "C3_6ii"
    C3_8i = "C3_8i"
    C3_8ii = "C3_8ii"
    T3_13 = "T3_13"
    C3_15i = "C3_15i"
    C3_15ii = "C3_15ii"
    T4_5 = "T4_5"
    T4_10 = "T4_10"
    R4_11ii_qracah = "R4_11ii_qracah"
    R4_11ii_qhahn = "R4_11ii_qhahn"
    T5_5 = "T5_5"
    CGC_ORTHO = "CGC_ORTHO"
    RACAH_ORTHO = "RACAH_ORTHO"
    GAUSS_ORTHO = "GAUSS_ORTHO"


DEFAULT_RANGES: dict[str, tuple[float, float]] = {
    "k": (0.3, 2.5),
    "phi": (0.3, math.pi - 0.3),
    "x": (-3.0, 3.0),
    "c": (0.2, 0.8),
    "q": (0.2, 0.9),
    "theta": (0.2, math.pi - 0.2),
    "ab": (0.3, 2.0),
    "p": (0.7, 1.4),
}


@dataclass(frozen=True)
class SampleConfig:
    """Seeded sampling configuration.

    ``ranges`` overrides entries of DEFAULT_RANGES by name. ``workers`` only
    changes wall time, never the report.
    """

    seed: int = 0
    count: int = 200
    classical_cap: int = 12
    q_cap: int = 10
    tolerance: float = 1e-8
    ranges: Mapping[str, tuple[float, float]] = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be positive")
        if self.classical_cap < 0 or self.q_cap < 0:
            raise ValueError("degree caps must be nonnegative")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        unknown = set(self.ranges) - set(DEFAULT_RANGES)
        if unknown:
            raise ValueError(f"unknown range names: {sorted(unknown)}")
        for name, (lo, hi) in self.ranges.items():
            if not lo <= hi:
                raise ValueError(f"empty range for {name}")
        if "q" in self.ranges:
            lo, hi = self.ranges["q"]
            if not (0 < lo and hi < 1):
                raise ValueError("q range must lie inside (0, 1)")
        object.__setattr__(self, "ranges", dict(self.ranges))

    def range(self, name: str) -> tuple[float, float]:
        return tuple(self.ranges.get(name, DEFAULT_RANGES[name]))

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "classical_cap": self.classical_cap,
            "q_cap": self.q_cap,
            "tolerance": self.tolerance,
            "ranges": {k: list(self.range(k)) for k in sorted(DEFAULT_RANGES)},
        }


@dataclass(frozen=True)
class Evaluation:
    lhs: complex
    rhs: complex
    terms: tuple[complex, ...]


@dataclass(frozen=True)
class SampleResult:
    index: int
    parameters: dict
    lhs: Optional[complex]
    rhs: Optional[complex]
    scaled_residual: float
    error: Optional[str] = None


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    config: SampleConfig
    samples: tuple[SampleResult, ...]
    max_scaled_residual: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "config": self.config.to_dict(),
            "max_scaled_residual": self.max_scaled_residual,
            "pass": self.passed,
            "samples": [
                {
                    "index": s.index,
                    "parameters": s.parameters,
                    "lhs": s.lhs,
                    "rhs": s.rhs,
                    "scaled_residual": s.scaled_residual,
                    "error": s.error,
                }
                for s in self.samples
            ],
        }


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for one sample."""
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), index]))


def scaled_residual(ev: Evaluation) -> float:
    scale = sum(abs(t) for t in ev.terms)
    return abs(ev.lhs - ev.rhs) / (RESIDUAL_GUARD + scale)


# ---------------------------------------------------------------------------
# sampling helpers


def _uniform(rng, config, name):
    lo, hi = config.range(name)
    return float(rng.uniform(lo, hi))


def _log_uniform(rng, lo, hi):
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def _degrees(rng, cap):
    total = int(rng.integers(0, cap + 1))
    j = int(rng.integers(0, total + 1))
    return total - j, j


def _x_of(theta):
    return math.cos(theta)


# ---------------------------------------------------------------------------
# classical identities


def _binom(n, k):
    return float(math.comb(n, k))


def _fact(n):
    return float(math.factorial(n))


def _ev(terms, other, summed_on_left=True):
    total = kahan_sum(terms)
    if summed_on_left:
        return Evaluation(total, other, tuple(terms))
    return Evaluation(other, total, tuple(terms))


def _sample_t34(rng, cfg):
    n, j = _degrees(rng, cfg.classical_cap)
    return dict(
        n=n,
        j=j,
        k1=_uniform(rng, cfg, "k"),
        k2=_uniform(rng, cfg, "k"),
        phi=_uniform(rng, cfg, "phi"),
        x1=_uniform(rng, cfg, "x"),
        x2=_uniform(rng, cfg, "x"),
    )


def _eval_t34(p):
    n, j, k1, k2, phi, x1, x2 = (p[k] for k in ("n", "j", "k1", "k2", "phi", "x1", "x2"))
    N = n + j
    terms = [
        _binom(N, n)
        * hahn(j, l, 2 * k1 - 1, 2 * k2 - 1, N)
        * meixner_pollaczek(l, k1, phi, x1)
        * meixner_pollaczek(N - l, k2, phi, x2)
        for l in range(N + 1)
    ]
    s = x1 + x2
    rhs = (
        (-2 * math.sin(phi)) ** j
        / pochhammer(2 * k1, j)
        * meixner_pollaczek(n, k1 + k2 + j, phi, s)
        * continuous_hahn(j, x1, k1, k2 - 1j * s, k1, k2 + 1j * s)
    )
    return _ev(terms, rhs)


def _sample_c36i(rng, cfg):
    n, j = _degrees(rng, cfg.classical_cap)
    return dict(
        n=n,
        j=j,
        a=2 * _uniform(rng, cfg, "k") - 1,
        b=2 * _uniform(rng, cfg, "k") - 1,
        x1=_uniform(rng, cfg, "x"),
        x2=_uniform(rng, cfg, "x"),
    )


def _eval_c36i(p):
    n, j, a, b, x1, x2 = (p[k] for k in ("n", "j", "a", "b", "x1", "x2"))
    N = n + j
    terms = [hahn(j, l, a, b, N) * laguerre(l, a, x1) * laguerre(N - l, b, x2) for l in range(N + 1)]
    s = x1 + x2
    rhs = (
        (-1) ** j
        * _fact(n)
        * _fact(j)
        / (pochhammer(a + 1, j) * _fact(N))
        * laguerre(n, a + b + 1 + 2 * j, s)
        * jacobi_homogeneous(j, a, b, s, x1)
    )
    return _ev(terms, rhs)


def _sample_c36ii(rng, cfg):
    n, j = _degrees(rng, cfg.classical_cap)
    return dict(
        n=n,
        j=j,
        a=2 * _uniform(rng, cfg, "k"),
        b=2 * _uniform(rng, cfg, "k"),
        c=_uniform(rng, cfg, "c"),
        x1=_uniform(rng, cfg, "x"),
        x2=_uniform(rng, cfg, "x"),
    )


def _eval_c36ii(p):
    n, j, a, b, c, x1, x2 = (p[k] for k in ("n", "j", "a", "b", "c", "x1", "x2"))
    N = n + j
    lead = (1 / c - 1) ** (-j)
    terms = [
        lead
        * pochhammer(a, l)
        * pochhammer(b, N - l)
        / (_fact(l) * _fact(N - l))
        * hahn(j, l, a - 1, b - 1, N)
        * meixner(l, x1, a, c)
        * meixner(N - l, x2, b, c)
        for l in range(N + 1)
    ]
    rhs = (
        pochhammer(a + b + 2 * j, n)
        / _fact(N)
        * meixner(n, x1 + x2 - j, a + b + 2 * j, c)
        * hahn_scaled(j, x1, a - 1, b - 1, x1 + x2)
    )
    return _ev(terms, rhs)


def _sample_c38i(rng, cfg):
    n, j = _degrees(rng, cfg.classical_cap)
    return dict(
        n=n,
        j=j,
        a=_uniform(rng, cfg, "ab"),
        b=_uniform(rng, cfg, "ab"),
        x=_uniform(rng, cfg, "x"),
        y=_uniform(rng, cfg, "x"),
    )


def _eval_c38i(p):
    n, j, a, b, x, y = (p[k] for k in ("n", "j", "a", "b", "x", "y"))
    N = n + j
    r2 = a * a + b * b
    terms = [
        krawtchouk(j, l, a * a / r2, N)
        * a**l
        / _fact(l)
        * hermite(l, x)
        * b ** (N - l)
        / _fact(N - l)
        * hermite(N - l, y)
        for l in range(N + 1)
    ]
    r = math.sqrt(r2)
    rhs = r2 ** (N / 2) / _fact(N) * (b / a) ** j * hermite(n, (a * x + b * y) / r) * hermite(j, (a * y - b * x) / r)
    return _ev(terms, rhs)


def _sample_c38ii(rng, cfg):
    n, j = _degrees(rng, cfg.classical_cap)
    return dict(
        n=n,
        j=j,
        alpha=_uniform(rng, cfg, "ab"),
        beta=_uniform(rng, cfg, "ab"),
        x=_uniform(rng, cfg, "x"),
        y=_uniform(rng, cfg, "x"),
    )


def _eval_c38ii(p):
    n, j, al, be, x, y = (p[k] for k in ("n", "j", "alpha", "beta", "x", "y"))
    N = n + j
    terms = [
        _binom(N, l)
        * al**l
        * be ** (N - l)
        * krawtchouk(j, l, al / (al + be), N)
        * charlier(l, x, al)
        * charlier(N - l, y, be)
        for l in range(N + 1)
    ]
    rhs = (-1) ** j * (al + be) ** n * charlier(n, x + y - j, al + be) * krawtchouk_scaled(j, x, al / (al + be), x + y)
    return _ev(terms, rhs)


def _sample_t313(rng, cfg):
    n, j = _degrees(rng, cfg.classical_cap)
    return dict(
        n=n,
        j=j,
        k1=_uniform(rng, cfg, "k"),
        k2=_uniform(rng, cfg, "k"),
        k3=_uniform(rng, cfg, "k"),
        x1=_uniform(rng, cfg, "x"),
        x2=_uniform(rng, cfg, "x"),
        s=_uniform(rng, cfg, "x"),
    )


def _eval_t313(p):
    n, j, k1, k2, k3, x1, x2, s = (p[k] for k in ("n", "j", "k1", "k2", "k3", "x1", "x2", "s"))
    N = n + j
    terms = []
    for l in range(N + 1):
        coef = (
            _binom(N, n)
            * pochhammer(2 * k2, n)
            * pochhammer(2 * k3, j)
            * pochhammer(2 * k1 + 2 * k2 + 2 * k3 + N - 1, l)
            / (
                pochhammer(2 * k3, l)
                * pochhammer(2 * k2 + 2 * k3 + l - 1, l)
                * pochhammer(2 * k2 + 2 * k3 + 2 * l, N - l)
            )
        )
        R = racah(l, n, 2 * k2 - 1, 2 * k3 - 1, -N - 1, 2 * k1 + 2 * k2 + N - 1)
        kk = k2 + k3 + l
        terms.append(
            coef
            * R
            * continuous_hahn(N - l, x1, k1, kk - 1j * s, k1, kk + 1j * s)
            * continuous_hahn(l, x2, k2, k3 - 1j * (s - x1), k2, k3 + 1j * (s - x1))
        )
    u = x1 + x2
    rhs = continuous_hahn(n, x1, k1, k2 - 1j * u, k1, k2 + 1j * u) * continuous_hahn(
        j, u, k1 + k2 + n, k3 - 1j * s, k1 + k2 + n, k3 + 1j * s
    )
    return _ev(terms, rhs)


def _sample_c315i(rng, cfg):
    n, j = _degrees(rng, cfg.classical_cap)
    return dict(
        n=n,
        j=j,
        a=2 * _uniform(rng, cfg, "k") - 1,
        b=2 * _uniform(rng, cfg, "k") - 1,
        c=2 * _uniform(rng, cfg, "k") - 1,
        x1=_uniform(rng, cfg, "x"),
        x2=_uniform(rng, cfg, "x"),
    )


def _racah_coef(n, j, l, a, b, c):
    N = n + j
    return (
        _binom(N, n)
        * pochhammer(b + 1, n)
        * pochhammer(c + 1, j)
        * pochhammer(a + b + c + N + 2, l)
        / (pochhammer(c + 1, l) * pochhammer(b + c + l + 1, l) * pochhammer(b + c + 2 * l + 2, N - l))
    )


def _eval_c315i(p):
    n, j, a, b, c, x1, x2 = (p[k] for k in ("n", "j", "a", "b", "c", "x1", "x2"))
    N = n + j
    terms = [
        _racah_coef(n, j, l, a, b, c)
        * racah(l, n, b, c, -N - 1, a + b + N + 1)
        * jacobi(N - l, a, b + c + 2 * l + 1, 1 - 2 * x1)
        * jacobi_homogeneous(l, b, c, 1 - x1, x2)
        for l in range(N + 1)
    ]
    u = x1 + x2
    rhs = jacobi_homogeneous(n, a, b, u, x1) * jacobi(j, a + b + 2 * n + 1, c, 1 - 2 * u)
    return _ev(terms, rhs)


def _sample_c315ii(rng, cfg):
    d = _sample_c315i(rng, cfg)
    d["s"] = _uniform(rng, cfg, "x")
    return d


def _eval_c315ii(p):
    n, j, a, b, c, x1, x2, s = (p[k] for k in ("n", "j", "a", "b", "c", "x1", "x2", "s"))
    N = n + j
    terms = []
    for l in range(N + 1):
        coef = (
            _binom(N, l)
            * pochhammer(a + 1, N - l)
            * pochhammer(b + 1, l)
            * pochhammer(b + 1, n)
            * pochhammer(c + 1, j)
            * pochhammer(a + b + c + N + 2, l)
            / (
                pochhammer(a + 1, n)
                * pochhammer(c + 1, l)
                * pochhammer(b + c + l + 1, l)
                * pochhammer(b + c + 2 * l + 2, N - l)
                * pochhammer(a + b + 2 * n + 2, j)
            )
        )
        terms.append(
            coef
            * racah(l, n, b, c, -N - 1, a + b + N + 1)
            * hahn_scaled(N - l, x1, a, b + c + 2 * l + 1, s - l)
            * hahn_scaled(l, x2, b, c, s - x1)
        )
    rhs = hahn_scaled(n, x1, a, b, x1 + x2) * hahn_scaled(j, x1 + x2 - n, a + b + 2 * n + 1, c, s - n)
    return _ev(terms, rhs)


# ---------------------------------------------------------------------------
# q-identities (base Q = q^2 throughout)


def _sample_t45(rng, cfg):
    n, j = _degrees(rng, cfg.q_cap)
    q = _uniform(rng, cfg, "q")
    k1, k2 = _uniform(rng, cfg, "k"), _uniform(rng, cfg, "k")
    return dict(
        n=n,
        j=j,
        k1=k1,
        k2=k2,
        q=q,
        s=_log_uniform(rng, q ** (2 * k2), q ** (-2 * k2)),
        theta1=_uniform(rng, cfg, "theta"),
        theta2=_uniform(rng, cfg, "theta"),
    )


def _eval_t45(p):
    n, j, k1, k2, q, s, t1, t2 = (p[k] for k in ("n", "j", "k1", "k2", "q", "s", "theta1", "theta2"))
    Q = q * q
    N = n + j
    w1, w2 = cmath.exp(1j * t1), cmath.exp(1j * t2)
    x1, x2 = _x_of(t1), _x_of(t2)
    lead = q_pochhammer(q ** (4 * k1), Q, j)
    a1, a2 = q ** (2 * k1), q ** (2 * k2)
    terms = [
        lead
        * q ** (2 * k1 * (n - l))
        * q_binomial(N, l, Q)
        * q_hahn_at(j, l, q ** (4 * k1 - 2), q ** (4 * k2 - 2), N, Q)
        * al_salam_chihara(l, x1, a1 * w2, a1 / w2, Q)
        * al_salam_chihara(N - l, x2, a2 * s, a2 / s, Q)
        for l in range(N + 1)
    ]
    ak = q ** (2 * (k1 + k2 + j))
    rhs = al_salam_chihara(n, x1, ak * s, ak / s, Q) * askey_wilson(j, x2, a1 * w1, a1 / w1, a2 * s, a2 / s, Q)
    return _ev(terms, rhs)


def _sample_t410(rng, cfg):
    n, j = _degrees(rng, cfg.q_cap)
    q = _uniform(rng, cfg, "q")
    k1, k2, k3 = (_uniform(rng, cfg, "k") for _ in range(3))
    return dict(
        n=n,
        j=j,
        q=q,
        a=q ** (2 * k1),
        b=q ** (2 * k2),
        c=q ** (2 * k3),
        s=_log_uniform(rng, q ** (2 * k3), q ** (-2 * k3)),
        t=_log_uniform(rng, q ** (2 * k1), q ** (-2 * k1)),
        theta1=_uniform(rng, cfg, "theta"),
        theta2=_uniform(rng, cfg, "theta"),
    )


def _eval_t410(p):
    n, j, q, a, b, c, s, t, t1, t2 = (
        p[k] for k in ("n", "j", "q", "a", "b", "c", "s", "t", "theta1", "theta2")
    )
    Q = q * q
    N = n + j
    w1, w2 = cmath.exp(1j * t1), cmath.exp(1j * t2)
    x1, x2 = _x_of(t1), _x_of(t2)
    a2, b2, c2 = a * a, b * b, c * c
    terms = []
    for l in range(N + 1):
        co = (
            b ** (j - l)
            * q_binomial(N, l, Q)
            * q_pochhammer(b2, Q, n)
            * q_pochhammer(a2 * b2 * c2 * Q ** (N - 1), Q, l)
            * q_pochhammer(c2, Q, j)
            / (
                q_pochhammer(c2, Q, l)
                * q_pochhammer(b2 * c2 * Q ** (l - 1), Q, l)
                * q_pochhammer(b2 * c2 * Q ** (2 * l), Q, N - l)
            )
        )
        R = q_racah_at(l, n, (b2, -1), (c2, -1), (1.0, -N - 1), (a2 * b2, N - 1), Q)
        bcl = b * c * Q**l
        terms.append(
            co
            * R
            * askey_wilson(N - l, x1, a * t, a / t, bcl * s, bcl / s, Q)
            * askey_wilson(l, x2, b * w1, b / w1, c * s, c / s, Q)
        )
    abn = a * b * Q**n
    rhs = askey_wilson(n, x1, a * t, a / t, b * w2, b / w2, Q) * askey_wilson(j, x2, abn * t, abn / t, c * s, c / s, Q)
    return _ev(terms, rhs)


def _sample_r411_qracah(rng, cfg):
    d = _sample_t410(rng, cfg)
    a, b, c, s, t = d["a"], d["b"], d["c"], d["s"], d["t"]
    return dict(
        n=d["n"],
        j=d["j"],
        q=d["q"],
        alpha=a * a,
        beta=b * b,
        gamma=c * c,
        u=b * c * s / (a * t),
    )


def _r411_rhs(n, j, al, be, u, Q):
    return q_pochhammer(al * Q**n * u, Q, j) * q_pochhammer(be / u, Q, n)


def _eval_r411_qracah(p):
    n, j, q, al, be, ga, u = (p[k] for k in ("n", "j", "q", "alpha", "beta", "gamma", "u"))
    Q = q * q
    N = n + j
    terms = []
    for l in range(N + 1):
        co = (
            q_binomial(N, l, Q)
            * q_pochhammer(al, Q, N - l)
            * q_pochhammer(be, Q, n)
            * q_pochhammer(al * be * ga * Q ** (N - 1), Q, l)
            / (
                q_pochhammer(al, Q, n)
                * q_pochhammer(be * ga * Q ** (l - 1), Q, l)
                * q_pochhammer(be * ga * Q ** (2 * l), Q, N - l)
            )
        )
        terms.append(
            co
            * u ** (j - l)
            * q_pochhammer(be * ga * Q**l / u, Q, N - l)
            * q_pochhammer(u, Q, l)
            * q_racah_at(l, n, (be, -1), (ga, -1), (1.0, -N - 1), (al * be, N - 1), Q)
        )
    return _ev(terms, _r411_rhs(n, j, al, be, u, Q))


def _sample_r411_qhahn(rng, cfg):
    n, j = _degrees(rng, cfg.q_cap)
    q = _uniform(rng, cfg, "q")
    k1, k2 = _uniform(rng, cfg, "k"), _uniform(rng, cfg, "k")
    return dict(
        n=n,
        j=j,
        q=q,
        alpha=q ** (4 * k1),
        beta=q ** (4 * k2),
        u=_log_uniform(rng, q ** (2 * k1), q ** (-2 * k1)),
    )


def _eval_r411_qhahn(p):
    n, j, q, al, be, u = (p[k] for k in ("n", "j", "q", "alpha", "beta", "u"))
    Q = q * q
    N = n + j
    terms = [
        q_binomial(N, l, Q)
        * q_pochhammer(al, Q, N - l)
        * q_pochhammer(be, Q, n)
        / q_pochhammer(al, Q, n)
        * q_hahn_at(n, l, (be, -1), (al, -1), N, Q)
        * u ** (j - l)
        * q_pochhammer(u, Q, l)
        for l in range(N + 1)
    ]
    return _ev(terms, _r411_rhs(n, j, al, be, u, Q))


def _admissible_t55(p, r, q):
    return max(q * math.sqrt(p / r), q * math.sqrt(r / p), q * math.sqrt(p * r)) < 1


def _sample_t55(rng, cfg):
    total = int(rng.integers(0, cfg.q_cap + 1))
    l1 = int(rng.integers(0, total + 1))
    while True:
        p, r, q = _uniform(rng, cfg, "p"), _uniform(rng, cfg, "p"), _uniform(rng, cfg, "q")
        if _admissible_t55(p, r, q):
            break
    return dict(l1=l1, l2=total - l1, p=p, r=r, q=q, theta=_uniform(rng, cfg, "theta"))


def _eval_t55(p):
    l1, l2, pp, r, q, th = (p[k] for k in ("l1", "l2", "p", "r", "q", "theta"))
    fam = coupling.linearisation_family(pp, r, q)
    a, b, c, d = fam.params
    x = _x_of(th)

    def P(m):
        return askey_wilson(m, x, a, b, c, d, fam.q)

    coeffs = coupling.linearisation_coeffs(l1, l2, pp, r, q)
    terms = [cj * P(l1 + l2 - j) for j, cj in enumerate(coeffs)]
    # the sum sits on the right-hand side here
    return _ev(terms, P(l1) * P(l2), summed_on_left=False)


# ---------------------------------------------------------------------------
# suites


UNITARITY_KINDS = ("cgc_su11", "cgc_uq_su11", "cgc_uq_su2_n0", "racah_su11", "racah_uq_su11", "uq_su2_overlap")


def _orthogonality_defect(M) -> float:
    M = np.asarray(M, dtype=float)
    return float(np.max(np.abs(M.T @ M - np.eye(M.shape[1])))) if M.size else 0.0


def _unitarity_residual(kind, params, sizes) -> float:
    worst = 0.0
    q = params.get("q")
    for L in sizes:
        if kind == "cgc_su11":
            Ms = [coupling.cgc_matrix(params["k1"], params["k2"], L)]
        elif kind == "cgc_uq_su11":
            Ms = [coupling.cgc_matrix(params["k1"], params["k2"], L, q)]
        elif kind == "racah_su11":
            Ms = [coupling.racah_matrix(params["k1"], params["k2"], params["k3"], L)]
        elif kind == "racah_uq_su11":
            Ms = [coupling.racah_matrix(params["k1"], params["k2"], params["k3"], L, q)]
        elif kind == "cgc_uq_su2_n0":
            # N1 = L, N2 = max(L - 1, 0): every admissible column
            N1, N2 = L, max(L - 1, 0)
            Ms = [coupling.cgc_uq_su2_n0_column(N1, N2, j, q)[:, None] for j in range(min(N1, N2) + 1)]
        elif kind == "uq_su2_overlap":
            N1, N2 = L, max(L - 1, 0)
            Ms = [coupling.overlap_matrix(N1, N2, F, params["p"], q) for F in range(N1 + N2 + 1)]
        else:
            raise ValueError(f"unknown unitarity kind {kind!r}")
        for M in Ms:
            worst = max(worst, _orthogonality_defect(M))
    return worst


def _sample_coupling(rng, cfg):
    return dict(
        k1=_uniform(rng, cfg, "k"),
        k2=_uniform(rng, cfg, "k"),
        k3=_uniform(rng, cfg, "k"),
        q=_uniform(rng, cfg, "q"),
        p=_uniform(rng, cfg, "p"),
    )


def _gram_defect(family, N) -> float:
    J = recurrence(family)
    rule = gauss_rule(J, N)
    if isinstance(family, MeixnerPollaczek):
        xs = rule.nodes / (2 * math.sin(family.phi))
    elif isinstance(family, AlSalamChihara):
        xs = rule.nodes / 2
    elif isinstance(family, DualQKrawtchouk):
        xs = [family.grid_x(y) for y in rule.nodes]
        if N == family.N + 1:
            # a full rule has its nodes on the integer grid; snap them so the
            # grid evaluator applies. Partial-rule nodes can sit within 1e-10
            # of a grid point without being on it, so they stay as they are.
            xs = [round(x) if abs(x - round(x)) < 1e-8 else x for x in xs]
    else:
        raise DomainError(f"no Gauss route for {type(family).__name__}")
    P = np.array([[orthonormal_eval(family, i, x) for x in xs] for i in range(N)])
    G = (P * rule.weights) @ P.T
    return float(np.max(np.abs(G - np.eye(N))))


def _sample_gauss(rng, cfg):
    q = _uniform(rng, cfg, "q")
    k = _uniform(rng, cfg, "k")
    return dict(
        N=int(rng.integers(1, cfg.q_cap + 3)),
        lam=_uniform(rng, cfg, "k"),
        phi=_uniform(rng, cfg, "phi"),
        q=q,
        k=k,
        s=_log_uniform(rng, q ** (2 * k), q ** (-2 * k)),
        p=_uniform(rng, cfg, "p"),
    )


def _gauss_families(params):
    q, k, s = params["q"], params["k"], params["s"]
    a = q ** (2 * k)
    N = params["N"]
    return [
        MeixnerPollaczek(params["lam"], params["phi"]),
        AlSalamChihara(a * s, a / s, q * q),
        DualQKrawtchouk(params["p"], max(N - 1, 0), q * q),
    ]


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class _Entry:
    id: IdentityId
    title: str
    kind: str  # "classical", "q" or "suite"
    summed_side: str
    ranges: str
    sampler: Callable
    evaluator: Optional[Callable]


_CLASSICAL_RANGES = "k in [0.3, 2.5]; phi in [0.3, pi-0.3]; x in [-3, 3]; n+j <= classical cap"
_Q_RANGES = "k in [0.3, 2.5]; q in [0.2, 0.9], base q^2; s, t log-uniform in (q^2k, q^-2k); theta in [0.2, pi-0.2]; n+j <= q cap"

_CATALOG: tuple[_Entry, ...] = (
    _Entry(IdentityId.T3_4, "Meixner-Pollaczek convolution", "classical", "lhs", _CLASSICAL_RANGES, _sample_t34, _eval_t34),
    _Entry(IdentityId.C3_6i, "Laguerre convolution", "classical", "lhs", "a, b = 2k-1; x in [-3, 3]", _sample_c36i, _eval_c36i),
    _Entry(IdentityId.C3_6ii, "Meixner convolution", "classical", "lhs", "a, b = 2k; c in [0.2, 0.8]; x in [-3, 3]", _sample_c36ii, _eval_c36ii),
    _Entry(IdentityId.C3_8i, "Hermite convolution", "classical", "lhs", "a, b in [0.3, 2]; x, y in [-3, 3]", _sample_c38i, _eval_c38i),
    _Entry(IdentityId.C3_8ii, "Charlier convolution", "classical", "lhs", "alpha, beta in [0.3, 2]; x, y in [-3, 3]", _sample_c38ii, _eval_c38ii),
    _Entry(IdentityId.T3_13, "continuous Hahn convolution", "classical", "lhs", "k1, k2, k3 in [0.3, 2.5]; x1, x2, s in [-3, 3]", _sample_t313, _eval_t313),
    _Entry(IdentityId.C3_15i, "Jacobi convolution", "classical", "lhs", "a, b, c = 2k-1; x1, x2 in [-3, 3]", _sample_c315i, _eval_c315i),
    _Entry(IdentityId.C3_15ii, "Hahn convolution", "classical", "lhs", "a, b, c = 2k-1; x1, x2, s in [-3, 3]", _sample_c315ii, _eval_c315ii),
    _Entry(IdentityId.T4_5, "Al-Salam-Chihara and Askey-Wilson convolution", "q", "lhs", _Q_RANGES, _sample_t45, _eval_t45),
    _Entry(IdentityId.T4_10, "Askey-Wilson convolution", "q", "lhs", "(a, b, c) = q^(2k1, 2k2, 2k3); " + _Q_RANGES, _sample_t410, _eval_t410),
    _Entry(IdentityId.R4_11ii_qracah, "q-Racah generating identity", "q", "lhs", "(alpha, beta, gamma) = (a^2, b^2, c^2), u = bcs/(at)", _sample_r411_qracah, _eval_r411_qracah),
    _Entry(IdentityId.R4_11ii_qhahn, "q-Hahn generating identity", "q", "lhs", "alpha, beta = q^4k; u log-uniform in (q^2k, q^-2k)", _sample_r411_qhahn, _eval_r411_qhahn),
    _Entry(IdentityId.T5_5, "Askey-Wilson linearisation", "q", "rhs", "p, r in [0.7, 1.4]; admissibility products < 1; l1+l2 <= q cap", _sample_t55, _eval_t55),
    _Entry(IdentityId.CGC_ORTHO, "Clebsch-Gordan matrices orthogonal", "suite", "-", "levels 0..4; k in [0.3, 2.5]; q in [0.2, 0.9]", _sample_coupling, None),
    _Entry(IdentityId.RACAH_ORTHO, "Racah matrices orthogonal", "suite", "-", "levels 0..4; k in [0.3, 2.5]; q in [0.2, 0.9]", _sample_coupling, None),
    _Entry(IdentityId.GAUSS_ORTHO, "Gauss-rule Gram identity", "suite", "-", "N in 1..q cap+2; Meixner-Pollaczek, Al-Salam-Chihara, dual q-Krawtchouk", _sample_gauss, None),
)
_BY_ID = {e.id: e for e in _CATALOG}

_SUITE_KINDS = {
    IdentityId.CGC_ORTHO: ("cgc_su11", "cgc_uq_su11", "cgc_uq_su2_n0"),
    IdentityId.RACAH_ORTHO: ("racah_su11", "racah_uq_su11"),
}
SUITE_LEVELS = range(5)


@dataclass(frozen=True)
class IdentityInfo:
    id: IdentityId
    title: str
    kind: str
    summed_side: str
    ranges: str


def list_identities() -> list[IdentityInfo]:
    """The catalog in its fixed order, with the sampling documentation."""
    return [IdentityInfo(e.id, e.title, e.kind, e.summed_side, e.ranges) for e in _CATALOG]


# ---------------------------------------------------------------------------
# engine


def _clean(params: dict) -> dict:
    return {k: (int(v) if isinstance(v, (int, np.integer)) else float(v)) for k, v in params.items()}


def evaluate_sample(identity: IdentityId, params: Mapping, scale: float = 1.0) -> Evaluation:
    """Both sides and the summed-side terms at one parameter point.

    ``scale`` multiplies everything, which must leave the scaled residual
    unchanged.
    """
    entry = _BY_ID[IdentityId(identity)]
    if entry.evaluator is None:
        raise ValueError(f"{entry.id.value} is a suite, not an identity")
    ev = entry.evaluator(dict(params))
    if scale != 1.0:
        ev = Evaluation(ev.lhs * scale, ev.rhs * scale, tuple(t * scale for t in ev.terms))
    return ev


def _run_one(entry: _Entry, config: SampleConfig, index: int) -> SampleResult:
    rng = sample_rng(config.seed, index)
    params = _clean(entry.sampler(rng, config))
    try:
        if entry.evaluator is not None:
            ev = entry.evaluator(params)
            res = scaled_residual(ev)
            if not math.isfinite(res):
                raise NumericsError("non-finite residual")
            return SampleResult(index, params, complex(ev.lhs), complex(ev.rhs), res)
        if entry.id == IdentityId.GAUSS_ORTHO:
            res = max(_gram_defect(f, params["N"]) for f in _gauss_families(params))
        else:
            res = max(_unitarity_residual(kind, params, SUITE_LEVELS) for kind in _SUITE_KINDS[entry.id])
        return SampleResult(index, params, None, None, res)
    except (NumericsError, ArithmeticError, ValueError) as exc:
        return SampleResult(index, params, None, None, math.inf, f"{type(exc).__name__}: {exc}")


def _collect(name: str, config: SampleConfig, run: Callable[[int], SampleResult]) -> IdentityReport:
    indices = range(config.count)
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            samples = list(pool.map(run, indices))
    else:
        samples = [run(i) for i in indices]
    worst = 0.0
    for s in samples:  # fixed index order
        worst = max(worst, s.scaled_residual)
    return IdentityReport(name, config, tuple(samples), worst, worst <= config.tolerance)


def verify(identity: IdentityId | str, config: SampleConfig = SampleConfig()) -> IdentityReport:
    """Check one catalog entry on ``config.count`` seeded samples."""
    entry = _BY_ID[IdentityId(identity)]
    return _collect(entry.id.value, config, lambda i: _run_one(entry, config, i))


DEGENERATIONS = ("T3_4_j0", "T4_5_j0", "T4_10_c0")


def _force_j0(sampler):
    def sample(rng, cfg):
        d = sampler(rng, cfg)
        d["n"], d["j"] = d["n"] + d["j"], 0
        return d

    return sample


def _t410_from_t45(p: dict) -> dict:
    # T4_10 at c = 0 with the degree roles and the two variables swapped
    q = p["q"]
    return dict(
        n=p["j"],
        j=p["n"],
        q=q,
        a=q ** (2 * p["k2"]),
        b=q ** (2 * p["k1"]),
        c=0.0,
        s=p["s"],
        t=p["s"],
        theta1=p["theta2"],
        theta2=p["theta1"],
    )


def degeneration(name: str, config: SampleConfig = SampleConfig()) -> IdentityReport:
    """Limiting cases that must reproduce a simpler identity.

    ``T3_4_j0`` and ``T4_5_j0`` restrict to j = 0, where the sum is the plain
    convolution with coefficient 1. ``T4_10_c0`` compares both sides of
    T4_10 at c = 0 with those of T4_5, sample for sample.
    """
    if name == "T3_4_j0":
        entry = _Entry(IdentityId.T3_4, "", "classical", "lhs", "", _force_j0(_sample_t34), _eval_t34)
        return _collect(name, config, lambda i: _run_one(entry, config, i))
    if name == "T4_5_j0":
        entry = _Entry(IdentityId.T4_5, "", "q", "lhs", "", _force_j0(_sample_t45), _eval_t45)
        return _collect(name, config, lambda i: _run_one(entry, config, i))
    if name == "T4_10_c0":

        def run(i):
            params = _clean(_sample_t45(sample_rng(config.seed, i), config))
            try:
                e45 = _eval_t45(params)
                e410 = _eval_t410(_t410_from_t45(params))
                scale = RESIDUAL_GUARD + sum(abs(t) for t in e45.terms)
                res = max(abs(e45.lhs - e410.lhs), abs(e45.rhs - e410.rhs)) / scale
                return SampleResult(i, params, complex(e410.lhs), complex(e45.lhs), res)
            except (NumericsError, ArithmeticError, ValueError) as exc:
                return SampleResult(i, params, None, None, math.inf, f"{type(exc).__name__}: {exc}")

        return _collect(name, config, run)
    raise ValueError(f"unknown degeneration {name!r}; known: {', '.join(DEGENERATIONS)}")


def orthogonality_suite(family, N: int, config: SampleConfig = SampleConfig(count=1)) -> IdentityReport:
    """Gram matrix of an N-point Gauss rule against the identity."""
    if N < 1:
        raise ValueError("N must be positive")
    res = _gram_defect(family, N)
    sample = SampleResult(0, {"family": type(family).__name__, "N": N}, None, None, res)
    return IdentityReport("GAUSS_ORTHO", config, (sample,), res, res <= config.tolerance)


def unitarity_suite(kind: str, sizes: Iterable[int], config: SampleConfig = SampleConfig(count=20)) -> IdentityReport:
    """max |M^T M - I| over seeded parameter draws and the given levels."""
    if kind not in UNITARITY_KINDS:
        raise ValueError(f"unknown unitarity kind {kind!r}")
    sizes = tuple(sizes)

    def run(i):
        params = _clean(_sample_coupling(sample_rng(config.seed, i), config))
        try:
            return SampleResult(i, params, None, None, _unitarity_residual(kind, params, sizes))
        except (NumericsError, ArithmeticError, ValueError) as exc:
            return SampleResult(i, params, None, None, math.inf, f"{type(exc).__name__}: {exc}")

    return _collect(kind, config, run)
