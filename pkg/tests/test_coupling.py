import math

import numpy as np
import pytest

from orthoconv.coupling import (
    ConstraintError,
    c_norm,
    cgc_matrix,
    cgc_su11,
    cgc_uq_su11,
    cgc_uq_su2_n0,
    cgc_uq_su2_n0_column,
    eigenbasis_overlap_uq_su2,
    linearisation_coeffs,
    linearisation_family,
    overlap_matrix,
    racah_matrix,
    racah_su11,
    racah_uq_su11,
    uq_su2_eigenvector,
    uq_su2_lowest_vector,
    uq_su2_tensor_eigenvector,
)
from orthoconv.polynomials import DomainError, evaluate
from orthoconv.spectral import uq_su2_eigenvalue

# -- brute-force representations ------------------------------------------


def _su11_gens(k, L, q=None):
    # truncated lowest-weight module, basis e_0..e_L; B raises, C lowers
    B = np.zeros((L + 1, L + 1))
    C = np.zeros((L + 1, L + 1))
    for n in range(L):
        m = n + 1
        if q is None:
            B[m, n] = math.sqrt(m * (2 * k + n))
            C[n, m] = math.sqrt(m * (2 * k + n))
        else:
            B[m, n] = q ** (-0.5 - k - n) * math.sqrt((1 - q ** (2 * n + 2)) * (1 - q ** (4 * k + 2 * n))) / (1 / q - q)
            C[n, m] = q ** (0.5 - k - m) * math.sqrt((1 - q ** (2 * m)) * (1 - q ** (4 * k + 2 * m - 2))) / (q - 1 / q)
    A = None if q is None else np.diag([q ** (k + n) for n in range(L + 1)])
    return A, B, C


def _coupled_vectors(k1, k2, j, L, q=None):
    """Columns n = 0..L-j of the coupled basis with lowest weight k1 + k2 + j."""
    A1, B1, C1 = _su11_gens(k1, L, q)
    A2, B2, C2 = _su11_gens(k2, L, q)
    eye = np.eye(L + 1)
    if q is None:
        DB = np.kron(B1, eye) + np.kron(eye, B2)
        DC = np.kron(C1, eye) + np.kron(eye, C2)
    else:
        DB = np.kron(A1, B2) + np.kron(B1, np.linalg.inv(A2))
        DC = np.kron(A1, C2) + np.kron(C1, np.linalg.inv(A2))
    idx = [n1 * (L + 1) + (j - n1) for n1 in range(j + 1)]
    v = np.zeros((L + 1) ** 2)
    v[idx] = np.linalg.svd(DC[:, idx])[2][-1]
    v *= np.sign(v[j])
    out = [v]
    for _ in range(L - j):
        w = DB @ out[-1]
        out.append(w / np.linalg.norm(w))
    return out


def _su2_gens(N, q):
    A = np.diag([q ** (n - N / 2) for n in range(N + 1)])
    B = np.zeros((N + 1, N + 1))
    C = np.zeros((N + 1, N + 1))
    s = q ** ((1 - N) / 2) / (1 - q * q)
    for n in range(N):
        B[n + 1, n] = s * math.sqrt((1 - q ** (2 * n + 2)) * (1 - q ** (2 * N - 2 * n)))
        m = n + 1
        C[m - 1, m] = s * math.sqrt((1 - q ** (2 * m)) * (1 - q ** (2 * N - 2 * m + 2)))
    return A, B, C


def _xpa(N, p, q):
    A, B, C = _su2_gens(N, q)
    c = (math.sqrt(p) - 1 / math.sqrt(p)) / (q - 1 / q)
    return (q**0.5 * B + q**-0.5 * C - c * (A - np.linalg.inv(A))) @ A


# -- selection rules and trivial values -----------------------------------


def test_trivial_coupling_values():
    assert cgc_su11(0.7, 1.2, 0, 0, 0, 0) == 1.0
    assert cgc_uq_su11(0.7, 1.2, 0, 0, 0, 0, 0.5) == pytest.approx(1.0, abs=1e-15)
    assert racah_su11(0.4, 0.9, 1.3, 0, 0, 0) == pytest.approx(1.0, abs=1e-15)
    assert racah_uq_su11(0.4, 0.9, 1.3, 0, 0, 0, 0.6) == pytest.approx(1.0, abs=1e-15)
    assert c_norm(0.8, 1.1, 0, 0.4) == 1.0
    assert cgc_uq_su2_n0(3, 2, 0, 0, 0, 0.5) == pytest.approx(1.0, abs=1e-15)
    assert linearisation_coeffs(3, 0, 1.1, 0.8, 0.5) == pytest.approx([1.0], abs=1e-15)


def test_c_norm_definition():
    k1, k2, j, q = 0.6, 1.3, 3, 0.7
    Q = q * q
    prod = 1.0
    for a in (Q, q ** (4 * k1), q ** (4 * k2), q ** (4 * k1 + 4 * k2 + 2 * j - 2)):
        for i in range(j):
            prod *= 1 - a * Q**i
    assert c_norm(k1, k2, j, q) ** -2 == pytest.approx(prod, rel=1e-14)
    assert c_norm(k1, k2, j, q) > 0


def test_su2_column_normalised_with_alternating_sign():
    col = cgc_uq_su2_n0_column(2, 2, 1, 0.5)
    assert np.sum(col**2) == pytest.approx(1.0, abs=1e-14)
    col = cgc_uq_su2_n0_column(4, 3, 3, 0.4)
    assert all(np.sign(v) == (-1) ** (3 - n1) for n1, v in enumerate(col))


def test_overlap_vanishes_off_band():
    # N = 2, f1 + f2 - j = 4 > N
    assert eigenbasis_overlap_uq_su2(2, 2, 1, 2, 2, 1.1, 0.5) == 0.0
    # f1 + f2 - j = -1
    assert eigenbasis_overlap_uq_su2(2, 2, 1, 0, 0, 1.1, 0.5) == 0.0


def test_constraint_errors():
    # a failed selection rule gives zero for the su(1,1) algebras, an error for U_q(su(2))
    assert cgc_su11(0.7, 1.2, 1, 1, 1, 0) == 0.0
    assert cgc_uq_su11(0.7, 1.2, 1, 1, 1, 0, 0.5) == 0.0
    with pytest.raises(ConstraintError):
        cgc_su11(0.7, 1.2, 0.5, 1, 1, 0)
    with pytest.raises(ConstraintError):
        cgc_uq_su2_n0(2, 3, 3, 1, 2, 0.5)
    with pytest.raises(ConstraintError):
        cgc_uq_su2_n0(2, 3, 2, 1, 0, 0.5)
    with pytest.raises(DomainError):
        cgc_uq_su11(0.7, 1.2, 0, 0, 0, 0, 1.5)
    with pytest.raises(DomainError):
        linearisation_family(-1.0, 1.0, 0.5)


# -- Clebsch-Gordan coefficients against brute force ----------------------


@pytest.mark.parametrize("k1,k2,q", [(0.7, 1.3, None), (0.3, 2.2, None), (0.7, 1.3, 0.6), (1.4, 0.55, 0.35)])
def test_cgc_matches_generator_construction(k1, k2, q):
    L = 5
    worst = 0.0
    for j in range(3):
        vecs = _coupled_vectors(k1, k2, j, L, q)
        for n, v in enumerate(vecs[:3]):
            for n1 in range(n + j + 1):
                n2 = n + j - n1
                got = cgc_su11(k1, k2, j, n1, n2, n) if q is None else cgc_uq_su11(k1, k2, j, n1, n2, n, q)
                worst = max(worst, abs(got - v[n1 * (L + 1) + n2]))
    assert worst <= 1e-10


@pytest.mark.parametrize("N1,N2,q", [(2, 2, 0.5), (3, 2, 0.6), (2, 4, 0.3), (4, 4, 0.8)])
def test_su2_lowest_column_is_casimir_null_vector(N1, N2, q):
    A1, _, C1 = _su2_gens(N1, q)
    A2, _, C2 = _su2_gens(N2, q)
    DC = np.kron(A1, C2) + np.kron(C1, np.linalg.inv(A2))
    for j in range(min(N1, N2) + 1):
        idx = [n1 * (N2 + 1) + (j - n1) for n1 in range(j + 1)]
        null = np.linalg.svd(DC[:, idx])[2][-1]
        null *= np.sign(null[-1])  # n1 = j entry positive
        assert np.max(np.abs(cgc_uq_su2_n0_column(N1, N2, j, q) - null)) <= 1e-11


def test_cgc_orthogonality():
    for level in range(5):
        M = cgc_matrix(0.65, 1.4, level)
        assert np.max(np.abs(M.T @ M - np.eye(level + 1))) <= 1e-11
        M = cgc_matrix(0.65, 1.4, level, q=0.45)
        assert np.max(np.abs(M.T @ M - np.eye(level + 1))) <= 1e-11


def test_cgc_q_to_one():
    args = (0.8, 1.15, 2, 1, 3, 2)
    assert cgc_uq_su11(*args, 1 - 1e-7) == pytest.approx(cgc_su11(*args), abs=1e-5)


# -- Racah coefficients ---------------------------------------------------

# 40-digit evaluations of the defining series
RACAH_CLASSICAL = [
    ((0.7, 1.3, 0.9, 2, 1, 1), 0.4238350488676564),
    ((0.4, 2.1, 1.6, 3, 2, 1), -0.657662675010736),
    ((1.1, 0.6, 0.8, 1, 3, 2), -0.7358010422971709),
]
RACAH_Q = [
    ((0.7, 1.3, 0.9, 2, 1, 1, 0.6), 0.9015238783805458),
    ((0.4, 2.1, 1.6, 3, 2, 1, 0.35), -0.013724831625564574),
    ((1.1, 0.6, 0.8, 1, 3, 2, 0.8), -0.7231533712683039),
]


@pytest.mark.parametrize("args,ref", RACAH_CLASSICAL)
def test_racah_su11_reference(args, ref):
    assert racah_su11(*args) == pytest.approx(ref, abs=1e-13)


@pytest.mark.parametrize("args,ref", RACAH_Q)
def test_racah_uq_su11_reference(args, ref):
    assert racah_uq_su11(*args) == pytest.approx(ref, abs=1e-13)


def test_racah_orthogonality():
    for level in range(5):
        M = racah_matrix(0.55, 1.2, 0.9, level)
        assert np.max(np.abs(M.T @ M - np.eye(level + 1))) <= 1e-10
    M = racah_matrix(0.55, 1.2, 0.9, 3, q=0.7)
    assert np.max(np.abs(M.T @ M - np.eye(4))) <= 1e-10


def test_racah_q_to_one():
    args = (0.7, 1.3, 0.9, 2, 1, 1)
    assert racah_uq_su11(*args, 1 - 1e-4) == pytest.approx(racah_su11(*args), abs=1e-2)
    assert racah_uq_su11(*args, 1 - 1e-7) == pytest.approx(racah_su11(*args), abs=1e-5)


def test_racah_unitarity_at_level_two():
    M = racah_matrix(0.85, 1.7, 0.45, 2, q=0.6)
    assert np.max(np.abs(M.T @ M - np.eye(3))) <= 1e-11
    M = racah_matrix(0.85, 1.7, 0.45, 2)
    assert np.max(np.abs(M.T @ M - np.eye(3))) <= 1e-11


# -- U_q(su(2)) eigenvectors and overlaps ---------------------------------


@pytest.mark.parametrize("N,p,q", [(4, 1.0, 0.5), (5, 0.7, 0.6), (3, 1.4, 0.3)])
def test_eigenvectors_of_xpa(N, p, q):
    X = _xpa(N, p, q)
    for f in range(N + 1):
        v = uq_su2_eigenvector(N, f, p, q)
        assert np.linalg.norm(X @ v - uq_su2_eigenvalue(N, f, p, q) * v) <= 1e-10 * np.linalg.norm(v)


@pytest.mark.parametrize("N1,N2,p,q", [(2, 2, 1.0, 0.5), (3, 2, 0.7, 0.6), (2, 3, 1.4, 0.45)])
def test_tensor_eigenvectors_of_coproduct(N1, N2, p, q):
    A1, _, _ = _su2_gens(N1, q)
    D = np.kron(A1 @ A1, _xpa(N2, p, q)) + np.kron(_xpa(N1, p, q), np.eye(N2 + 1))
    for f1 in range(N1 + 1):
        for f2 in range(N2 + 1):
            v = uq_su2_tensor_eigenvector(N1, N2, f1, f2, p, q)
            lam = uq_su2_eigenvalue(N1 + N2, f1 + f2, p, q)
            assert np.linalg.norm(D @ v - lam * v) <= 1e-10 * np.linalg.norm(v)


@pytest.mark.parametrize("N1,N2,p,q", [(2, 3, 0.9, 0.5), (4, 4, 1.3, 0.7), (3, 1, 0.75, 0.25)])
def test_overlap_equals_inner_product(N1, N2, p, q):
    for j in range(min(N1, N2) + 1):
        e0 = uq_su2_lowest_vector(N1, N2, j, q)
        for f1 in range(N1 + 1):
            for f2 in range(N2 + 1):
                v = uq_su2_tensor_eigenvector(N1, N2, f1, f2, p, q)
                scale = np.abs(v) @ np.abs(e0)
                got = eigenbasis_overlap_uq_su2(N1, N2, j, f1, f2, p, q)
                assert abs(got - v @ e0) <= 1e-9 * max(scale, 1e-300)


def test_normalised_overlaps_orthogonal():
    N1, N2, p, q = 3, 3, 1.2, 0.6
    for F in range(N1 + N2 + 1):
        M = overlap_matrix(N1, N2, F, p, q)
        if M.shape[0] == M.shape[1]:
            assert np.max(np.abs(M.T @ M - np.eye(M.shape[1]))) <= 1e-10


# -- linearisation --------------------------------------------------------


@pytest.mark.parametrize("l1,l2,p,r,q", [(2, 2, 1.0, 1.0, 0.5), (3, 2, 1.3, 0.8, 0.6), (1, 4, 0.75, 1.1, 0.4)])
def test_linearisation_pointwise(l1, l2, p, r, q):
    fam = linearisation_family(p, r, q)
    c = linearisation_coeffs(l1, l2, p, r, q)
    L = l1 + l2
    for x in (-0.9, -0.3, 0.15, 0.8):
        lhs = evaluate(fam, l1, x) * evaluate(fam, l2, x)
        terms = [cj * evaluate(fam, L - j, x) for j, cj in enumerate(c)]
        assert abs(lhs - sum(terms)) <= 1e-10 * max(1.0, sum(abs(t) for t in terms))


def test_linearisation_positive_when_p_equals_r():
    for p in (0.7, 0.95, 1.4):
        for l1, l2 in ((1, 1), (2, 3), (4, 4)):
            assert all(cj > 0 for cj in linearisation_coeffs(l1, l2, p, p, 0.55))


def test_linearisation_parity_at_p_equals_r_equals_one():
    # parameters (q, q, -q, -q): p_l has parity (-1)^l, so odd j drop out
    c = linearisation_coeffs(4, 4, 1.0, 1.0, 0.55)
    assert all(cj > 0 for cj in c[::2])
    assert all(abs(cj) <= 1e-14 for cj in c[1::2])
