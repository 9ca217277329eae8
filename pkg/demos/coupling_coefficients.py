"""Clebsch-Gordan and Racah matrices, overlaps and linearisation coefficients.

Coupling matrices at a fixed level are orthogonal; the overlaps between the
X_p A eigenbasis of a tensor product and the coupled basis come as a 4phi3;
and products of Askey-Wilson polynomials expand with explicit coefficients,
positive when p = r.
"""

import numpy as np

from orthoconv.coupling import (
    cgc_matrix,
    eigenbasis_overlap_uq_su2,
    linearisation_coeffs,
    racah_matrix,
    uq_su2_lowest_vector,
    uq_su2_tensor_eigenvector,
)

np.set_printoptions(precision=6, suppress=True)

M = cgc_matrix(0.7, 1.3, 3, q=0.5)
print("U_q(su(1,1)) Clebsch-Gordan matrix, level 3 (rows n1, columns j)")
print(M)
print(f"max|M^T M - I| = {np.max(np.abs(M.T @ M - np.eye(4))):.1e}")

R = racah_matrix(0.7, 1.3, 0.9, 3)
print()
print("su(1,1) Racah matrix, level 3")
print(R)
print(f"max|R^T R - I| = {np.max(np.abs(R.T @ R - np.eye(4))):.1e}")

N1, N2, p, q = 3, 2, 1.1, 0.6
print()
print("overlaps <phi_{f1,f2}, e_0> against direct inner products")
for j in range(3):
    e0 = uq_su2_lowest_vector(N1, N2, j, q)
    for f1, f2 in ((1, 1), (2, 0), (3, 2)):
        v = uq_su2_tensor_eigenvector(N1, N2, f1, f2, p, q)
        print(f"  j={j} f=({f1},{f2})  {eigenbasis_overlap_uq_su2(N1, N2, j, f1, f2, p, q):+.12f}  {v @ e0:+.12f}")

print()
for p, r in ((1.2, 1.2), (1.2, 0.8)):
    c = linearisation_coeffs(3, 2, p, r, 0.5)
    print(f"p_3 p_2 expansion, p={p}, r={r}:", " ".join(f"{v:.5f}" for v in c))
