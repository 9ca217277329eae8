"""Gauss rules from recurrences, and the spectrum of a representation operator.

Golub-Welsch turns the Jacobi matrix of a family into nodes and weights.
The same machinery diagonalises the tridiagonal matrix of X_p A in a finite
U_q(su(2)) representation, whose eigenvalues are known in closed form.
"""

import numpy as np

from orthoconv.polynomials import AlSalamChihara, DualQKrawtchouk, MeixnerPollaczek, recurrence
from orthoconv.spectral import UqSu2XpA, eig_tridiagonal, gauss_rule, representation_operator, truncate, uq_su2_eigenvalue
from orthoconv.verify import orthogonality_suite

mp = MeixnerPollaczek(0.8, 1.1)
rule = gauss_rule(recurrence(mp), 6)
print("Meixner-Pollaczek, 6 nodes (variable y = 2 x sin phi)")
for y, w in zip(rule.nodes, rule.weights):
    print(f"  {y:+.10f}  {w:.10f}")
print(f"  total mass {rule.weights.sum():.15f}")

print()
print("Gram defect max|G - I| of an N-point rule:")
for fam, N in ((mp, 12), (AlSalamChihara(0.4, 0.2, 0.5), 12), (DualQKrawtchouk(1.1, 11, 0.36), 12)):
    print(f"  {type(fam).__name__:18s} N={N:2d}  {orthogonality_suite(fam, N).max_scaled_residual:.2e}")

print()
N, p, q = 6, 1.2, 0.55
vals, _ = eig_tridiagonal(truncate(representation_operator(UqSu2XpA(N, p, q)), N + 1))
exact = np.sort([uq_su2_eigenvalue(N, f, p, q) for f in range(N + 1)])
print(f"X_p A on the {N + 1}-dimensional module, p={p}, q={q}")
for v, e in zip(vals, exact):
    print(f"  {v:+.12f}  closed form {e:+.12f}")
