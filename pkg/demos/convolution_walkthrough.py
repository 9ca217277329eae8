"""A Meixner-Pollaczek convolution, first at one point and then on samples.

The sum over l of Hahn-weighted products P_l(x1) P_{N-l}(x2) collapses to a
single Meixner-Pollaczek polynomial in x1 + x2 times a continuous Hahn
polynomial. We evaluate both sides by hand, then let the verifier do it on
seeded samples.
"""

import math

from orthoconv.verify import IdentityId, SampleConfig, evaluate_sample, scaled_residual, verify

params = dict(n=3, j=2, k1=0.8, k2=1.4, phi=1.1, x1=0.35, x2=-1.2)
ev = evaluate_sample(IdentityId.T3_4, params)
print("one point:", params)
print(f"  summed side  {ev.lhs.real:+.15e}")
print(f"  closed side  {ev.rhs.real:+.15e}")
print(f"  terms        {len(ev.terms)}, largest |term| {max(abs(t) for t in ev.terms):.3e}")
print(f"  scaled residual {scaled_residual(ev):.2e}")

# the j = 0 case is the plain convolution, coefficient 1
flat = evaluate_sample(IdentityId.T3_4, dict(params, n=5, j=0))
print(f"j = 0 residual {scaled_residual(flat):.2e}")

print()
for name in ("T3_4", "C3_6i", "T4_5", "T4_10"):
    rep = verify(name, SampleConfig(seed=7, count=50))
    status = "pass" if rep.passed else "FAIL"
    print(f"{name:6s} 50 samples, worst scaled residual {rep.max_scaled_residual:.2e} ({status})")

# the residual is a relative quantity: it ignores a common factor
big = evaluate_sample(IdentityId.T3_4, params, scale=1e3)
assert math.isclose(scaled_residual(big), scaled_residual(ev), rel_tol=0, abs_tol=1e-15)
