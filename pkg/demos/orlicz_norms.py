#!/usr/bin/env python3
"""Luxemburg norms under several Young functions.

The norm of h is inf{r > 0 : sum_x phi(|h(x)|/r) h^N <= 1}.  For the power
family this is the plain p-norm (closed form available); the unit indicator
gives the sup norm; the remaining kinds go through monotone bisection.
"""

import math

import numpy as np

from infconv.grid import FunctionSpec, GridDomain, sample
from infconv.orlicz import YoungFunction, luxemburg_norm, norm_axioms_check

dom = GridDomain(1, 4.0, 513)
tri = sample(FunctionSpec.triangle(), dom)

phis = [
    ("power p=1", YoungFunction.power(1)),
    ("power p=2", YoungFunction.power(2)),
    ("power p=4", YoungFunction.power(4)),
    ("sup norm", YoungFunction.indicator_unit()),
    ("1_plus p=2", YoungFunction.one_plus(2)),
    ("exp_inv_sq", YoungFunction.exp_inv_sq()),
]
print("triangle data on [-4, 4], n=513")
for label, phi in phis:
    nrm = luxemburg_norm(tri, phi)
    print(f"  {label:12s} ||f|| = {nrm:.6f}")

# p-norm sanity: ||triangle||_2^2 = int (1-|x|)^2 = 2/3
ref = math.sqrt(2.0 / 3.0)
got = luxemburg_norm(tri, YoungFunction.power(2))
print(f"\nL2 closed form {got:.6f} vs continuum {ref:.6f} "
      f"(gap {abs(got - ref):.1e}, one cell is {dom.h:.1e})")

# scaling law: norm is positively homogeneous whatever phi is
phi = YoungFunction.one_plus(3)
for c in (0.5, 2.0, 8.0):
    a = luxemburg_norm(tri.with_values(c * tri.values), phi)
    b = c * luxemburg_norm(tri, phi)
    assert math.isclose(a, b, rel_tol=1e-8)
print("homogeneity ||c f|| = c ||f|| holds at c = 0.5, 2, 8")

# monotonicity, unit integral and homogeneity in one report, per phi
big = tri.with_values(2.0 * tri.values + 0.1)
for label, phi in phis:
    rep = norm_axioms_check(tri, big, phi, c=3.0)
    assert rep.ok, label
print("norm axioms report ok for all six")
