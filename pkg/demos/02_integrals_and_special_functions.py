"""
Rigorous quadrature and special functions
=========================================
"""

import math

from chebcert.analysis import (
    Integrand,
    TailMajorant,
    digamma,
    integrate,
    integrate_halfline,
    kernel_eval,
    mellin_roundtrip_check,
    neg_zeta_log_deriv,
    weight_moments,
)
from chebcert.interval import Interval

# a finite integral; the answer is 1 - 1/e
print(integrate(lambda t: (-t).exp(), 0, 1, 1e-12))

# a half-line integral needs an explicit bound for the piece beyond T
tail = TailMajorant(2.0**30, lambda T: Interval(9) / (4 * Interval(T)), "9/(4T)")
f = Integrand(lambda t: 9 / (t * t * 4 + 9), (0, math.inf), "cauchy", nonneg=True)
print(integrate_halfline(f, 0.0, tail, 1e-8, breakpoints=[2.0**k for k in range(31)]), 3 * math.pi / 4)

# the four weight moments used by the explicit formula
for name, value in weight_moments().items():
    print(name, value)

# -zeta'/zeta on the real axis from exact von Mangoldt data
print(neg_zeta_log_deriv(2.0))

# digamma via shifted asymptotics
print(digamma(1), -0.5772156649015329)

# kernels and a numerical check of the inverse transform pair
print(kernel_eval("k1", 1, 10).re, math.log(10) ** 2)
print(mellin_roundtrip_check("khat2", [0.5, 1.0], 10, tol=1e-6).summary())
