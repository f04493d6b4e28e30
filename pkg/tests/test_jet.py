import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebcert.interval import Interval
from chebcert.jet import Jet, derivative_enclosure, taylor_coefficients


def test_polynomial_coefficients_exact():
    c = taylor_coefficients(lambda x: x * x * x - 2 * x, 2.0, 4)
    assert [(v.lo, v.hi) for v in c] == [(4, 4), (10, 10), (6, 6), (1, 1), (0, 0)]


def test_exp_coefficients():
    c = taylor_coefficients(lambda x: x.exp(), 0.0, 6)
    for k, v in enumerate(c):
        assert v.contains(1 / math.factorial(k)) or v.width() < 1e-15


def test_deriv_is_unnormalised():
    j = Jet.variable(1.0, 3).exp()
    assert j.deriv(3).contains(math.e)


@pytest.mark.parametrize("name,f,ref", [
    ("log", lambda x: x.log(), lambda x: mpmath.diff(mpmath.log, x)),
    ("sqrt", lambda x: x.sqrt(), lambda x: mpmath.diff(mpmath.sqrt, x)),
    ("atan", lambda x: x.atan(), lambda x: mpmath.diff(mpmath.atan, x)),
    ("sin", lambda x: x.sin(), lambda x: mpmath.diff(mpmath.sin, x)),
    ("quotient", lambda x: 1 / (x * x + 1), lambda x: mpmath.diff(lambda t: 1 / (t * t + 1), x)),
])
def test_first_derivative_point(name, f, ref):
    d = derivative_enclosure(f, Interval(0.7))
    with mpmath.workdps(40):
        assert mpmath.mpf(d.lo) <= ref(mpmath.mpf(0.7)) <= mpmath.mpf(d.hi)


def test_box_derivative_covers_range():
    # d/dx log x = 1/x on [1, 2] is [1/2, 1]
    d = derivative_enclosure(lambda x: x.log(), Interval(1, 2))
    assert d.contains(0.5) and d.contains(1.0)


def test_compose_needs_enough_terms():
    with pytest.raises(ValueError):
        Jet.variable(1.0, 3).compose([Interval(1.0)])


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.1, max_value=5), st.integers(min_value=1, max_value=5))
def test_second_derivative_of_power(x, n):
    j = Jet.variable(x, 2).ipow(n)
    exact = n * (n - 1) * mpmath.mpf(x) ** (n - 2) if n >= 2 else 0
    with mpmath.workdps(40):
        d = j.deriv(2)
        assert mpmath.mpf(d.lo) <= exact <= mpmath.mpf(d.hi)
