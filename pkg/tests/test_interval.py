import math
import pickle
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebcert.interval import (
    CONST,
    Adjudication,
    ComplexBox,
    DivisionByZeroInterval,
    DomainError,
    Interval,
    ParseError,
    endpoint_to_str,
    hull,
    matches_printed,
    parse_printed,
    precision,
    to_fraction,
    working_precision,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
positive = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False)


def encloses(iv, exact):
    lo, hi = to_fraction(iv.lo), to_fraction(iv.hi)
    return lo <= exact <= hi


def encloses_mp(iv, value):
    return mpmath.mpf(iv.lo) <= value <= mpmath.mpf(iv.hi)


def ulps_between(a, b):
    n = 0
    while a < b:
        a = math.nextafter(a, math.inf)
        n += 1
    return n


class TestArithmetic:
    def test_add_exact(self):
        r = Interval(1, 2) + Interval(3, 4)
        assert (r.lo, r.hi) == (4, 6)

    def test_mul_sign_cases(self):
        r = Interval(-1, 1) * Interval(-1, 1)
        assert (r.lo, r.hi) == (-1, 1)

    def test_third_is_tight_and_outward(self):
        r = Interval(1) / Interval(3)
        assert to_fraction(r.lo) < Fraction(1, 3) < to_fraction(r.hi)
        assert ulps_between(r.lo, r.hi) <= 2

    def test_division_by_zero_interval(self):
        with pytest.raises(DivisionByZeroInterval):
            Interval(1) / Interval(-1, 1)

    def test_log_of_negative(self):
        with pytest.raises(DomainError):
            Interval(-2, -1).log()

    def test_exp_zero_is_exact(self):
        r = Interval(0).exp()
        assert (r.lo, r.hi) == (1, 1)

    def test_log_e(self):
        r = CONST.e.log()
        assert r.contains(1)
        assert ulps_between(r.lo, r.hi) <= 4

    def test_cos_full_period(self):
        r = Interval(0, (2 * CONST.pi).hi).cos()
        assert (r.lo, r.hi) == (-1, 1)

    def test_decimal_string_is_exact_literal(self):
        tenth = Interval("0.1")
        assert encloses(tenth, Fraction(1, 10))
        assert not tenth.is_point

    def test_invalid_endpoints(self):
        with pytest.raises(ValueError):
            Interval(2, 1)

    def test_infinite_endpoints(self):
        r = 1 / Interval(100, math.inf)
        assert r.lo == 0 and r.hi >= 0.01
        s = Interval(100, math.inf) + 2
        assert s.lo == 102 and s.hi == math.inf

    def test_intersect_and_hull(self):
        a, b = Interval(0, 2), Interval(1, 3)
        assert a.intersect(b) == Interval(1, 2)
        assert Interval(0, 1).intersect(Interval(2, 3)) is None
        assert hull(a, b) == Interval(0, 3)

    def test_immutable_and_picklable(self):
        a = Interval(1, 2)
        with pytest.raises(AttributeError):
            a.lo = 0
        assert pickle.loads(pickle.dumps(a)) == a

    def test_mig_mag(self):
        a = Interval(-3, 2)
        assert a.mag() == 3 and a.mig() == 0
        assert Interval(2, 5).mig() == 2


class TestConstants:
    @pytest.mark.parametrize("name,value", [
        ("pi", mpmath.pi), ("e", mpmath.e), ("log2", mpmath.log(2)), ("log3", mpmath.log(3)),
        ("log5", mpmath.log(5)), ("log10", mpmath.log(10)), ("sqrt5", mpmath.sqrt(5)),
        ("sqrt17", mpmath.sqrt(17)), ("sqrt_pi", mpmath.sqrt(mpmath.pi)),
    ])
    def test_named_constant(self, name, value):
        with mpmath.workdps(50):
            c = getattr(CONST, name)
            assert encloses_mp(c, +value)
            assert ulps_between(c.lo, c.hi) <= 2


class TestPrinted:
    def test_confirms(self):
        assert matches_printed(Interval("36.7590", "36.7599"), "36.759⋯") is Adjudication.CONFIRMS

    def test_contradicts(self):
        assert matches_printed(Interval("5.0", "5.1"), "36.759") is Adjudication.CONTRADICTS

    def test_inconclusive(self):
        assert matches_printed(Interval(0, 100), "36.759") is Adjudication.INCONCLUSIVE

    def test_tighter(self):
        assert matches_printed(Interval("36.759541", "36.759542"), "36.759⋯") is Adjudication.TIGHTER

    def test_last_digit_slack(self):
        # truncated or rounded printing both accepted
        assert matches_printed(Interval("2.42349"), "2.4234⋯") is not Adjudication.CONTRADICTS
        assert matches_printed(Interval("2.4236"), "2.4234⋯") is Adjudication.CONTRADICTS

    def test_rational_exact(self):
        assert matches_printed(Interval(1) / 92, "1/92") is Adjudication.CONFIRMS
        assert matches_printed(Interval(1) / 93, "1/92") is Adjudication.CONTRADICTS

    def test_bounds(self):
        assert matches_printed(Interval("1.09"), "<=1.1") is Adjudication.CONFIRMS
        assert matches_printed(Interval("1.2"), "<=1.1") is Adjudication.CONTRADICTS
        assert matches_printed(Interval("1.2"), ">=1.1") is Adjudication.CONFIRMS

    def test_exponent_forms(self):
        p = parse_printed("6.7934⋯e-4")
        assert p.value == Fraction(67934, 10**8)
        assert parse_printed("1.7700⋯e8").unit == Fraction(10**4)

    def test_parse_error(self):
        with pytest.raises(ParseError):
            parse_printed("about seven")


class TestPrecision:
    def test_default_is_double(self):
        assert precision() == 53

    def test_wider_mantissa_narrows(self):
        x = Interval(1) / 3
        with working_precision(120):
            y = Interval(1) / 3
            assert precision() == 120
            assert to_fraction(y.hi) - to_fraction(y.lo) < to_fraction(x.hi) - to_fraction(x.lo)
            assert encloses(y, Fraction(1, 3))
        assert precision() == 53

    def test_below_double_rejected(self):
        with pytest.raises(ValueError):
            with working_precision(24):
                pass


class TestEndpointStrings:
    @pytest.mark.parametrize("x", [Interval(1) / 3, Interval("1e-300") / 7, Interval(2.0**1000) * 3,
                                   Interval(-5e-324, 5e-324), Interval(-math.inf, 0)])
    def test_lossless(self, x):
        back = Interval(endpoint_to_str(x.lo), endpoint_to_str(x.hi))
        assert (back.lo, back.hi) == (x.lo, x.hi)


class TestComplexBox:
    def test_abs_and_contains(self):
        z = ComplexBox(3, 4)
        assert z.abs().contains(5)
        assert z.contains(3 + 4j)

    def test_exp(self):
        z = ComplexBox(0, CONST.pi).exp()
        assert z.re.contains(-1) and z.im.contains(0)


# -- properties -------------------------------------------------------------

OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
}


@settings(max_examples=400, deadline=None)
@given(finite, finite, finite, finite, st.sampled_from(sorted(OPS)))
def test_binary_containment(a, b, c, d, op):
    x, y = Interval(min(a, b), max(a, b)), Interval(min(c, d), max(c, d))
    r = OPS[op](x, y)
    for p in (a, b):
        for q in (c, d):
            assert encloses(r, OPS[op](Fraction(p), Fraction(q)))


@settings(max_examples=300, deadline=None)
@given(finite, finite, positive, positive)
def test_division_containment(a, b, c, d):
    x, y = Interval(min(a, b), max(a, b)), Interval(min(c, d), max(c, d))
    r = x / y
    for p in (a, b):
        for q in (c, d):
            assert encloses(r, Fraction(p) / Fraction(q))


UNARY = {
    "exp": (lambda v: v.exp(), mpmath.exp, st.floats(min_value=-50, max_value=50)),
    "log": (lambda v: v.log(), mpmath.log, positive),
    "sqrt": (lambda v: v.sqrt(), mpmath.sqrt, positive),
    "cos": (lambda v: v.cos(), mpmath.cos, st.floats(min_value=-100, max_value=100)),
    "sin": (lambda v: v.sin(), mpmath.sin, st.floats(min_value=-100, max_value=100)),
    "atan": (lambda v: v.atan(), mpmath.atan, finite),
}


@pytest.mark.parametrize("name", sorted(UNARY))
def test_unary_containment(name):
    f, ref, strat = UNARY[name]

    @settings(max_examples=200, deadline=None)
    @given(strat)
    def check(x):
        with mpmath.workdps(60):
            assert encloses_mp(f(Interval(x)), ref(mpmath.mpf(x)))

    check()


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.01, max_value=20), st.floats(min_value=0, max_value=1),
       st.floats(min_value=0, max_value=1), st.sampled_from(["exp", "log", "sqrt", "cos", "atan"]))
def test_inclusion_monotone(x, w1, w2, name):
    inner = Interval(x, x + w1)
    outer = Interval(max(x - w2, 0.005), x + w1 + w2)
    f = UNARY[name][0]
    assert f(inner).subset(f(outer))


@settings(max_examples=100, deadline=None)
@given(st.lists(finite, min_size=2, max_size=12))
def test_sum_order_independent_enclosure(xs):
    fwd = Interval(0)
    for v in xs:
        fwd = fwd + Interval(v)
    back = Interval(0)
    for v in reversed(xs):
        back = back + Interval(v)
    exact = sum(Fraction(v) for v in xs)
    assert encloses(fwd, exact) and encloses(back, exact)


@settings(max_examples=100, deadline=None)
@given(finite, finite)
def test_deterministic(a, b):
    x = Interval(min(a, b), max(a, b))
    r1, r2 = (x.sqr() + 1).sqrt(), (x.sqr() + 1).sqrt()
    assert (r1.lo, r1.hi) == (r2.lo, r2.hi)
