import math
import random

import mpmath
import pytest

from chebcert import analysis
from chebcert.analysis import Integrand, TailMajorant, ToleranceNotReached
from chebcert.interval import ComplexBox, Interval


def inside(iv, value, dps=40):
    with mpmath.workdps(dps):
        return mpmath.mpf(iv.lo) <= value <= mpmath.mpf(iv.hi)


class TestQuadrature:
    def test_linear(self):
        r = analysis.integrate(lambda t: t, 0, 1, 1e-12)
        assert r.contains(0.5) and r.width() <= 1e-12

    def test_gaussian_on_unit_interval(self):
        r = analysis.integrate(lambda t: (-t.sqr() if isinstance(t, Interval) else -(t * t)).exp(), 0, 1, 1e-12)
        assert inside(r, mpmath.sqrt(mpmath.pi) / 2 * mpmath.erf(1))

    def test_cauchy_halfline(self):
        tail = TailMajorant(2.0**30, lambda T: Interval(9) / (4 * Interval(T)), "9/(4T)")
        f = Integrand(lambda t: 9 / (t * t * 4 + 9), (0, math.inf), "cauchy", nonneg=True)
        r = analysis.integrate_halfline(f, 0.0, tail, 1e-8, breakpoints=[2.0**k for k in range(31)])
        assert inside(r, 3 * mpmath.pi / 4) and r.width() <= 1e-8

    def test_strict_tolerance(self):
        with pytest.raises(ToleranceNotReached) as info:
            analysis.integrate(lambda t: t.exp(), 0, 1, 1e-30, max_pieces=8, strict=True)
        assert info.value.enclosure.contains(math.e - 1)

    def test_bad_limits(self):
        with pytest.raises(ValueError):
            analysis.integrate(lambda t: t, 1, 0)


class TestZetaLogDerivative:
    def test_at_two(self):
        r = analysis.neg_zeta_log_deriv(2.0)
        with mpmath.workdps(30):
            exact = -mpmath.zeta(2, derivative=1) / mpmath.zeta(2)
        assert inside(r, exact)
        assert r.contains(0.569961)
        # tail beyond the sieve is about log(N)/N
        assert r.width() < 2e-5

    def test_decreasing(self):
        vals = [analysis.neg_zeta_log_deriv(s) for s in (1.5, 2.0, 3.0, 5.0)]
        for a, b in zip(vals, vals[1:]):
            assert a.lo > b.hi

    def test_interval_argument_covers_endpoints(self):
        r = analysis.neg_zeta_log_deriv(Interval(2, 3))
        assert r.subset(Interval(analysis.neg_zeta_log_deriv(3.0).lo, analysis.neg_zeta_log_deriv(2.0).hi))

    def test_domain(self):
        with pytest.raises(Exception):
            analysis.neg_zeta_log_deriv(1.0)


class TestDigamma:
    def test_ten(self):
        assert inside(analysis.digamma(10), mpmath.digamma(10))
        assert analysis.digamma(10).contains(2.25175258906672)

    def test_one_is_minus_euler(self):
        assert inside(analysis.digamma(1), -mpmath.euler)

    @pytest.mark.parametrize("n,x", [(1, 0.3), (2, 4.5), (3, 25.0)])
    def test_polygamma(self, n, x):
        assert inside(analysis.polygamma(n, x), mpmath.polygamma(n, x))

    def test_complex_real_part(self):
        rng = random.Random(7)
        for _ in range(40):
            a, b = rng.uniform(0.05, 30), rng.uniform(-50, 50)
            box = ComplexBox(Interval(a, a + 0.01), Interval(b, b + 0.01))
            r = analysis.digamma_re(box)
            for da, db in ((0, 0), (0.01, 0.01), (0.005, 0)):
                assert inside(r, mpmath.digamma(mpmath.mpc(a + da, b + db)).real)

    def test_shift_independent(self):
        a = analysis.digamma_re(ComplexBox(3.0, 4.0), shift=30)
        b = analysis.digamma_re(ComplexBox(3.0, 4.0))
        assert a.overlaps(b)


class TestWeights:
    def test_v_at_zero(self):
        assert inside(analysis.v_winckler(0), mpmath.log(2.5) + mpmath.mpf(19683) / 812)

    def test_moment_closed_forms(self):
        m = analysis.weight_moments()
        r = mpmath.mpf(101) ** -1.5
        mu1 = mpmath.mpf(3) / 4 * ((1 + r) / (1 - r)) ** 2
        mu2 = 1 / (2 * mpmath.sqrt(10 * mpmath.pi * mpmath.log(10)))
        assert inside(m["mu1"], mu1) and m["mu1"].width() <= 1e-7
        assert inside(m["mu2"], mu2) and m["mu2"].width() <= 1e-7

    def test_moment_oracles(self):
        m = analysis.weight_moments()
        assert abs(m["nu1"].mid() - 19.40533911) < 1e-6
        assert abs(m["nu2"].mid() - 1.479369032) < 1e-7


class TestKernels:
    def test_k1_at_one(self):
        r = analysis.kernel_eval("k1", 1, 10)
        assert r.re.contains(math.log(10) ** 2) and r.im.contains(0)

    def test_k2_values(self):
        assert analysis.kernel_eval("k2", 1, 10).re.contains(100)
        assert inside(analysis.kernel_eval("k2", -0.5, 10).re, mpmath.mpf(10) ** -0.25)

    def test_k0_reduces_to_k1(self):
        a = analysis.kernel_eval("k0", ComplexBox(1.5, 2.0), 3, 9)
        b = analysis.kernel_eval("k1", ComplexBox(1.5, 2.0), 3)
        assert a.re.overlaps(b.re) and a.im.overlaps(b.im)

    def test_k1_against_direct(self):
        s, x = mpmath.mpc(2.5, 1.0), mpmath.mpf(5)
        direct = ((x ** (2 * (s - 1)) - x ** (s - 1)) / (s - 1)) ** 2
        r = analysis.kernel_eval("k1", ComplexBox(2.5, 1.0), 5)
        assert inside(r.re, direct.real) and inside(r.im, direct.imag)

    def test_khat1_support(self):
        assert analysis.khat_eval("khat1", 50, 10).hi == 0
        assert analysis.khat_eval("khat1", 2e4, 10).hi == 0
        assert analysis.khat_eval("khat1", 1000, 10).lo > 0

    def test_khat1_peak(self):
        peak = analysis.khat_eval("khat1", 1000, 10)
        assert inside(peak, mpmath.log(10) / 1000)

    def test_khat2_nonneg(self):
        for u in (0.5, 10, 1e3):
            assert analysis.khat_eval("khat2", u, 10).lo >= 0

    @pytest.mark.parametrize("which,samples", [("khat1", [1.5, 2.0]), ("khat2", [0.5, 1.0])])
    def test_mellin_roundtrip(self, which, samples):
        rec = analysis.mellin_roundtrip_check(which, samples, 10, tol=1e-6)
        assert rec.proved, rec.details


def test_zeta_log_derivative_far_right():
    # dominated by the n = 2 term log(2) 2^-20
    r = analysis.neg_zeta_log_deriv(20.0)
    lead = mpmath.log(2) * mpmath.mpf(2) ** -20
    with mpmath.workdps(30):
        assert mpmath.mpf(r.lo) >= lead and mpmath.mpf(r.hi) <= lead * (1 + mpmath.mpf("1e-3"))
