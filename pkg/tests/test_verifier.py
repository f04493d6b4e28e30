import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebcert import ParamSet, Verdict, build_graph
from chebcert.interval import Interval
from chebcert.verifier import (
    SELECTORS,
    Region,
    TailCertificate,
    branch_depth,
    locate_G0,
    locate_G0_details,
    run_suite,
    sandbox_check_lemma32,
    verify_G_nonpositive,
    verify_lemma84,
    verify_lemma86,
    verify_monotone,
    verify_nonneg,
    verify_Q,
    verify_zfr,
)


class TestBranchAndBound:
    def test_constant_negative_refuted(self):
        rec = verify_nonneg(lambda x: Interval(-1.0) + 0 * x, Region.interval(0, 1))
        assert rec.verdict is Verdict.REFUTED and rec.witness is not None

    def test_square_nonneg(self):
        rec = verify_nonneg(lambda x: x.sqr(), Region.interval(-1, 1))
        assert rec.proved

    def test_touching_zero_needs_nonstrict(self):
        rec = verify_nonneg(lambda x: x.sqr(), Region.interval(-1, 1), strict=True)
        assert rec.verdict is not Verdict.PROVED

    def test_two_variables(self):
        rec = verify_nonneg(lambda x, y: x.sqr() + y.sqr() - 2 * x * y, Region(((-1, 1), (-1, 1))),
                            max_boxes=5000)
        # (x - y)^2 written expanded: dependency makes it hard but never refutable
        assert rec.verdict is not Verdict.REFUTED

    def test_small_dip_found(self):
        rec = verify_nonneg(lambda x: (x - 0.3).sqr() - 1e-6, Region.interval(0, 1))
        assert rec.verdict is Verdict.REFUTED
        assert abs(rec.witness[0] - 0.3) < 1e-3

    def test_depth_limit_gives_undecided(self):
        with branch_depth(3):
            rec = verify_nonneg(lambda x: (x - 0.3).sqr(), Region.interval(0, 1), strict=True)
        assert rec.verdict is Verdict.UNDECIDED
        with pytest.raises(ValueError):
            with branch_depth(0):
                pass

    def test_failed_tail_is_undecided(self):
        tail = TailCertificate("x >= 1", lambda: (False, "no argument"))
        rec = verify_nonneg(lambda x: x + 1, Region.interval(0, 1), tails=(tail,))
        assert rec.verdict is Verdict.UNDECIDED

    def test_tail_exception_reported(self):
        tail = TailCertificate("x >= 1", lambda: 1 / 0)
        rec = verify_nonneg(lambda x: x + 1, Region.interval(0, 1), tails=(tail,))
        assert rec.verdict is Verdict.UNDECIDED and "ZeroDivisionError" in rec.notes[-1]

    def test_unbounded_region_rejected(self):
        with pytest.raises(ValueError):
            Region.interval(0, math.inf)

    def test_monotone(self):
        assert verify_monotone(lambda x: x.exp(), (0, 3)).proved
        assert verify_monotone(lambda x: -x, (0, 1)).verdict is Verdict.REFUTED


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-2, max_value=2), st.floats(min_value=0.01, max_value=1))
def test_shifted_parabola_verdict_matches_sign(c, shift):
    # min of (x - c)^2 + k on [-3, 3] is k
    k = shift if c > 0 else -shift
    rec = verify_nonneg(lambda x: (x - c).sqr() + k, Region.interval(-3, 3))
    assert rec.verdict is (Verdict.PROVED if k > 0 else Verdict.REFUTED)


class TestQAndG:
    def test_Q(self):
        rec = verify_Q("0.51")
        assert rec.proved and rec.details["series_mismatches"] == 0

    def test_G(self):
        rec = verify_G_nonpositive()
        assert rec.proved and all(rec.details["identities"].values())

    def test_G0_location(self):
        enc = locate_G0(1e-10)
        assert enc.contains(-0.12158510687212) and enc.width() <= 2e-8 and enc.hi <= 0
        _, window, _ = locate_G0_details(1e-10)
        assert window[0] <= math.sqrt(0.45160596295577664) <= window[1]

    def test_G0_tolerance_guard(self):
        with pytest.raises(ValueError):
            locate_G0(1e-6)


def test_suite_all_proved(suite):
    asserted = {k: r.verdict for k, r in suite.items() if r.asserted}
    assert all(v is Verdict.PROVED for v in asserted.values()), asserted


def test_suite_selectors():
    with pytest.raises(ValueError):
        run_suite("nonsense")
    assert [r.claim for r in run_suite("Q")] == ["Q_nonneg"]
    assert "G0" in SELECTORS


class TestFeasibility:
    def test_lemma84_default(self, graph):
        rec = verify_lemma84(graph.params, graph)
        assert rec.proved
        assert 0 < rec.margin.lo and rec.margin.hi < 1e-3
        assert rec.details["case_ii"].proved

    @pytest.mark.parametrize("c16,expected", [(100, Verdict.REFUTED), (2000, Verdict.REFUTED),
                                              (3500, Verdict.PROVED)])
    def test_lemma84_ladder(self, graph, c16, expected):
        assert verify_lemma84(graph.params, graph, c16=c16).verdict is expected

    def test_lemma84_margin_grows(self, graph):
        a = verify_lemma84(graph.params, graph, c16=3144.25).details["case_i"].margin
        b = verify_lemma84(graph.params, graph, c16=3500).details["case_i"].margin
        assert b.lo > a.hi

    def test_lemma86_case_i(self, graph):
        rec = verify_lemma86(graph.params, graph)
        assert rec.proved and rec.margin.lo > 0.89

    def test_lemma86_case_ii_routes(self, graph):
        rec = verify_lemma86(graph.params, graph)
        short, direct = rec.details["case_ii_shortcut"], rec.details["case_ii_direct"]
        assert not short.asserted and not direct.asserted
        assert short.verdict is Verdict.REFUTED and abs(short.witness[0] - 2.197) < 0.01
        assert direct.verdict is Verdict.REFUTED
        assert rec.details["exponent_2c19c23_minus_1"].hi < 0

    @pytest.mark.parametrize("c23,expected", [(10, Verdict.REFUTED), (115, Verdict.UNDECIDED),
                                              (300, Verdict.PROVED)])
    def test_lemma86_ladder(self, graph, c23, expected):
        assert verify_lemma86(graph.params, graph, c23=c23).verdict is expected


class TestZeroFreeRegion:
    def test_default(self, graph):
        rec = verify_zfr(graph.params, graph)
        assert rec.proved and 0 < rec.margin.lo < 1e-5
        assert rec.details["constant"].hi <= 29.57

    def test_b4_refuted(self):
        rec = verify_zfr(ParamSet(b_zfr="4", zfr_round=""))
        assert rec.verdict is Verdict.REFUTED

    def test_inflated_B13(self, graph):
        assert verify_zfr(graph.params, graph, B13=1e6).verdict is Verdict.REFUTED


class TestSandbox:
    def test_default(self):
        rec = sandbox_check_lemma32()
        assert rec.proved
        assert rec.details["pi_x_max"] == 78498 and rec.details["S_100"] == 10

    def test_limits(self):
        with pytest.raises(ValueError):
            sandbox_check_lemma32(x_max=10**9)
        with pytest.raises(ValueError):
            sandbox_check_lemma32(x_max=1)


def test_missing_graph_values_reported():
    g = build_graph().evaluate(targets=["alpha_1"])
    with pytest.raises(KeyError):
        verify_lemma84(ParamSet(), g)
    assert verify_zfr(ParamSet(), g).verdict is Verdict.UNDECIDED
