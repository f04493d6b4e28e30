import pytest

from chebcert import ParamSet, build_graph
from chebcert.graph import (
    ConstantGraph,
    ConstNode,
    NodeKind,
    NodeStatus,
    ShapeError,
    expand_Q,
    list_axioms,
    to_dot,
)
from chebcert.interval import Adjudication, Interval

# independent high-precision values (mpmath, 50 digits, direct formulas)
ORACLE = {
    "alpha_1": 2.42348,
    "alpha_3": 36.75954,
    "alpha_4": 5.456724,
    "mu_1": 0.7529613882,
    "nu_1": 19.40533911,
    "mu_2": 0.05878780212,
    "nu_2": 1.479369032,
    "B_1": 2.688548,
    "B_2": 2.710653,
    "alpha_12": 0.3416281,
    "c_10": 114.7292,
    "c_12": 6.861033e-4,
    "c_13": 124.1434,
    "c_14": 1.770087e8,
    "c_15": 1.979246,
    "c_15p": 1.829181,
    "c_20": 19.16903,
    "c_21": 6.152258,
    "phi_6_at_1": 0.9459232146,
    "phi_7_at_1": 0.9179150014,
    "zfr_constant": 29.56641,
    "c_8_generic_raw": 0.01094882,
    "c_8_imagquad_raw": 0.00894715,
    "c_8_nontrivial_raw": 0.01307050,
    "c_8_cor75": 0.02171668,
    "c_7_cor75": 2.243458e-5,
    "c_23_threshold": 114.7623,
    "f_2_at_2": 0.975972,
}


def digits(x):
    s = f"{x:.10e}".split("e")[0].rstrip("0")
    return len(s.replace("-", "").replace(".", "")) - 1


@pytest.mark.parametrize("key", sorted(ORACLE))
def test_oracle(graph, key):
    ref = ORACLE[key]
    e = graph.value(key)
    assert abs(e.mid() - ref) <= 0.6 * 10 ** -digits(ref) * abs(ref) * 10, (key, e)


def test_A1_exact(graph):
    e = graph.value("A_1")
    assert (e.lo, e.hi) == (12577, 12577)


def test_printed_constants_confirmed(graph):
    bad = [n.id for n in graph.printed_nodes() if n.adjudication is Adjudication.CONTRADICTS]
    assert bad == []
    assert not graph.by_status(NodeStatus.FAILED)
    assert not graph.by_status(NodeStatus.UNEVALUATED)


def test_G0_axiom_consistent(graph):
    node = graph.nodes["G_0_rederived"]
    assert node.enclosure.contains(-0.12158510687212)  # stationary point solves 2w^3 + 4w^2 = 1
    # the imported nine-digit value sits just below the true minimum
    assert Interval("-0.121585107").hi <= node.enclosure.lo
    assert node.enclosure.hi <= 0


def test_axiom_list(graph):
    ids = {a["id"] for a in list_axioms(graph)}
    assert {"kadiri_G0", "stechkin_lemma", "alpha_0_rosser_schoenfeld"} <= ids
    assert list_axioms(None) == []


def test_Q_coefficients():
    q = expand_Q(Interval("0.51"))
    for b, ref in zip(q.coeffs, (5.0804, 8.1204, 4.04, 1)):
        assert b.contains(ref) or abs(b.mid() - ref) < 1e-12
    assert abs(q.at_zero().mid() - 18.2408) < 1e-12
    assert [b.mid() for b in expand_Q(1).coeffs] == [10, 15, 6, 1]


def test_Q_matches_product_form():
    q = expand_Q(Interval("0.51"))
    for phi in (0.0, 0.4, 1.3, 2.9):
        p = Interval(phi)
        direct = 4 * (1 + p.cos()) * (Interval("0.51") + p.cos()).sqr()
        assert q(phi).overlaps(direct)


def test_Q_shape_rejected():
    with pytest.raises(ShapeError):
        expand_Q(-1)


def test_empty_graph():
    g = ConstantGraph().evaluate()
    assert g.values() == {}
    assert "digraph" in to_dot(g)


def test_dot_edges(graph):
    dot = graph.to_dot()
    assert '"alpha_0" -> "alpha_1"' in dot
    assert '"c_7" -> "c_12"' in dot


def test_cycle_rejected():
    g = ConstantGraph()
    g.add(ConstNode("a", NodeKind.FORMULA, ("b",), lambda env: env["b"]))
    g.add(ConstNode("b", NodeKind.FORMULA, ("a",), lambda env: env["a"]))
    with pytest.raises(Exception):
        g.evaluate()


def test_undeclared_dependency_is_an_error():
    g = ConstantGraph()
    g.add(ConstNode("a", NodeKind.FORMULA, (), lambda env: Interval(1)))
    g.add(ConstNode("b", NodeKind.FORMULA, (), lambda env: env["a"]))
    g.evaluate()
    assert g.nodes["b"].status is NodeStatus.UNEVALUATED


def test_thread_count_does_not_change_values():
    a = build_graph().evaluate(threads=1).values()
    b = build_graph().evaluate(threads=8).values()
    assert a.keys() == b.keys()
    for k in a:
        if a[k] is not None:
            assert (a[k].lo, a[k].hi) == (b[k].lo, b[k].hi), k


def _value(params, key):
    return build_graph(params, {"compare_printed": False}).evaluate(targets=[key]).value(key)


def test_c8_decreases_with_c_check():
    vals = [_value(ParamSet(c_check=str(c)), "c_8_generic_raw") for c in (16, 24, 40)]
    assert vals[0].lo > vals[1].hi > vals[1].lo > vals[2].hi


def test_A1_monotone():
    base = _value(ParamSet(), "A_1")
    assert _value(ParamSet(c16="3500"), "A_1").lo > base.hi
    assert _value(ParamSet(c23="300"), "A_1") == base
    assert _value(ParamSet(c23="3000"), "A_1").lo == 15000


def test_density_coefficients_differ_from_dh():
    # the two coefficient families are different constants
    g = build_graph().evaluate(targets=["a_density_1_long", "a_dh_1_generic"])
    assert not g.value("a_density_1_long").overlaps(g.value("a_dh_1_generic"))


def test_wider_b_is_refuted_via_gap():
    g = build_graph(ParamSet(b_zfr="4", zfr_round="")).evaluate(targets=["zfr_gap"])
    assert g.value("zfr_gap").hi < 0
