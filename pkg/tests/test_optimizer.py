import pytest

from chebcert import ParamSet
from chebcert.optimizer import (
    OBJECTIVES,
    InfeasibleSeed,
    NoImprovement,
    SweepSpec,
    best_row,
    evaluate_point,
    refine,
    rows_to_csv,
    sweep,
)
from chebcert.params import ParamError


def test_default_point_feasible():
    row = evaluate_point(ParamSet(), "minimize_A1")
    assert row.feasible and row.objective.hi == 12577


def test_c16_ladder_feasibility():
    spec = SweepSpec({"c16": ["2000", "3144.25", "3500"]}, "minimize_c16")
    rows = sweep(spec)
    assert [r.feasible for r in rows] == [False, True, True]
    assert best_row(rows, "minimize_c16").assignment == {"c16": "3144.25"}


def test_sweep_order_and_threads():
    spec = SweepSpec.from_range("sigma_density_short", "2.35", "2.55", "0.05", "minimize_density_constant")
    assert spec.grid["sigma_density_short"] == ["2.35", "2.40", "2.45", "2.50", "2.55"]
    a, b = sweep(spec, threads=1), sweep(spec, threads=4)
    assert [r.index for r in b] == list(range(5))
    assert [(r.objective.lo, r.objective.hi) for r in a] == [(r.objective.lo, r.objective.hi) for r in b]
    best = best_row(a, "minimize_density_constant")
    assert best.assignment == {"sigma_density_short": "2.45"}


def test_rounding_released_when_varied():
    row = evaluate_point(ParamSet(c_check="20"), "maximize_c8", ("c_check",))
    assert row.params.c8_generic_round == ""
    assert row.feasible


def test_empty_grid():
    assert sweep(SweepSpec({}, "minimize_A1")) == []
    assert sweep(SweepSpec({"c16": []}, "minimize_A1")) == []


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec({"c16": ["1"]}, "maximize_everything")
    with pytest.raises(ParamError):
        SweepSpec({"nonsense": ["1"]}, "minimize_A1")


def test_from_dict_ranges():
    spec = SweepSpec.from_dict({"objective": "minimize_c23",
                                "ranges": {"c23": {"lo": 170, "hi": 190, "step": 10}}})
    assert spec.grid == {"c23": ["170", "180", "190"]}


def test_invalid_point_is_infeasible_row():
    rows = sweep(SweepSpec({"b_zfr": ["3", "8.7"]}, "minimize_zfr_constant"))
    assert not rows[0].feasible and "b_zfr" in rows[0].error
    assert rows[1].feasible


def test_refine_A1_never_worse():
    p, row = refine(ParamSet(), "minimize_A1", max_iters=1)
    assert row.feasible and row.objective.hi <= 12577


def test_refine_strict_no_improvement():
    with pytest.raises(NoImprovement) as info:
        refine(ParamSet(), "minimize_A1", max_iters=1, strict=True)
    assert info.value.seed == ParamSet()


def test_refine_infeasible_seed():
    with pytest.raises(InfeasibleSeed):
        refine(ParamSet(c16="100"), "minimize_c16")


def test_refine_maximize_c8_improves():
    seed = ParamSet(c_check="20")
    p, row = refine(seed, "maximize_c8", max_iters=1, section_iters=8)
    base = evaluate_point(seed, "maximize_c8", OBJECTIVES["maximize_c8"].default_params)
    assert row.objective.lo >= base.objective.lo


def test_csv():
    rows = sweep(SweepSpec({"c23": ["179"]}, "minimize_c23"))
    text = rows_to_csv(rows, "minimize_c23")
    header, line = text.splitlines()
    assert header.startswith("index,c23,minimize_c23_lo")
    assert line.startswith("0,179,179,179,True")
