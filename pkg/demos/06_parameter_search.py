"""
Sweeping and refining free parameters
=====================================

Every candidate is fully re-verified; infeasible points never win.
"""

from chebcert import ParamSet
from chebcert.optimizer import SweepSpec, best_row, refine, rows_to_csv, sweep

spec = SweepSpec({"sigma0_generic": ["7.0", "7.79", "8.5"], "c_check": ["16", "20", "24"]}, "maximize_c8")
rows = sweep(spec, threads=4)
print(rows_to_csv(rows, "maximize_c8"))
best = best_row(rows, "maximize_c8")
print("best:", best.assignment, best.objective)

p, row = refine(best.params, "maximize_c8", max_iters=2)
print("refined:", p.sigma0_generic, p.c_check, row.objective)

spec = SweepSpec.from_range("c16", 2000, 3500, 500, "minimize_c16")
for r in sweep(spec):
    print(r.assignment, r.feasible, r.claims)

p, row = refine(ParamSet(), "minimize_A1", max_iters=1)
print("A_1 after refinement:", row.objective)
