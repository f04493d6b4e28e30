"""
Verifying inequalities by branch and bound
==========================================
"""

from chebcert import Verdict, derive_all, run_suite, verify_lemma84, verify_lemma86, verify_nonneg
from chebcert.verifier import Region, locate_G0

# a toy claim: x^2 - x + 1/4 >= 0 touches zero at 1/2
rec = verify_nonneg(lambda x: x.sqr() - x + 0.25, Region.interval(-2, 2))
print(rec.summary())

# and a false one, with a witness
rec = verify_nonneg(lambda x: x.sqr() - x + 0.2, Region.interval(-2, 2))
print(rec.summary(), rec.witness)

print("G0 enclosure:", locate_G0(1e-10))

g = derive_all()
for r in run_suite("all", g.params, g):
    flag = "" if r.asserted else "  (reported only)"
    print(r.summary() + flag)

# how the two feasibility checks respond to their free parameter
for c16 in (2000, 3144.25, 3500):
    r = verify_lemma84(g.params, g, c16=c16)
    print("c16", c16, r.verdict.value, r.details["case_i"].margin)
for c23 in (50, 115, 179, 300):
    r = verify_lemma86(g.params, g, c23=c23)
    print("c23", c23, r.verdict.value)

assert verify_lemma84(g.params, g).verdict is Verdict.PROVED
