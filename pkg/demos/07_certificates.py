"""
Certificates and the command line
=================================
"""

import subprocess
import sys

from chebcert import Certificate, derive_all, run_suite

g = derive_all()
cert = Certificate.from_graph(g, run_suite("all", g.params, g))
cert.write("certificate.json")

back = Certificate.read("certificate.json")
print(back.enclosure("c_10"), back.verdicts()["zfr"], back.exit_code())

# the same through the command line
for argv in (["derive", "--out", "certificate.json"], ["ineq", "lemma86"], ["sandbox", "S", "--x", "100"]):
    done = subprocess.run([sys.executable, "-m", "chebcert", *argv], capture_output=True, text=True)
    print("$ chebcert", " ".join(argv), "->", done.returncode)
    print(done.stdout)
