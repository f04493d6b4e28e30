"""
The chain of named constants
============================

Each node is evaluated from its dependencies and compared with the figure
quoted for it, when there is one.
"""

from chebcert import NodeStatus, ParamSet, build_graph, derive_all

g = derive_all()

for node in g.printed_nodes():
    print(f"{node.id:22} {node.printed:>14}  {node.status.value:9} {node.enclosure}")

print("A_1 =", g.value("A_1"))
print("failed:", g.by_status(NodeStatus.FAILED))

# imported results are kept separate from what is recomputed
for key in g.by_status(NodeStatus.AXIOM):
    print("axiom:", key)

# only the ancestors of the requested nodes are evaluated
small = build_graph(ParamSet(c16="3500"), {"compare_printed": False}).evaluate(targets=["A_1"])
print("A_1 with c16 = 3500:", small.value("A_1"))

with open("constants.dot", "w") as fh:
    fh.write(g.to_dot())
