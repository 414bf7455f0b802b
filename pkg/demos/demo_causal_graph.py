"""Build causal graphs, query neighborhoods, and preview interventions."""

from cvp import CausalGraph, ModuleNode, NodeKind

# The three-variable world: C drives Y, S is correlated but causally inert.
world = CausalGraph.build("demo", nodes=["C", "S", "Y"], edges=[("C", "Y")])
print("world:", world)
print("  topological order:", world.topological_order())
print("  parents(Y):", sorted(world.parents("Y")))
print("  markov_blanket(Y):", sorted(world.markov_blanket("Y")))
print("  validate:", world.validate().ok)

# A richer shape: a collider with a co-parent.
collider = CausalGraph.build(
    "collider",
    nodes=[
        ModuleNode("A", NodeKind.DATA, "Source A"),
        ModuleNode("B", NodeKind.DATA, "Source B"),
        ModuleNode("C", NodeKind.LLM, "Fusion"),
        ModuleNode("D", NodeKind.TOOL, "Report"),
        ModuleNode("E", NodeKind.DATA, "Side input"),
    ],
    edges=[("A", "C"), ("B", "C"), ("C", "D"), ("E", "D")],
)
print("\ncollider:", collider)
for node in collider.node_ids:
    print(f"  blanket({node}) = {sorted(collider.markov_blanket(node))}")

# do-surgery: force C and watch its parents disappear, nothing else moves.
forced = collider.intervene("C")
print("\nafter intervene(C):")
print("  edges:", [(e.src, e.dst) for e in forced.edges])
print("  parents(C):", sorted(forced.parents("C")))
print("  original untouched:", [(e.src, e.dst) for e in collider.edges])

# The DAG invariant is enforced eagerly.
try:
    world.add_edge("Y", "C")
except Exception as exc:
    print("\nadding Y -> C:", type(exc).__name__, "cycle path", exc.cycle)
