"""Statically check agent plans against the causal graph."""

from cvp import AnchorPolicy, CausalGraph, Plan, check_plan, suggest_order

world = CausalGraph.build("demo", nodes=["C", "S", "Y"], edges=[("C", "Y")])

# A compliant plan: compute C, then Y from C alone.
good = Plan.of(("C", []), ("Y", ["C"]))
print("anchored plan ok:", check_plan(world, good).ok)

# An agent tempted by the spurious signal.
tempted = Plan.of(("C", []), ("S", []), ("Y", ["C", "S"]))
report = check_plan(world, tempted, AnchorPolicy.PARENTS_ONLY)
print("\ntempted plan violations:")
for v in report.violations:
    print(f"  step {v.step_index}: {v.code} on {v.subject}: {v.detail}")

# Executing before a dependency is ready is also caught.
premature = Plan.of(("Y", ["C"]), ("C", []))
print("\npremature plan:", [
    (v.code, v.subject) for v in check_plan(world, premature).violations
])

# The Markov blanket policy is wider than parents-only: a spouse read is
# fine under the blanket but spurious under parents.
collider = CausalGraph.build(
    "collider", nodes=["A", "B", "C", "D", "E"],
    edges=[("A", "C"), ("B", "C"), ("C", "D"), ("E", "D")],
)
spouse_read = Plan.of(("A", []), ("B", []), ("E", []), ("C", ["A", "B", "E"]))
for policy in (AnchorPolicy.PARENTS_ONLY, AnchorPolicy.MARKOV_BLANKET):
    r = check_plan(collider, spouse_read, policy)
    print(f"\n{policy.value}: ok={r.ok}",
          [(v.code, v.subject) for v in r.violations])

# And the engine can propose the canonical compliant plan itself.
plan = suggest_order(collider, {"A", "B", "C", "D", "E"})
print("\nsuggested order:")
for step in plan.steps:
    print(f"  {step.index}: run {step.module}, reading {sorted(step.reads)}")
