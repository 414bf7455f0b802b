"""check_plan against the independent brute-force checker.

Fast subset of the acceptance-scale enumeration; the full documented scale
runs in the acceptance suite.
"""

import itertools
import random

from cvp.graph import CausalGraph
from cvp.plan import AnchorPolicy, Plan, PlanStep, check_plan

from oracle_utils import all_read_subsets, brute_check_plan, upper_tri_dags

POLICIES = [(AnchorPolicy.PARENTS_ONLY, "ParentsOnly"), (AnchorPolicy.MARKOV_BLANKET, "MarkovBlanket")]


def as_plan(steps):
    return Plan(tuple(PlanStep(i, m, frozenset(r)) for i, (m, r) in enumerate(steps)))


def assert_case(graph, ids, edges, steps):
    plan = as_plan(steps)
    spurious = {}
    for policy, tag in POLICIES:
        report = check_plan(graph, plan, policy)
        got = sorted((v.code, v.step_index, v.subject) for v in report.violations)
        expected = brute_check_plan(edges, ids, steps, tag)
        assert got == expected, f"{tag} mismatch on {edges} steps={steps}"
        assert report.ok == (not expected)
        spurious[tag] = {(i, s) for c, i, s in got if c == "SpuriousDependency"}
    assert spurious["MarkovBlanket"] <= spurious["ParentsOnly"]


def test_exhaustive_two_nodes_all_plans():
    ids = ["A", "B"]
    read_choices = list(all_read_subsets(ids))
    for edges in upper_tri_dags(ids):
        graph = CausalGraph.build(nodes=ids, edges=edges)
        step_choices = [(m, r) for m in ids for r in read_choices]
        for length in (1, 2, 3):
            for steps in itertools.product(step_choices, repeat=length):
                assert_case(graph, ids, edges, list(steps))


def test_sampled_three_and_four_nodes():
    rng = random.Random(42424)
    for n in (3, 4):
        ids = [chr(ord("A") + i) for i in range(n)]
        graphs = [(e, CausalGraph.build(nodes=ids, edges=e)) for e in upper_tri_dags(ids)]
        for _ in range(1500):
            edges, graph = graphs[rng.randrange(len(graphs))]
            length = rng.randint(1, 4)
            steps = [
                (rng.choice(ids), {m for m in ids if rng.random() < 0.35})
                for _ in range(length)
            ]
            assert_case(graph, ids, edges, steps)


def test_unknown_modules_against_oracle(world):
    ids = list(world.node_ids)
    edges = [(e.src, e.dst) for e in world.edges]
    cases = [
        [("Q", set())],
        [("Q", {"Q"})],
        [("C", {"Q"}), ("Q", {"C", "R"})],
        [("Q", set()), ("Q", set())],
    ]
    for steps in cases:
        assert_case(world, ids, edges, steps)
