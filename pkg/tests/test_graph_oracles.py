"""Graph algorithms against brute-force recomputation on small instances.

The acceptance suite runs the full documented scale; these keep the same
oracles wired into the regular suite at a faster size.
"""

import random
import string

import pytest

from cvp.errors import WouldCreateCycleError
from cvp.graph import CausalGraph

from oracle_utils import (
    brute_ancestors,
    brute_blanket,
    brute_children,
    brute_parents,
    check_topo_order,
    random_dag,
    reaches,
    upper_tri_dags,
)

NODE_POOL = list(string.ascii_uppercase)


def build(node_ids, edges):
    return CausalGraph.build(nodes=node_ids, edges=edges)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_exhaustive_small_dags_match_oracles(n):
    ids = NODE_POOL[:n]
    for edges in upper_tri_dags(ids):
        g = build(ids, edges)
        order = g.topological_order()
        assert check_topo_order(order, ids, edges)
        assert order == g.topological_order()
        for nid in ids:
            assert g.parents(nid) == brute_parents(edges, nid)
            assert g.children(nid) == brute_children(edges, nid)
            assert g.ancestors(nid) == brute_ancestors(edges, nid)
            assert g.markov_blanket(nid) == brute_blanket(edges, nid)


def test_random_dags_match_oracles():
    rng = random.Random(20260810)
    for _ in range(200):
        n = rng.randint(1, 8)
        ids = rng.sample(NODE_POOL, n)
        edges = random_dag(rng, ids)
        g = build(ids, edges)
        assert check_topo_order(g.topological_order(), ids, edges)
        for nid in ids:
            assert g.markov_blanket(nid) == brute_blanket(edges, nid)


def test_cycle_rejection_agrees_with_reachability_oracle():
    rng = random.Random(987)
    trials = accepted = rejected = 0
    for _ in range(300):
        n = rng.randint(2, 8)
        ids = rng.sample(NODE_POOL, n)
        edges = random_dag(rng, ids)
        g = build(ids, edges)
        for _ in range(4):
            u, v = rng.sample(ids, 2)
            if (u, v) in edges:
                continue
            trials += 1
            creates_cycle = reaches(edges, v, u)
            try:
                g2 = g.add_edge(u, v)
            except WouldCreateCycleError as exc:
                rejected += 1
                assert creates_cycle, f"rejected acyclic edge {u}->{v}"
                cyc = exc.cycle
                assert cyc[0] == cyc[-1] == u and cyc[1] == v
            else:
                accepted += 1
                assert not creates_cycle, f"accepted cycle-forming edge {u}->{v}"
                assert g2.validate().ok
    assert trials > 500 and accepted > 50 and rejected > 50
