import pytest

from cvp.graph import CausalGraph


@pytest.fixture
def world() -> CausalGraph:
    """The three-module shift world: C -> Y, S isolated."""
    return CausalGraph.build("demo", nodes=["C", "S", "Y"], edges=[("C", "Y")])


@pytest.fixture
def collider() -> CausalGraph:
    """A -> C <- B, C -> D, E -> D: C has parents {A,B}, child {D}, spouse {E}."""
    return CausalGraph.build(
        "collider",
        nodes=["A", "B", "C", "D", "E"],
        edges=[("A", "C"), ("B", "C"), ("C", "D"), ("E", "D")],
    )
