import pytest

from causal_implicits import CausalGraph, DistributionRequest, Variable, parse_graph

FORK_TEXT = """
obs V1 2
obs V2 2
obs V3 2
edge V3 V1
edge V3 V2
"""

CONFOUNDED_CHAIN_TEXT = """
obs V1 2
obs V2 2
obs V3 2
obs V4 2
hidden U1
edge V4 V3
edge V3 V2
edge V2 V1
edge U1 V1
edge U1 V3
"""


@pytest.fixture
def fork():
    """Three binary variables, one common cause: V3 -> V1, V3 -> V2."""
    return parse_graph(FORK_TEXT)


@pytest.fixture
def chain2():
    """Two binary variables, V2 -> V1."""
    return parse_graph("obs V1 2\nobs V2 2\nedge V2 V1\n")


@pytest.fixture
def confounded_pair():
    """Two observed binary variables sharing one hidden binary cause."""
    return parse_graph("obs V1 2\nobs V2 2\nhidden U1\nedge U1 V1\nedge U1 V2\n")


@pytest.fixture
def confounded_chain():
    """Chain V4 -> V3 -> V2 -> V1 with a hidden cause of V1 and V3."""
    return parse_graph(CONFOUNDED_CHAIN_TEXT)


def req(graph, **assignment):
    return DistributionRequest.of(graph, assignment)


def brute_force_c_components(graph):
    """Oracle: connectivity through hidden-common-cause edges, by path search."""
    observed = list(graph.observed)
    adjacent = {n: set() for n in observed}
    for h in graph.hidden:
        kids = [c for c in graph.children(h) if c in adjacent]
        for a in kids:
            for b in kids:
                if a != b:
                    adjacent[a].add(b)
    blocks = []
    seen = set()
    for start in observed:
        if start in seen:
            continue
        frontier, block = [start], set()
        while frontier:
            node = frontier.pop()
            if node in block:
                continue
            block.add(node)
            frontier.extend(adjacent[node] - block)
        seen |= block
        blocks.append(graph.sort_names(block))
    return tuple(blocks)
