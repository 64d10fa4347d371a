from __future__ import annotations

import numpy as np
import pytest

import dhgpart as dp

# Three edges over four nodes; the worked example used throughout the tests.
#   e0: w=1, src {0}, dst {1, 2}
#   e1: w=2, src {1}, dst {2}
#   e2: w=1, src {3}, dst {0}
H1_TEXT = "3 4\n1 1 2 0 1 2\n2 1 1 1 2\n1 1 1 3 0\n"


@pytest.fixture
def h1() -> dp.Hypergraph:
    return dp.parse_dhg(H1_TEXT)


def make_instance(
    num_nodes: int,
    num_edges: int,
    max_pins: int,
    seed: int,
    omega: int,
    delta_slack: int = 0,
) -> tuple[dp.Hypergraph, dp.Constraints]:
    """Generate a graph plus constraints guaranteed feasible for it.

    The inbound limit is at least the largest per-node in-degree (below that
    no assignment is valid), raised by ``delta_slack``.
    """
    g = dp.parse_dhg(dp.generate_dhg(num_nodes, num_edges, max_pins, seed=seed))
    indeg = int(g.node_in.lengths().max()) if g.num_nodes else 0
    delta = max(indeg, 1) + delta_slack
    return g, dp.Constraints(omega, delta)


def assign_of(part: dp.Partitioning) -> list[int]:
    return part.assign.tolist()


def collect_rounds(g: dp.Hypergraph, cfg: dp.Config):
    """Run the partitioner capturing every refinement round and every level."""
    rounds: list[dict] = []
    levels: list[dict] = []

    def obs(kind, payload):
        if kind == "round":
            rounds.append(payload)
        elif kind == "level":
            levels.append(payload)

    part, stats = dp.partition(g, cfg, observer=obs)
    return part, stats, rounds, levels
