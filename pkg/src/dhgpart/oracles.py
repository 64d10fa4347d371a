"""Verification oracles.

``brute_force_optimal`` enumerates every set partition of the nodes (guarded
to at most 10 nodes) and returns the best valid one; ``simulate_sequence``
replays a move sequence, recomputing sizes, distinct-inbound sets and
connectivity from scratch after every prefix.  Both are written against plain
Python sets, deliberately sharing nothing with the production kernels.
"""
from __future__ import annotations

import numpy as np

from .errors import OracleSizeError
from .hgraph import ID, Constraints, Hypergraph, Partitioning, check_feasibility

__all__ = ["brute_force_optimal", "simulate_sequence", "naive_connectivity"]

BRUTE_FORCE_LIMIT = 10


def naive_connectivity(g: Hypergraph, assign) -> float:
    """Connectivity from first principles (per-edge distinct-partition sets)."""
    total = 0.0
    for e in range(g.num_edges):
        pins = g.edge_pins.segment(e)
        if len(pins) == 0:
            continue
        lam = len({int(assign[p]) for p in pins})
        total += float(g.edge_weight[e]) * (lam - 1)
    return total


def _naive_violation_count(g, assign, num_parts, c: Constraints) -> int:
    sizes = [0] * num_parts
    inbound = [set() for _ in range(num_parts)]
    for v in range(g.num_nodes):
        p = int(assign[v])
        sizes[p] += int(g.node_size[v])
        inbound[p].update(int(e) for e in g.node_in.segment(v))
    count = 0
    for p in range(num_parts):
        if sizes[p] > c.max_size:
            count += 1
        if len(inbound[p]) > c.max_inbound:
            count += 1
    return count


def brute_force_optimal(g: Hypergraph, c: Constraints) -> tuple[Partitioning, float]:
    """Minimum-connectivity valid partitioning by set-partition enumeration.

    Assignments are generated in restricted-growth order (partition ids appear
    in order of their smallest member), so the reported optimum is the
    lexicographically smallest canonical assignment among ties.  Inputs above
    ``BRUTE_FORCE_LIMIT`` nodes are refused.
    """
    n = g.num_nodes
    if n > BRUTE_FORCE_LIMIT:
        raise OracleSizeError(
            f"{n} nodes exceeds the brute-force guard ({BRUTE_FORCE_LIMIT})"
        )
    check_feasibility(g, c)
    if n == 0:
        return Partitioning(np.zeros(0, dtype=ID), 0), 0.0

    node_in = [set(g.node_in.segment(v).tolist()) for v in range(n)]
    node_sz = [int(s) for s in g.node_size]

    assign = [0] * n
    part_size = [0] * (n + 1)
    part_in: list[set] = [set() for _ in range(n + 1)]
    best_assign: list[int] | None = None
    best_conn = float("inf")

    def rec(i: int, used: int) -> None:
        nonlocal best_assign, best_conn
        if i == n:
            conn = naive_connectivity(g, assign)
            if conn < best_conn:
                best_conn = conn
                best_assign = assign.copy()
            return
        for p in range(used + 1):
            if part_size[p] + node_sz[i] > c.max_size:
                continue
            extra = node_in[i] - part_in[p]
            if len(part_in[p]) + len(extra) > c.max_inbound:
                continue
            assign[i] = p
            part_size[p] += node_sz[i]
            part_in[p] |= extra
            rec(i + 1, max(used, p + 1))
            part_in[p] -= extra
            part_size[p] -= node_sz[i]
        assign[i] = 0

    rec(0, 0)
    if best_assign is None:  # feasibility check makes this unreachable
        raise OracleSizeError("no valid partitioning found")
    arr = np.asarray(best_assign, dtype=ID)
    return Partitioning(arr, int(arr.max()) + 1), float(best_conn)


def simulate_sequence(
    g: Hypergraph, rho0: Partitioning, moves, c: Constraints
) -> list[tuple[int, float]]:
    """Ground-truth trajectory of a move sequence.

    ``moves`` is a sequence of (node, target-partition) pairs, at most one per
    node.  Returns, for every prefix length 0..len(moves), the pair
    (violation count, connectivity) of the state after applying that prefix —
    each computed from scratch, nothing incremental.
    """
    moves = [(int(a), int(b)) for a, b in moves]
    seen = {a for a, _ in moves}
    if len(seen) != len(moves):
        raise ValueError("at most one move per node")
    assign = [int(x) for x in rho0.assign]
    out = [
        (
            _naive_violation_count(g, assign, rho0.num_parts, c),
            naive_connectivity(g, assign),
        )
    ]
    for node, tgt in moves:
        assign[node] = tgt
        out.append(
            (
                _naive_violation_count(g, assign, rho0.num_parts, c),
                naive_connectivity(g, assign),
            )
        )
    return out
