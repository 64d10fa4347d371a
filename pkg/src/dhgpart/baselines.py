"""Comparison baselines: a one-pass filler and an incidence-overlap greedy.

Both honor the same (max_size, max_inbound) constraints as the partitioner and
always return valid partitionings on feasible inputs.  They are intentionally
simple reference points for quality measurements, not fast implementations.
"""
from __future__ import annotations

import numpy as np

from .hgraph import ID, Constraints, Hypergraph, Partitioning, check_feasibility

__all__ = ["one_pass", "overlap_greedy"]


def one_pass(g: Hypergraph, c: Constraints) -> Partitioning:
    """Scan nodes in id order, filling one open partition at a time.

    A node joins the open partition if that keeps its size within max_size and
    its distinct-inbound union within max_inbound; otherwise it opens a new
    one.
    """
    check_feasibility(g, c)
    n = g.num_nodes
    assign = np.zeros(n, dtype=ID)
    cur = -1
    cur_size = 0
    cur_in: set[int] = set()
    for v in range(n):
        s = int(g.node_size[v])
        inn = set(g.node_in.segment(v).tolist())
        if cur >= 0 and cur_size + s <= c.max_size and len(cur_in | inn) <= c.max_inbound:
            cur_size += s
            cur_in |= inn
        else:
            cur += 1
            cur_size = s
            cur_in = inn
        assign[v] = cur
    return Partitioning(assign, cur + 1)


def overlap_greedy(g: Hypergraph, c: Constraints) -> Partitioning:
    """Grow partitions around seeds by incident-edge overlap.

    Seed the lowest unassigned id, then repeatedly add the unassigned node
    with the largest overlap between its incident-edge set and the incident
    edges already in the partition (ties toward the smaller id), as long as
    the overlap is positive and both constraints stay satisfied.  When nothing
    can be added, seed the next partition.
    """
    check_feasibility(g, c)
    n = g.num_nodes
    inc_sets = [set(g.node_inc.segment(v).tolist()) for v in range(n)]
    in_sets = [set(g.node_in.segment(v).tolist()) for v in range(n)]
    sizes = g.node_size

    assign = np.full(n, -1, dtype=ID)
    free = np.ones(n, dtype=bool)
    part = -1
    for seed in range(n):
        if not free[seed]:
            continue
        part += 1
        assign[seed] = part
        free[seed] = False
        size = int(sizes[seed])
        in_u = set(in_sets[seed])
        inc_u = set(inc_sets[seed])
        while True:
            best = -1
            best_ov = 0
            for m in np.flatnonzero(free):
                m = int(m)
                ov = len(inc_sets[m] & inc_u)
                if ov <= best_ov:
                    continue
                if size + int(sizes[m]) > c.max_size:
                    continue
                if len(in_u | in_sets[m]) > c.max_inbound:
                    continue
                best = m
                best_ov = ov
            if best < 0:
                break
            assign[best] = part
            free[best] = False
            size += int(sizes[best])
            in_u |= in_sets[best]
            inc_u |= inc_sets[best]
    return Partitioning(assign, part + 1)
