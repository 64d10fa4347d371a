"""One coarsening level.

Pipeline: materialize each node's unique neighborhood, score neighbor pairs by
shared incident edge weight (batched histograms), pick each node's best valid
candidate (size and inbound-union checks deferred to selection time), resolve
the resulting pairing pseudo-forest into a matching, and contract matched
pairs into a coarse hypergraph.  Neighbor sets are carried through the
contraction instead of being rematerialized.

Everything here is deterministic: ties are broken by the lexicographic
(value, larger id) rule during selection and (score, id) during matching, and
histogram accumulation order is fixed (ascending edge id), so results are
independent of the batch size.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .hgraph import (
    ID,
    OFFSET,
    Constraints,
    CsrSets,
    Hypergraph,
    gather_segments,
    segment_unique,
)

__all__ = [
    "PairingForest",
    "ClusterMap",
    "materialize_neighbors",
    "union_inbound_size",
    "select_candidates",
    "match_nodes",
    "contract",
    "coarsen_level",
]


@dataclass(frozen=True)
class PairingForest:
    """Per-node candidate (``pair``, -1 = none), its histogram ``score``, and
    — once :func:`match_nodes` has run — the final ``match`` involution
    (``match[n] == n`` for singletons)."""

    pair: np.ndarray
    score: np.ndarray
    match: np.ndarray | None = None

    def matched_pairs(self) -> int:
        """Number of two-node clusters in the final matching."""
        if self.match is None:
            return 0
        return int(np.count_nonzero(self.match != np.arange(len(self.match)))) // 2


@dataclass(frozen=True)
class ClusterMap:
    """Fine node -> coarse node map for one contraction.

    Coarse ids are contiguous and assigned in ascending order of each
    cluster's minimum fine id; every cluster has one or two members.
    """

    gamma: np.ndarray
    num_coarse: int

    def members(self) -> CsrSets:
        """Coarse node -> sorted fine member ids."""
        fine = np.arange(len(self.gamma), dtype=OFFSET)
        return segment_unique(self.gamma.astype(OFFSET), fine, self.num_coarse)


def materialize_neighbors(g: Hypergraph) -> CsrSets:
    """Sorted unique neighbor set per node (pins of incident edges, self excluded)."""
    lens = g.node_inc.lengths()
    owner_per_edge = np.repeat(np.arange(g.num_nodes, dtype=OFFSET), lens)
    pins, origin = gather_segments(g.edge_pins, g.node_inc.data)
    owners = owner_per_edge[origin]
    keep = pins != owners
    return segment_unique(owners[keep], pins[keep], g.num_nodes)


def union_inbound_size(a, b) -> int:
    """|a ∪ b| for two sorted inbound-edge-id arrays."""
    return int(kernels.union_size_sorted(a, b))


def select_candidates(
    g: Hypergraph, nbrs: CsrSets, c: Constraints, batch_size: int = 32
) -> PairingForest:
    """Best valid merge candidate per node.

    hist(n, m) accumulates the weight of every incident edge of ``n`` that
    also contains ``m``, computed over ``nbrs`` segments in windows of
    ``batch_size`` (the windowing affects memory traffic only, never the
    result).  Candidates are examined in order of descending histogram value,
    breaking ties toward the larger node id; the first one that keeps the
    merged size within ``max_size`` and the inbound-edge union within
    ``max_inbound`` wins.
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    hist = kernels.fill_histograms(
        g.node_inc.offsets,
        g.node_inc.data,
        g.edge_pins.offsets,
        g.edge_pins.data,
        g.edge_weight,
        nbrs.offsets,
        nbrs.data,
        batch_size,
    )
    seg = np.repeat(np.arange(g.num_nodes, dtype=OFFSET), nbrs.lengths())
    ids = nbrs.data.astype(OFFSET)
    order = np.lexsort((-ids, -hist, seg)).astype(OFFSET)
    pair, score = kernels.select_first_valid(
        order,
        nbrs.offsets,
        nbrs.data,
        hist,
        g.node_size,
        g.node_in.offsets,
        g.node_in.data,
        c.max_size,
        c.max_inbound,
    )
    return PairingForest(pair=pair, score=score)


def match_nodes(forest: PairingForest) -> PairingForest:
    """Resolve the pairing forest into an involution (see kernel docstring)."""
    match = kernels.resolve_matching(forest.pair, forest.score)
    return PairingForest(pair=forest.pair, score=forest.score, match=match)


def contract(
    g: Hypergraph, nbrs: CsrSets, forest: PairingForest
) -> tuple[Hypergraph, CsrSets, ClusterMap]:
    """Merge matched pairs into coarse nodes.

    Edge ids and weights survive unchanged (parallel edges are never merged —
    their identities feed the inbound accounting), pins map through gamma and
    deduplicate per side, node sizes add up, and the neighbor sets of the next
    level are the gamma-image of the members' neighbor sets minus self.
    """
    if forest.match is None:
        raise ValueError("forest has no match; run match_nodes first")
    n = g.num_nodes
    match = np.asarray(forest.match, dtype=ID)
    rep = np.minimum(np.arange(n, dtype=ID), match)
    reps = np.unique(rep)
    gamma = np.searchsorted(reps, rep).astype(ID)
    nc = len(reps)

    sizes = np.zeros(nc, dtype=np.int64)
    np.add.at(sizes, gamma, g.node_size.astype(np.int64))

    src_eids = np.repeat(np.arange(g.num_edges, dtype=OFFSET), g.edge_src.lengths())
    dst_eids = np.repeat(np.arange(g.num_edges, dtype=OFFSET), g.edge_dst.lengths())
    edge_src = segment_unique(src_eids, gamma[g.edge_src.data].astype(OFFSET), g.num_edges)
    edge_dst = segment_unique(dst_eids, gamma[g.edge_dst.data].astype(OFFSET), g.num_edges)
    coarse = Hypergraph._from_csr(nc, g.edge_weight, edge_src, edge_dst, node_size=sizes)

    owners = gamma[np.repeat(np.arange(n, dtype=OFFSET), nbrs.lengths())].astype(OFFSET)
    values = gamma[nbrs.data].astype(OFFSET)
    keep = values != owners
    coarse_nbrs = segment_unique(owners[keep], values[keep], nc)
    return coarse, coarse_nbrs, ClusterMap(gamma=gamma, num_coarse=nc)


def coarsen_level(
    g: Hypergraph, nbrs: CsrSets, c: Constraints, batch_size: int = 32
) -> tuple[Hypergraph, CsrSets, ClusterMap, PairingForest]:
    """select -> match -> contract; returns the forest for inspection."""
    forest = match_nodes(select_candidates(g, nbrs, c, batch_size))
    coarse, coarse_nbrs, cmap = contract(g, nbrs, forest)
    return coarse, coarse_nbrs, cmap, forest
