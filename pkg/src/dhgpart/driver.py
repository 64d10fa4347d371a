"""Multi-level orchestration.

Coarsen until the node count reaches ceil(|N0| / max_size) or a level matches
nothing, adopt the coarsest nodes as the initial partitions, then walk back up
refining at every level (including the coarsest itself).  Partition ids are
compacted once at the very end; intermediate levels may leave ids empty after
draining moves.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .coarsen import coarsen_level, materialize_neighbors
from .errors import DhgError
from .hgraph import (
    ID,
    Constraints,
    Hypergraph,
    Partitioning,
    check_feasibility,
    check_validity,
)
from .refine import project, refine_level

__all__ = ["Config", "RunStats", "partition"]


@dataclass(frozen=True)
class Config:
    """Partitioner knobs.

    ``seed`` is reserved for future randomized variants; the shipped pipeline
    is fully deterministic and never reads it.  ``max_levels`` is a defensive
    cap on the coarsening recursion depth.
    """

    constraints: Constraints
    max_rounds: int = 8
    batch_size: int = 32
    seed: int = 0
    max_levels: int = 64

    def __post_init__(self):
        if self.max_rounds < 1:
            raise ValueError(f"max_rounds must be >= 1, got {self.max_rounds}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.max_levels < 1:
            raise ValueError(f"max_levels must be >= 1, got {self.max_levels}")


@dataclass
class RunStats:
    """What a run did: per-level graph sizes (finest first), the connectivity
    trace of every refinement stage in execution order (coarsest first), wall
    times per phase (only when timing was requested), and the final partition
    count."""

    levels: list[dict] = field(default_factory=list)
    connectivity_trace: list[list[float]] = field(default_factory=list)
    phase_ms: dict = field(default_factory=dict)
    num_partitions: int = 0

    def to_dict(self) -> dict:
        return {
            "levels": self.levels,
            "connectivity_trace": self.connectivity_trace,
            "phase_ms": self.phase_ms,
            "num_partitions": self.num_partitions,
        }


def partition(
    g: Hypergraph,
    cfg: Config,
    observer=None,
    timings: bool = False,
) -> tuple[Partitioning, RunStats]:
    """Partition ``g`` under ``cfg.constraints``; minimizes connectivity.

    Raises :class:`InfeasibleError` when no valid partitioning exists, and
    :class:`DhgError` if coarsening needs more than ``cfg.max_levels`` levels.
    ``observer`` receives ("level", ...) after every contraction and
    ("round", ...) after every refinement round (see ``refine_level``).
    """
    c = cfg.constraints
    check_feasibility(g, c)
    t0 = time.perf_counter()

    target = -(-g.num_nodes // c.max_size)
    levels = [g]
    maps = []
    nbrs = materialize_neighbors(g)
    while levels[-1].num_nodes > target:
        if len(maps) >= cfg.max_levels:
            raise DhgError(
                f"coarsening exceeded max_levels={cfg.max_levels} "
                f"({levels[-1].num_nodes} nodes, target {target})"
            )
        coarse, nbrs, cmap, forest = coarsen_level(levels[-1], nbrs, c, cfg.batch_size)
        if forest.matched_pairs() == 0:
            break
        if observer is not None:
            observer(
                "level",
                {
                    "index": len(maps),
                    "fine": levels[-1],
                    "coarse": coarse,
                    "forest": forest,
                    "cmap": cmap,
                },
            )
        levels.append(coarse)
        maps.append(cmap)
    t1 = time.perf_counter()

    coarsest = levels[-1]
    num_parts = coarsest.num_nodes
    assign = np.arange(num_parts, dtype=ID)
    trace = []
    assign, conns = refine_level(
        coarsest, assign, num_parts, c, cfg.max_rounds, observer, level=len(maps)
    )
    trace.append(conns)
    for li in range(len(maps) - 1, -1, -1):
        assign = project(assign, maps[li])
        assign, conns = refine_level(
            levels[li], assign, num_parts, c, cfg.max_rounds, observer, level=li
        )
        trace.append(conns)
    t2 = time.perf_counter()

    if len(assign):
        used = np.unique(assign)
        assign = np.searchsorted(used, assign).astype(ID)
        final_parts = len(used)
    else:
        final_parts = 0
    result = Partitioning(assign, final_parts)
    bad = check_validity(g, result, c)
    if bad:
        raise DhgError(f"internal error: produced an invalid partitioning: {bad[:3]}")

    stats = RunStats(
        levels=[
            {"nodes": lv.num_nodes, "edges": lv.num_edges, "pins": lv.num_pins()}
            for lv in levels
        ],
        connectivity_trace=trace,
        num_partitions=final_parts,
    )
    if timings:
        t3 = time.perf_counter()
        stats.phase_ms = {
            "coarsen": (t1 - t0) * 1e3,
            "refine": (t2 - t1) * 1e3,
            "total": (t3 - t0) * 1e3,
        }
    return result, stats
