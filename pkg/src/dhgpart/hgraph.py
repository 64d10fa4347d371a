"""Weighted directed hypergraphs: compressed sparse storage, I/O, evaluation.

The storage backbone is ``CsrSets``: a flat data array segmented by an offsets
array, one segment per outer id.  Incidence is materialized both ways
(edge -> pins and node -> edges) so traversals never search, and segments that
act as sets (``node_in``, ``node_out``, ``edge_pins``, ``node_inc``) are kept
strictly increasing so unions and intersections reduce to merges and binary
searches.  A ``Hypergraph`` is treated as immutable once built.

Text formats:

* ``.dhg`` — line 1 is ``<numEdges> <numNodes>``; each following line is
  ``<weight> <kSrc> <kDst> <src ids...> <dst ids...>`` with 0-based ids.
* ``.hgr`` — undirected hMETIS convenience input; the first pin of each edge
  is taken as the source, the remaining pins as destinations.
* partition files — one partition id per line, row i holding node i's id.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import DhgParseError, InfeasibleError

ID = np.int32
OFFSET = np.int64

__all__ = [
    "CsrSets",
    "Hypergraph",
    "Partitioning",
    "Constraints",
    "Violation",
    "parse_dhg",
    "parse_hgr",
    "load_hypergraph",
    "parse_partition",
    "write_partition",
    "connectivity",
    "check_validity",
    "check_feasibility",
    "partition_sizes",
    "distinct_inbound_sizes",
]


# ---------------------------------------------------------------------------
# compressed sparse sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CsrSets:
    """Segmented array of integer sets.

    Segment ``s`` spans ``data[offsets[s]:offsets[s+1]]``.  ``offsets`` has one
    more entry than there are segments and is non-decreasing.  Whether a given
    family keeps its segments sorted/deduplicated is a property of that family
    (see module docstring), not of the container.
    """

    offsets: np.ndarray
    data: np.ndarray

    @property
    def num_segments(self) -> int:
        return len(self.offsets) - 1

    def lengths(self) -> np.ndarray:
        return np.diff(self.offsets)

    def segment(self, i: int) -> np.ndarray:
        return self.data[self.offsets[i] : self.offsets[i + 1]]

    def to_lists(self) -> list[list[int]]:
        return [self.segment(i).tolist() for i in range(self.num_segments)]

    @classmethod
    def from_lists(cls, lists: Sequence[Sequence[int]]) -> "CsrSets":
        offsets = np.zeros(len(lists) + 1, dtype=OFFSET)
        np.cumsum([len(x) for x in lists], out=offsets[1:])
        if len(lists):
            data = np.concatenate([np.asarray(x, dtype=ID) for x in lists] or [[]])
            data = data.astype(ID, copy=False)
        else:
            data = np.zeros(0, dtype=ID)
        return cls(offsets, data)

    def validate(self, *, max_value: int | None = None, strictly_increasing: bool = False) -> None:
        """Raise ``ValueError`` on structural breakage. Meant for tests/debugging."""
        if self.offsets.ndim != 1 or len(self.offsets) < 1 or self.offsets[0] != 0:
            raise ValueError("offsets must be 1-D and start at 0")
        if np.any(np.diff(self.offsets) < 0):
            raise ValueError("offsets must be non-decreasing")
        if int(self.offsets[-1]) != len(self.data):
            raise ValueError("offsets do not cover data")
        if max_value is not None and len(self.data) and (
            int(self.data.min()) < 0 or int(self.data.max()) >= max_value
        ):
            raise ValueError("segment values out of range")
        if strictly_increasing:
            for i in range(self.num_segments):
                seg = self.segment(i)
                if len(seg) > 1 and np.any(np.diff(seg) <= 0):
                    raise ValueError(f"segment {i} is not strictly increasing")


def csr_from_pairs(owners, values, num_segments, *, dedup=False) -> CsrSets:
    """Build sorted-segment CsrSets from (owner, value) pairs.

    Segments come out sorted ascending by value; ``dedup`` drops repeated
    (owner, value) pairs so segments behave as sets.
    """
    owners = np.asarray(owners, dtype=OFFSET)
    values = np.asarray(values, dtype=OFFSET)
    order = np.lexsort((values, owners))
    o, v = owners[order], values[order]
    if dedup and len(o):
        keep = np.ones(len(o), dtype=bool)
        keep[1:] = (o[1:] != o[:-1]) | (v[1:] != v[:-1])
        o, v = o[keep], v[keep]
    counts = np.bincount(o, minlength=num_segments) if len(o) else np.zeros(num_segments, dtype=OFFSET)
    offsets = np.zeros(num_segments + 1, dtype=OFFSET)
    np.cumsum(counts, out=offsets[1:])
    return CsrSets(offsets, v.astype(ID))


def segment_unique(owners, values, num_segments) -> CsrSets:
    """Sorted, deduplicated CsrSets from flat (owner, value) pairs."""
    return csr_from_pairs(owners, values, num_segments, dedup=True)


def gather_segments(cs: CsrSets, ids) -> tuple[np.ndarray, np.ndarray]:
    """Concatenate ``cs`` segments for each id in ``ids`` (repeats allowed).

    Returns ``(values, origin)`` where ``origin[j]`` is the index into ``ids``
    that contributed ``values[j]``.  Order within each segment is preserved.
    """
    ids = np.asarray(ids, dtype=OFFSET)
    lens = (cs.offsets[ids + 1] - cs.offsets[ids]).astype(OFFSET)
    total = int(lens.sum())
    if total == 0:
        return np.zeros(0, dtype=cs.data.dtype), np.zeros(0, dtype=OFFSET)
    starts = np.zeros(len(ids), dtype=OFFSET)
    np.cumsum(lens[:-1], out=starts[1:])
    pos = np.arange(total, dtype=OFFSET) - np.repeat(starts, lens)
    flat = np.repeat(cs.offsets[ids], lens) + pos
    return cs.data[flat], np.repeat(np.arange(len(ids), dtype=OFFSET), lens)


# ---------------------------------------------------------------------------
# the hypergraph model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hypergraph:
    """A weighted directed hypergraph in compressed sparse form.

    ``edge_src``/``edge_dst`` hold each edge's source and destination pins (a
    node appears at most once per side, but may appear on both sides).
    ``node_in``/``node_out`` are the inverted incidences, ``edge_pins`` the
    per-edge deduplicated pin union, and ``node_inc`` the per-node deduplicated
    incident-edge union.  ``node_size`` counts the level-0 nodes each node
    represents (all ones for a parsed graph; sums under contraction).
    """

    num_nodes: int
    num_edges: int
    edge_weight: np.ndarray
    edge_src: CsrSets
    edge_dst: CsrSets
    node_in: CsrSets
    node_out: CsrSets
    node_size: np.ndarray
    edge_pins: CsrSets
    node_inc: CsrSets

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(cls, num_nodes, weights, srcs, dsts, node_size=None) -> "Hypergraph":
        """Build from per-edge source/destination pin lists."""
        weights = np.asarray(weights, dtype=np.float64)
        num_edges = len(weights)
        if len(srcs) != num_edges or len(dsts) != num_edges:
            raise ValueError("weights, srcs and dsts must have equal length")
        for e in range(num_edges):
            w = weights[e]
            if not math.isfinite(w) or w < 0.0:
                raise ValueError(f"edge {e}: weight must be finite and >= 0")
            s, d = list(srcs[e]), list(dsts[e])
            if len(s) + len(d) == 0:
                raise ValueError(f"edge {e}: must have at least one pin")
            if len(set(s)) != len(s) or len(set(d)) != len(d):
                raise ValueError(f"edge {e}: repeated pin within one side")
            for x in s + d:
                if not (0 <= int(x) < num_nodes):
                    raise ValueError(f"edge {e}: pin {x} out of range")
        return cls._from_csr(
            num_nodes,
            weights,
            CsrSets.from_lists(srcs),
            CsrSets.from_lists(dsts),
            node_size,
        )

    @classmethod
    def _from_csr(cls, num_nodes, weights, edge_src, edge_dst, node_size=None) -> "Hypergraph":
        num_edges = len(weights)
        src_eids = np.repeat(np.arange(num_edges, dtype=OFFSET), edge_src.lengths())
        dst_eids = np.repeat(np.arange(num_edges, dtype=OFFSET), edge_dst.lengths())
        node_out = csr_from_pairs(edge_src.data, src_eids, num_nodes)
        node_in = csr_from_pairs(edge_dst.data, dst_eids, num_nodes)
        all_nodes = np.concatenate([edge_src.data, edge_dst.data])
        all_eids = np.concatenate([src_eids, dst_eids])
        edge_pins = segment_unique(all_eids, all_nodes, num_edges)
        node_inc = segment_unique(all_nodes, all_eids, num_nodes)
        if node_size is None:
            node_size = np.ones(num_nodes, dtype=ID)
        else:
            node_size = np.asarray(node_size, dtype=ID)
        return cls(
            num_nodes=num_nodes,
            num_edges=num_edges,
            edge_weight=np.ascontiguousarray(weights, dtype=np.float64),
            edge_src=edge_src,
            edge_dst=edge_dst,
            node_in=node_in,
            node_out=node_out,
            node_size=node_size,
            edge_pins=edge_pins,
            node_inc=node_inc,
        )

    # -- derived quantities --------------------------------------------------

    def num_pins(self) -> int:
        """Total pin slots over all edges (source slots + destination slots)."""
        return len(self.edge_src.data) + len(self.edge_dst.data)

    def total_weight(self) -> float:
        return float(self.edge_weight.sum())

    def validate(self) -> None:
        """Thorough cross-scan of all structural invariants (test helper)."""
        self.edge_src.validate(max_value=self.num_nodes)
        self.edge_dst.validate(max_value=self.num_nodes)
        self.node_in.validate(max_value=self.num_edges, strictly_increasing=True)
        self.node_out.validate(max_value=self.num_edges, strictly_increasing=True)
        self.edge_pins.validate(max_value=self.num_nodes, strictly_increasing=True)
        self.node_inc.validate(max_value=self.num_edges, strictly_increasing=True)
        if len(self.edge_weight) != self.num_edges:
            raise ValueError("weight array length mismatch")
        if len(self.node_size) != self.num_nodes:
            raise ValueError("node_size length mismatch")
        if np.any(self.node_size < 1):
            raise ValueError("node sizes must be >= 1")
        src = self.edge_src.to_lists()
        dst = self.edge_dst.to_lists()
        for e in range(self.num_edges):
            if len(set(src[e])) != len(src[e]) or len(set(dst[e])) != len(dst[e]):
                raise ValueError(f"edge {e}: repeated pin within one side")
            if len(src[e]) + len(dst[e]) == 0:
                raise ValueError(f"edge {e}: empty edge")
            if set(self.edge_pins.segment(e).tolist()) != set(src[e]) | set(dst[e]):
                raise ValueError(f"edge {e}: edge_pins mismatch")
        for n in range(self.num_nodes):
            in_n = set(self.node_in.segment(n).tolist())
            out_n = set(self.node_out.segment(n).tolist())
            if in_n != {e for e in range(self.num_edges) if n in dst[e]}:
                raise ValueError(f"node {n}: node_in does not mirror edge_dst")
            if out_n != {e for e in range(self.num_edges) if n in src[e]}:
                raise ValueError(f"node {n}: node_out does not mirror edge_src")
            if set(self.node_inc.segment(n).tolist()) != in_n | out_n:
                raise ValueError(f"node {n}: node_inc mismatch")


# ---------------------------------------------------------------------------
# partitions and constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Partitioning:
    """Node -> partition assignment with a declared partition-id domain."""

    assign: np.ndarray
    num_parts: int

    def __post_init__(self):
        assign = np.ascontiguousarray(self.assign, dtype=ID)
        object.__setattr__(self, "assign", assign)
        if len(assign) and (int(assign.min()) < 0 or int(assign.max()) >= self.num_parts):
            raise ValueError("partition ids out of range")


@dataclass(frozen=True)
class Constraints:
    """Limits: max level-0 nodes per partition, max distinct inbound edges."""

    max_size: int
    max_inbound: int


class Violation(NamedTuple):
    part: int
    kind: str  # "size" or "inbound"
    actual: int
    limit: int


def partition_sizes(g: Hypergraph, assign: np.ndarray, num_parts: int) -> np.ndarray:
    """Level-0 node count per partition (sums ``node_size``)."""
    sizes = np.zeros(num_parts, dtype=np.int64)
    np.add.at(sizes, assign, g.node_size.astype(np.int64))
    return sizes


def distinct_inbound_sizes(g: Hypergraph, assign: np.ndarray, num_parts: int) -> np.ndarray:
    """|union of members' inbound edge sets| per partition.

    Computed from the node -> inbound incidence (deduplicating (partition,
    edge) pairs), independently of the refinement pin matrices.
    """
    lens = g.node_in.lengths()
    if int(lens.sum()) == 0:
        return np.zeros(num_parts, dtype=np.int64)
    parts = np.asarray(assign, dtype=OFFSET)[np.repeat(np.arange(g.num_nodes), lens)]
    edges = g.node_in.data.astype(OFFSET)
    order = np.lexsort((edges, parts))
    p, e = parts[order], edges[order]
    keep = np.ones(len(p), dtype=bool)
    keep[1:] = (p[1:] != p[:-1]) | (e[1:] != e[:-1])
    return np.bincount(p[keep], minlength=num_parts).astype(np.int64)


def _check_assign(g: Hypergraph, p: Partitioning) -> None:
    if len(p.assign) != g.num_nodes:
        raise ValueError(
            f"assignment covers {len(p.assign)} nodes, graph has {g.num_nodes}"
        )


def connectivity(g: Hypergraph, p: Partitioning) -> float:
    """Sum over edges of weight times (number of spanned partitions - 1)."""
    _check_assign(g, p)
    return float(
        kernels.connectivity_value(
            g.edge_pins.offsets, g.edge_pins.data, g.edge_weight, p.assign
        )
    )


def check_validity(g: Hypergraph, p: Partitioning, c: Constraints) -> list[Violation]:
    """All constraint violations, ordered by partition id, size before inbound.

    Empty list iff the partitioning is valid under ``c``.
    """
    _check_assign(g, p)
    sizes = partition_sizes(g, p.assign, p.num_parts)
    inbound = distinct_inbound_sizes(g, p.assign, p.num_parts)
    out: list[Violation] = []
    for part in range(p.num_parts):
        if sizes[part] > c.max_size:
            out.append(Violation(part, "size", int(sizes[part]), c.max_size))
        if inbound[part] > c.max_inbound:
            out.append(Violation(part, "inbound", int(inbound[part]), c.max_inbound))
    return out


def check_feasibility(g: Hypergraph, c: Constraints) -> None:
    """Reject instances no partitioning can satisfy.

    A node whose own size exceeds the size limit, or whose inbound set alone
    exceeds the inbound limit, makes every assignment invalid.
    """
    if c.max_size < 1:
        raise InfeasibleError(f"max_size must be >= 1, got {c.max_size}")
    if c.max_inbound < 0:
        raise InfeasibleError(f"max_inbound must be >= 0, got {c.max_inbound}")
    if g.num_nodes == 0:
        return
    sizes = g.node_size
    bad = np.flatnonzero(sizes > c.max_size)
    if len(bad):
        n = int(bad[0])
        raise InfeasibleError(
            f"node {n} has size {int(sizes[n])} > max_size {c.max_size}"
        )
    indeg = g.node_in.lengths()
    bad = np.flatnonzero(indeg > c.max_inbound)
    if len(bad):
        n = int(bad[0])
        raise InfeasibleError(
            f"node {n} has {int(indeg[n])} inbound edges > max_inbound {c.max_inbound}"
        )


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------


def parse_dhg(text: str) -> Hypergraph:
    """Parse the native edge-list format (see module docstring)."""
    lines = text.split("\n")
    # tolerate trailing blank lines only
    while lines and lines[-1].strip() == "":
        lines.pop()
    if not lines:
        raise DhgParseError("empty input", line=1)
    header = lines[0].split()
    if len(header) != 2:
        raise DhgParseError("header must be '<numEdges> <numNodes>'", line=1)
    try:
        num_edges, num_nodes = int(header[0]), int(header[1])
    except ValueError:
        raise DhgParseError("header fields must be integers", line=1) from None
    if num_edges < 0 or num_nodes < 0:
        raise DhgParseError("header fields must be non-negative", line=1)
    if len(lines) - 1 != num_edges:
        raise DhgParseError(
            f"expected {num_edges} edge lines, found {len(lines) - 1}", line=len(lines)
        )

    weights = np.zeros(num_edges, dtype=np.float64)
    srcs: list[list[int]] = []
    dsts: list[list[int]] = []
    for e in range(num_edges):
        ln = e + 2
        tok = lines[e + 1].split()
        if len(tok) < 3:
            raise DhgParseError("edge line needs '<weight> <kSrc> <kDst> ...'", line=ln)
        try:
            w = float(tok[0])
            k_src, k_dst = int(tok[1]), int(tok[2])
        except ValueError:
            raise DhgParseError("malformed weight or pin counts", line=ln) from None
        if not math.isfinite(w) or w < 0.0:
            raise DhgParseError(f"weight must be finite and >= 0, got {tok[0]}", line=ln)
        if k_src < 0 or k_dst < 0 or k_src + k_dst < 1:
            raise DhgParseError("edge must have at least one pin", line=ln)
        if len(tok) != 3 + k_src + k_dst:
            raise DhgParseError(
                f"expected {k_src + k_dst} pin ids, found {len(tok) - 3}", line=ln
            )
        try:
            ids = [int(t) for t in tok[3:]]
        except ValueError:
            raise DhgParseError("pin ids must be integers", line=ln) from None
        src, dst = ids[:k_src], ids[k_src:]
        for x in ids:
            if not (0 <= x < num_nodes):
                raise DhgParseError(f"pin id {x} out of range [0, {num_nodes})", line=ln)
        if len(set(src)) != len(src) or len(set(dst)) != len(dst):
            raise DhgParseError("repeated pin within one side of an edge", line=ln)
        weights[e] = w
        srcs.append(src)
        dsts.append(dst)
    return Hypergraph._from_csr(
        num_nodes, weights, CsrSets.from_lists(srcs), CsrSets.from_lists(dsts)
    )


def parse_hgr(text: str) -> Hypergraph:
    """Convert undirected hMETIS input: first pin = source, rest = destinations.

    Supports fmt 0 (unweighted) and 1 (edge weights); node-weight variants
    (10/11) are rejected because level-0 node sizes are fixed at 1.  Lines
    starting with '%' are comments.
    """
    raw = [ln for ln in text.split("\n")]
    lines: list[tuple[int, str]] = []
    for i, ln in enumerate(raw):
        s = ln.strip()
        if s == "" or s.startswith("%"):
            continue
        lines.append((i + 1, s))
    if not lines:
        raise DhgParseError("empty input", line=1)
    hline, header = lines[0]
    tok = header.split()
    if len(tok) not in (2, 3):
        raise DhgParseError("header must be '<numEdges> <numNodes> [fmt]'", line=hline)
    try:
        num_edges, num_nodes = int(tok[0]), int(tok[1])
        fmt = int(tok[2]) if len(tok) == 3 else 0
    except ValueError:
        raise DhgParseError("header fields must be integers", line=hline) from None
    if fmt not in (0, 1):
        raise DhgParseError(f"unsupported fmt {fmt} (node weights not supported)", line=hline)
    if len(lines) - 1 != num_edges:
        raise DhgParseError(
            f"expected {num_edges} edge lines, found {len(lines) - 1}", line=lines[-1][0]
        )
    weights = np.ones(num_edges, dtype=np.float64)
    srcs, dsts = [], []
    for e in range(num_edges):
        ln, body = lines[e + 1]
        tok = body.split()
        try:
            vals = [int(t) for t in tok] if fmt == 0 else [float(tok[0])] + [int(t) for t in tok[1:]]
        except ValueError:
            raise DhgParseError("malformed edge line", line=ln) from None
        if fmt == 1:
            w, pins = float(vals[0]), [int(v) for v in vals[1:]]
            if not math.isfinite(w) or w < 0.0:
                raise DhgParseError("weight must be finite and >= 0", line=ln)
            weights[e] = w
        else:
            pins = [int(v) for v in vals]
        if not pins:
            raise DhgParseError("edge must have at least one pin", line=ln)
        for p in pins:
            if not (1 <= p <= num_nodes):
                raise DhgParseError(f"pin id {p} out of range [1, {num_nodes}]", line=ln)
        if len(set(pins)) != len(pins):
            raise DhgParseError("repeated pin in edge", line=ln)
        srcs.append([pins[0] - 1])
        dsts.append([p - 1 for p in pins[1:]])
    return Hypergraph._from_csr(
        num_nodes, weights, CsrSets.from_lists(srcs), CsrSets.from_lists(dsts)
    )


def load_hypergraph(path) -> Hypergraph:
    """Read a hypergraph file, dispatching on extension (.hgr vs .dhg)."""
    from pathlib import Path

    p = Path(path)
    text = p.read_text()
    if p.suffix == ".hgr":
        return parse_hgr(text)
    return parse_dhg(text)


def write_partition(p: Partitioning) -> str:
    """Serialize: one partition id per line, node order, trailing newline."""
    if len(p.assign) == 0:
        return ""
    return "\n".join(str(int(x)) for x in p.assign) + "\n"


def parse_partition(text: str) -> Partitioning:
    """Inverse of :func:`write_partition`; num_parts = max id + 1."""
    vals = []
    for i, ln in enumerate(text.split("\n")):
        s = ln.strip()
        if s == "":
            continue
        try:
            v = int(s)
        except ValueError:
            raise DhgParseError(f"partition id must be an integer, got {s!r}", line=i + 1) from None
        if v < 0:
            raise DhgParseError(f"partition id must be >= 0, got {v}", line=i + 1)
        vals.append(v)
    assign = np.asarray(vals, dtype=ID)
    num_parts = int(assign.max()) + 1 if len(assign) else 0
    return Partitioning(assign, num_parts)
