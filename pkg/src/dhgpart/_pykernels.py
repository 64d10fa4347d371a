"""Pure NumPy/Python kernel backend.

Reference implementations of the inner-loop kernels.  The compiled backend
(`_kernels.pyx`) mirrors these bit for bit: every floating-point accumulation
visits contributions in the same order (ascending edge id within each bin), so
the two backends produce identical bytes, not just close values.
"""
from __future__ import annotations

import numpy as np

from .errors import MatchingInvariantError


def union_size_sorted(a, b):
    """|a ∪ b| for strictly increasing int arrays, by binary search into a."""
    a = np.asarray(a)
    b = np.asarray(b)
    if len(b) == 0:
        return len(a)
    if len(a) == 0:
        return len(b)
    pos = np.searchsorted(a, b)
    inside = pos < len(a)
    hit = np.zeros(len(b), dtype=bool)
    hit[inside] = a[pos[inside]] == b[inside]
    return int(len(a) + len(b) - np.count_nonzero(hit))


def fill_histograms(inc_off, inc_dat, pin_off, pin_dat, w, nbr_off, nbr_dat, batch):
    """Neighbor-overlap histograms, accumulated in neighbor batches.

    For node n and neighbor m, the histogram value is the total weight of
    incident edges of n that also contain m.  Neighbors are processed in
    windows of ``batch``; within a window, incident edges are walked in
    ascending id order, so values are independent of the batch size.
    """
    hist = np.zeros(len(nbr_dat), dtype=np.float64)
    num_nodes = len(nbr_off) - 1
    for n in range(num_nodes):
        lo, hi = int(nbr_off[n]), int(nbr_off[n + 1])
        if lo == hi:
            continue
        edges = inc_dat[inc_off[n] : inc_off[n + 1]]
        blo = lo
        while blo < hi:
            bhi = min(blo + batch, hi)
            window = nbr_dat[blo:bhi]
            for e in edges:
                e = int(e)
                pins = pin_dat[pin_off[e] : pin_off[e + 1]]
                j = np.searchsorted(window, pins)
                inside = j < len(window)
                jj = j[inside]
                found = window[jj] == pins[inside]
                np.add.at(hist, blo + jj[found], w[e])
            blo = bhi
    return hist


def select_first_valid(
    order, nbr_off, nbr_dat, hist, node_size, in_off, in_dat, max_size, max_inbound
):
    """First candidate passing both deferred checks, per node.

    ``order`` ranks all neighbor slots by (node, histogram desc, neighbor id
    desc); within each node's span the scan accepts the first neighbor whose
    combined size and inbound-union fit the limits.
    """
    num_nodes = len(nbr_off) - 1
    pair = np.full(num_nodes, -1, dtype=np.int32)
    score = np.zeros(num_nodes, dtype=np.float64)
    for n in range(num_nodes):
        in_n = in_dat[in_off[n] : in_off[n + 1]]
        sz_n = int(node_size[n])
        for t in range(int(nbr_off[n]), int(nbr_off[n + 1])):
            m = int(nbr_dat[order[t]])
            if sz_n + int(node_size[m]) > max_size:
                continue
            in_m = in_dat[in_off[m] : in_off[m + 1]]
            if union_size_sorted(in_n, in_m) > max_inbound:
                continue
            pair[n] = m
            score[n] = hist[order[t]]
            break
    return pair, score


def resolve_matching(pair, score):
    """Deterministic claim/lock resolution over a pairing forest.

    Cycle pairs (two nodes naming each other) always match.  Every other node
    with a candidate bids for it; the winner of each contested slot is the
    claimant with the lexicographically largest (score, id) — a total order,
    so the result does not depend on traversal order even if score
    monotonicity were violated.  Locks run from the roots outward: a node
    whose claim survived locks onto its candidate, erasing any claims on
    itself; otherwise it stays open for its own best claimant.

    Raises MatchingInvariantError on any cycle of length != 2.
    """
    n = len(pair)
    match = np.arange(n, dtype=np.int32)
    if n == 0:
        return match
    state = np.zeros(n, dtype=np.int8)  # 0 new, 1 on path, 2 done
    is_cycle = np.zeros(n, dtype=bool)
    depth = np.zeros(n, dtype=np.int64)

    for s in range(n):
        if state[s] != 0:
            continue
        path: list[int] = []
        u = s
        while state[u] == 0 and pair[u] >= 0:
            state[u] = 1
            path.append(u)
            u = int(pair[u])
        if state[u] == 1:
            # ran into the current path: a fresh cycle
            i = path.index(u)
            cyc = path[i:]
            if len(cyc) != 2:
                raise MatchingInvariantError(
                    f"pairing cycle of length {len(cyc)} (expected 2): {cyc}"
                )
            for c in cyc:
                is_cycle[c] = True
                depth[c] = 0
                state[c] = 2
            path = path[:i]
        elif state[u] == 0:
            # u has no candidate: a plain root
            depth[u] = 0
            state[u] = 2
        d = int(depth[u])
        for v in reversed(path):
            d += 1
            depth[v] = d
            state[v] = 2

    # default matches inside cycles
    cyc_nodes = np.flatnonzero(is_cycle)
    match[cyc_nodes] = pair[cyc_nodes]

    # upward claims (cycle slots are never up for grabs)
    claim = np.full(n, -1, dtype=np.int64)
    for v in range(n):
        p = int(pair[v])
        if p < 0 or is_cycle[v] or is_cycle[p]:
            continue
        c = int(claim[p])
        if c < 0 or score[v] > score[c] or (score[v] == score[c] and v > c):
            claim[p] = v
    claimed = np.flatnonzero(claim >= 0)
    match[claimed] = claim[claimed]

    # downward locks, roots first
    tree = np.flatnonzero(~is_cycle & (pair >= 0))
    for v in tree[np.lexsort((tree, depth[tree]))]:
        p = int(pair[v])
        if not is_cycle[p] and match[p] == v:
            match[v] = p
    return match


def connectivity_value(pin_off, pin_dat, w, assign):
    """Sum of weight * (spanned partitions - 1), edges in ascending id order."""
    total = 0.0
    for e in range(len(w)):
        seg = pin_dat[pin_off[e] : pin_off[e + 1]]
        if len(seg) == 0:
            continue
        lam = len(np.unique(assign[seg]))
        total += w[e] * (lam - 1)
    return total


def compute_pins(pin_off, pin_dat, dst_off, dst_dat, assign, num_parts):
    """Dense (edges x partitions) pin counters: all pins, and destination pins."""
    num_edges = len(pin_off) - 1
    pins = np.zeros((num_edges, num_parts), dtype=np.int32)
    pins_in = np.zeros((num_edges, num_parts), dtype=np.int32)
    if len(pin_dat):
        eid = np.repeat(np.arange(num_edges), np.diff(pin_off))
        np.add.at(pins, (eid, assign[pin_dat]), 1)
    if len(dst_dat):
        eid = np.repeat(np.arange(num_edges), np.diff(dst_off))
        np.add.at(pins_in, (eid, assign[dst_dat]), 1)
    return pins, pins_in


def propose_moves(
    inc_off, inc_dat, pin_off, pin_dat, w, pins, assign, part_sizes, node_size, max_size
):
    """Best strictly-positive-gain target partition per node (or -1).

    gain(n, p) = saving - loss: saving counts incident edges n is the last
    local pin of, loss counts incident edges absent from p.  A partition no
    incident edge touches has loss = total incident weight >= saving, so only
    the partitions of the incident edges' pins are candidates; loss is
    evaluated as (total incident weight) - (weight already touching p), with
    per-partition accumulation in ascending edge order.  Targets already at
    capacity (after adding n) are excluded a priori; ties prefer the smaller
    partition id.
    """
    num_nodes = len(inc_off) - 1
    num_parts = pins.shape[1]
    target = np.full(num_nodes, -1, dtype=np.int32)
    gain_out = np.zeros(num_nodes, dtype=np.float64)
    for n in range(num_nodes):
        edges = inc_dat[inc_off[n] : inc_off[n + 1]]
        if len(edges) == 0 or num_parts < 2:
            continue
        ps = int(assign[n])
        saving = 0.0
        total = 0.0
        present: dict[int, float] = {}
        for e in edges:
            e = int(e)
            we = float(w[e])
            total += we
            if pins[e, ps] == 1:
                saving += we
            touched = {int(assign[m]) for m in pin_dat[pin_off[e] : pin_off[e + 1]]}
            for p in touched:
                present[p] = present.get(p, 0.0) + we
        best = -1
        best_gain = 0.0
        sz = int(node_size[n])
        for p in sorted(present):
            if p == ps or part_sizes[p] + sz > max_size:
                continue
            gain = saving - (total - present[p])
            if best < 0 or gain > best_gain:
                best = p
                best_gain = gain
        if best >= 0 and best_gain > 0.0:
            target[n] = best
            gain_out[n] = best_gain
    return target, gain_out


def sequence_gains(
    inc_off, inc_dat, pin_off, pin_dat, w, pins, node, from_part, to_part, gain_iso, pos
):
    """Correct in-isolation gains for earlier moves in the same sequence.

    For each move and each incident edge, earlier-moving pins of that edge can
    (a) drain the target of its pins (the edge newly enters it: lose w),
    (b) enter the source while the mover was the last pin there (saving lost),
    (c) drain the source down to the mover (saving gained), or
    (d) populate an empty target (loss avoided).  The four cases are exact:
    the result equals the true per-step connectivity delta.
    """
    m = len(node)
    out = np.zeros(m, dtype=np.float64)
    for i in range(m):
        n = int(node[i])
        ps = int(from_part[i])
        pd = int(to_part[i])
        g = float(gain_iso[i])
        for e in inc_dat[inc_off[n] : inc_off[n + 1]]:
            e = int(e)
            base_ps = int(pins[e, ps])
            base_pd = int(pins[e, pd])
            leav_pd = ent_pd = leav_ps = ent_ps = 0
            for mm in pin_dat[pin_off[e] : pin_off[e + 1]]:
                j = int(pos[mm])
                if j < 0 or j >= i:
                    continue
                if from_part[j] == pd:
                    leav_pd += 1
                if to_part[j] == pd:
                    ent_pd += 1
                if from_part[j] == ps:
                    leav_ps += 1
                if to_part[j] == ps:
                    ent_ps += 1
            net = 0.0
            if base_pd > 0:
                if leav_pd - ent_pd == base_pd:
                    net -= w[e]
            elif ent_pd > 0:
                net += w[e]
            if base_ps == 1:
                if ent_ps > 0:
                    net -= w[e]
            elif base_ps - 1 > 0 and leav_ps - ent_ps == base_ps - 1:
                net += w[e]
            g += net
        out[i] = g
    return out
