# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled inner-loop kernels.

Mirrors ``_pykernels`` bit for bit: identical float accumulation order
(ascending edge id within each bin), identical tie-breaking.
"""
import numpy as np

cimport numpy as cnp

from dhgpart.errors import MatchingInvariantError

cnp.import_array()

ctypedef cnp.int32_t i32
ctypedef cnp.int64_t i64
ctypedef cnp.int8_t i8
ctypedef cnp.uint8_t u8
ctypedef cnp.float64_t f64


cdef inline Py_ssize_t _bsearch(const i32[::1] arr, Py_ssize_t lo, Py_ssize_t hi, i32 key) noexcept nogil:
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < key:
            lo = mid + 1
        elif arr[mid] > key:
            hi = mid
        else:
            return mid
    return -1


def union_size_sorted(a, b):
    """|a ∪ b| for strictly increasing int arrays."""
    cdef const i32[::1] av = np.ascontiguousarray(a, dtype=np.int32)
    cdef const i32[::1] bv = np.ascontiguousarray(b, dtype=np.int32)
    cdef Py_ssize_t cnt = av.shape[0]
    cdef Py_ssize_t k
    for k in range(bv.shape[0]):
        if _bsearch(av, 0, av.shape[0], bv[k]) < 0:
            cnt += 1
    return cnt


def fill_histograms(const i64[::1] inc_off, const i32[::1] inc_dat,
                    const i64[::1] pin_off, const i32[::1] pin_dat,
                    const f64[::1] w,
                    const i64[::1] nbr_off, const i32[::1] nbr_dat,
                    Py_ssize_t batch):
    out = np.zeros(nbr_dat.shape[0], dtype=np.float64)
    cdef f64[::1] hist = out
    cdef Py_ssize_t num_nodes = nbr_off.shape[0] - 1
    cdef Py_ssize_t n, lo, hi, blo, bhi, ii, pp, j, e
    with nogil:
        for n in range(num_nodes):
            lo = nbr_off[n]
            hi = nbr_off[n + 1]
            blo = lo
            while blo < hi:
                bhi = blo + batch
                if bhi > hi:
                    bhi = hi
                for ii in range(inc_off[n], inc_off[n + 1]):
                    e = inc_dat[ii]
                    for pp in range(pin_off[e], pin_off[e + 1]):
                        j = _bsearch(nbr_dat, blo, bhi, pin_dat[pp])
                        if j >= 0:
                            hist[j] += w[e]
                blo = bhi
    return out


def select_first_valid(const i64[::1] order,
                       const i64[::1] nbr_off, const i32[::1] nbr_dat,
                       const f64[::1] hist,
                       const i32[::1] node_size,
                       const i64[::1] in_off, const i32[::1] in_dat,
                       i64 max_size, i64 max_inbound):
    cdef Py_ssize_t num_nodes = nbr_off.shape[0] - 1
    pair_arr = np.full(num_nodes, -1, dtype=np.int32)
    score_arr = np.zeros(num_nodes, dtype=np.float64)
    cdef i32[::1] pair = pair_arr
    cdef f64[::1] score = score_arr
    cdef Py_ssize_t n, t, pos, m, k, cnt
    with nogil:
        for n in range(num_nodes):
            for t in range(nbr_off[n], nbr_off[n + 1]):
                pos = order[t]
                m = nbr_dat[pos]
                if node_size[n] + node_size[m] > max_size:
                    continue
                cnt = in_off[n + 1] - in_off[n]
                for k in range(in_off[m], in_off[m + 1]):
                    if _bsearch(in_dat, in_off[n], in_off[n + 1], in_dat[k]) < 0:
                        cnt += 1
                if cnt > max_inbound:
                    continue
                pair[n] = <i32>m
                score[n] = hist[pos]
                break
    return pair_arr, score_arr


def resolve_matching(const i32[::1] pair, const f64[::1] score):
    cdef Py_ssize_t n = pair.shape[0]
    out = np.arange(n, dtype=np.int32)
    if n == 0:
        return out
    cdef i32[::1] match = out
    state_arr = np.zeros(n, dtype=np.int8)
    cyc_arr = np.zeros(n, dtype=np.uint8)
    depth_arr = np.zeros(n, dtype=np.int64)
    path_arr = np.empty(n, dtype=np.int64)
    claim_arr = np.full(n, -1, dtype=np.int64)
    cdef i8[::1] state = state_arr
    cdef u8[::1] is_cycle = cyc_arr
    cdef i64[::1] depth = depth_arr
    cdef i64[::1] path = path_arr
    cdef i64[::1] claim = claim_arr
    cdef Py_ssize_t s, u, plen, i, d, v, p, cl, clen

    for s in range(n):
        if state[s] != 0:
            continue
        plen = 0
        u = s
        while state[u] == 0 and pair[u] >= 0:
            state[u] = 1
            path[plen] = u
            plen += 1
            u = pair[u]
        if state[u] == 1:
            i = 0
            while path[i] != u:
                i += 1
            clen = plen - i
            if clen != 2:
                raise MatchingInvariantError(
                    f"pairing cycle of length {clen} (expected 2)"
                )
            for v in range(i, plen):
                is_cycle[path[v]] = 1
                depth[path[v]] = 0
                state[path[v]] = 2
            plen = i
        elif state[u] == 0:
            depth[u] = 0
            state[u] = 2
        d = depth[u]
        for v in range(plen - 1, -1, -1):
            d += 1
            depth[path[v]] = d
            state[path[v]] = 2

    for v in range(n):
        if is_cycle[v]:
            match[v] = pair[v]

    for v in range(n):
        p = pair[v]
        if p < 0 or is_cycle[v] or is_cycle[p]:
            continue
        cl = claim[p]
        if cl < 0 or score[v] > score[cl] or (score[v] == score[cl] and v > cl):
            claim[p] = v
    for v in range(n):
        if claim[v] >= 0:
            match[v] = <i32>claim[v]

    pair_np = np.asarray(pair)
    tree = np.flatnonzero((cyc_arr == 0) & (pair_np >= 0))
    order_arr = np.ascontiguousarray(tree[np.lexsort((tree, depth_arr[tree]))], dtype=np.int64)
    cdef i64[::1] order = order_arr
    for i in range(order.shape[0]):
        v = order[i]
        p = pair[v]
        if is_cycle[p] == 0 and match[p] == v:
            match[v] = <i32>p
    return out


def connectivity_value(const i64[::1] pin_off, const i32[::1] pin_dat,
                       const f64[::1] w, const i32[::1] assign):
    cdef Py_ssize_t num_edges = w.shape[0]
    cdef Py_ssize_t e, pp, k, lam, j, max_k
    cdef f64 total = 0.0
    cdef i32 part
    cdef bint seen
    max_k = 1
    for e in range(num_edges):
        k = pin_off[e + 1] - pin_off[e]
        if k > max_k:
            max_k = k
    buf_arr = np.empty(max_k, dtype=np.int32)
    cdef i32[::1] buf = buf_arr
    with nogil:
        for e in range(num_edges):
            lam = 0
            for pp in range(pin_off[e], pin_off[e + 1]):
                part = assign[pin_dat[pp]]
                seen = 0
                for j in range(lam):
                    if buf[j] == part:
                        seen = 1
                        break
                if not seen:
                    buf[lam] = part
                    lam += 1
            if lam > 0:
                total += w[e] * (lam - 1)
    return total


def compute_pins(const i64[::1] pin_off, const i32[::1] pin_dat,
                 const i64[::1] dst_off, const i32[::1] dst_dat,
                 const i32[::1] assign, Py_ssize_t num_parts):
    cdef Py_ssize_t num_edges = pin_off.shape[0] - 1
    pins_arr = np.zeros((num_edges, num_parts), dtype=np.int32)
    pins_in_arr = np.zeros((num_edges, num_parts), dtype=np.int32)
    cdef i32[:, ::1] pins = pins_arr
    cdef i32[:, ::1] pins_in = pins_in_arr
    cdef Py_ssize_t e, pp
    with nogil:
        for e in range(num_edges):
            for pp in range(pin_off[e], pin_off[e + 1]):
                pins[e, assign[pin_dat[pp]]] += 1
            for pp in range(dst_off[e], dst_off[e + 1]):
                pins_in[e, assign[dst_dat[pp]]] += 1
    return pins_arr, pins_in_arr


def propose_moves(const i64[::1] inc_off, const i32[::1] inc_dat,
                  const i64[::1] pin_off, const i32[::1] pin_dat, const f64[::1] w,
                  const i32[:, ::1] pins, const i32[::1] assign,
                  const i64[::1] part_sizes, const i32[::1] node_size, i64 max_size):
    cdef Py_ssize_t num_nodes = inc_off.shape[0] - 1
    cdef Py_ssize_t num_parts = pins.shape[1]
    tgt_arr = np.full(num_nodes, -1, dtype=np.int32)
    gain_arr = np.zeros(num_nodes, dtype=np.float64)
    cdef i32[::1] target = tgt_arr
    cdef f64[::1] gain_out = gain_arr
    cdef Py_ssize_t n, ii, e, pp, j, nc, ne, best_p, acc, maxc
    cdef i32 ps, part
    cdef f64 saving, total, we, gain, best_gain
    cdef bint seen
    maxc = 1
    for n in range(num_nodes):
        acc = 0
        for ii in range(inc_off[n], inc_off[n + 1]):
            e = inc_dat[ii]
            acc += pin_off[e + 1] - pin_off[e]
        if acc > maxc:
            maxc = acc
    cand_arr = np.empty(maxc, dtype=np.int64)
    pres_arr = np.empty(maxc, dtype=np.float64)
    edge_arr = np.empty(maxc, dtype=np.int64)
    cdef i64[::1] cand = cand_arr
    cdef f64[::1] pres = pres_arr
    cdef i64[::1] eparts = edge_arr
    with nogil:
        for n in range(num_nodes):
            if inc_off[n + 1] == inc_off[n] or num_parts < 2:
                continue
            ps = assign[n]
            saving = 0.0
            total = 0.0
            nc = 0
            for ii in range(inc_off[n], inc_off[n + 1]):
                e = inc_dat[ii]
                we = w[e]
                total += we
                if pins[e, ps] == 1:
                    saving += we
                ne = 0
                for pp in range(pin_off[e], pin_off[e + 1]):
                    part = assign[pin_dat[pp]]
                    seen = 0
                    for j in range(ne):
                        if eparts[j] == part:
                            seen = 1
                            break
                    if not seen:
                        eparts[ne] = part
                        ne += 1
                for j in range(ne):
                    seen = 0
                    for pp in range(nc):
                        if cand[pp] == eparts[j]:
                            pres[pp] += we
                            seen = 1
                            break
                    if not seen:
                        cand[nc] = eparts[j]
                        pres[nc] = we
                        nc += 1
            best_p = -1
            best_gain = 0.0
            for j in range(nc):
                part = <i32>cand[j]
                if part == ps or part_sizes[part] + node_size[n] > max_size:
                    continue
                gain = saving - (total - pres[j])
                if best_p < 0 or gain > best_gain or (gain == best_gain and part < best_p):
                    best_p = part
                    best_gain = gain
            if best_p >= 0 and best_gain > 0.0:
                target[n] = <i32>best_p
                gain_out[n] = best_gain
    return tgt_arr, gain_arr


def sequence_gains(const i64[::1] inc_off, const i32[::1] inc_dat,
                   const i64[::1] pin_off, const i32[::1] pin_dat,
                   const f64[::1] w, const i32[:, ::1] pins,
                   const i32[::1] node, const i32[::1] from_part, const i32[::1] to_part,
                   const f64[::1] gain_iso, const i64[::1] pos):
    cdef Py_ssize_t num_moves = node.shape[0]
    out_arr = np.zeros(num_moves, dtype=np.float64)
    cdef f64[::1] out = out_arr
    cdef Py_ssize_t i, ii, pp, e, n, ps, pd, j
    cdef Py_ssize_t base_ps, base_pd, leav_pd, ent_pd, leav_ps, ent_ps
    cdef f64 g, net
    with nogil:
        for i in range(num_moves):
            n = node[i]
            ps = from_part[i]
            pd = to_part[i]
            g = gain_iso[i]
            for ii in range(inc_off[n], inc_off[n + 1]):
                e = inc_dat[ii]
                base_ps = pins[e, ps]
                base_pd = pins[e, pd]
                leav_pd = 0
                ent_pd = 0
                leav_ps = 0
                ent_ps = 0
                for pp in range(pin_off[e], pin_off[e + 1]):
                    j = pos[pin_dat[pp]]
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
    return out_arr
