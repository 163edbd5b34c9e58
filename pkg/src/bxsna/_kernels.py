"""Compiled inner loops.

Every all-sources sweep is split into fixed-size chunks of sources. Each
chunk owns its scratch arrays; chunk partials are merged in chunk order,
so results do not depend on the number of threads.
"""

import numba as nb
import numpy as np

CHUNK = 16


@nb.njit(cache=True)
def bfs_distances(indptr, indices, source):
    n = len(indptr) - 1
    dist = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    dist[source] = 0
    queue[0] = source
    head, tail = 0, 1
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v] + 1
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = dv
                queue[tail] = w
                tail += 1
    return dist


@nb.njit(cache=True)
def _sweep_one(indptr, indices, s, rank, dist, queue, out_reach, out_sum, out_ecc, out_ka, out_kb, slot):
    dist[s] = 0
    queue[0] = s
    head, tail = 0, 1
    total = 0
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v] + 1
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = dv
                total += dv
                queue[tail] = w
                tail += 1
    ecc = dist[queue[tail - 1]]
    # lexicographically smallest (by label rank) pair among farthest targets
    best_a = -1
    best_b = -1
    if ecc > 0:
        rs = rank[s]
        i = tail - 1
        while i > 0 and dist[queue[i]] == ecc:
            rt = rank[queue[i]]
            a = rs if rs < rt else rt
            b = rt if rs < rt else rs
            if best_a < 0 or a < best_a or (a == best_a and b < best_b):
                best_a = a
                best_b = b
            i -= 1
    for i in range(tail):
        dist[queue[i]] = -1
    out_reach[slot] = tail - 1
    out_sum[slot] = total
    out_ecc[slot] = ecc
    out_ka[slot] = best_a
    out_kb[slot] = best_b


@nb.njit(cache=True, parallel=True)
def bfs_sweep(indptr, indices, sources, rank):
    """Per source: reachable count, distance sum, eccentricity, witness key."""
    n = len(indptr) - 1
    m = len(sources)
    reach = np.zeros(m, np.int64)
    dsum = np.zeros(m, np.int64)
    ecc = np.zeros(m, np.int64)
    ka = np.full(m, -1, np.int64)
    kb = np.full(m, -1, np.int64)
    nchunks = (m + CHUNK - 1) // CHUNK
    for c in nb.prange(nchunks):
        dist = np.full(n, -1, np.int64)
        queue = np.empty(n, np.int64)
        for slot in range(c * CHUNK, min(m, (c + 1) * CHUNK)):
            _sweep_one(indptr, indices, sources[slot], rank, dist, queue,
                       reach, dsum, ecc, ka, kb, slot)
    return reach, dsum, ecc, ka, kb


@nb.njit(cache=True, parallel=True)
def brandes_partial(indptr, indices, sources):
    """Sum over ``sources`` of single-source dependencies (Brandes 2001)."""
    n = len(indptr) - 1
    m = len(sources)
    nchunks = (m + CHUNK - 1) // CHUNK
    partial = np.zeros((nchunks, n), np.float64)
    for c in nb.prange(nchunks):
        sigma = np.zeros(n, np.float64)
        delta = np.zeros(n, np.float64)
        dist = np.full(n, -1, np.int64)
        order = np.empty(n, np.int64)
        acc = partial[c]
        for slot in range(c * CHUNK, min(m, (c + 1) * CHUNK)):
            s = sources[slot]
            sigma[s] = 1.0
            dist[s] = 0
            order[0] = s
            head, tail = 0, 1
            while head < tail:
                v = order[head]
                head += 1
                dv = dist[v] + 1
                for k in range(indptr[v], indptr[v + 1]):
                    w = indices[k]
                    if dist[w] < 0:
                        dist[w] = dv
                        order[tail] = w
                        tail += 1
                    if dist[w] == dv:
                        sigma[w] += sigma[v]
            for i in range(tail - 1, 0, -1):
                w = order[i]
                dw = dist[w] - 1
                coeff = (1.0 + delta[w]) / sigma[w]
                for k in range(indptr[w], indptr[w + 1]):
                    v = indices[k]
                    if dist[v] == dw:
                        delta[v] += sigma[v] * coeff
                acc[w] += delta[w]
            for i in range(tail):
                v = order[i]
                sigma[v] = 0.0
                delta[v] = 0.0
                dist[v] = -1
    out = np.zeros(n, np.float64)
    for c in range(nchunks):
        out += partial[c]
    return out


RULE_COUNT = 0
RULE_PRODUCT = 1
RULE_MIN = 2


@nb.njit(cache=True, inline="always")
def _contribution(rule, a, b):
    if rule == RULE_COUNT:
        return 1
    if rule == RULE_PRODUCT:
        return a * b
    return a if a < b else b


@nb.njit(cache=True, parallel=True)
def project_count(l_indptr, l_items, r_indptr, r_left, row_chunk):
    """Number of distinct partners v > u for every left vertex u."""
    n = len(l_indptr) - 1
    counts = np.zeros(n, np.int64)
    nchunks = (n + row_chunk - 1) // row_chunk
    for c in nb.prange(nchunks):
        seen = np.full(n, -1, np.int64)
        for u in range(c * row_chunk, min(n, (c + 1) * row_chunk)):
            cnt = 0
            for k in range(l_indptr[u], l_indptr[u + 1]):
                b = l_items[k]
                for q in range(r_indptr[b], r_indptr[b + 1]):
                    v = r_left[q]
                    if v > u and seen[v] != u:
                        seen[v] = u
                        cnt += 1
            counts[u] = cnt
    return counts


@nb.njit(cache=True, parallel=True)
def project_fill(l_indptr, l_items, l_vals, r_indptr, r_left, r_vals,
                 out_ptr, rule, row_chunk):
    """Row-by-row accumulation of co-affiliation weights for pairs u < v."""
    n = len(l_indptr) - 1
    nnz = out_ptr[n]
    out_v = np.empty(nnz, np.int64)
    out_w = np.empty(nnz, np.int64)
    nchunks = (n + row_chunk - 1) // row_chunk
    for c in nb.prange(nchunks):
        acc = np.zeros(n, np.int64)
        seen = np.full(n, -1, np.int64)
        touched = np.empty(n, np.int64)
        for u in range(c * row_chunk, min(n, (c + 1) * row_chunk)):
            nt = 0
            for k in range(l_indptr[u], l_indptr[u + 1]):
                b = l_items[k]
                ru = l_vals[k]
                for q in range(r_indptr[b], r_indptr[b + 1]):
                    v = r_left[q]
                    if v > u:
                        if seen[v] != u:
                            seen[v] = u
                            touched[nt] = v
                            nt += 1
                        acc[v] += _contribution(rule, ru, r_vals[q])
            cols = np.sort(touched[:nt])
            base = out_ptr[u]
            for i in range(nt):
                v = cols[i]
                out_v[base + i] = v
                out_w[base + i] = acc[v]
                acc[v] = 0
    return out_v, out_w


@nb.njit(cache=True, parallel=True)
def aggregate_constraint(indptr, indices, weights):
    """Burt's aggregate constraint with weighted proportional ties.

    Terms are accumulated in weight units and divided by strength**2 once,
    so a vertex whose ties all carry equal weight gets exactly fl(1/k).
    """
    n = len(indptr) - 1
    strength = np.zeros(n, np.float64)
    for v in range(n):
        s = 0.0
        for k in range(indptr[v], indptr[v + 1]):
            s += weights[k]
        strength[v] = s
    out = np.full(n, np.nan)
    nchunks = (n + 255) // 256
    for c in nb.prange(nchunks):
        x = np.zeros(n, np.float64)
        member = np.zeros(n, np.bool_)
        for i in range(c * 256, min(n, (c + 1) * 256)):
            lo, hi = indptr[i], indptr[i + 1]
            if lo == hi:
                continue
            for k in range(lo, hi):
                j = indices[k]
                x[j] = weights[k]
                member[j] = True
            # x_j = w_ij + sum_q w_iq * p_qj, i.e. (p_ij + sum_q p_iq p_qj) * s_i
            for k in range(lo, hi):
                q = indices[k]
                wiq = weights[k]
                sq = strength[q]
                for t in range(indptr[q], indptr[q + 1]):
                    j = indices[t]
                    if member[j]:
                        x[j] += wiq * weights[t] / sq
            total = 0.0
            for k in range(lo, hi):
                j = indices[k]
                total += x[j] * x[j]
                x[j] = 0.0
                member[j] = False
            si = strength[i]
            out[i] = total / (si * si)
    return out
