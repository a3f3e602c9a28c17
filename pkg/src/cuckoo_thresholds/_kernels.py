"""Jitted kernels for the simulation-heavy paths.

Everything here works on flat CSR arrays (edge offsets + node ids) so the
hot loops stay allocation-free.  The greedy orienter keeps node priorities
as exact integer numerators over a common denominator L = lcm(1..max edge
size); that makes the failure test and all tie comparisons bit-exact, which
floating-point priorities cannot guarantee.

The tie-break RNG is a splitmix64 stream with Lemire-style rejection for
bounded draws, so runs are reproducible for a given seed on any platform.
"""

from __future__ import annotations

import numpy as np
from numba import njit
from numba.typed import List as NumbaList

_U64_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_U64_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_U64_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)


@njit(cache=True, inline="always")
def _rng_next(state):
    state = state + _U64_GOLDEN
    z = state
    z = (z ^ (z >> _S30)) * _U64_MIX1
    z = (z ^ (z >> _S27)) * _U64_MIX2
    z = z ^ (z >> _S31)
    return state, z


@njit(cache=True, inline="always")
def _rng_below(state, n):
    # unbiased draw in [0, n) via rejection: accept z >= 2**64 mod n
    un = np.uint64(n)
    threshold = (np.uint64(0) - un) % un
    while True:
        state, z = _rng_next(state)
        if z >= threshold:
            return state, np.int64(z % un)


# ---------------------------------------------------------------------------
# peeling
# ---------------------------------------------------------------------------

@njit(cache=True)
def peel_kernel(m, e_off, e_nodes, inc_off, inc_edges, ell):
    """Remove nodes of degree < ell and their edges until none remain.

    Returns (removed_node_mask, alive_edge_mask, rounds); a round is one
    generation of deletions, i.e. nodes made deficient by round r die in
    round r + 1.
    """
    n = e_off.shape[0] - 1
    deg = np.empty(m, np.int64)
    for v in range(m):
        deg[v] = inc_off[v + 1] - inc_off[v]
    alive = np.ones(n, np.bool_)
    removed = np.zeros(m, np.bool_)
    queued = np.zeros(m, np.bool_)
    queue = np.empty(m, np.int64)
    qt = 0
    for v in range(m):
        if deg[v] < ell:
            queue[qt] = v
            qt += 1
            queued[v] = True
    rounds = 0
    qh = 0
    while qh < qt:
        rounds += 1
        end = qt
        while qh < end:
            v = queue[qh]
            qh += 1
            removed[v] = True
            for p in range(inc_off[v], inc_off[v + 1]):
                e = inc_edges[p]
                if not alive[e]:
                    continue
                alive[e] = False
                for q in range(e_off[e], e_off[e + 1]):
                    u = e_nodes[q]
                    if u == v or removed[u]:
                        continue
                    deg[u] -= 1
                    if deg[u] < ell and not queued[u]:
                        queue[qt] = u
                        qt += 1
                        queued[u] = True
    return removed, alive, rounds


# ---------------------------------------------------------------------------
# greedy orientation (generalized selfless)
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _bucket_for(ucnt, indeg, pn, ell, lcap):
    # callers guarantee ucnt > 0 and indeg < ell
    if ucnt + indeg <= ell:
        return np.int64(0)
    if pn <= lcap:
        return pn
    return lcap + 1


@njit(cache=True)
def selfless_kernel(m, e_off, e_nodes, inc_off, inc_edges, ell, lcd, seed, canonical):
    """One run of the greedy orienter; lcd is lcm(1..max edge size).

    Per step: any node that can absorb all its pending edges (priority 0) is
    served first; otherwise the node with the smallest expected indegree
    (sum of 1/weight over its pending edges, plus its current indegree) gets
    one minimum-weight pending edge directed at it.  Fails when the smallest
    priority exceeds ell, or when some pending edge has no unsaturated node
    left.  Returns (targets, failure_step) with failure_step = 0 on success.

    Priorities are kept as integer numerators over lcd; buckets are indexed
    by numerator, capped at lcd*ell + 1 ("anything above ell"), which is all
    the resolution the min and the failure test ever need.
    """
    n = e_off.shape[0] - 1
    target = np.full(n, -1, np.int64)
    if n == 0:
        return target, np.int64(0)

    lcap = np.int64(lcd * ell)
    nbuckets = lcap + 2  # [0 .. lcap] exact, lcap+1 = overflow (> ell)

    omega = np.empty(n, np.int64)
    for e in range(n):
        omega[e] = e_off[e + 1] - e_off[e]
    indeg = np.zeros(m, np.int64)
    ucnt = np.empty(m, np.int64)
    pnum = np.zeros(m, np.int64)
    for v in range(m):
        ucnt[v] = inc_off[v + 1] - inc_off[v]
    for e in range(n):
        share = lcd // omega[e]
        for q in range(e_off[e], e_off[e + 1]):
            pnum[e_nodes[q]] += share

    buckets = NumbaList()
    for _ in range(nbuckets):
        buckets.append(np.empty(0, np.int64))
    bsize = np.zeros(nbuckets, np.int64)
    bucket_of = np.full(m, -1, np.int64)
    pos_in = np.zeros(m, np.int64)

    minb = np.int64(nbuckets)
    for v in range(m):
        if ucnt[v] > 0:
            b = _bucket_for(ucnt[v], indeg[v], pnum[v], ell, lcap)
            arr = buckets[b]
            if bsize[b] == arr.shape[0]:
                grown = np.empty(max(4, 2 * arr.shape[0]), np.int64)
                grown[: bsize[b]] = arr[: bsize[b]]
                buckets[b] = grown
                arr = grown
            arr[bsize[b]] = v
            pos_in[v] = bsize[b]
            bsize[b] += 1
            bucket_of[v] = b
            if b < minb:
                minb = b

    state = np.uint64(seed)
    zero_weight_edges = np.int64(0)
    touched = np.empty(m, np.int64)
    touch_mark = np.zeros(m, np.bool_)

    for t in range(1, n + 1):
        if zero_weight_edges > 0:
            return target, np.int64(t)
        while minb < nbuckets and bsize[minb] == 0:
            minb += 1
        if minb >= nbuckets or minb == lcap + 1:
            return target, np.int64(t)

        b = minb
        arr = buckets[b]
        if canonical:
            v = arr[0]
            for i in range(1, bsize[b]):
                if arr[i] < v:
                    v = arr[i]
        elif bsize[b] == 1:
            v = arr[0]
        else:
            state, idx = _rng_below(state, bsize[b])
            v = arr[idx]

        # minimum-weight pending edge at v
        wmin = np.int64(2**62)
        ties = np.int64(0)
        for p in range(inc_off[v], inc_off[v + 1]):
            e = inc_edges[p]
            if target[e] >= 0:
                continue
            w = omega[e]
            if w < wmin:
                wmin = w
                ties = 1
            elif w == wmin:
                ties += 1
        pick = np.int64(0)
        if not canonical and ties > 1:
            state, pick = _rng_below(state, ties)
        estar = np.int64(-1)
        seen = np.int64(0)
        for p in range(inc_off[v], inc_off[v + 1]):
            e = inc_edges[p]
            if target[e] >= 0 or omega[e] != wmin:
                continue
            if seen == pick:
                estar = e
                break
            seen += 1

        # direct estar -> v
        target[estar] = v
        ntouch = np.int64(0)
        share = lcd // wmin
        for q in range(e_off[estar], e_off[estar + 1]):
            u = e_nodes[q]
            if indeg[u] < ell:  # unsaturated members each held a 1/wmin term
                ucnt[u] -= 1
                pnum[u] -= share
                if not touch_mark[u]:
                    touch_mark[u] = True
                    touched[ntouch] = u
                    ntouch += 1
        indeg[v] += 1
        pnum[v] += lcd
        if indeg[v] == ell:
            # v saturated: every remaining pending edge at v loses a live node
            for p in range(inc_off[v], inc_off[v + 1]):
                e = inc_edges[p]
                if target[e] >= 0:
                    continue
                w0 = omega[e]
                omega[e] = w0 - 1
                if w0 == 1:
                    zero_weight_edges += 1
                    continue
                delta = lcd // (w0 - 1) - lcd // w0
                for q in range(e_off[e], e_off[e + 1]):
                    u = e_nodes[q]
                    if u != v and indeg[u] < ell:
                        pnum[u] += delta
                        if not touch_mark[u]:
                            touch_mark[u] = True
                            touched[ntouch] = u
                            ntouch += 1

        if not touch_mark[v]:
            touch_mark[v] = True
            touched[ntouch] = v
            ntouch += 1

        for i in range(ntouch):
            u = touched[i]
            touch_mark[u] = False
            old = bucket_of[u]
            if indeg[u] >= ell or ucnt[u] == 0:
                newb = np.int64(-1)
            else:
                newb = _bucket_for(ucnt[u], indeg[u], pnum[u], ell, lcap)
            if newb == old:
                continue
            if old >= 0:
                oarr = buckets[old]
                last = bsize[old] - 1
                j = pos_in[u]
                if j != last:
                    moved = oarr[last]
                    oarr[j] = moved
                    pos_in[moved] = j
                bsize[old] = last
            if newb >= 0:
                narr = buckets[newb]
                if bsize[newb] == narr.shape[0]:
                    grown = np.empty(max(4, 2 * narr.shape[0]), np.int64)
                    grown[: bsize[newb]] = narr[: bsize[newb]]
                    buckets[newb] = grown
                    narr = grown
                narr[bsize[newb]] = u
                pos_in[u] = bsize[newb]
                bsize[newb] += 1
                if newb < minb:
                    minb = newb
            bucket_of[u] = newb

    return target, np.int64(0)


# ---------------------------------------------------------------------------
# maximum matching (Hopcroft-Karp on edge -> bucket-slot graph)
# ---------------------------------------------------------------------------

@njit(cache=True)
def hopcroft_karp_kernel(m, e_off, e_nodes, ell):
    """Maximum matching between edges and node slots (ell slots per node).

    Adjacency is implicit: edge i is adjacent to slots v*ell .. v*ell+ell-1
    for each of its nodes v.  Returns (pair_left, matching_size) where
    pair_left[i] is the matched slot id or -1.
    """
    n = e_off.shape[0] - 1
    nslots = m * ell
    pair_l = np.full(n, -1, np.int64)
    pair_r = np.full(nslots, -1, np.int64)
    dist = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    stack_u = np.empty(n + 1, np.int64)
    stack_pos = np.empty(n + 1, np.int64)
    stack_slot = np.empty(n + 1, np.int64)
    matched = np.int64(0)

    while True:
        qh = np.int64(0)
        qt = np.int64(0)
        for i in range(n):
            if pair_l[i] < 0:
                dist[i] = 0
                queue[qt] = i
                qt += 1
            else:
                dist[i] = -1
        found_free = False
        while qh < qt:
            u = queue[qh]
            qh += 1
            for p in range(e_off[u], e_off[u + 1]):
                base = e_nodes[p] * ell
                for s in range(ell):
                    w = pair_r[base + s]
                    if w < 0:
                        found_free = True
                    elif dist[w] < 0:
                        dist[w] = dist[u] + 1
                        queue[qt] = w
                        qt += 1
        if not found_free:
            break

        for i0 in range(n):
            if pair_l[i0] >= 0:
                continue
            sp = np.int64(0)
            stack_u[0] = i0
            stack_pos[0] = e_off[i0] * ell
            augmented = False
            while sp >= 0:
                u = stack_u[sp]
                pos = stack_pos[sp]
                limit = e_off[u + 1] * ell
                moved = False
                while pos < limit:
                    ptr = pos // ell
                    r = e_nodes[ptr] * ell + (pos - ptr * ell)
                    w = pair_r[r]
                    if w < 0:
                        pair_r[r] = u
                        pair_l[u] = r
                        for lvl in range(sp - 1, -1, -1):
                            rr = stack_slot[lvl]
                            uu = stack_u[lvl]
                            pair_r[rr] = uu
                            pair_l[uu] = rr
                        augmented = True
                        break
                    if dist[w] == dist[u] + 1:
                        stack_slot[sp] = r
                        stack_pos[sp] = pos + 1
                        sp += 1
                        stack_u[sp] = w
                        stack_pos[sp] = e_off[w] * ell
                        moved = True
                        break
                    pos += 1
                if augmented:
                    break
                if moved:
                    continue
                dist[u] = -1  # dead end for this phase
                sp -= 1
            if augmented:
                matched += 1

    return pair_l, matched


# ---------------------------------------------------------------------------
# warm-up
# ---------------------------------------------------------------------------

def warm_up() -> None:
    """Force-compile the kernels (e.g. before forking sweep workers)."""
    e_off = np.array([0, 2], np.int64)
    e_nodes = np.array([0, 1], np.int64)
    inc_off = np.array([0, 1, 2], np.int64)
    inc_edges = np.array([0, 0], np.int64)
    peel_kernel(2, e_off, e_nodes, inc_off, inc_edges, 1)
    selfless_kernel(2, e_off, e_nodes, inc_off, inc_edges, 1, 2, np.uint64(1), False)
    hopcroft_karp_kernel(2, e_off, e_nodes, 1)
