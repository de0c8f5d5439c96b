"""Bitmask and BFS kernels behind the graph routines.

Vertices are indexed ``0..n-1``; vertex sets are int64 bitmasks, so the
mask-based kernels require ``n <= 62``. Each function here is compiled by
numba when available (see ``_accel``) and otherwise runs as plain Python.
"""

import numpy as np

from ._accel import kernel


@kernel
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@kernel
def all_pairs_bfs(indptr, indices, n):
    """Hop distances from CSR adjacency; -1 marks unreachable pairs."""
    dist = np.full((n, n), -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist[s, s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[s, u]
            for p in range(indptr[u], indptr[u + 1]):
                w = indices[p]
                if dist[s, w] < 0:
                    dist[s, w] = du + 1
                    queue[tail] = w
                    tail += 1
    return dist


@kernel
def _is_connected_mask(mask, nbr):
    low = mask & -mask
    seen = low
    frontier = low
    while frontier:
        grow = 0
        f = frontier
        while f:
            b = f & -f
            f ^= b
            v = 0
            t = b
            while t > 1:
                t >>= 1
                v += 1
            grow |= nbr[v]
        grow &= mask
        frontier = grow & ~seen
        seen |= grow
    return seen == mask


@kernel
def valid_block_flags(nbr, balls, n, check_balls):
    """Flag every nonempty vertex mask that is connected and, when
    ``check_balls`` is set, contained in one of the masks in ``balls``."""
    total = np.int64(1) << n
    flags = np.zeros(total, dtype=np.uint8)
    for mask in range(1, total):
        if not _is_connected_mask(mask, nbr):
            continue
        if check_balls:
            ok = False
            for w in range(balls.shape[0]):
                if mask & ~balls[w] == 0:
                    ok = True
                    break
            if not ok:
                continue
        flags[mask] = 1
    return flags


@kernel
def densest_subset_bruteforce(nbr, n):
    """Maximise |E(S)|/|S| over all nonempty vertex subsets S.

    Returns ``(edges, vertices)`` of the first maximiser in mask order.
    """
    best_e = 0
    best_v = 1
    total = np.int64(1) << n
    for mask in range(1, total):
        e2 = 0
        m = mask
        v = 0
        size = 0
        while m:
            if m & 1:
                e2 += popcount(nbr[v] & mask)
                size += 1
            m >>= 1
            v += 1
        e = e2 // 2
        if e * best_v > best_e * size:
            best_e = e
            best_v = size
    return best_e, best_v


@kernel
def _density_upper_bound_beats(e, c, free_cnt, free_deg, best_e, best_c):
    # Any completion adds t <= free_cnt blocks and at most min(c*t + t(t-1)/2,
    # free_deg) quotient edges, since each new quotient edge needs a host edge
    # touching a still-free vertex.
    for t in range(free_cnt + 1):
        if c + t == 0:
            continue
        add = c * t + t * (t - 1) // 2
        if add > free_deg:
            add = free_deg
        if (e + add) * best_c > best_e * (c + t):
            return True
    return False


@kernel
def grad_search(masks, nbrs, start, deg, n):
    """Densest quotient over families of disjoint candidate blocks.

    ``masks[start[v]:start[v+1]]`` are the admissible blocks whose lowest
    vertex is ``v``; ``nbrs[i]`` is the open neighbourhood mask of block
    ``i``. Vertices are decided in index order: each one is either left
    out, already covered, or opens a new block. Returns ``(edges, blocks)``
    of the best quotient found, ``(0, 1)`` when no block exists.
    """
    best_e = 0
    best_c = 1
    used_at = np.zeros(n + 1, dtype=np.int64)
    e_at = np.zeros(n + 1, dtype=np.int64)
    c_at = np.zeros(n + 1, dtype=np.int64)
    it = np.zeros(n + 1, dtype=np.int64)
    fam = np.zeros(n + 1, dtype=np.int64)
    full = (np.int64(1) << n) - 1
    p = 0
    while p >= 0:
        if p == n:
            e = e_at[n]
            c = c_at[n]
            if c > 0 and e * best_c > best_e * c:
                best_e = e
                best_c = c
            p -= 1
            continue
        used = used_at[p]
        e = e_at[p]
        c = c_at[p]
        k = it[p]
        if k == 0:
            free = full & ~used & ~((np.int64(1) << p) - 1)
            free_cnt = popcount(free)
            free_deg = 0
            f = free
            v = 0
            while f:
                if f & 1:
                    free_deg += deg[v]
                f >>= 1
                v += 1
            if c > 0 and e * best_c > best_e * c:
                best_e = e
                best_c = c
            if not _density_upper_bound_beats(e, c, free_cnt, free_deg, best_e, best_c):
                p -= 1
                continue
        if (used >> p) & 1:
            if k == 0:
                it[p] = 1
                used_at[p + 1] = used
                e_at[p + 1] = e
                c_at[p + 1] = c
                it[p + 1] = 0
                p += 1
            else:
                p -= 1
            continue
        if k == 0:
            it[p] = 1
            used_at[p + 1] = used
            e_at[p + 1] = e
            c_at[p + 1] = c
            it[p + 1] = 0
            p += 1
            continue
        idx = start[p] + k - 1
        stop = start[p + 1]
        while idx < stop and (masks[idx] & used) != 0:
            idx += 1
        if idx >= stop:
            p -= 1
            continue
        it[p] = idx - start[p] + 2
        gained = 0
        for j in range(c):
            if nbrs[idx] & fam[j]:
                gained += 1
        fam[c] = masks[idx]
        used_at[p + 1] = used | masks[idx]
        e_at[p + 1] = e + gained
        c_at[p + 1] = c + 1
        it[p + 1] = 0
        p += 1
    return best_e, best_c
