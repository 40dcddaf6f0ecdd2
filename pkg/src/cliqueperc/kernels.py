"""Hot loops, compiled with numba unless ``CLIQUEPERC_DISABLE_JIT`` is set.

Cliques are passed as a CSR pair (``ptr``, ``nodes``): clique ``c`` occupies
``nodes[ptr[c]:ptr[c+1]]`` in ascending order. Every function here must stay
valid as plain Python over numpy arrays.
"""
import numpy as np

from ._jit import njit


@njit(cache=True)
def overlap_at_least(a, a0, a1, b, b0, b1, threshold):
    """Merge-count ``|a[a0:a1] & b[b0:b1]|``, stopping once the answer to ``>= threshold`` is known.

    Returns ``(count, exact)``; ``exact`` is False when the merge stopped early.
    """
    i = a0
    j = b0
    c = 0
    while i < a1 and j < b1:
        if c >= threshold:
            return c, False
        if c + min(a1 - i, b1 - j) < threshold:
            return c, False
        x = a[i]
        y = b[j]
        if x == y:
            c += 1
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return c, True


@njit(cache=True)
def _find(arr, lo, hi, value):
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < value:
            lo = mid + 1
        else:
            hi = mid
    return lo


# --- node -> cliques incidence with O(1) removal -------------------------------------------


@njit(cache=True)
def build_incidence(ptr, nodes, eligible, n_nodes):
    """Per-run incidence lists over eligible cliques.

    ``inc[start[v]:start[v]+length[v]]`` lists cliques containing ``v``;
    ``pos[p]`` is the slot in ``inc`` holding the clique that owns ``nodes[p]``.
    """
    nc = len(ptr) - 1
    counts = np.zeros(n_nodes, dtype=np.int64)
    for c in range(nc):
        if eligible[c]:
            for p in range(ptr[c], ptr[c + 1]):
                counts[nodes[p]] += 1
    start = np.zeros(n_nodes + 1, dtype=np.int64)
    for v in range(n_nodes):
        start[v + 1] = start[v] + counts[v]
    inc = np.empty(start[n_nodes], dtype=np.int64)
    length = np.zeros(n_nodes, dtype=np.int64)
    pos = np.full(len(nodes), -1, dtype=np.int64)
    for c in range(nc):
        if eligible[c]:
            for p in range(ptr[c], ptr[c + 1]):
                v = nodes[p]
                slot = start[v] + length[v]
                inc[slot] = c
                pos[p] = slot
                length[v] += 1
    return start, length, inc, pos


@njit(cache=True)
def remove_clique(c, ptr, nodes, start, length, inc, pos):
    """Swap-remove clique ``c`` from the incidence list of each of its nodes."""
    for p in range(ptr[c], ptr[c + 1]):
        slot = pos[p]
        if slot < 0:
            continue
        v = nodes[p]
        last_slot = start[v] + length[v] - 1
        last = inc[last_slot]
        inc[slot] = last
        q = _find(nodes, ptr[last], ptr[last + 1], v)
        pos[q] = slot
        length[v] -= 1
        pos[p] = -1


@njit(cache=True)
def unvisited_adjacent(cur, ptr, nodes, start, length, inc, stamp, token, out):
    """Write the distinct cliques still in the incidence lists of ``cur``'s nodes into ``out``."""
    n = 0
    for p in range(ptr[cur], ptr[cur + 1]):
        v = nodes[p]
        for s in range(start[v], start[v] + length[v]):
            c = inc[s]
            if c != cur and stamp[c] != token:
                stamp[c] = token
                out[n] = c
                n += 1
    return n


@njit(cache=True)
def alg1_run(ptr, nodes, sizes, n_nodes, k):
    """Component expansion with candidates drawn from node incidence lists.

    Returns ``(component_of, n_components, successful, failed)``.
    """
    nc = len(ptr) - 1
    eligible = sizes >= k
    start, length, inc, pos = build_incidence(ptr, nodes, eligible, n_nodes)
    comp = np.full(nc, -1, dtype=np.int64)
    stamp = np.zeros(nc, dtype=np.int64)
    frontier = np.empty(nc, dtype=np.int64)
    cand = np.empty(nc, dtype=np.int64)
    hits = np.empty(nc, dtype=np.int64)
    token = 0
    ncomp = 0
    succ = 0
    fail = 0
    for seed in range(nc):
        if not eligible[seed] or comp[seed] >= 0:
            continue
        comp[seed] = ncomp
        remove_clique(seed, ptr, nodes, start, length, inc, pos)
        frontier[0] = seed
        top = 1
        while top > 0:
            top -= 1
            cur = frontier[top]
            token += 1
            n = unvisited_adjacent(cur, ptr, nodes, start, length, inc, stamp, token, cand)
            found = 0
            for i in range(n):
                c = cand[i]
                cnt, _ = overlap_at_least(nodes, ptr[cur], ptr[cur + 1], nodes, ptr[c], ptr[c + 1], k - 1)
                if cnt >= k - 1:
                    succ += 1
                    comp[c] = ncomp
                    remove_clique(c, ptr, nodes, start, length, inc, pos)
                    hits[found] = c
                    found += 1
                else:
                    fail += 1
            # ascending push keeps both engines on the same traversal
            hs = np.sort(hits[:found])
            for i in range(found):
                frontier[top] = hs[i]
                top += 1
        ncomp += 1
    return comp, ncomp, succ, fail


# --- clique tree ---------------------------------------------------------------------------


@njit(cache=True)
def bloom_contains(bits, off, m, h, a_hash, b_hash):
    a = a_hash % m
    b = 1 + b_hash % (m - 1)
    for i in range(h):
        p = (a + i * b) % m
        if (bits[off + (p >> 3)] >> (p & 7)) & 1 == 0:
            return False
    return True


@njit(cache=True)
def summary_overlap_estimate(
    t, cur_nodes, c0, c1, threshold, kind, ex_ptr, ex_nodes, bl_off, bl_m, bl_h, bits, h1, h2
):
    """Upper bound on ``|current & union(descendants of t)|``, early-exiting at ``threshold``."""
    if kind[t] == 1:
        cnt, _ = overlap_at_least(cur_nodes, c0, c1, ex_nodes, ex_ptr[t], ex_ptr[t + 1], threshold)
        return cnt
    cnt = 0
    off = bl_off[t]
    m = bl_m[t]
    h = bl_h[t]
    for p in range(c0, c1):
        if cnt >= threshold or cnt + (c1 - p) < threshold:
            break
        v = cur_nodes[p]
        if bloom_contains(bits, off, m, h, h1[v], h2[v]):
            cnt += 1
    return cnt


@njit(cache=True)
def mark_visited(t, visited):
    """Set the flag of tree node ``t`` and propagate upward while the sibling is done too."""
    visited[t] = 1
    while t > 0:
        sib = t + 1 if t % 2 == 1 else t - 1
        if visited[sib] == 0:
            break
        t = (t - 1) // 2
        visited[t] = 1


@njit(cache=True)
def tree_search(
    cur, k, ptr, nodes, n_leaves, tree_clique,
    kind, ex_ptr, ex_nodes, bl_off, bl_m, bl_h, bits, h1, h2,
    visited, stack, out, counters,
):
    """Collect unvisited leaves whose clique overlaps ``cur`` in >= k-1 nodes.

    Found leaves are marked visited. ``counters`` accumulates
    ``[internal_probes, leaf_tests]``. Returns the number written to ``out``.
    """
    first_leaf = n_leaves - 1
    c0 = ptr[cur]
    c1 = ptr[cur + 1]
    thr = k - 1
    n = 0
    top = 1
    stack[0] = 0
    while top > 0:
        top -= 1
        t = stack[top]
        if visited[t]:
            continue
        if t >= first_leaf:
            c = tree_clique[t]
            counters[1] += 1
            cnt, _ = overlap_at_least(nodes, c0, c1, nodes, ptr[c], ptr[c + 1], thr)
            if cnt >= thr:
                out[n] = c
                n += 1
                mark_visited(t, visited)
        else:
            counters[0] += 1
            est = summary_overlap_estimate(
                t, nodes, c0, c1, thr, kind, ex_ptr, ex_nodes, bl_off, bl_m, bl_h, bits, h1, h2
            )
            if est >= thr:
                stack[top] = 2 * t + 2
                stack[top + 1] = 2 * t + 1
                top += 2
    return n


@njit(cache=True)
def alg2_run(
    k, ptr, nodes, sizes, n_leaves, tree_clique, leaf_of,
    kind, ex_ptr, ex_nodes, bl_off, bl_m, bl_h, bits, h1, h2, visited,
):
    """Component expansion with candidates found by pruned descent of the clique tree.

    Mutates ``visited``. Returns ``(component_of, n_components, successful,
    internal_probes, leaf_tests)``.
    """
    nc = len(ptr) - 1
    for c in range(nc):
        if sizes[c] < k and visited[leaf_of[c]] == 0:
            mark_visited(leaf_of[c], visited)
    comp = np.full(nc, -1, dtype=np.int64)
    frontier = np.empty(nc, dtype=np.int64)
    found = np.empty(nc, dtype=np.int64)
    stack = np.empty(256, dtype=np.int64)
    counters = np.zeros(2, dtype=np.int64)
    ncomp = 0
    succ = 0
    for seed in range(nc):
        if sizes[seed] < k or comp[seed] >= 0:
            continue
        comp[seed] = ncomp
        mark_visited(leaf_of[seed], visited)
        frontier[0] = seed
        top = 1
        while top > 0:
            top -= 1
            cur = frontier[top]
            n = tree_search(
                cur, k, ptr, nodes, n_leaves, tree_clique,
                kind, ex_ptr, ex_nodes, bl_off, bl_m, bl_h, bits, h1, h2,
                visited, stack, found, counters,
            )
            succ += n
            hs = np.sort(found[:n])
            for i in range(n):
                comp[hs[i]] = ncomp
                frontier[top] = hs[i]
                top += 1
        ncomp += 1
    return comp, ncomp, succ, counters[0], counters[1]


# --- clique graph edge counting ----------------------------------------------------------


@njit(cache=True)
def count_overlap_edges(ptr, nodes, sizes, node_ptr, node_cliques, k, row0, row1, pair_budget, stamp):
    """Count pairs ``i < j`` of size->=k cliques overlapping in >= k-1 nodes, for rows ``i`` in
    ``[row0, row1)``, testing at most ``pair_budget`` distinct node-sharing pairs.

    ``stamp`` must be zero-initialised once per sweep. Returns
    ``(edges, pairs_tested, budget_hit)``.
    """
    edges = 0
    pairs = 0
    for i in range(row0, row1):
        if sizes[i] < k:
            continue
        for p in range(ptr[i], ptr[i + 1]):
            v = nodes[p]
            for s in range(node_ptr[v], node_ptr[v + 1]):
                j = node_cliques[s]
                if j <= i or sizes[j] < k or stamp[j] == i + 1:
                    continue
                stamp[j] = i + 1
                if pairs >= pair_budget:
                    return edges, pairs, True
                pairs += 1
                cnt, _ = overlap_at_least(nodes, ptr[i], ptr[i + 1], nodes, ptr[j], ptr[j + 1], k - 1)
                if cnt >= k - 1:
                    edges += 1
    return edges, pairs, False
