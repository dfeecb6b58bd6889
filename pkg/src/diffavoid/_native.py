"""Compiled branch-and-bound core for the clique-side search.

Bitsets are rows of 64-bit words. The kernel explores, iteratively, every
clique inside a given candidate mask, assuming `base_size` vertices are
already fixed by the caller; it records the best clique found and prunes
with greedy sequential coloring. Candidate vertices are always peeled in
ascending index order, which keeps results bit-for-bit identical to the
pure-Python engine.
"""

from __future__ import annotations

import time

import numba
import numpy as np
from numba import objmode

U0 = np.uint64(0)
U1 = np.uint64(1)
_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)
_tab = [0] * 64
for _i in range(64):
    _tab[((1 << _i) * 0x03F79D71B4CB0A89 & 0xFFFFFFFFFFFFFFFF) >> 58] = _i
DEBRUIJN_TABLE = np.array(_tab, dtype=np.int64)
del _tab, _i


@numba.njit(cache=True)
def _lowest_bit_index(x):
    lsb = x & (~x + U1)
    return DEBRUIJN_TABLE[(lsb * _DEBRUIJN) >> np.uint64(58)]


@numba.njit(cache=True)
def _color_frame(adj, W, cand, order_row, color_row, uncolored, q):
    """Greedy sequential coloring of cand; fills order/color rows.

    Returns the number of colored vertices. Vertices are listed in
    ascending color, ascending index within a color class.
    """
    for w in range(W):
        uncolored[w] = cand[w]
    m = 0
    color = 0
    while True:
        nonzero = False
        for w in range(W):
            q[w] = uncolored[w]
            if q[w] != U0:
                nonzero = True
        if not nonzero:
            return m
        color += 1
        while True:
            v = -1
            for w in range(W):
                if q[w] != U0:
                    v = 64 * w + _lowest_bit_index(q[w])
                    break
            if v < 0:
                break
            for w in range(W):
                q[w] &= ~adj[v, w]
            bit = U1 << np.uint64(v & 63)
            q[v >> 6] &= ~bit
            uncolored[v >> 6] &= ~bit
            order_row[m] = v
            color_row[m] = color
            m += 1


@numba.njit(cache=True)
def clique_kernel(adj, V, W, root_cand, base_size, best_size, best_members,
                  node_budget, deadline):
    """Branch and bound over cliques inside root_cand.

    best_members receives the vertices of the best clique found by this
    call (the externally fixed base is not included). node_budget <= 0
    means unbounded; deadline <= 0 means no time limit, otherwise it is
    an absolute time.monotonic() value checked every 16384 nodes.

    Returns (best_size, n_best, nodes, aborted).
    """
    maxd = V + 2
    cand_stack = np.zeros((maxd, W), dtype=np.uint64)
    order_stack = np.zeros((maxd, V), dtype=np.int64)
    color_stack = np.zeros((maxd, V), dtype=np.int64)
    idx_stack = np.zeros(maxd, dtype=np.int64)
    chosen = np.zeros(maxd, dtype=np.int64)
    uncolored = np.zeros(W, dtype=np.uint64)
    q = np.zeros(W, dtype=np.uint64)
    child = np.zeros(W, dtype=np.uint64)

    nodes = 0
    aborted = 0
    n_best = 0

    depth = 0
    for w in range(W):
        cand_stack[0, w] = root_cand[w]
    m = _color_frame(adj, W, cand_stack[0], order_stack[0], color_stack[0],
                     uncolored, q)
    idx_stack[0] = m - 1

    while depth >= 0:
        i = idx_stack[depth]
        if i < 0:
            depth -= 1
            continue
        r_size = base_size + depth
        # colors descend as i decreases: nothing left here can beat best
        if r_size + color_stack[depth, i] <= best_size:
            depth -= 1
            continue
        idx_stack[depth] = i - 1
        v = order_stack[depth, i]
        bit = U1 << np.uint64(v & 63)
        cand_stack[depth, v >> 6] &= ~bit

        nodes += 1
        if node_budget > 0 and nodes >= node_budget:
            aborted = 1
            break
        if deadline > 0.0 and (nodes & 16383) == 0:
            with objmode(now="float64"):
                now = time.monotonic()
            if now > deadline:
                aborted = 1
                break

        chosen[depth] = v
        if r_size + 1 > best_size:
            best_size = r_size + 1
            n_best = depth + 1
            for d in range(n_best):
                best_members[d] = chosen[d]

        empty = True
        for w in range(W):
            child[w] = cand_stack[depth, w] & adj[v, w]
            if child[w] != U0:
                empty = False
        if empty:
            continue
        depth += 1
        for w in range(W):
            cand_stack[depth, w] = child[w]
        m = _color_frame(adj, W, cand_stack[depth], order_stack[depth],
                         color_stack[depth], uncolored, q)
        idx_stack[depth] = m - 1

    return best_size, n_best, nodes, aborted


def masks_to_words(masks: list[int], width_bits: int) -> np.ndarray:
    """Pack python-int bitsets into a (len, ceil(width/64)) uint64 array."""
    W = (width_bits + 63) // 64
    out = np.zeros((len(masks), W), dtype=np.uint64)
    for i, m in enumerate(masks):
        out[i] = np.frombuffer(m.to_bytes(W * 8, "little"), dtype=np.uint64)
    return out


def mask_to_words(mask: int, width_bits: int) -> np.ndarray:
    W = (width_bits + 63) // 64
    return np.frombuffer(mask.to_bytes(W * 8, "little"), dtype=np.uint64).copy()
