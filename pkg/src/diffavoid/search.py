"""Cayley graphs of forbidden differences and exact maximum avoiding sets.

A set A in (F_p)^n avoids the box K^n when no ordered pair of distinct
elements has a - b in K^n. Those sets are exactly the independent sets of
the Cayley graph whose connection set is (K^n u (-K)^n) \\ {0}; the
symmetrization is needed because K itself need not be closed under
negation, while the ordered-pair condition forbids both a - b and b - a.

The exact solver runs as maximum clique on the complement with bitset
adjacency rows and greedy-coloring bounds. Two structure-aware and
exactness-preserving reductions apply: the graph is vertex-transitive, so
some maximum independent set contains vertex 0 (search is anchored
there), and automorphisms fixing 0 (coordinate permutations composed with
per-coordinate scalings that stabilize K) let the level below the anchor
branch only on orbit representatives.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import permutations, product
from math import factorial

import numpy as np

from .modp import ForbiddenBox, FpVector, power_residues, vec_diff, vec_unrank

try:
    from ._native import clique_kernel, mask_to_words, masks_to_words
    HAVE_NATIVE = True
except ImportError:  # pragma: no cover - numba present in normal installs
    HAVE_NATIVE = False

DEFAULT_VERTEX_CAP = 1 << 20
DEFAULT_TIME_LIMIT = 60.0

# auto engine routing: below this the pure engine is instant anyway, above
# it the compiled kernel's preallocated stacks get too large
_NATIVE_MIN_V = 65
_NATIVE_MAX_V = 4096

# guards for the orbit computation; past these the symmetry pass would
# cost more than it saves
_ORBIT_MAX_P = 4096
_ORBIT_MAX_GROUP = 5000
_ORBIT_MAX_WORK = 20_000_000

_WITNESS_RECHECK_CAP = 4096


class CapacityError(ValueError):
    """Raised when p^n exceeds the configured vertex cap."""


class CayleyGraph:
    """Graph on (F_p)^n with edges at symmetrized forbidden differences.

    Vertex r is the vector vec_unrank(r, p, n); adjacency rows are python
    ints used as bitsets. Immutable after construction.
    """

    __slots__ = ("p", "n", "box", "vertex_count", "connection", "adjacency")

    def __init__(self, box: ForbiddenBox, n: int,
                 connection: frozenset[FpVector], adjacency: tuple[int, ...]):
        self.p = box.p
        self.n = n
        self.box = box
        self.vertex_count = box.p**n
        self.connection = connection
        self.adjacency = adjacency

    @property
    def degree(self) -> int:
        return len(self.connection)

    def edge_count(self) -> int:
        return self.vertex_count * len(self.connection) // 2

    def __repr__(self) -> str:
        return (f"CayleyGraph(p={self.p}, n={self.n}, "
                f"vertices={self.vertex_count}, degree={self.degree})")


@dataclass(frozen=True)
class SearchResult:
    """Outcome of an exact search.

    status is "exact" when the search completed, "lower-bound-only" when a
    time or node limit stopped it first; the witness is always a valid
    avoiding set of size max_size, listed in ascending rank order.
    """

    max_size: int
    witness: tuple[FpVector, ...]
    status: str
    nodes_explored: int
    elapsed_seconds: float


def build_graph(box: ForbiddenBox, n: int,
                vertex_cap: int = DEFAULT_VERTEX_CAP) -> CayleyGraph:
    """Build the Cayley graph for the forbidden box K^n.

    Independent sets of the result are exactly the difference-avoiding
    sets. Raises CapacityError when p^n exceeds vertex_cap.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    p = box.p
    vertex_count = p**n
    if vertex_count > vertex_cap:
        raise CapacityError(
            f"p^n = {vertex_count} exceeds the vertex cap {vertex_cap}")

    neg = tuple(sorted((-r) % p for r in box.residues))
    connection = set(product(box.residues, repeat=n))
    connection |= set(product(neg, repeat=n))
    connection.discard((0,) * n)

    adjacency = _adjacency_rows(p, n, vertex_count, connection)
    return CayleyGraph(box, n, frozenset(connection), tuple(adjacency))


def _adjacency_rows(p: int, n: int, V: int, connection: set[FpVector]) -> list[int]:
    if not connection:
        return [0] * V
    full = (1 << V) - 1
    if len(connection) == V - 1:
        return [full ^ (1 << v) for v in range(V)]

    pw = np.array([p**i for i in range(n)], dtype=np.int64)
    ranks = np.arange(V, dtype=np.int64)
    digits = np.empty((V, n), dtype=np.int32)
    for i in range(n):
        digits[:, i] = (ranks // pw[i]) % p
    is_conn = np.zeros(V, dtype=bool)
    for s in connection:
        r = 0
        for i in range(n - 1, -1, -1):
            r = r * p + s[i]
        is_conn[r] = True

    rows: list[int] = []
    chunk = max(1, (1 << 22) // max(1, V))
    for lo in range(0, V, chunk):
        hi = min(V, lo + chunk)
        d = (digits[lo:hi, None, :] - digits[None, :, :]) % p
        dr = (d.astype(np.int64) * pw).sum(axis=2)
        bits = is_conn[dr]
        packed = np.packbits(bits, axis=1, bitorder="little")
        for row in packed:
            rows.append(int.from_bytes(row.tobytes(), "little"))
    return rows


def to_dimacs(graph: CayleyGraph) -> str:
    """DIMACS undirected export: `p edge V E`, vertices 1-indexed by rank."""
    V = graph.vertex_count
    lines = [f"p edge {V} {graph.edge_count()}"]
    for u in range(V):
        w = graph.adjacency[u] >> (u + 1)
        while w:
            b = w & -w
            v = u + b.bit_length()
            lines.append(f"e {u + 1} {v + 1}")
            w ^= b
    return "\n".join(lines) + "\n"


def _mask_vertices(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def _greedy_mask(adjacency, order) -> int:
    """Maximal independent set following the given vertex order."""
    blocked = 0
    chosen = 0
    for v in order:
        if not (blocked >> v) & 1:
            chosen |= 1 << v
            blocked |= adjacency[v] | (1 << v)
    return chosen


def greedy_lower_bound(graph: CayleyGraph, seed: int = 0) -> tuple[FpVector, ...]:
    """A maximal (not necessarily maximum) avoiding set, deterministic per seed."""
    V = graph.vertex_count
    order = list(range(V))
    random.Random(seed).shuffle(order)
    mask = _greedy_mask(graph.adjacency, order)
    return tuple(vec_unrank(r, graph.p, graph.n) for r in _mask_vertices(mask))


def _warm_start(adjacency, V: int, seed: int) -> tuple[int, int]:
    """Best greedy independent set over several seeded shuffles."""
    if V <= 1024:
        tries = 64
    elif V <= 4096:
        tries = 16
    else:
        tries = 4
    best_size, best_mask = 0, 0
    base_order = list(range(V))
    for s in range(seed, seed + tries):
        order = base_order[:]
        random.Random(s).shuffle(order)
        mask = _greedy_mask(adjacency, order)
        size = mask.bit_count()
        if size > best_size:
            best_size, best_mask = size, mask
    return best_size, best_mask


def _stabilizer_scalars(box: ForbiddenBox) -> list[int]:
    """All nonzero scalars with lambda * K = K."""
    p = box.p
    return [lam for lam in range(1, p)
            if all((lam * r) % p in box for r in box.residues)]


def _orbit_reps_mask(graph: CayleyGraph, cand_mask: int) -> int | None:
    """Minimal-rank representatives per orbit of the anchor's stabilizer.

    The stabilizer used is the group of maps v -> (lam_i * v_perm(i)) with
    every lam_i * K = K. Returns None when computing orbits would cost more
    than the reduction is worth.
    """
    p, n = graph.p, graph.n
    if p > _ORBIT_MAX_P:
        return None
    scalars = _stabilizer_scalars(graph.box)
    group = len(scalars) ** n * factorial(n)
    if group > _ORBIT_MAX_GROUP:
        return None
    cand = _mask_vertices(cand_mask)
    if len(cand) * group > _ORBIT_MAX_WORK:
        return None

    autos = [(lams, perm) for lams in product(scalars, repeat=n)
             for perm in permutations(range(n))]
    pw = [p**i for i in range(n)]
    reps = 0
    seen: set[int] = set()
    for r in cand:
        if r in seen:
            continue
        reps |= 1 << r
        v = tuple((r // pw[i]) % p for i in range(n))
        for lams, perm in autos:
            img = 0
            for i in range(n):
                img += (lams[i] * v[perm[i]] % p) * pw[i]
            seen.add(img)
    return reps


def _expand_pure(adjacency, root_cand: int, base_size: int, best_size: int,
                 node_budget: int, deadline: float):
    """Pure-python twin of the compiled kernel; identical exploration order.

    Returns (best_size, members or None, nodes, aborted); members are the
    kernel-local vertices of the best clique when this call improved on
    the incoming best_size.
    """
    nodes = 0
    aborted = False
    best_members: list[int] | None = None

    # frame: [cand_mask, order, colors, idx]
    def color(cand: int):
        order: list[int] = []
        colors: list[int] = []
        uncolored = cand
        c = 0
        while uncolored:
            c += 1
            q = uncolored
            while q:
                b = q & -q
                v = b.bit_length() - 1
                q &= ~adjacency[v]
                q ^= b
                uncolored ^= b
                order.append(v)
                colors.append(c)
        return order, colors

    order0, colors0 = color(root_cand)
    stack = [[root_cand, order0, colors0, len(order0) - 1]]
    chosen: list[int] = [0]

    while stack:
        frame = stack[-1]
        i = frame[3]
        if i < 0:
            stack.pop()
            continue
        depth = len(stack) - 1
        r_size = base_size + depth
        if r_size + frame[2][i] <= best_size:
            stack.pop()
            continue
        frame[3] = i - 1
        v = frame[1][i]
        b = 1 << v
        frame[0] &= ~b

        nodes += 1
        if node_budget > 0 and nodes >= node_budget:
            aborted = True
            break
        if deadline > 0.0 and (nodes & 16383) == 0 and time.monotonic() > deadline:
            aborted = True
            break

        if depth < len(chosen):
            chosen[depth] = v
        else:
            chosen.append(v)
        if r_size + 1 > best_size:
            best_size = r_size + 1
            best_members = chosen[: depth + 1]

        child = frame[0] & adjacency[v]
        if child:
            order, colors = color(child)
            stack.append([child, order, colors, len(order) - 1])

    return best_size, best_members, nodes, aborted


def _run_subtree_native(adj_words, V: int, root_cand: int, base_size: int,
                        best_size: int, node_budget: int, deadline: float):
    out = np.zeros(V + 2, dtype=np.int64)
    W = (V + 63) // 64
    bs, n_best, nodes, aborted = clique_kernel(
        adj_words, V, W, mask_to_words(root_cand, V), base_size,
        best_size, out, node_budget, deadline)
    members = [int(x) for x in out[:n_best]] if bs > best_size else None
    return int(bs), members, int(nodes), bool(aborted)


def _resolve_engine(engine: str, V: int) -> str:
    if engine == "auto":
        if HAVE_NATIVE and _NATIVE_MIN_V <= V <= _NATIVE_MAX_V:
            return "native"
        return "python"
    if engine == "native":
        if not HAVE_NATIVE:
            raise ValueError("native engine requested but numba is unavailable")
        if V > _NATIVE_MAX_V:
            raise ValueError(
                f"native engine supports at most {_NATIVE_MAX_V} vertices, got {V}")
        return "native"
    if engine == "python":
        return "python"
    raise ValueError(f"unknown engine {engine!r}")


def max_avoiding_set(graph: CayleyGraph, *, time_limit: float | None = DEFAULT_TIME_LIMIT,
                     node_budget: int | None = None, seed: int = 0,
                     engine: str = "auto") -> SearchResult:
    """Exact maximum difference-avoiding set of the graph's forbidden box.

    Limits degrade the status to "lower-bound-only", never raise. The
    result is deterministic for a fixed seed (the seed only feeds the
    greedy warm start; exploration order is fixed).
    """
    start = time.monotonic()
    V = graph.vertex_count
    p, n = graph.p, graph.n
    adjacency = graph.adjacency

    def finish(ranks: list[int], status: str, nodes: int,
               recheck: bool = True) -> SearchResult:
        ranks = sorted(ranks)
        witness = tuple(vec_unrank(r, p, n) for r in ranks)
        if recheck and len(witness) <= _WITNESS_RECHECK_CAP:
            _assert_avoiding(witness, graph.box, n)
        return SearchResult(
            max_size=len(ranks),
            witness=witness,
            status=status,
            nodes_explored=nodes,
            elapsed_seconds=time.monotonic() - start,
        )

    deg = len(graph.connection)
    if deg == 0:
        # only the zero difference is forbidden, which distinct pairs
        # never produce: the whole space qualifies
        return finish(list(range(V)), "exact", 0, recheck=False)
    if deg == V - 1:
        return finish([0], "exact", 0, recheck=False)

    full = (1 << V) - 1
    comp = [full ^ adjacency[v] ^ (1 << v) for v in range(V)]
    eng = _resolve_engine(engine, V)

    best_size, best_mask = _warm_start(adjacency, V, seed)
    best_ranks = _mask_vertices(best_mask)

    deadline = start + time_limit if time_limit is not None else 0.0
    budget = node_budget if node_budget is not None else 0
    nodes_total = 0
    aborted = False

    adj_words = masks_to_words(comp, V) if eng == "native" else None

    reps_mask = _orbit_reps_mask(graph, comp[0])

    # anchored subtrees: every maximum independent set can be translated to
    # contain vertex 0, and (with orbits known) mapped so that its second
    # vertex is an orbit representative
    if reps_mask is None:
        subroots: list[tuple[list[int], int]] = [([0], comp[0])]
    else:
        subroots = []
        cand = comp[0]
        r = reps_mask & cand
        while r:
            b = r & -r
            v = b.bit_length() - 1
            r ^= b
            subroots.append(([0, v], cand & comp[v]))
            cand ^= b

    for base, root_cand in subroots:
        if len(base) > best_size:
            best_size, best_ranks = len(base), base[:]
        if root_cand == 0:
            continue
        sub_budget = 0
        if budget:
            sub_budget = budget - nodes_total
            if sub_budget <= 0:
                aborted = True
                break
        if deadline and time.monotonic() > deadline:
            aborted = True
            break
        if eng == "native":
            bs, members, nodes, ab = _run_subtree_native(
                adj_words, V, root_cand, len(base), best_size,
                sub_budget, deadline)
        else:
            bs, members, nodes, ab = _expand_pure(
                comp, root_cand, len(base), best_size, sub_budget, deadline)
        nodes_total += nodes
        if bs > best_size and members is not None:
            best_size = bs
            best_ranks = base + members
        if ab:
            aborted = True
            break

    status = "exact" if not aborted else "lower-bound-only"
    return finish(best_ranks, status, nodes_total)


def _assert_avoiding(witness: tuple[FpVector, ...], box: ForbiddenBox, n: int) -> None:
    """Pairwise re-check of the ordered difference condition, no graph data."""
    p = box.p
    for a in witness:
        for b in witness:
            if a != b:
                d = vec_diff(a, b, p)
                if all(c in box for c in d):
                    raise AssertionError(
                        f"solver produced a non-avoiding witness pair {a}, {b}")


def paley_clique_number(p: int, *, time_limit: float | None = DEFAULT_TIME_LIMIT,
                        node_budget: int | None = None, seed: int = 0,
                        engine: str = "auto") -> SearchResult:
    """Clique number of the quadratic-residue graph on F_p (p = 1 mod 4).

    That graph is self-complementary, so its clique number equals its
    independence number, which is the maximum avoiding-set size for the
    box of quadratic residues.
    """
    box = power_residues(p, 2)
    if p % 4 != 1:
        raise ValueError(
            f"the quadratic-residue graph needs p = 1 (mod 4), got p = {p}")
    graph = build_graph(box, 1)
    return max_avoiding_set(graph, time_limit=time_limit,
                            node_budget=node_budget, seed=seed, engine=engine)
