import random

import pytest

from diffavoid import (
    CapacityError,
    ForbiddenBox,
    build_graph,
    greedy_lower_bound,
    max_avoiding_set,
    negate_set,
    paley_clique_number,
    power_residues,
    box_bound,
    to_dimacs,
    vec_rank,
)
from diffavoid.search import HAVE_NATIVE, _orbit_reps_mask, _stabilizer_scalars

from naive_oracle import enumerate_max_avoiding, is_avoiding, naive_adjacency

ENGINES = ["python"] + (["native"] if HAVE_NATIVE else [])


def bits(mask):
    out = set()
    v = 0
    while mask:
        if mask & 1:
            out.add(v)
        mask >>= 1
        v += 1
    return out


class TestBuildGraph:
    def test_five_cycle(self):
        g = build_graph(power_residues(5, 2), 1)
        # K = {0,1,4}; 4 = -1, so the connection set is {1, 4} and the
        # graph is the 5-cycle
        assert g.connection == frozenset({(1,), (4,)})
        assert bits(g.adjacency[0]) == {1, 4}
        assert bits(g.adjacency[2]) == {1, 3}
        assert g.edge_count() == 5

    def test_complete_graph_mod_7(self):
        # squares {1,2,4} plus negatives {6,5,3} cover all nonzero residues
        g = build_graph(power_residues(7, 2), 1)
        assert g.degree == 6
        for v in range(7):
            assert bits(g.adjacency[v]) == set(range(7)) - {v}

    def test_three_squared_example(self):
        g = build_graph(ForbiddenBox(3, [0, 1]), 2)
        assert g.vertex_count == 9
        expected = {(0, 1), (0, 2), (1, 0), (2, 0), (1, 1), (2, 2)}
        assert g.connection == frozenset(expected)
        for v in range(9):
            assert g.adjacency[v].bit_count() == 6

    @pytest.mark.parametrize("p,n,k", [(5, 1, 2), (7, 1, 3), (13, 1, 2), (3, 2, 2), (5, 2, 2)])
    def test_connection_closed_under_negation(self, p, n, k):
        g = build_graph(power_residues(p, k), n)
        assert negate_set(g.connection, p) == set(g.connection)
        assert (0,) * n not in g.connection

    @pytest.mark.parametrize("p,n,k", [(5, 1, 2), (7, 1, 2), (3, 2, 2)])
    def test_adjacency_symmetric_irreflexive(self, p, n, k):
        g = build_graph(power_residues(p, k), n)
        for u in range(g.vertex_count):
            assert not (g.adjacency[u] >> u) & 1
            for v in range(g.vertex_count):
                assert ((g.adjacency[u] >> v) & 1) == ((g.adjacency[v] >> u) & 1)

    @pytest.mark.parametrize("p,n,klist", [(5, 2, [0, 1, 4]), (7, 1, [0, 1, 5]), (3, 2, [0, 1])])
    def test_adjacency_matches_definition(self, p, n, klist):
        g = build_graph(ForbiddenBox(p, klist), n)
        naive = naive_adjacency(p, n, klist)
        assert list(g.adjacency) == naive

    def test_capacity_error_names_the_size(self):
        with pytest.raises(CapacityError, match="25"):
            build_graph(power_residues(5, 2), 2, vertex_cap=24)

    def test_empty_and_complete_fast_paths(self):
        empty = build_graph(ForbiddenBox(5, [0]), 2)
        assert all(row == 0 for row in empty.adjacency)
        complete = build_graph(ForbiddenBox(5, list(range(5))), 2)
        full = (1 << 25) - 1
        assert all(complete.adjacency[v] == full ^ (1 << v) for v in range(25))


class TestDimacs:
    def test_five_cycle_golden(self):
        g = build_graph(power_residues(5, 2), 1)
        text = to_dimacs(g)
        lines = text.strip().split("\n")
        assert lines[0] == "p edge 5 5"
        assert set(lines[1:]) == {"e 1 2", "e 1 5", "e 2 3", "e 3 4", "e 4 5"}

    def test_header_counts_match(self):
        g = build_graph(ForbiddenBox(3, [0, 1]), 2)
        lines = to_dimacs(g).strip().split("\n")
        _, _, v, e = lines[0].split()
        assert int(v) == 9 and int(e) == 27
        assert len(lines) - 1 == 27
        for line in lines[1:]:
            tag, a, b = line.split()
            assert tag == "e" and 1 <= int(a) < int(b) <= 9


class TestGreedy:
    def test_edgeless_takes_everything(self):
        g = build_graph(ForbiddenBox(3, [0]), 2)
        assert len(greedy_lower_bound(g)) == 9

    def test_complete_takes_one(self):
        g = build_graph(power_residues(7, 2), 1)
        for seed in range(5):
            assert len(greedy_lower_bound(g, seed)) == 1

    def test_five_cycle_always_two(self):
        g = build_graph(power_residues(5, 2), 1)
        for seed in range(10):
            assert len(greedy_lower_bound(g, seed)) == 2

    def test_maximal_and_independent(self):
        box = power_residues(13, 2)
        g = build_graph(box, 1)
        chosen = greedy_lower_bound(g, seed=3)
        assert is_avoiding(chosen, 13, box.residues)
        taken = {vec_rank(v, 13) for v in chosen}
        for u in range(13):
            if u not in taken:
                assert g.adjacency[u] & sum(1 << r for r in taken)

    def test_deterministic_per_seed(self):
        g = build_graph(power_residues(13, 2), 1)
        assert greedy_lower_bound(g, 7) == greedy_lower_bound(g, 7)


SMALL_INSTANCES = [
    (3, 1, {"k": 2}),
    (5, 1, {"k": 2}),
    (7, 1, {"k": 2}),
    (7, 1, {"k": 3}),
    (11, 1, {"k": 2}),
    (13, 1, {"k": 2}),
    (13, 1, {"k": 3}),
    (3, 2, {"k": 2}),
    (3, 2, {"K": [0, 1]}),
    (3, 2, {"K": [0]}),
    (5, 1, {"K": [0, 1]}),
    (7, 1, {"K": [0, 1, 5]}),
    (11, 1, {"K": [0, 2, 3, 8]}),
]


def _box(p, spec):
    if "k" in spec:
        return power_residues(p, spec["k"])
    return ForbiddenBox(p, spec["K"])


class TestExactSearch:
    @pytest.mark.parametrize("p,n,spec", SMALL_INSTANCES)
    @pytest.mark.parametrize("engine", ENGINES)
    def test_matches_enumeration(self, p, n, spec, engine):
        box = _box(p, spec)
        g = build_graph(box, n)
        expected, _ = enumerate_max_avoiding(p, n, box.residues)
        result = max_avoiding_set(g, engine=engine)
        assert result.status == "exact"
        assert result.max_size == expected
        assert is_avoiding(result.witness, p, box.residues)

    @pytest.mark.skipif(not HAVE_NATIVE, reason="numba unavailable")
    @pytest.mark.parametrize("p,n,spec", SMALL_INSTANCES)
    def test_engines_identical(self, p, n, spec):
        box = _box(p, spec)
        g = build_graph(box, n)
        a = max_avoiding_set(g, engine="python")
        b = max_avoiding_set(g, engine="native")
        assert (a.max_size, a.witness, a.status, a.nodes_explored) == \
            (b.max_size, b.witness, b.status, b.nodes_explored)

    def test_golden_values(self):
        assert max_avoiding_set(build_graph(power_residues(5, 2), 1)).max_size == 2
        assert max_avoiding_set(build_graph(power_residues(7, 2), 1)).max_size == 1
        result = max_avoiding_set(build_graph(ForbiddenBox(3, [0, 1]), 2))
        assert result.max_size == 3
        # the bound (3-2+1)^2 = 4 is not attained here
        assert result.max_size < box_bound(3, 2, 2)

    @pytest.mark.parametrize("p,n,klist,expected", [
        (3, 3, [0, 1], 4),
        (3, 4, [0, 1], 10),
        (5, 3, [0, 1, 4], 10),
        (7, 2, [0, 1, 3], 9),
    ])
    def test_higher_dimension_golden(self, p, n, klist, expected):
        # frozen after cross-checking with an independent exact clique solver;
        # exercises the orbit machinery for 3 and 4 coordinates
        result = max_avoiding_set(build_graph(ForbiddenBox(p, klist), n))
        assert result.status == "exact"
        assert result.max_size == expected
        assert is_avoiding(result.witness, p, klist)

    def test_sharp_when_only_zero_forbidden(self):
        # K = {0} forbids nothing between distinct points: the whole space
        # works and the bound (p-1+1)^n is attained exactly
        for p, n in [(3, 2), (5, 2), (7, 1)]:
            g = build_graph(ForbiddenBox(p, [0]), n)
            result = max_avoiding_set(g)
            assert result.max_size == p**n == box_bound(p, 1, n)

    def test_witness_sorted_by_rank(self):
        result = max_avoiding_set(build_graph(power_residues(13, 2), 1))
        ranks = [vec_rank(v, 13) for v in result.witness]
        assert ranks == sorted(ranks)

    def test_deterministic(self):
        g = build_graph(power_residues(13, 2), 1)
        a = max_avoiding_set(g, seed=0)
        b = max_avoiding_set(g, seed=0)
        assert a.max_size == b.max_size and a.witness == b.witness

    def test_translation_invariance_of_witnesses(self):
        box = power_residues(5, 2)
        g = build_graph(box, 2)
        witness = max_avoiding_set(g).witness
        rng = random.Random(1)
        for _ in range(10):
            shift = (rng.randrange(5), rng.randrange(5))
            translated = [tuple((a + s) % 5 for a, s in zip(v, shift))
                          for v in witness]
            assert is_avoiding(translated, 5, box.residues)

    def test_node_budget_degrades_status(self):
        g = build_graph(power_residues(13, 2), 2)
        result = max_avoiding_set(g, node_budget=2, engine="python")
        assert result.status == "lower-bound-only"
        assert is_avoiding(result.witness, 13, power_residues(13, 2).residues)
        exact = max_avoiding_set(g)
        assert result.max_size <= exact.max_size

    def test_time_limit_degrades_status(self):
        g = build_graph(power_residues(13, 2), 2)
        result = max_avoiding_set(g, time_limit=1e-9)
        assert result.status == "lower-bound-only"
        assert result.max_size >= 1

    def test_hard_instance_exact(self):
        # 169 vertices, dense complement; exercises anchor + orbit symmetry
        g = build_graph(power_residues(13, 3), 2)
        result = max_avoiding_set(g)
        assert result.status == "exact"
        assert result.max_size == 21
        assert is_avoiding(result.witness, 13, power_residues(13, 3).residues)

    def test_rejects_unknown_engine(self):
        g = build_graph(power_residues(5, 2), 1)
        with pytest.raises(ValueError):
            max_avoiding_set(g, engine="turbo")


class TestSymmetryMachinery:
    def test_scalar_stabilizer_is_power_residue_group(self):
        box = power_residues(13, 3)
        scalars = _stabilizer_scalars(box)
        assert scalars == [1, 5, 8, 12]
        for lam in scalars:
            assert {(lam * r) % 13 for r in box.residues} == set(box.residues)

    def test_orbit_reps_cover_candidates(self):
        box = power_residues(13, 3)
        g = build_graph(box, 2)
        full = (1 << g.vertex_count) - 1
        cand = full ^ g.adjacency[0] ^ 1
        reps = _orbit_reps_mask(g, cand)
        assert reps is not None
        assert reps & ~cand == 0
        assert bin(reps).count("1") == 7

    def test_scaling_maps_preserve_adjacency(self):
        # the orbit reduction is only sound if these maps are automorphisms
        box = power_residues(13, 3)
        g = build_graph(box, 2)
        p = 13
        vertices = [(a, b) for a in range(p) for b in range(p)]
        for lam1, lam2, swap in [(5, 8, False), (12, 1, True), (8, 8, True)]:
            def phi(v):
                a, b = (v[1], v[0]) if swap else v
                return ((lam1 * a) % p, (lam2 * b) % p)
            rng = random.Random(0)
            for _ in range(300):
                u_vec, v_vec = rng.choice(vertices), rng.choice(vertices)
                before = (g.adjacency[vec_rank(u_vec, p)] >> vec_rank(v_vec, p)) & 1
                after = (g.adjacency[vec_rank(phi(u_vec), p)]
                         >> vec_rank(phi(v_vec), p)) & 1
                assert before == after


class TestPaley:
    @pytest.mark.parametrize("p,omega", [(5, 2), (13, 3), (17, 3)])
    def test_known_clique_numbers(self, p, omega):
        result = paley_clique_number(p)
        assert result.status == "exact"
        assert result.max_size == omega

    def test_rejects_three_mod_four(self):
        with pytest.raises(ValueError):
            paley_clique_number(7)

    def test_rejects_non_prime(self):
        with pytest.raises(ValueError):
            paley_clique_number(9)
