import random

import pytest

from widthlab import (Alphabet, AlphabetError, build_core, contains, locate_coset,
                      pullback2, pullback_n)
from widthlab.bounds import random_reduced_word

A1 = Alphabet(1)
A2 = Alphabet(2)
A4 = Alphabet(4)


def words(alphabet, *texts):
    return [alphabet.parse(t) for t in texts]


def subgroup_ball(graph, generators, depth):
    """Every product of at most ``depth`` generators or inverses, reduced."""
    seen = {graph.alphabet.identity()}
    frontier = list(seen)
    gens = [g for g in generators if g] + [g.inverse() for g in generators if g]
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for g in gens:
                prod = w * g
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return seen


def test_rose_on_free_factor_basis():
    g = build_core(A4, words(A4, "x1", "x2"))
    assert g.n_vertices == 1
    assert g.edges == ((0, 1, 0), (0, 2, 0))
    assert g.cycle_rank == 2


def test_square_generator_folds_to_two_cycle():
    g = build_core(A1, words(A1, "x1 x1"))
    assert g.n_vertices == 2
    assert g.edges == ((0, 1, 1), (1, 1, 0))
    assert g.cycle_rank == 1


def test_conjugate_generator_folds_to_spur_plus_loop():
    g = build_core(A2, words(A2, "x1 x2 X1"))
    assert g.n_vertices == 2
    assert g.edges == ((0, 1, 1), (1, 2, 1))
    assert g.cycle_rank == 1


def test_trivial_subgroup_is_a_point():
    for gens in ([], words(A2, ""), words(A2, "", "")):
        g = build_core(A2, gens)
        assert (g.n_vertices, g.num_edges, g.cycle_rank) == (1, 0, 0)


def test_build_core_rejects_rank_mismatch():
    with pytest.raises(AlphabetError):
        build_core(A2, words(A4, "x3"))


def test_membership_examples():
    sq = build_core(A1, words(A1, "x1 x1"))
    assert contains(sq, A1.parse("x1 x1"))
    assert not contains(sq, A1.parse("x1"))
    conj = build_core(A2, words(A2, "x1 x2 X1"))
    assert contains(conj, A2.parse("x1 x2 x2 X1"))


def test_membership_agrees_with_generator_products():
    rng = random.Random(31)
    for _ in range(12):
        alphabet = Alphabet(rng.randint(2, 3))
        gens = [random_reduced_word(rng, alphabet, 4) for _ in range(rng.randint(1, 2))]
        graph = build_core(alphabet, gens)
        for w in subgroup_ball(graph, gens, 3):
            assert graph.contains(w)


def test_known_non_members():
    sq = build_core(A1, words(A1, "x1 x1"))
    assert not sq.contains(A1.parse("x1 x1 x1"))
    rose = build_core(A2, words(A2, "x1"))
    assert not rose.contains(A2.parse("x2"))


def test_locate_coset_examples():
    sq = build_core(A1, words(A1, "x1 x1"))
    v, label = locate_coset(sq, A1.parse("x1"))
    assert (v, str(label)) == (1, "x1")
    v, label = locate_coset(sq, A1.parse("x1 x1 x1"))
    assert (v, str(label)) == (1, "x1")
    rose = build_core(A4, words(A4, "x1", "x2"))
    assert locate_coset(rose, A4.parse("x3")) is None


def test_labels_are_shortlex_minimal():
    # four-cycle: breadth-first discovery reaches the far vertex through x1 x1
    g = build_core(A1, words(A1, "x1 x1 x1 x1"))
    assert [str(l) for l in g.labels()] == ["", "x1", "X1", "x1 x1"]


def test_folding_is_order_independent():
    rng = random.Random(17)
    for _ in range(25):
        alphabet = Alphabet(rng.randint(2, 4))
        gens = [random_reduced_word(rng, alphabet, 6) for _ in range(rng.randint(1, 3))]
        reference = build_core(alphabet, gens)
        shuffled = gens[:]
        rng.shuffle(shuffled)
        assert build_core(alphabet, shuffled) == reference
        assert build_core(alphabet, gens + [gens[0]]) == reference


def test_rank_formula_on_roses_and_cycles():
    for n in (1, 2, 3, 4):
        alphabet = Alphabet(n)
        rose = build_core(alphabet, [alphabet.parse(f"x{i}") for i in range(1, n + 1)])
        assert rose.cycle_rank == n
    for length in (2, 3, 5, 7):
        cyc = build_core(A1, [A1.word([1] * length)])
        assert cyc.n_vertices == length
        assert cyc.cycle_rank == 1


def test_rank_at_most_generator_count():
    rng = random.Random(41)
    for _ in range(20):
        alphabet = Alphabet(rng.randint(2, 4))
        gens = [random_reduced_word(rng, alphabet, 6) for _ in range(rng.randint(1, 3))]
        assert build_core(alphabet, gens).cycle_rank <= len(gens)


def test_pullback_of_malnormal_rose_is_single_diagonal():
    rose = build_core(A4, words(A4, "x1", "x2"))
    comps = pullback2(rose, rose)
    assert len(comps) == 1
    assert not comps[0].is_tree
    assert str(comps[0].rep) == ""


def test_pullback_of_overlapping_roses_has_witness():
    a = build_core(A4, words(A4, "x1", "x2"))
    b = build_core(A4, words(A4, "x2", "x3"))
    comps = pullback2(a, b)
    assert len(comps) == 1
    assert comps[0].rank == 1
    assert str(comps[0].witness) == "x2"


def test_pullback_of_disjoint_roses_is_a_tree_point():
    a = build_core(A4, words(A4, "x1", "x2"))
    b = build_core(A4, words(A4, "x3", "x4"))
    comps = pullback2(a, b)
    assert len(comps) == 1
    assert comps[0].is_tree
    assert comps[0].witness is None
    assert comps[0].vertices == ((0, 0),)


def test_diagonal_component_matches_the_graph():
    rng = random.Random(3)
    for _ in range(10):
        alphabet = Alphabet(rng.randint(2, 3))
        gens = [random_reduced_word(rng, alphabet, 5) for _ in range(rng.randint(1, 2))]
        g = build_core(alphabet, gens)
        diag = pullback_n([g, g], (0, 0))
        assert set(diag.vertices) == {(v, v) for v in range(g.n_vertices)}
        assert diag.rank == g.cycle_rank


def test_pullback_components_partition_all_pairs():
    g = build_core(A2, words(A2, "x1 x1", "x2 x1 X2"))
    comps = pullback2(g, g)
    cells = [tup for comp in comps for tup in comp.vertices]
    assert len(cells) == len(set(cells)) == g.n_vertices ** 2
    for comp in comps:
        assert comp.is_tree == (comp.rank == 0) == (comp.witness is None)


def test_pullback_swap_symmetry():
    rng = random.Random(29)
    for _ in range(10):
        alphabet = Alphabet(rng.randint(2, 3))
        a = build_core(alphabet, [random_reduced_word(rng, alphabet, 5)])
        b = build_core(alphabet, [random_reduced_word(rng, alphabet, 5)])
        forward = pullback2(a, b)
        backward = pullback2(b, a)
        back_at = {}
        for idx, comp in enumerate(backward):
            for tup in comp.vertices:
                back_at[tup] = idx
        for comp in forward:
            p, q = comp.rep_tuple
            mirror = backward[back_at[(q, p)]]
            assert mirror.is_tree == comp.is_tree
            assert {(y, x) for x, y in comp.vertices} == set(mirror.vertices)
            # the representative recomputed at the mirrored anchor is inverted
            assert b.label(q) * a.label(p).inverse() == comp.rep.inverse()


def test_anti_diagonal_component_of_square_core():
    sq = build_core(A1, words(A1, "x1 x1"))
    comp = pullback_n([sq, sq], (0, 1))
    assert comp.rank == 1
    assert set(comp.vertices) == {(0, 1), (1, 0)}
    assert str(comp.witness) == "x1 x1"


def test_triple_pullback_of_overlapping_roses():
    graphs = [build_core(A4, words(A4, "x1", "x2", "x3")),
              build_core(A4, words(A4, "x2", "x3", "x4")),
              build_core(A4, words(A4, "x3", "x4", "x1"))]
    comp = pullback_n(graphs, (0, 0, 0))
    assert comp.rank == 1
    assert str(comp.witness) == "x3"


def test_quadruple_pullback_of_shifted_roses_is_tree():
    graphs = [build_core(A4, words(A4, "x1", "x2", "x3")),
              build_core(A4, words(A4, "x2", "x3", "x4")),
              build_core(A4, words(A4, "x3", "x4", "x1")),
              build_core(A4, words(A4, "x4", "x1", "x2"))]
    comp = pullback_n(graphs, (0, 0, 0, 0))
    assert comp.is_tree


def test_witnesses_read_closed_paths_in_every_coordinate():
    rng = random.Random(53)
    for _ in range(10):
        alphabet = Alphabet(rng.randint(2, 3))
        a = build_core(alphabet, [random_reduced_word(rng, alphabet, 5) for _ in range(2)])
        b = build_core(alphabet, [random_reduced_word(rng, alphabet, 5)])
        for comp in pullback2(a, b):
            if comp.is_tree:
                continue
            for tup in comp.vertices:
                cyc = comp.witness_at(tup)
                assert cyc
                assert a.walk(tup[0], cyc) == tup[0]
                assert b.walk(tup[1], cyc) == tup[1]


def test_dot_export_shapes():
    g = build_core(A2, words(A2, "x1 x2 X1"))
    dot = g.to_dot()
    assert "doublecircle" in dot
    assert '0 -> 1 [label="x1"]' in dot
    comp = pullback_n([g, g], (0, 0))
    assert "doublecircle" in comp.to_dot()
