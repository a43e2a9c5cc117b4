import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triangle_building.errors import DepthInsufficient, FillContradiction, InadmissibleWall
from triangle_building.group_words import IDENTITY, NormalForm, gen, gen_inv, inverse, parse_word, reduce
from triangle_building.labels import a_minus, a_plus, alphabet
from triangle_building.presentation import canonical_q2
from triangle_building.sector_geometry import (
    SectorDiagram,
    all_diagrams,
    amenability_overlap,
    brute_force_extensions,
    check_witness,
    cylinder_contains,
    depth_one,
    diagram_from_json,
    diagram_problems,
    diagram_to_json,
    enumerate_extensions,
    fill_from_walls,
    hull_vertices,
    is_valid,
    minimality_witness,
    position,
    random_diagram,
    relocate_to_e,
    translate,
    vertices,
    wall_pair_outcomes,
)

P2 = canonical_q2()


def test_depth_one_extensions(pres):
    counts = Counter()
    for lab in alphabet(pres):
        d = depth_one(lab)
        fast = set(enumerate_extensions(pres, d))
        slow = set(brute_force_extensions(pres, d))
        assert fast == slow
        counts[len(fast)] += 1
        assert all(e.truncate(1) == d for e in fast)
    # q^3 = 8 for every base, not q^4
    assert counts == Counter({8: 21})


def test_wall_pairs_split_evenly(pres):
    d = depth_one((0, 1))
    outcomes = list(wall_pair_outcomes(pres, d))
    assert len(outcomes) == 16
    assert sum(e is not None for _, _, e in outcomes) == 8
    # the right wall is free, the left wall is forced up to q choices
    rights = Counter(r for r, _, e in outcomes if e is not None)
    assert set(rights.values()) == {2}


def test_fill_from_walls(pres):
    assert fill_from_walls(pres, (0, 1), [], []) == depth_one((0, 1))
    d = fill_from_walls(pres, (0, 1), [(6, 0)], [(0, 4)])
    assert is_valid(pres, d)
    v = vertices(pres, d)
    assert v[(1, 1)] == reduce(pres, parse_word("0^-1 4"))
    assert d.right_wall() == [(0, 1), (6, 0)] and d.left_wall() == [(0, 1), (0, 4)]
    with pytest.raises(FillContradiction):
        fill_from_walls(pres, (0, 1), [(6, 0)], [(1, 5)])
    with pytest.raises(InadmissibleWall):
        fill_from_walls(pres, (0, 1), [(6, 0)], [(1, 3)])


def test_depth_three_counts(pres):
    per_base = Counter(d.base_label for d in all_diagrams(pres, 3))
    assert set(per_base.values()) == {64}
    # oracle: raw label search, layer by layer
    layer = [depth_one((0, 1))]
    for _ in range(2):
        layer = [e for d in layer for e in brute_force_extensions(pres, d)]
    assert set(layer) == set(all_diagrams(pres, 3, (0, 1)))
    # of the 256 wall pairs two layers up, 64 fill
    filled = 0
    for r1 in sorted(a_plus(pres, (0, 1))):
        for l1 in sorted(a_minus(pres, (0, 1))):
            for r2 in sorted(a_plus(pres, r1)):
                for l2 in sorted(a_minus(pres, l1)):
                    try:
                        fill_from_walls(pres, (0, 1), [r1, r2], [l1, l2])
                        filled += 1
                    except FillContradiction:
                        pass
    assert filled == 64


def test_cylinder(pres):
    d = depth_one((0, 1))
    assert cylinder_contains(pres, d, IDENTITY)
    assert cylinder_contains(pres, d, gen(1))
    assert not cylinder_contains(pres, d, gen(2))
    assert cylinder_contains(pres, d, gen_inv(0))
    with pytest.raises(DepthInsufficient):
        cylinder_contains(pres, d, reduce(pres, parse_word("1 1")))


def test_translate_examples(pres):
    rng = random.Random(4)
    d = random_diagram(pres, 4, rng, (6, 0))
    assert translate(pres, IDENTITY, d) == d
    moved = translate(pres, gen(1), d)
    assert moved.base_label == (0, 1)
    assert moved.depth == 3
    with pytest.raises(DepthInsufficient):
        translate(pres, gen(1), d, depth=6)


def test_relocation_recovers_a_rebased_sector(pres):
    rng = random.Random(8)
    d = random_diagram(pres, 6, rng)
    v = vertices(pres, d)
    # the subsector at the vertex (2, 1), seen from there, relocates back to d
    cells = {(i, j): d.cells[(i + 2, j + 1)] for i in range(3) for j in range(3 - i)}
    sub = SectorDiagram(v[(2, 1)], 3, cells)
    rel = relocate_to_e(pres, sub)
    assert rel.offset == (2, 1)
    assert rel.diagram == d.truncate(rel.diagram.depth)
    assert rel.diagram.depth >= 4


def test_hull_vertices(pres):
    w = reduce(pres, parse_word("6^-1 4 2"))
    hull = hull_vertices(pres, w)
    assert len(hull) == 2 * 3
    assert hull[position(w)] == w
    assert all(position(g) == p for p, g in hull.items())


def test_minimality_examples(pres):
    k = minimality_witness(pres, gen(0), (0, 1))
    assert k == NormalForm((), (0, 3))
    assert check_witness(pres, gen(0), (0, 1), k, depth=5) == (4096, 0)
    # v = e: least z with b not on lam(z)
    assert minimality_witness(pres, IDENTITY, (0, 1)) == gen(1)
    assert 1 not in pres.lam_pts[1]


def test_bare_letter_rule_is_not_enough(pres):
    """z = 1 meets b not on lam(z) and z != x_n for v = a_5^-1, yet fails."""
    v, source = gen_inv(5), (0, 1)
    bare = reduce(pres, parse_word("5^-1 1"))
    assert 1 not in pres.lam_pts[1]
    checked, failures = check_witness(pres, v, source, bare, depth=2)
    assert failures == checked == 8
    # v a_z a_0^-1 collapses to length 2
    assert reduce(pres, parse_word("5^-1 1 0^-1")).length == 2
    k = minimality_witness(pres, v, source)
    assert k.length == 2 and check_witness(pres, v, source, k, depth=3)[1] == 0


def test_minimality_at_q3(pres3):
    for lab in alphabet(pres3)[:6]:
        for v in (IDENTITY, gen(4), gen_inv(7)):
            k = minimality_witness(pres3, v, lab)
            assert check_witness(pres3, v, lab, k, depth=2)[1] == 0


def test_overlap_examples(pres):
    rng = random.Random(11)
    omega = random_diagram(pres, 42, rng)
    assert amenability_overlap(pres, omega, IDENTITY, 10) == 1
    vals = [amenability_overlap(pres, omega, gen(0), i) for i in (10, 20, 40)]
    assert Fraction(56, 110) <= vals[0] <= 1
    assert vals == sorted(vals)
    assert all(isinstance(v, Fraction) for v in vals)
    with pytest.raises(DepthInsufficient):
        amenability_overlap(pres, omega.truncate(8), gen(0), 10)


def test_json_round_trip(pres):
    d = random_diagram(pres, 5, random.Random(2))
    text = diagram_to_json(d)
    assert diagram_from_json(pres, text) == d
    assert diagram_to_json(diagram_from_json(pres, text)) == text
    moved = d.rebase(reduce(pres, parse_word("2 6^-1")))
    assert diagram_from_json(pres, diagram_to_json(moved)) == moved


@given(st.integers(0, 10**6), st.integers(1, 7))
@settings(max_examples=40, deadline=None)
def test_random_diagrams_are_valid(seed, depth):
    d = random_diagram(P2, depth, random.Random(seed))
    assert diagram_problems(P2, d) == []


@given(st.integers(0, 10**6), st.lists(st.tuples(st.integers(0, 6), st.sampled_from([1, -1])), max_size=2))
@settings(max_examples=40, deadline=None)
def test_translate_round_trip(seed, word):
    g = reduce(P2, word)
    d = random_diagram(P2, 8, random.Random(seed))
    there = translate(P2, g, d)
    back = translate(P2, inverse(P2, g), there)
    assert back == d.truncate(back.depth)
    assert back.depth == 8 - 2 * g.length


@given(st.integers(0, 10**6), st.sampled_from([(x, s) for x in range(7) for s in (1, -1)]), st.sampled_from([10, 14]))
@settings(max_examples=25, deadline=None)
def test_overlap_bound(seed, letter, i):
    s = reduce(P2, [letter])
    omega = random_diagram(P2, i + 3, random.Random(seed))
    val = amenability_overlap(P2, omega, s, i)
    assert Fraction((i - 3) * (i - 2), i * (i + 1)) <= val <= 1
