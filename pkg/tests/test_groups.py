import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gatlas.errors import BoundExceeded, ValidationError
from gatlas.groups import (FiniteGroup, ModularRing, Word, all_subgroups, closure_from_generators,
                           coset_space, cyclic_group, elementary_matrix, evaluate_word,
                           general_linear_group, generated_subgroup, is_associative, left_cosets,
                           steinberg_violations, subgroup_intersection)

from conftest import family
from oracles import elementary_closure, gl_order, perm_closure


def test_fixture_group_orders_match_raw_closure():
    raw = {
        "s3": [(1, 2, 0), (1, 0, 2)],
        "s3-transpositions": [(1, 0, 2), (0, 2, 1)],
        "k4": [(1, 0, 3, 2), (2, 3, 0, 1)],
        "s4": [(1, 0, 2, 3), (0, 2, 1, 3), (0, 1, 3, 2)],
    }
    for name, gens in raw.items():
        G, _ = family(name)
        assert G.order == len(perm_closure(gens))
    assert family("q8")[0].order == 8


def test_identity_is_index_zero_and_inverses():
    for name in ("s3", "k4", "q8", "s4"):
        G, _ = family(name)
        for g in range(G.order):
            assert G.mul(0, g) == g == G.mul(g, 0)
            assert G.mul(g, G.inv(g)) == 0


def test_q8_intersections_are_plus_minus_one():
    G, (Hi, Hj, Hk) = family("q8")
    for A, B in ((Hi, Hj), (Hi, Hk), (Hj, Hk)):
        I = subgroup_intersection(A, B)
        assert sorted(G.label(x) for x in I.elements) == ["-1", "1"]


def test_s3_cosets_of_three_cycle():
    G, (Ha, Hb) = family("s3")
    assert len(left_cosets(Ha)) == 2 and all(len(c) == 3 for c in left_cosets(Ha))
    assert len(left_cosets(Hb)) == 3


def test_coset_space_partitions():
    G, (Ha, _) = family("s3")
    blocks = coset_space(Ha)
    assert sorted(x for b in blocks for x in b) == list(range(G.order))


def test_from_table_rejects_bad_tables():
    with pytest.raises(ValidationError):
        FiniteGroup.from_table([[0, 1], [1, 1]])
    with pytest.raises(ValidationError):
        FiniteGroup.from_table([[1, 0], [0, 1]])
    # a Latin square with identity that is not associative
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(ValidationError):
        FiniteGroup.from_table(bad)


def test_cyclic_group_table():
    C = cyclic_group(5)
    assert C.mul(3, 4) == 2
    assert is_associative(C)


def test_all_subgroups_of_s3_and_s4():
    assert len(all_subgroups(family("s3")[0])) == 6
    assert len(all_subgroups(family("s4")[0])) == 30


def test_word_validation_and_evaluation():
    G, fam = family("s3")
    a, b = 1, 2
    w = Word(((0, a), (1, b)), fam)
    assert evaluate_word(w) == G.mul(a, b)
    assert evaluate_word(w + w.inverse()) == 0
    with pytest.raises(ValidationError):
        Word(((1, a),), fam)


@pytest.mark.parametrize("n,p,k", [(2, 2, 1), (2, 3, 1), (2, 2, 2), (3, 2, 1)])
def test_gl_orders(n, p, k):
    G, _ = general_linear_group(n, ModularRing(p ** k))
    assert G.order == gl_order(n, p, k)


def test_gl_bound():
    with pytest.raises(BoundExceeded):
        general_linear_group(3, ModularRing(6))


def test_elementary_subgroup_matches_raw_closure():
    G, E = general_linear_group(2, ModularRing(4))
    sub = G.subgroup([E[(i, j, r)] for i, j in ((1, 2), (2, 1)) for r in range(1, 4)])
    raw = elementary_closure(2, 4)
    assert {G.key(g) for g in sub.elements} == raw
    assert len(raw) == 48


@pytest.mark.parametrize("m", [2, 3])
def test_steinberg_relations_gl3(m):
    ring = ModularRing(m)
    G, E = general_linear_group(3, ring)
    assert steinberg_violations(G, E, 3, ring) == []


def test_elementary_matrix_positions_are_one_based():
    ring = ModularRing(5)
    assert elementary_matrix(2, ring, 1, 2, 3) == (1, 3, 0, 1)
    with pytest.raises(ValidationError):
        elementary_matrix(2, ring, 1, 1, 3)


perm_lists = st.integers(min_value=1, max_value=5).flatmap(
    lambda n: st.lists(st.permutations(list(range(n))), min_size=1, max_size=3))


@settings(max_examples=40, deadline=None)
@given(perm_lists)
def test_closure_is_a_group(gens):
    G = closure_from_generators(len(gens[0]), gens)
    assert G.order == len(perm_closure([tuple(g) for g in gens]))
    elems = range(G.order)
    for x, y in itertools.islice(itertools.product(elems, elems), 200):
        assert 0 <= G.mul(x, y) < G.order
    assert all(G.mul(g, G.inv(g)) == 0 for g in elems)
    assert is_associative(G, itertools.islice(itertools.product(elems, elems, elems), 300))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_generated_subgroup_contains_its_parts(data):
    G, _ = family("s4")
    gens = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    H = G.subgroup(gens)
    K = G.subgroup(data.draw(st.lists(st.integers(0, G.order - 1), max_size=2)))
    J = generated_subgroup(G, [H, K])
    assert H.issubset(J) and K.issubset(J)
    assert G.order % J.order == 0
    I = subgroup_intersection(H, K)
    assert I.issubset(H) and I.issubset(K)
    assert all(G.mul(x, y) in I for x in I for y in I)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(0, 40), st.integers(0, 40))
def test_modular_ring_laws(m, a, b):
    R = ModularRing(m)
    a, b = a % m, b % m
    assert R.add(a, R.neg(a)) == 0
    assert R.mul(a, b) == (a * b) % m
    assert all(np.gcd(u, m) == 1 for u in R.units)
