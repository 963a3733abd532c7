import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gatlas.atlas import AtlasMorphism, disjoint_union, identity_morphism
from gatlas.complexes import (SimplicialMap, complex_atlas, components, cycle_graph,
                              euler_characteristic, is_isomorphic)
from gatlas.coverings import (CoveringCandidate, SimplicialCover, all_path_lifts, brute_force_lifting,
                              build_cover_from_perm_rep, deck_group, fiber_cardinalities,
                              is_covering, lift_homotopy, lift_path, single_domain_universal_data,
                              star_conditions, _orbit_criterion)
from gatlas.atlas import explicit_atlas
from gatlas.errors import ValidationError
from gatlas.homotopy import Path, edge_path_presentation, shift_grid, validate_homotopy

from conftest import ATLAS_FIXTURES, family, fixture_atlas, load_fixture, nerve
from oracles import perm_closure


def _counterexample():
    from gatlas.cli import load_atlas

    spec = load_fixture("covering_counterexample")
    return CoveringCandidate(AtlasMorphism(load_atlas(spec["upper"]), load_atlas(spec["lower"]),
                                           tuple(spec["map"])))


def _atlas_cover(sc):
    pm = tuple(sc.projection(v) for v in range(sc.total.vertex_count))
    return CoveringCandidate(AtlasMorphism(complex_atlas(sc.total), complex_atlas(sc.base), pm))


def _hexagon_cover():
    spec = load_fixture("hexagon_double_cover")
    perms = {int(k): v for k, v in spec["perms"].items()}
    return build_cover_from_perm_rep(nerve("s3-transpositions"), 0, perms)


def _steps(A):
    """Every one-step path in A."""
    for _, orb in A.all_orbits():
        for x0, x1 in itertools.product(orb, repeat=2):
            yield Path((x0, x1))


def _assert_unique_lifting(c, paths):
    for f in paths:
        for y0 in c.fiber(f.start):
            lifts = all_path_lifts(c, f, y0)
            assert lifts == [lift_path(c, f, y0).points]


def test_counterexample_passes_star_conditions_but_is_not_a_covering():
    c = _counterexample()
    assert star_conditions(c)
    chk = is_covering(c)
    assert not chk and chk.witness["reason"] == "orbit has no lift"
    brute = brute_force_lifting(c)
    assert not brute and brute.witness["lifts"] == 0


def test_counterexample_lifting_fails_on_a_path():
    c = _counterexample()
    f = Path((0, 1, 2))
    assert all_path_lifts(c, f, 0) == [(0, 1, 2)]
    # the frame {0, 1, 2} itself has no lift, so the loop 0 -> 1 -> 2 -> 0 cannot be lifted as a frame
    assert not c.upper.common_coords((0, 1, 2))


def test_hexagon_double_cover():
    sc = _hexagon_cover()
    assert sc.fiber_index == 2
    assert len(components(sc.total)) == 1
    assert is_isomorphic(sc.total, cycle_graph(12))
    assert euler_characteristic(sc.total) == 2 * euler_characteristic(sc.base)
    assert deck_group(sc).order == 2
    c = _atlas_cover(sc)
    assert is_covering(c)
    assert set(fiber_cardinalities(c).values()) == {2}
    _assert_unique_lifting(c, _steps(c.lower))


def test_euler_characteristic_doubles_on_s3_nerve():
    K = nerve("s3")
    sc = build_cover_from_perm_rep(K, 0, {1: [1, 0], 2: [1, 0]})
    assert euler_characteristic(K) == -1
    assert euler_characteristic(sc.total) == -2
    assert len(components(sc.total)) == 1


def test_triple_cover_with_trivial_deck_group():
    K = nerve("s3")
    sc = build_cover_from_perm_rep(K, 0, {1: [1, 2, 0], 2: [1, 0, 2]})
    assert len(components(sc.total)) == 1
    # the stabilizer of a point in S3 is self-normalizing
    assert deck_group(sc).order == 1
    assert is_covering(_atlas_cover(sc))


def test_composite_covering():
    sc1 = _hexagon_cover()
    sc2 = build_cover_from_perm_rep(sc1.total, 0, {1: [1, 0]})
    assert is_isomorphic(sc2.total, cycle_graph(24))
    proj = [sc1.projection(sc2.projection(v)) for v in range(sc2.total.vertex_count)]
    comp = SimplicialCover(sc2.total, sc1.base, SimplicialMap(sc2.total, sc1.base, proj), 4)
    c = _atlas_cover(comp)
    assert is_covering(c) and set(fiber_cardinalities(c).values()) == {4}
    assert deck_group(comp).order == 4


def test_three_disjoint_copies():
    sc = build_cover_from_perm_rep(nerve("s3-transpositions"), 0, {1: [0, 1, 2]})
    assert len(components(sc.total)) == 3
    # deck transformations may permute the copies freely
    assert deck_group(sc).order == 6


def test_perm_rep_validation():
    K = nerve("s3")
    with pytest.raises(ValidationError, match="no permutation"):
        build_cover_from_perm_rep(K, 0, {1: [1, 0]})
    with pytest.raises(ValidationError, match="not a permutation"):
        build_cover_from_perm_rep(K, 0, {1: [0, 0], 2: [0, 1]})
    with pytest.raises(ValidationError, match="different sizes"):
        build_cover_from_perm_rep(K, 0, {1: [0, 1], 2: [0, 1, 2]})
    S4 = nerve("s4")
    P = edge_path_presentation(S4)
    assert P.relators
    swap = {g: [1, 0] for g in range(1, P.generator_count + 1)}
    with pytest.raises(ValidationError, match="not a pi_1-action"):
        build_cover_from_perm_rep(S4, 0, swap)
    ident = {g: [0, 1] for g in range(1, P.generator_count + 1)}
    assert len(components(build_cover_from_perm_rep(S4, 0, ident).total)) == 2


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4).flatmap(lambda F: st.tuples(st.permutations(list(range(F))),
                                                       st.permutations(list(range(F))))))
def test_random_covers_of_s3_nerve(perms):
    K = nerve("s3")
    p1, p2 = (list(p) for p in perms)
    F = len(p1)
    sc = build_cover_from_perm_rep(K, 0, {1: p1, 2: p2})
    assert euler_characteristic(sc.total) == F * euler_characteristic(K)
    orbits = {frozenset(perm_closure_orbit(i, [p1, p2])) for i in range(F)}
    assert len(components(sc.total)) == len(orbits)
    c = _atlas_cover(sc)
    assert is_covering(c)
    if len(orbits) == 1:
        assert F % deck_group(sc).order == 0


def perm_closure_orbit(i, perms):
    group = perm_closure([tuple(p) for p in perms])
    return {g[i] for g in group}


@pytest.mark.parametrize("stem", ATLAS_FIXTURES)
def test_fold_map_is_a_covering_with_unique_lifts(stem):
    A = fixture_atlas(stem)
    assert A.underlying_size <= 200
    n = A.underlying_size
    c = CoveringCandidate(AtlasMorphism(disjoint_union(A, A), A, tuple(y % n for y in range(2 * n))))
    assert star_conditions(c)
    assert is_covering(c)
    assert set(fiber_cardinalities(c).values()) == {2}
    _assert_unique_lifting(c, _steps(A))
    ident = CoveringCandidate(identity_morphism(A))
    assert is_covering(ident)
    _assert_unique_lifting(ident, _steps(A))


@settings(max_examples=30, deadline=None)
@given(st.data(), st.sampled_from(["s3", "k4", "q8", "s4"]))
def test_long_paths_lift_uniquely(data, stem):
    A = fixture_atlas(stem)
    n = A.underlying_size
    c = CoveringCandidate(AtlasMorphism(disjoint_union(A, A), A, tuple(y % n for y in range(2 * n))))
    nbr = {}
    for _, orb in A.all_orbits():
        for x in orb:
            nbr.setdefault(x, set()).update(orb)
    pts = [data.draw(st.integers(0, n - 1))]
    for _ in range(data.draw(st.integers(0, 5))):
        pts.append(data.draw(st.sampled_from(sorted(nbr[pts[-1]]))))
    _assert_unique_lifting(c, [Path(tuple(pts))])


def test_homotopies_lift():
    sc = _hexagon_cover()
    c = _atlas_cover(sc)
    K = sc.base
    loop = [0]
    adj = {v: sorted({u for e in K.simplices_of_dim(1) if v in e for u in e} - {v}) for v in K.vertices()}
    prev = None
    while len(loop) < 7:
        nxt = next(u for u in adj[loop[-1]] if u != prev)
        prev = loop[-1]
        loop.append(nxt)
    f = Path(tuple(loop))
    h = shift_grid(f)
    assert validate_homotopy(c.lower, h)
    up = lift_homotopy(c, h, c.fiber(0)[0])
    assert validate_homotopy(c.upper, up)
    # going once round the hexagon ends on the other sheet
    assert up.rows[0].end != up.rows[0].start


small_atlas = st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3),
             min_size=1, max_size=3)))


def _atlas_from(n, arrow_lists):
    return explicit_atlas(n, len(arrow_lists), [],
                          [{"objects": list(range(n)), "arrows": arrows} for arrows in arrow_lists])


@settings(max_examples=80, deadline=None)
@given(small_atlas, small_atlas, st.data())
def test_orbit_criterion_matches_exhaustive_frame_lifting(up, down, data):
    B, A = _atlas_from(*up), _atlas_from(*down)
    pm = tuple(data.draw(st.integers(0, A.underlying_size - 1)) for _ in range(B.underlying_size))
    c = CoveringCandidate(AtlasMorphism(B, A, pm))
    # frames of size max(2, largest orbit) see both failure modes: a doubled point and a missing orbit
    size = max(2, max(len(o) for _, o in A.all_orbits()))
    chk = is_covering(c, brute_frame_size=0)
    if chk.witness and chk.witness.get("reason") == "not a weak morphism":
        return
    assert chk.ok == _orbit_criterion(c).ok == brute_force_lifting(c, size).ok


@pytest.mark.parametrize("name,rank", [("s3", 2), ("s3-transpositions", 1), ("k4", 3), ("q8", 3)])
def test_universal_data_infinite(name, rank):
    G, fam = family(name)
    u = single_domain_universal_data(G, fam)
    assert u.verdict == "infinite-certified" and u.kernel_rank == rank


def test_universal_data_s4_is_finite():
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    G, fam = family("s4")
    u = single_domain_universal_data(G, fam)
    assert u.verdict == "finite" and u.finite_colimit.order == 24 and u.covering_degree == 1
    # independent route: the Coxeter presentation of the same colimit
    F, a, b, c = free_group("a b c")
    cox = FpGroup(F, [a ** 2, b ** 2, c ** 2, (a * b) ** 3, (b * c) ** 3, (a * c) ** 2])
    assert cox.order() == 24


def test_universal_data_single_subgroup_and_bound():
    G, fam = family("s3")
    u = single_domain_universal_data(G, [G.whole()])
    assert u.verdict == "finite" and u.finite_colimit.order == 6 and u.covering_degree == 1
    G4, fam4 = family("s4")
    assert single_domain_universal_data(G4, fam4, bound=10).verdict == "bound-exceeded"
