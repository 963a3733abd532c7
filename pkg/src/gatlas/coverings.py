"""Covering maps of atlases and complexes.

The covering test is the finite form of unique local-frame lifting: for
each upstairs point y, the map must be injective on the star of y, and every
downstairs orbit through p(y) must be covered by a single upstairs orbit
through y.  A brute-force count of frame lifts runs alongside it.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

from .atlas import AtlasMorphism, Check, GroupoidAtlas, is_weak_morphism
from .complexes import SimplicialComplex, SimplicialMap, components
from .errors import UnsupportedShape, ValidationError
from .groups import FiniteGroup, Subgroup, closure_from_generators, generated_subgroup, subgroup_intersection
from .homotopy import (HomotopyGrid, Path, Presentation, amalgam_shape, edge_path_presentation,
                       family_kernel_rank)


class CoveringCandidate:
    def __init__(self, morphism: AtlasMorphism):
        self.morphism = morphism
        self.upper = morphism.source
        self.lower = morphism.target
        self._stars = {}

    def p(self, y: int) -> int:
        return self.morphism.point_map[y]

    def star(self, A: GroupoidAtlas, x: int, coord: int | None = None) -> frozenset[int]:
        """Star_coord(x), or the union over all coordinates when coord is None."""
        key = (id(A), x, coord)
        if key not in self._stars:
            if coord is not None:
                i = A.locals[coord].orbit_id(x)
                s = frozenset() if i is None else frozenset(A.locals[coord].orbits[i])
            else:
                s = frozenset().union(*(self.star(A, x, c) for c in range(A.n_coords)))
            self._stars[key] = s
        return self._stars[key]

    def fiber(self, x: int) -> list[int]:
        return [y for y, v in enumerate(self.morphism.point_map) if v == x]


def star_conditions(c: CoveringCandidate) -> Check:
    B, A = c.upper, c.lower
    for beta in range(B.n_coords):
        loc = B.locals[beta]
        pts = sorted(loc.objects)
        for y1, y2 in itertools.combinations(pts, 2):
            if c.p(y1) == c.p(y2) and loc.orbit_id(y1) == loc.orbit_id(y2):
                return Check(False, {"condition": 1, "coord": beta, "points": (y1, y2)})
    for y in range(B.underlying_size):
        s = c.star(B, y)
        image = [c.p(z) for z in s]
        if len(set(image)) != len(image) or set(image) != c.star(A, c.p(y)):
            return Check(False, {"condition": 2, "point": y})
    return Check(True)


def _orbit_criterion(c: CoveringCandidate) -> Check:
    B, A = c.upper, c.lower
    for y in range(B.underlying_size):
        s = c.star(B, y)
        image = {c.p(z) for z in s}
        if len(image) != len(s):
            return Check(False, {"reason": "not injective on the star", "point": y})
        x = c.p(y)
        upstairs = [{c.p(z) for z in c.star(B, y, b)} for b in range(B.n_coords)]
        for a in range(A.n_coords):
            O = c.star(A, x, a)
            if O and not any(O <= img for img in upstairs):
                return Check(False, {"reason": "orbit has no lift", "point": y, "coord": a})
    return Check(True)


def count_frame_lifts(c: CoveringCandidate, frame: Sequence[int], y0: int) -> int:
    B = c.upper
    choices = [[z for z in c.star(B, y0) if c.p(z) == x] for x in frame[1:]]
    count = 0
    for tail in itertools.product(*choices):
        if B.common_coords((y0,) + tail):
            count += 1
    return count


def brute_force_lifting(c: CoveringCandidate, max_frame_size: int = 3) -> Check:
    A = c.lower
    fibers = {x: c.fiber(x) for x in range(A.underlying_size)}
    seen = set()
    for a in range(A.n_coords):
        for orb in A.orbits(a):
            if orb in seen:
                continue
            seen.add(orb)
            for k in range(1, max_frame_size + 1):
                for frame in itertools.product(orb, repeat=k):
                    for y0 in fibers[frame[0]]:
                        n = count_frame_lifts(c, frame, y0)
                        if n != 1:
                            return Check(False, {"frame": frame, "start": y0, "lifts": n})
    return Check(True)


def is_covering(c: CoveringCandidate, brute_frame_size: int = 3) -> Check:
    weak = is_weak_morphism(c.morphism)
    if not weak:
        return Check(False, {"reason": "not a weak morphism", **weak.witness})
    exact = _orbit_criterion(c)
    brute = brute_force_lifting(c, brute_frame_size) if brute_frame_size > 0 else Check(True)
    if exact.ok and not brute.ok:
        raise AssertionError(f"orbit criterion and frame lifting disagree: {brute.witness}")
    if not exact.ok:
        return exact
    return Check(True)


def lift_path(c: CoveringCandidate, f: Path, y0: int) -> Path:
    if c.p(y0) != f.start:
        raise ValidationError("start point is not over the start of the path")
    out = [y0]
    for x in f.points[1:]:
        cands = [z for z in c.star(c.upper, out[-1]) if c.p(z) == x]
        if len(cands) != 1:
            raise ValidationError(f"{len(cands)} candidate lifts at a step; not a covering")
        out.append(cands[0])
    return Path(tuple(out))


def all_path_lifts(c: CoveringCandidate, f: Path, y0: int) -> list[tuple[int, ...]]:
    """Exhaustive search over fiber sequences; used to confirm uniqueness."""
    B = c.upper
    partial = [(y0,)]
    for x in f.points[1:]:
        partial = [p + (z,) for p in partial for z in c.fiber(x) if B.common_coords((p[-1], z))]
    return partial


def lift_homotopy(c: CoveringCandidate, h: HomotopyGrid, y0: int) -> HomotopyGrid:
    w = h.width()
    rows = []
    for r in h.rows:
        padded = Path(tuple(r.at(m) for m in range(w)))
        rows.append(lift_path(c, padded, y0))
    return HomotopyGrid(tuple(rows))


def fiber_cardinalities(c: CoveringCandidate) -> dict[int, int]:
    return {x: len(c.fiber(x)) for x in range(c.lower.underlying_size)}


# simplicial covers -------------------------------------------------------------------

@dataclass
class SimplicialCover:
    total: SimplicialComplex
    base: SimplicialComplex
    projection: SimplicialMap
    fiber_index: int

    def __post_init__(self):
        proj = self.projection
        if set(proj.image(self.total.vertices())) != set(self.base.vertices()):
            raise ValidationError("projection is not surjective")
        for s in self.base.simplices:
            lifts = [t for t in self.total.simplices if len(t) == len(s) and proj.image(t) == s]
            if len(lifts) != self.fiber_index:
                raise ValidationError(f"simplex {s} has {len(lifts)} lifts")
            covered = [v for t in lifts for v in t]
            if len(covered) != len(set(covered)):
                raise ValidationError(f"lifts of {s} overlap")


def _apply(word: Sequence[int], perms: Mapping[int, Sequence[int]], inverses, i: int) -> int:
    for x in word:
        i = perms[x][i] if x > 0 else inverses[-x][i]
    return i


def build_cover_from_perm_rep(K: SimplicialComplex, base: int,
                              perm_action: Mapping[int, Sequence[int]]) -> SimplicialCover:
    """Cover of K whose fiber over the base is permuted by the edge-path generators as given.

    Generators are numbered from 1 as in :func:`edge_path_presentation`;
    crossing a non-tree edge u -> v (u < v) sends fiber point i to perm[i].
    """
    P = edge_path_presentation(K, base)
    perms = {int(g): tuple(int(v) for v in p) for g, p in perm_action.items()}
    missing = set(range(1, P.generator_count + 1)) - set(perms)
    if missing:
        raise ValidationError(f"no permutation for generators {sorted(missing)}")
    sizes = {len(p) for p in perms.values()}
    if len(sizes) > 1:
        raise ValidationError("permutations of different sizes")
    F = sizes.pop() if sizes else 1
    inverses = {}
    for g, p in perms.items():
        if sorted(p) != list(range(F)):
            raise ValidationError(f"image of generator {g} is not a permutation")
        inv = [0] * F
        for i, j in enumerate(p):
            inv[j] = i
        inverses[g] = tuple(inv)
    for r in P.relators:
        if any(_apply(r, perms, inverses, i) != i for i in range(F)):
            raise ValidationError("not a pi_1-action: a relator acts nontrivially")
    letters = P.edge_letters

    def move(u, v, i):
        x = letters[(u, v)]
        return _apply([x] if x else [], perms, inverses, i)

    faces = []
    for s in K.simplices:
        v0 = s[0]
        for i in range(F):
            faces.append([v0 * F + i] + [v * F + move(v0, v, i) for v in s[1:]])
    n = K.vertex_count
    labels = [f"({K.label(v)},{i})" for v in range(n) for i in range(F)]
    total = SimplicialComplex(n * F, faces, labels)
    proj = SimplicialMap(total, K, {v * F + i: v for v in range(n) for i in range(F)})
    return SimplicialCover(total, K, proj, F)


def deck_group(sc: SimplicialCover) -> FiniteGroup:
    T, proj = sc.total, sc.projection
    adj: dict[int, list[int]] = {v: [] for v in T.vertices()}
    for u, w in T.simplices_of_dim(1):
        adj[u].append(w)
        adj[w].append(u)
    comps = components(T)
    fiber_of = {}
    for v in T.vertices():
        fiber_of.setdefault(proj(v), []).append(v)

    def propagate(root, image):
        m = {root: image}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                cands = [z for z in adj[m[u]] if proj(z) == proj(w)]
                if len(cands) != 1:
                    return None
                if w in m:
                    if m[w] != cands[0]:
                        return None
                    continue
                m[w] = cands[0]
                queue.append(w)
        return m

    options = []
    for comp in comps:
        root = comp[0]
        opts = [m for t in fiber_of[proj(root)] if (m := propagate(root, t)) is not None]
        options.append(opts)
    perms = []
    for choice in itertools.product(*options):
        m = {}
        for part in choice:
            m.update(part)
        if len(set(m.values())) != len(m):
            continue
        if all(tuple(sorted(m[v] for v in s)) in T.simplices for s in T.simplices):
            perms.append(tuple(m.get(v, v) for v in range(T.vertex_count)))
    return closure_from_generators(T.vertex_count, perms)


# universal data for single-domain actions ------------------------------------------------

UNIVERSAL_BOUND = 20_000


@dataclass
class UniversalData:
    colimit_presentation: Presentation
    verdict: str
    finite_colimit: FiniteGroup | None = None
    kernel_rank: int | None = None
    covering_degree: int | None = None


def amalgam_presentation(family: Sequence[Subgroup]) -> Presentation:
    """The subgroups glued along their pairwise intersections, one generator per nonidentity element."""
    G = family[0].parent
    labels = []
    index = {}
    for i, H in enumerate(family):
        for h in H.elements:
            if h:
                index[(i, h)] = len(labels) + 1
                labels.append(("G", (i,), h))
    rels = []
    for i, H in enumerate(family):
        for x in H.elements:
            for y in H.elements:
                if x and y:
                    xy = G.mul(x, y)
                    rels.append(tuple([index[(i, x)], index[(i, y)]] + ([-index[(i, xy)]] if xy else [])))
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            for h in subgroup_intersection(family[i], family[j]).elements:
                if h:
                    rels.append((index[(i, h)], -index[(j, h)]))
    return Presentation(len(labels), tuple(rels), tuple(labels))


def _enumerate_colimit(P: Presentation, bound: int) -> FiniteGroup | None:
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    P = P.simplify()
    if P.generator_count == 0:
        return closure_from_generators(1, [])
    F, *gens = free_group(" ".join(f"x{k}" for k in range(1, P.generator_count + 1)))

    def word(r):
        w = F.identity
        for x in r:
            w = w * (gens[abs(x) - 1] if x > 0 else gens[abs(x) - 1] ** -1)
        return w

    fp = FpGroup(F, [word(r) for r in P.relators])
    try:
        table = fp.coset_enumeration([], max_cosets=bound)
    except ValueError:
        return None
    table.compress()
    table.standardize()
    rows = table.table
    perms = [[rows[c][2 * k] for c in range(len(rows))] for k in range(P.generator_count)]
    return closure_from_generators(len(rows), perms)


def single_domain_universal_data(G: FiniteGroup, family: Sequence[Subgroup],
                                 bound: int = UNIVERSAL_BOUND) -> UniversalData:
    P = amalgam_presentation(family)
    image_order = generated_subgroup(G, family).order
    try:
        amalgam_shape(family)
        rank = family_kernel_rank(family, image_order)
    except UnsupportedShape:
        rank = None
    if rank is not None and rank >= 1:
        return UniversalData(P, "infinite-certified", kernel_rank=rank)
    colim = _enumerate_colimit(P, bound)
    if colim is None:
        return UniversalData(P, "bound-exceeded", kernel_rank=rank)
    return UniversalData(P, "finite", colim, kernel_rank=rank,
                         covering_degree=colim.order // image_order)
