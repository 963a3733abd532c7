"""Groupoid atlases, global actions, and morphisms between them.

A local groupoid is stored through its generating arrows; orbits come from
union-find over those.  Three kinds of local groupoid cover everything the
package builds: group actions on a subset, equivalence relations, and
products of two local groupoids.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Sequence

from scipy.cluster.hierarchy import DisjointSet

from .errors import BoundExceeded, ValidationError
from .groups import (
    FiniteGroup,
    ModularRing,
    Subgroup,
    coset_space,
    general_linear_group,
    subgroup_intersection,
)


@dataclass(frozen=True)
class Check:
    """Boolean verdict plus an optional witness explaining a failure."""

    ok: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.ok


class LocalGroupoid:
    objects: frozenset[int]

    def __init__(self, objects: Iterable[int]):
        self.objects = frozenset(int(x) for x in objects)
        self._orbits: tuple[tuple[int, ...], ...] | None = None
        self._orbit_index: dict[int, int] | None = None

    # arrow interface, overridden per kind
    def source(self, a) -> int: ...
    def target(self, a) -> int: ...
    def compose(self, b, a): ...
    def inverse(self, a): ...
    def identity(self, x: int): ...
    def contains(self, a) -> bool: ...
    def arrows_from(self, x: int) -> list: ...
    def generators_from(self, x: int) -> list: ...

    def generating_arrows(self) -> list:
        out = []
        for x in sorted(self.objects):
            out.extend(self.generators_from(x))
        return out

    def _build_orbits(self):
        ds = DisjointSet(sorted(self.objects))
        for a in self.generating_arrows():
            ds.merge(self.source(a), self.target(a))
        orbits = sorted(tuple(sorted(s)) for s in ds.subsets())
        self._orbits = tuple(orbits)
        self._orbit_index = {x: i for i, orb in enumerate(orbits) for x in orb}

    @property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        if self._orbits is None:
            self._build_orbits()
        return self._orbits

    def orbit_id(self, x: int) -> int | None:
        if self._orbit_index is None:
            self._build_orbits()
        return self._orbit_index.get(x)

    def arrow_triples(self) -> list[tuple[int, int, Any]]:
        """(source, target, arrow) for the generating arrows and their inverses."""
        out = []
        for a in self.generating_arrows():
            out.append((self.source(a), self.target(a), a))
            b = self.inverse(a)
            out.append((self.source(b), self.target(b), b))
        return out


class ActionGroupoid(LocalGroupoid):
    """Arrows are pairs ``(g, x)`` going from x to g.x."""

    def __init__(self, objects, group: FiniteGroup, elements: Iterable[int],
                 generators: Iterable[int], act: Callable[[int, int], int]):
        super().__init__(objects)
        self.group = group
        self.elements = tuple(sorted(set(int(e) for e in elements)))
        self._members = frozenset(self.elements)
        self.gens = tuple(int(g) for g in generators if int(g) != 0)
        self.act = act
        for g in self.gens:
            if g not in self._members:
                raise ValidationError("generator outside the local group")
            for x in self.objects:
                if act(g, x) not in self.objects:
                    raise ValidationError(f"action leaves the local set at point {x}")

    def source(self, a):
        return a[1]

    def target(self, a):
        return self.act(a[0], a[1])

    def compose(self, b, a):
        if b[1] != self.target(a):
            raise ValidationError("arrows not composable")
        return (self.group.mul(b[0], a[0]), a[1])

    def inverse(self, a):
        return (self.group.inv(a[0]), self.target(a))

    def identity(self, x):
        return (0, x)

    def contains(self, a):
        return isinstance(a, tuple) and len(a) == 2 and a[0] in self._members and a[1] in self.objects

    def arrows_from(self, x):
        return [(h, x) for h in self.elements]

    def generators_from(self, x):
        return [(g, x) for g in self.gens]


class EquivalenceGroupoid(LocalGroupoid):
    """One arrow ``(x, y)`` for every related pair."""

    def __init__(self, objects, blocks: Iterable[Iterable[int]]):
        super().__init__(objects)
        self._block_of: dict[int, tuple[int, ...]] = {}
        for b in blocks:
            b = tuple(sorted(set(int(x) for x in b)))
            for x in b:
                if x not in self.objects or x in self._block_of:
                    raise ValidationError("blocks must partition the objects")
                self._block_of[x] = b
        for x in self.objects:
            self._block_of.setdefault(x, (x,))

    @classmethod
    def generated(cls, objects, pairs: Iterable[tuple[int, int]]) -> "EquivalenceGroupoid":
        objects = sorted(set(int(x) for x in objects))
        ds = DisjointSet(objects)
        for s, t in pairs:
            if s not in ds or t not in ds:
                raise ValidationError(f"arrow ({s},{t}) leaves the local set")
            ds.merge(s, t)
        return cls(objects, ds.subsets())

    def source(self, a):
        return a[0]

    def target(self, a):
        return a[1]

    def compose(self, b, a):
        if b[0] != a[1]:
            raise ValidationError("arrows not composable")
        return (a[0], b[1])

    def inverse(self, a):
        return (a[1], a[0])

    def identity(self, x):
        return (x, x)

    def contains(self, a):
        return (isinstance(a, tuple) and len(a) == 2 and a[0] in self.objects
                and a[1] in self._block_of.get(a[0], ()))

    def arrows_from(self, x):
        return [(x, y) for y in self._block_of[x]]

    def generators_from(self, x):
        return [(x, y) for y in self._block_of[x] if y != x]


class ProductGroupoid(LocalGroupoid):
    """Product of two local groupoids; object (x, y) is encoded as x * width + y."""

    def __init__(self, left: LocalGroupoid, right: LocalGroupoid, width: int):
        self.left, self.right, self.width = left, right, width
        super().__init__(x * width + y for x in left.objects for y in right.objects)

    def _split(self, z):
        return divmod(z, self.width)

    def source(self, a):
        return self.left.source(a[0]) * self.width + self.right.source(a[1])

    def target(self, a):
        return self.left.target(a[0]) * self.width + self.right.target(a[1])

    def compose(self, b, a):
        return (self.left.compose(b[0], a[0]), self.right.compose(b[1], a[1]))

    def inverse(self, a):
        return (self.left.inverse(a[0]), self.right.inverse(a[1]))

    def identity(self, z):
        x, y = self._split(z)
        return (self.left.identity(x), self.right.identity(y))

    def contains(self, a):
        return (isinstance(a, tuple) and len(a) == 2
                and self.left.contains(a[0]) and self.right.contains(a[1]))

    def arrows_from(self, z):
        x, y = self._split(z)
        return [(p, q) for p in self.left.arrows_from(x) for q in self.right.arrows_from(y)]

    def generators_from(self, z):
        x, y = self._split(z)
        out = [(g, self.right.identity(y)) for g in self.left.generators_from(x)]
        out += [(self.left.identity(x), g) for g in self.right.generators_from(y)]
        return out


@dataclass(frozen=True)
class CoordinateSystem:
    size: int
    leq: frozenset[tuple[int, int]]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        pairs = set()
        for a, b in self.leq:
            if not (0 <= a < self.size and 0 <= b < self.size):
                raise ValidationError(f"relation pair ({a},{b}) out of range")
            pairs.add((int(a), int(b)))
        pairs.update((a, a) for a in range(self.size))
        object.__setattr__(self, "leq", frozenset(pairs))

    @classmethod
    def discrete(cls, size: int, labels=None) -> "CoordinateSystem":
        return cls(size, frozenset(), labels)

    def le(self, a: int, b: int) -> bool:
        return (a, b) in self.leq

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)


StructureMap = Callable[[Any], Any]


class GroupoidAtlas:
    def __init__(self, underlying_size: int, coords: CoordinateSystem,
                 locals_: Sequence[LocalGroupoid],
                 structure_maps: Mapping[tuple[int, int], StructureMap] | None = None,
                 point_labels: Sequence[str] | None = None,
                 base_point: int | None = None,
                 group: FiniteGroup | None = None,
                 subgroups: Sequence[Subgroup] | None = None):
        if len(locals_) != coords.size:
            raise ValidationError("need one local groupoid per coordinate")
        self.underlying_size = underlying_size
        self.coords = coords
        self.locals = tuple(locals_)
        self.structure_maps = dict(structure_maps or {})
        self.point_labels = list(point_labels) if point_labels is not None else None
        self.base_point = base_point
        self.group = group
        self.subgroups = tuple(subgroups) if subgroups is not None else None
        for loc in self.locals:
            for x in loc.objects:
                if not 0 <= x < underlying_size:
                    raise ValidationError(f"local object {x} outside the underlying set")
        self._validate_overlaps()

    def _validate_overlaps(self):
        for a, b in sorted(self.coords.leq):
            if a == b:
                continue
            la, lb = self.locals[a], self.locals[b]
            inter = la.objects & lb.objects
            for orb in la.orbits:
                hit = inter.intersection(orb)
                if hit and len(hit) != len(orb):
                    raise ValidationError(
                        f"overlap of coordinates {a} <= {b} is not a union of orbits of {a}")
            phi = self.structure_map(a, b)
            for x in sorted(inter):
                for g in la.generators_from(x):
                    h = phi(g)
                    if not lb.contains(h) or lb.source(h) != la.source(g) or lb.target(h) != la.target(g):
                        raise ValidationError(f"structure map {a} -> {b} does not respect arrow {g}")

    def structure_map(self, a: int, b: int) -> StructureMap:
        return self.structure_maps.get((a, b), _identity_map)

    @property
    def n_coords(self) -> int:
        return self.coords.size

    def local_set(self, a: int) -> frozenset[int]:
        return self.locals[a].objects

    def orbits(self, a: int) -> tuple[tuple[int, ...], ...]:
        return self.locals[a].orbits

    def all_orbits(self) -> list[tuple[int, tuple[int, ...]]]:
        return [(a, orb) for a in range(self.n_coords) for orb in self.orbits(a)]

    def common_coords(self, points: Iterable[int]) -> list[int]:
        """Coordinates having one orbit that contains every given point."""
        pts = list(points)
        out = []
        for a, loc in enumerate(self.locals):
            ids = {loc.orbit_id(x) for x in pts}
            if len(ids) == 1 and None not in ids:
                out.append(a)
        return out

    def is_frame(self, a: int, points: Sequence[int]) -> bool:
        loc = self.locals[a]
        ids = {loc.orbit_id(x) for x in points}
        return len(points) > 0 and len(ids) == 1 and None not in ids

    def point_label(self, x: int) -> str:
        return self.point_labels[x] if self.point_labels else str(x)

    def __repr__(self) -> str:
        return f"GroupoidAtlas(points={self.underlying_size}, coords={self.n_coords})"


def _identity_map(a):
    return a


@dataclass(frozen=True)
class LocalFrame:
    coord: int
    points: tuple[int, ...]


def make_frame(A: GroupoidAtlas, coord: int, points: Sequence[int]) -> LocalFrame:
    if not A.is_frame(coord, points):
        raise ValidationError(f"{list(points)} is not a frame at coordinate {coord}")
    return LocalFrame(coord, tuple(points))


@dataclass(frozen=True)
class StrongWitness:
    """Coordinate map plus arrow images.

    ``arrow_map`` is either a callable ``(coord, arrow) -> arrow`` or a mapping
    keyed by ``(coord, arrow)``; a mapping may omit identities and inverses of
    listed arrows.
    """

    coord_map: tuple[int, ...]
    arrow_map: Callable[[int, Any], Any] | Mapping[tuple[int, Any], Any]


@dataclass(frozen=True)
class AtlasMorphism:
    source: GroupoidAtlas
    target: GroupoidAtlas
    point_map: tuple[int, ...]
    strong: StrongWitness | None = None

    def __post_init__(self):
        object.__setattr__(self, "point_map", tuple(int(v) for v in self.point_map))
        if len(self.point_map) != self.source.underlying_size:
            raise ValidationError("point map must be total on the source")
        if any(not 0 <= v < self.target.underlying_size for v in self.point_map):
            raise ValidationError("point map leaves the target")

    def __call__(self, x: int) -> int:
        return self.point_map[x]

    def compose_after(self, first: "AtlasMorphism") -> "AtlasMorphism":
        """self o first (weak part only, plus witnesses when both exist)."""
        pm = tuple(self.point_map[v] for v in first.point_map)
        strong = None
        if self.strong is not None and first.strong is not None:
            s1, s2 = first.strong, self.strong
            cm = tuple(s2.coord_map[c] for c in s1.coord_map)

            def amap(c, a, _s1=s1, _s2=s2, _f=first, _g=self):
                mid = _arrow_image(_s1, c, a, _f.source.locals[c], _f.target.locals[_s1.coord_map[c]], _f.point_map)
                c2 = _s1.coord_map[c]
                return _arrow_image(_s2, c2, mid, _g.source.locals[c2], _g.target.locals[_s2.coord_map[c2]], _g.point_map)

            strong = StrongWitness(cm, amap)
        return AtlasMorphism(first.source, self.target, pm, strong)


def identity_morphism(A: GroupoidAtlas) -> AtlasMorphism:
    return AtlasMorphism(A, A, tuple(range(A.underlying_size)),
                         StrongWitness(tuple(range(A.n_coords)), lambda c, a: a))


def is_weak_morphism(f: AtlasMorphism) -> Check:
    A, B = f.source, f.target
    membership: dict[int, set[tuple[int, int]]] = {}
    for b, loc in enumerate(B.locals):
        for i, orb in enumerate(loc.orbits):
            for y in orb:
                membership.setdefault(y, set()).add((b, i))
    for a in range(A.n_coords):
        for orb in A.orbits(a):
            image = sorted({f.point_map[x] for x in orb})
            common = set(membership.get(image[0], ()))
            for y in image[1:]:
                common &= membership.get(y, set())
                if not common:
                    break
            if not common:
                return Check(False, {"coord": a, "orbit": orb, "image": image})
    return Check(True)


def _arrow_image(w: StrongWitness, coord: int, arrow, src: LocalGroupoid, tgt: LocalGroupoid,
                 point_map: Sequence[int]):
    if callable(w.arrow_map):
        return w.arrow_map(coord, arrow)
    table = w.arrow_map
    if (coord, arrow) in table:
        return table[(coord, arrow)]
    inv = src.inverse(arrow)
    if (coord, inv) in table:
        return tgt.inverse(table[(coord, inv)])
    x = src.source(arrow)
    if arrow == src.identity(x):
        return tgt.identity(point_map[x])
    return None


def is_strong_morphism(f: AtlasMorphism) -> Check:
    if f.strong is None:
        raise ValidationError("no strong witness supplied")
    A, B, w = f.source, f.target, f.strong
    eta = w.coord_map
    if len(eta) != A.n_coords or any(not 0 <= c < B.n_coords for c in eta):
        return Check(False, {"reason": "coordinate map is not total"})
    for a, b in A.coords.leq:
        if not B.coords.le(eta[a], eta[b]):
            return Check(False, {"reason": "coordinate map breaks the relation", "pair": (a, b)})
    pm = f.point_map

    def image(c, arrow):
        return _arrow_image(w, c, arrow, A.locals[c], B.locals[eta[c]], pm)

    for a in range(A.n_coords):
        src, tgt = A.locals[a], B.locals[eta[a]]
        for x in sorted(src.objects):
            if pm[x] not in tgt.objects:
                return Check(False, {"reason": "point leaves the image local set", "coord": a, "point": x})
        for orb in src.orbits:
            cache = {}
            for x in orb:
                for arr in src.arrows_from(x):
                    im = image(a, arr)
                    if im is None:
                        return Check(False, {"reason": "arrow map undefined", "coord": a, "arrow": arr})
                    if (not tgt.contains(im) or tgt.source(im) != pm[src.source(arr)]
                            or tgt.target(im) != pm[src.target(arr)]):
                        return Check(False, {"reason": "arrow image has wrong ends", "coord": a, "arrow": arr})
                    cache[arr] = im
            into: dict[int, list] = {}
            for x in orb:
                for g in src.generators_from(x):
                    into.setdefault(src.target(g), []).append(src.inverse(g))
            for x in orb:
                if cache[src.identity(x)] != tgt.identity(pm[x]):
                    return Check(False, {"reason": "identity not preserved", "coord": a, "point": x})
                for arr in src.arrows_from(x):
                    y = src.target(arr)
                    for g in src.generators_from(y) + into.get(y, []):
                        if cache[src.compose(g, arr)] != tgt.compose(cache[g] if g in cache else image(a, g), cache[arr]):
                            return Check(False, {"reason": "composition not preserved", "coord": a,
                                                 "arrows": (g, arr)})
    for a, a2 in sorted(A.coords.leq):
        if a == a2:
            continue
        phi = A.structure_map(a, a2)
        psi = B.structure_map(eta[a], eta[a2]) if eta[a] != eta[a2] else _identity_map
        src = A.locals[a]
        for x in sorted(src.objects & A.locals[a2].objects):
            for arr in src.arrows_from(x):
                if image(a2, phi(arr)) != psi(image(a, arr)):
                    return Check(False, {"reason": "naturality square fails", "pair": (a, a2), "arrow": arr})
    return Check(True)


def check_infimum(A: GroupoidAtlas, max_frame_size: int = 3) -> Check:
    seen: set[frozenset] = set()
    for a in range(A.n_coords):
        for orb in A.orbits(a):
            for k in range(1, min(max_frame_size, len(orb)) + 1):
                for U in itertools.combinations(orb, k):
                    key = frozenset(U)
                    if key in seen:
                        continue
                    seen.add(key)
                    S = A.common_coords(U)
                    if not any(all(A.coords.le(lam, mu) for mu in S) for lam in S):
                        return Check(False, {"frame": U, "coords": S})
    return Check(True)


def is_volodin_model(G: FiniteGroup, subgroups: Sequence[Subgroup], coords: CoordinateSystem) -> Check:
    from .groups import generated_subgroup

    k = len(subgroups)
    if coords.size != k:
        return Check(False, "coordinate count differs from subgroup count")
    if len({H for H in subgroups}) != k:
        return Check(False, "distinct indices carry equal subgroups")
    for a in range(k):
        for b in range(k):
            if coords.le(a, b) != subgroups[a].issubset(subgroups[b]):
                return Check(False, f"order disagrees with inclusion at ({a},{b})")
    if not any(H.is_trivial() for H in subgroups):
        return Check(False, "trivial subgroup missing")
    family = set(subgroups)
    for a in range(k):
        for b in range(a + 1, k):
            if subgroup_intersection(subgroups[a], subgroups[b]) not in family:
                return Check(False, f"intersection of {a} and {b} missing")
            if any(subgroups[a].issubset(C) and subgroups[b].issubset(C) for C in subgroups):
                if generated_subgroup(G, [subgroups[a], subgroups[b]]) not in family:
                    return Check(False, f"subgroup generated by {a} and {b} missing")
    return Check(True)


# constructions ---------------------------------------------------------------

def build_single_domain(G: FiniteGroup, subgroups: Sequence[Subgroup]) -> GroupoidAtlas:
    if not subgroups:
        raise ValidationError("need at least one subgroup")
    everything = range(G.order)
    locals_ = [ActionGroupoid(everything, G, H.elements, H.generators or H.elements, G.mul)
               for H in subgroups]
    return GroupoidAtlas(G.order, CoordinateSystem.discrete(len(subgroups)), locals_,
                         point_labels=G.element_labels, base_point=0, group=G, subgroups=subgroups)


def build_relative(G: FiniteGroup, K: Subgroup, subgroups: Sequence[Subgroup]) -> GroupoidAtlas:
    if not subgroups:
        raise ValidationError("need at least one subgroup")
    blocks = coset_space(K)
    where = {x: i for i, b in enumerate(blocks) for x in b}

    def act(g, c):
        return where[G.mul(g, blocks[c][0])]

    locals_ = [ActionGroupoid(range(len(blocks)), G, H.elements, H.generators or H.elements, act)
               for H in subgroups]
    labels = [G.label(b[0]) + "K" for b in blocks]
    return GroupoidAtlas(len(blocks), CoordinateSystem.discrete(len(subgroups)), locals_,
                         point_labels=labels, base_point=where[0], group=G, subgroups=subgroups)


def subset_coordinates(k: int) -> list[tuple[int, ...]]:
    subs = [c for r in range(1, k + 1) for c in itertools.combinations(range(k), r)]
    return sorted(subs, key=lambda s: (len(s), s))


def build_intersection_closure(G: FiniteGroup, subgroups: Sequence[Subgroup], max_family: int = 12) -> GroupoidAtlas:
    k = len(subgroups)
    if k == 0:
        raise ValidationError("need at least one subgroup")
    if k > max_family:
        raise BoundExceeded(f"{2**k - 1} subset coordinates exceed the bound")
    subs = subset_coordinates(k)
    groups = []
    for s in subs:
        H = subgroups[s[0]]
        for i in s[1:]:
            H = subgroup_intersection(H, subgroups[i])
        groups.append(H)
    leq = {(i, j) for i, s in enumerate(subs) for j, t in enumerate(subs) if set(s) >= set(t)}
    labels = tuple("{" + ",".join(map(str, s)) + "}" for s in subs)
    locals_ = [ActionGroupoid(range(G.order), G, H.elements, [e for e in H.elements if e], G.mul)
               for H in groups]
    A = GroupoidAtlas(G.order, CoordinateSystem(len(subs), frozenset(leq), labels), locals_,
                      point_labels=G.element_labels, base_point=0, group=G, subgroups=groups)
    A.subset_labels = subs
    return A


def closed_subsets(n: int) -> list[frozenset[tuple[int, int]]]:
    delta = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    out = []
    for r in range(len(delta) + 1):
        for c in itertools.combinations(delta, r):
            s = set(c)
            if all((i, k) in s for (i, j) in s for (j2, k) in s if j == j2):
                out.append(frozenset(s))
    return out


def build_gl(n: int, ring: ModularRing, group_data=None) -> GroupoidAtlas:
    G, elementary = group_data or general_linear_group(n, ring)
    subsets = closed_subsets(n)
    locals_, groups = [], []
    for alpha in subsets:
        gens = [elementary[(i, j, r)] for (i, j) in sorted(alpha) for r in range(1, ring.modulus)]
        H = G.subgroup(gens)
        groups.append(H)
        locals_.append(ActionGroupoid(range(G.order), G, H.elements, gens, G.mul))
    leq = {(a, b) for a, s in enumerate(subsets) for b, t in enumerate(subsets) if s <= t}
    labels = tuple("{" + ",".join(f"{i}{j}" for i, j in sorted(s)) + "}" for s in subsets)
    A = GroupoidAtlas(G.order, CoordinateSystem(len(subsets), frozenset(leq), labels), locals_,
                      point_labels=G.element_labels, base_point=0, group=G, subgroups=groups)
    A.closed_subsets = subsets
    A.elementary = elementary
    return A


def terminal_atlas() -> GroupoidAtlas:
    return GroupoidAtlas(1, CoordinateSystem.discrete(1), [EquivalenceGroupoid([0], [[0]])], base_point=0)


def product_atlas(A: GroupoidAtlas, B: GroupoidAtlas):
    """Returns ``(A x B, projection to A, projection to B)``."""
    nb, mb = B.underlying_size, B.n_coords
    locals_, smaps = [], {}
    for a in range(A.n_coords):
        for b in range(mb):
            locals_.append(ProductGroupoid(A.locals[a], B.locals[b], nb))
    leq = set()
    for a, a2 in A.coords.leq:
        for b, b2 in B.coords.leq:
            i, j = a * mb + b, a2 * mb + b2
            leq.add((i, j))
            if i != j:
                fa, fb = A.structure_map(a, a2), B.structure_map(b, b2)
                smaps[(i, j)] = lambda arr, fa=fa, fb=fb: (fa(arr[0]), fb(arr[1]))
    labels = tuple(f"({A.coords.label(a)},{B.coords.label(b)})" for a in range(A.n_coords) for b in range(mb))
    points = tuple(f"({A.point_label(x)},{B.point_label(y)})"
                   for x in range(A.underlying_size) for y in range(nb))
    base = None
    if A.base_point is not None and B.base_point is not None:
        base = A.base_point * nb + B.base_point
    P = GroupoidAtlas(A.underlying_size * nb, CoordinateSystem(len(locals_), frozenset(leq), labels),
                      locals_, smaps, points, base)
    pa = AtlasMorphism(P, A, tuple(z // nb for z in range(P.underlying_size)),
                       StrongWitness(tuple(c // mb for c in range(P.n_coords)), lambda c, arr: arr[0]))
    pb = AtlasMorphism(P, B, tuple(z % nb for z in range(P.underlying_size)),
                       StrongWitness(tuple(c % mb for c in range(P.n_coords)), lambda c, arr: arr[1]))
    return P, pa, pb


def equiv_atlas(A: GroupoidAtlas):
    """Returns ``(Equiv(A), quotient morphism A -> Equiv(A))``."""
    locals_ = [EquivalenceGroupoid(loc.objects, loc.orbits) for loc in A.locals]
    E = GroupoidAtlas(A.underlying_size, A.coords, locals_, point_labels=A.point_labels,
                      base_point=A.base_point)

    def amap(c, arr):
        loc = A.locals[c]
        return (loc.source(arr), loc.target(arr))

    q = AtlasMorphism(A, E, tuple(range(A.underlying_size)),
                      StrongWitness(tuple(range(A.n_coords)), amap))
    return E, q


def disjoint_union(A: GroupoidAtlas, B: GroupoidAtlas) -> GroupoidAtlas:
    """Coordinates of A then of B; points of A then of B."""
    na = A.underlying_size
    locals_ = [EquivalenceGroupoid(loc.objects, loc.orbits) for loc in A.locals]
    locals_ += [EquivalenceGroupoid([x + na for x in loc.objects],
                                    [[x + na for x in o] for o in loc.orbits]) for loc in B.locals]
    ma = A.n_coords
    leq = set(A.coords.leq) | {(a + ma, b + ma) for a, b in B.coords.leq}
    return GroupoidAtlas(na + B.underlying_size, CoordinateSystem(len(locals_), frozenset(leq)), locals_)


def explicit_atlas(points: int, coords: int, leq_pairs: Iterable[Sequence[int]],
                   local: Sequence[Mapping[str, Any]], point_labels=None) -> GroupoidAtlas:
    """Atlas whose local groupoids are the equivalence relations generated by listed arrows."""
    locals_ = [EquivalenceGroupoid.generated(spec["objects"], [tuple(p) for p in spec.get("arrows", [])])
               for spec in local]
    cs = CoordinateSystem(coords, frozenset(tuple(p) for p in leq_pairs))
    return GroupoidAtlas(points, cs, locals_, point_labels=point_labels)


def maximal_closed_subsets(n: int) -> list[frozenset[tuple[int, int]]]:
    subs = closed_subsets(n)
    return [s for s in subs if not any(s < t for t in subs)]


def is_total_order(alpha: frozenset[tuple[int, int]], n: int) -> bool:
    """alpha, read as i < j, is a strict total order on 1..n."""
    return len(alpha) == n * (n - 1) // 2 and all(
        ((i, j) in alpha) != ((j, i) in alpha) for i in range(1, n + 1) for j in range(i + 1, n + 1))
