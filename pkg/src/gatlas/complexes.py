"""Simplicial complexes attached to atlases and relations.

Complexes keep every simplex explicitly as a sorted vertex tuple.  The
Dowker contiguity check on the double subdivision is done lazily over
maximal chains of chains, since materializing Sd^2 of a 5-simplex is
pointless.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import networkx as nx
from scipy.cluster.hierarchy import DisjointSet

from .atlas import Check, GroupoidAtlas, AtlasMorphism, CoordinateSystem, EquivalenceGroupoid, is_weak_morphism
from .errors import BoundExceeded, ValidationError
from .groups import FiniteGroup, Subgroup, subgroup_intersection

MAX_SIMPLICES = 20_000

Simplex = tuple[int, ...]


def _key(s: Simplex):
    return (len(s), s)


class SimplicialComplex:
    def __init__(self, vertex_count: int, simplices: Iterable[Iterable[int]],
                 vertex_labels: Sequence[str] | None = None, check: bool = True):
        simp = set()
        for s in simplices:
            t = tuple(sorted(set(int(v) for v in s)))
            if not t:
                continue
            if t[0] < 0 or t[-1] >= vertex_count:
                raise ValidationError(f"simplex {t} uses a vertex out of range")
            simp.add(t)
        self.vertex_count = vertex_count
        self.simplices = frozenset(simp)
        self.vertex_labels = list(vertex_labels) if vertex_labels is not None else None
        self._by_dim: dict[int, list[Simplex]] | None = None
        if check:
            for s in self.simplices:
                if len(s) > 1:
                    for i in range(len(s)):
                        if s[:i] + s[i + 1:] not in self.simplices:
                            raise ValidationError(f"face of {s} missing: not downward closed")

    @classmethod
    def from_maximal(cls, vertex_count: int, faces: Iterable[Iterable[int]],
                     vertex_labels=None, max_simplices: int = MAX_SIMPLICES) -> "SimplicialComplex":
        tops = {tuple(sorted(set(f))) for f in faces if f}
        simp: set[Simplex] = set()
        for f in sorted(tops, key=len, reverse=True):
            if f in simp:
                continue
            for r in range(1, len(f) + 1):
                simp.update(itertools.combinations(f, r))
                if len(simp) > max_simplices:
                    raise BoundExceeded(f"complex exceeds {max_simplices} simplices")
        return cls(vertex_count, simp, vertex_labels, check=False)

    def by_dim(self) -> dict[int, list[Simplex]]:
        if self._by_dim is None:
            d: dict[int, list[Simplex]] = {}
            for s in self.simplices:
                d.setdefault(len(s) - 1, []).append(s)
            for v in d.values():
                v.sort()
            self._by_dim = d
        return self._by_dim

    def simplices_of_dim(self, p: int) -> list[Simplex]:
        return self.by_dim().get(p, [])

    @property
    def dim(self) -> int:
        return max(self.by_dim(), default=-1)

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.simplices_of_dim(p)) for p in range(self.dim + 1))

    def sorted_simplices(self) -> list[Simplex]:
        return sorted(self.simplices, key=_key)

    def maximal_simplices(self) -> list[Simplex]:
        out = []
        for s in self.simplices:
            ss = set(s)
            if not any(len(t) == len(s) + 1 and ss.issubset(t) for t in self._cofaces_candidates(s)):
                out.append(s)
        return sorted(out, key=_key)

    def _cofaces_candidates(self, s):
        if not hasattr(self, "_star"):
            star: dict[int, list[Simplex]] = {}
            for t in self.simplices:
                for v in t:
                    star.setdefault(v, []).append(t)
            self._star = star
        return self._star.get(s[0], [])

    def vertices(self) -> list[int]:
        return [s[0] for s in self.simplices_of_dim(0)]

    def __contains__(self, s) -> bool:
        return tuple(sorted(set(s))) in self.simplices

    def __eq__(self, other) -> bool:
        return (isinstance(other, SimplicialComplex) and self.vertex_count == other.vertex_count
                and self.simplices == other.simplices)

    def __hash__(self):
        return hash((self.vertex_count, self.simplices))

    def label(self, v: int) -> str:
        return self.vertex_labels[v] if self.vertex_labels else str(v)

    def to_json(self) -> dict:
        return {"vertices": [self.label(v) for v in range(self.vertex_count)],
                "simplices": [list(s) for s in self.sorted_simplices()]}

    def to_text(self) -> str:
        return "".join(" ".join(map(str, s)) + "\n" for s in self.sorted_simplices())

    def __repr__(self):
        return f"SimplicialComplex(f_vector={self.f_vector()})"


def complex_from_json(data: Mapping) -> SimplicialComplex:
    verts = data["vertices"]
    n = verts if isinstance(verts, int) else len(verts)
    labels = None if isinstance(verts, int) else [str(v) for v in verts]
    return SimplicialComplex.from_maximal(n, data["simplices"], labels)


def complex_from_text(text: str, vertex_count: int | None = None) -> SimplicialComplex:
    faces = [tuple(int(t) for t in line.split()) for line in text.splitlines() if line.strip()]
    n = vertex_count if vertex_count is not None else 1 + max((max(f) for f in faces), default=-1)
    return SimplicialComplex.from_maximal(n, faces)


def full_simplex(n: int) -> SimplicialComplex:
    """The standard simplex on n + 1 vertices."""
    return SimplicialComplex.from_maximal(n + 1, [range(n + 1)])


def boundary_of_simplex(n: int) -> SimplicialComplex:
    """Boundary of the n-simplex."""
    return SimplicialComplex.from_maximal(n + 1, itertools.combinations(range(n + 1), n))


def cycle_graph(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_maximal(n, [(i, (i + 1) % n) for i in range(n)])


# relations and the Dowker pair -------------------------------------------------

@dataclass(frozen=True)
class Relation:
    left_size: int
    right_size: int
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        pairs = frozenset((int(x), int(y)) for x, y in self.pairs)
        for x, y in pairs:
            if not (0 <= x < self.left_size and 0 <= y < self.right_size):
                raise ValidationError(f"pair ({x},{y}) out of bounds")
        object.__setattr__(self, "pairs", pairs)

    def right_of(self, x: int) -> frozenset[int]:
        return frozenset(y for a, y in self.pairs if a == x)

    def left_of(self, y: int) -> frozenset[int]:
        return frozenset(x for x, b in self.pairs if b == y)

    def transpose(self) -> "Relation":
        return Relation(self.right_size, self.left_size, frozenset((y, x) for x, y in self.pairs))


def dowker_pair(R: Relation, max_simplices: int = MAX_SIMPLICES):
    """(K_R on the left set, L_R on the right set)."""
    left = [sorted(R.left_of(y)) for y in range(R.right_size)]
    right = [sorted(R.right_of(x)) for x in range(R.left_size)]
    K = SimplicialComplex.from_maximal(R.left_size, [f for f in left if f], max_simplices=max_simplices)
    L = SimplicialComplex.from_maximal(R.right_size, [f for f in right if f], max_simplices=max_simplices)
    return K, L


def vietoris_complex(A: GroupoidAtlas, max_simplices: int = MAX_SIMPLICES) -> SimplicialComplex:
    faces = {orb for _, orb in A.all_orbits()}
    labels = [A.point_label(x) for x in range(A.underlying_size)]
    return SimplicialComplex.from_maximal(A.underlying_size, faces, labels, max_simplices)


class NerveComplex(SimplicialComplex):
    """Nerve with its orbit dictionary.

    ``vertex_sets[v]`` is the orbit (as a point set) behind vertex v and
    ``sources[v]`` lists every ``(coordinate, orbit index)`` producing that set.
    """

    vertex_sets: tuple[tuple[int, ...], ...]
    sources: tuple[tuple[tuple[int, int], ...], ...]


def nerve_complex(A: GroupoidAtlas, max_simplices: int = MAX_SIMPLICES) -> NerveComplex:
    index: dict[tuple[int, ...], int] = {}
    sources: list[list[tuple[int, int]]] = []
    for a in range(A.n_coords):
        for i, orb in enumerate(A.orbits(a)):
            if orb not in index:
                index[orb] = len(index)
                sources.append([])
            sources[index[orb]].append((a, i))
    sets = sorted(index, key=index.get)
    through: dict[int, list[int]] = {}
    for v, orb in enumerate(sets):
        for x in orb:
            through.setdefault(x, []).append(v)
    labels = []
    for v, orb in enumerate(sets):
        a = sources[v][0][0]
        labels.append(f"{A.coords.label(a)}:{{" + ",".join(A.point_label(x) for x in orb) + "}")
    base = SimplicialComplex.from_maximal(len(sets), through.values(), labels, max_simplices)
    K = NerveComplex.__new__(NerveComplex)
    K.__dict__.update(base.__dict__)
    K.vertex_sets = tuple(sets)
    K.sources = tuple(tuple(s) for s in sources)
    return K


def membership_relation(A: GroupoidAtlas, nerve: NerveComplex | None = None) -> Relation:
    N = nerve if nerve is not None else nerve_complex(A)
    pairs = {(x, v) for v, orb in enumerate(N.vertex_sets) for x in orb}
    return Relation(A.underlying_size, N.vertex_count, frozenset(pairs))


def complex_atlas(K: SimplicialComplex) -> GroupoidAtlas:
    """One coordinate per maximal simplex, each a single-orbit equivalence relation."""
    tops = K.maximal_simplices()
    locals_ = [EquivalenceGroupoid(s, [s]) for s in tops]
    return GroupoidAtlas(K.vertex_count, CoordinateSystem.discrete(len(tops)), locals_,
                         point_labels=K.vertex_labels)


# subdivision, maps, contiguity ---------------------------------------------------

class Subdivision(SimplicialComplex):
    """Sd K; vertex v stands for the simplex ``cells[v]`` of K."""

    cells: tuple[Simplex, ...]


def barycentric_subdivision(K: SimplicialComplex, max_simplices: int = MAX_SIMPLICES) -> Subdivision:
    cells = K.sorted_simplices()
    where = {s: i for i, s in enumerate(cells)}
    flags = []
    for top in K.maximal_simplices():
        for perm in itertools.permutations(top):
            flags.append([where[tuple(sorted(perm[:r]))] for r in range(1, len(perm) + 1)])
    base = SimplicialComplex.from_maximal(len(cells), flags, ["{" + ",".join(K.label(v) for v in c) + "}" for c in cells],
                                          max_simplices)
    S = Subdivision.__new__(Subdivision)
    S.__dict__.update(base.__dict__)
    S.cells = tuple(cells)
    return S


class SimplicialMap:
    def __init__(self, source: SimplicialComplex, target: SimplicialComplex,
                 vertex_map: Mapping[int, int] | Sequence[int], check: bool = True):
        self.source, self.target = source, target
        if isinstance(vertex_map, Mapping):
            self.vertex_map = dict(vertex_map)
        else:
            self.vertex_map = {v: int(w) for v, w in enumerate(vertex_map)}
        if check:
            for s in source.maximal_simplices():
                if self.image(s) not in target.simplices:
                    raise ValidationError(f"image of {s} is not a simplex")

    def __call__(self, v: int) -> int:
        return self.vertex_map[v]

    def image(self, s: Iterable[int]) -> Simplex:
        return tuple(sorted({self.vertex_map[v] for v in s}))

    def compose_after(self, first: "SimplicialMap") -> "SimplicialMap":
        return SimplicialMap(first.source, self.target,
                             {v: self.vertex_map[w] for v, w in first.vertex_map.items()}, check=False)


def _rank_of(order: Sequence[int] | None, n: int) -> list[int]:
    """Position of each element in a given total order (default: natural order)."""
    if order is None:
        return list(range(n))
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValidationError("vertex order must list every vertex exactly once")
    rank = [0] * n
    for pos, v in enumerate(order):
        rank[v] = pos
    return rank


def dowker_phi(K: SimplicialComplex, vertex_order: Sequence[int] | None = None,
               subdivision: Subdivision | None = None) -> SimplicialMap:
    """Sd K -> K sending each simplex to its least vertex."""
    S = subdivision if subdivision is not None else barycentric_subdivision(K)
    rank = _rank_of(vertex_order, K.vertex_count)
    vm = {v: min(cell, key=rank.__getitem__) for v, cell in enumerate(S.cells)}
    return SimplicialMap(S, K, vm)


def _least_witness(candidates: Iterable[int], rank: Sequence[int]) -> int | None:
    return min(candidates, key=rank.__getitem__, default=None)


def dowker_psi(R: Relation, x_order: Sequence[int] | None = None,
               pair=None, subdivision: Subdivision | None = None) -> SimplicialMap:
    """Sd L_R -> K_R sending each simplex of L_R to its least common witness."""
    K, L = pair if pair is not None else dowker_pair(R)
    S = subdivision if subdivision is not None else barycentric_subdivision(L)
    rank = _rank_of(x_order, R.left_size)
    vm = {}
    for v, cell in enumerate(S.cells):
        common = set(R.left_of(cell[0]))
        for y in cell[1:]:
            common &= R.left_of(y)
        vm[v] = _least_witness(common, rank)
    return SimplicialMap(S, K, vm)


def dowker_psi_bar(R: Relation, y_order: Sequence[int] | None = None,
                   pair=None, subdivision: Subdivision | None = None) -> SimplicialMap:
    """Sd K_R -> L_R, the mirror of :func:`dowker_psi`."""
    K, L = pair if pair is not None else dowker_pair(R)
    return dowker_psi(R.transpose(), y_order, pair=(L, K), subdivision=subdivision)


def subdivide_map(f: SimplicialMap, source_sd: Subdivision, target_sd: Subdivision) -> SimplicialMap:
    where = {c: i for i, c in enumerate(target_sd.cells)}
    return SimplicialMap(source_sd, target_sd, {v: where[f.image(c)] for v, c in enumerate(source_sd.cells)})


def are_contiguous(f: SimplicialMap, g: SimplicialMap) -> Check:
    if f.source != g.source or f.target != g.target:
        raise ValidationError("contiguity needs maps with the same source and target")
    for s in f.source.maximal_simplices():
        u = set(f.image(s)) | set(g.image(s))
        if tuple(sorted(u)) not in f.target.simplices:
            return Check(False, {"simplex": s})
    return Check(True)


def _first_unwitnessed_chain(k: int, allowed: Mapping[int, set[int]], top: frozenset[int]):
    """A maximal chain of nonempty masks whose allowed sets have empty intersection, or None."""
    full = (1 << k) - 1
    seen: set[tuple[int, frozenset[int]]] = set()

    def search(used: int, common: frozenset[int], order: list[int]):
        if used == full:
            return None
        if (used, common) in seen:
            return None
        for j in range(k):
            if not used >> j & 1:
                nxt = common & allowed[used | 1 << j]
                if not nxt:
                    return order + [j]
                found = search(used | 1 << j, frozenset(nxt), order + [j])
                if found is not None:
                    return found
        seen.add((used, common))
        return None

    return search(0, top, [])


def dowker_contiguity(R: Relation, x_order: Sequence[int] | None = None,
                      y_order: Sequence[int] | None = None) -> Check:
    """Contiguity of phi_K phi'_K and psi psi-bar' on Sd^2 K_R, without building Sd^2.

    phi'_K is the least-vertex map of Sd K_R for an order on its vertices that
    extends inclusion (dimension first); psi-bar' is the subdivision of
    psi-bar.  Only maximal simplices of Sd^2 K_R are visited.
    """
    xr = _rank_of(x_order, R.left_size)
    yr = _rank_of(y_order, R.right_size)
    right = [R.right_of(x) for x in range(R.left_size)]
    left = [R.left_of(y) for y in range(R.right_size)]

    def witnesses_of(xs):
        it = iter(xs)
        common = set(right[next(it)])
        for x in it:
            common &= right[x]
        return common

    def cowitnesses_of(ys):
        it = iter(ys)
        common = set(left[next(it)])
        for y in it:
            common &= left[y]
        return common

    K, _ = dowker_pair(R)
    psibar: dict[Simplex, int] = {}
    chain_image: dict[tuple[Simplex, ...], set[int]] = {}
    for top in K.maximal_simplices():
        for flag in itertools.permutations(top):
            cells = [tuple(sorted(flag[:r])) for r in range(1, len(flag) + 1)]
            for c in cells:
                if c not in psibar:
                    psibar[c] = _least_witness(witnesses_of(c), yr)
            # a vertex of Sd^2 is a subchain of the flag, held here as a bit mask;
            # each maximal simplex is a maximal chain of masks
            k = len(cells)
            allowed = {}
            for mask in range(1, 1 << k):
                chain = tuple(cells[j] for j in range(k) if mask >> j & 1)
                if chain not in chain_image:
                    smallest = min(chain, key=len)
                    ys = {psibar[c] for c in chain}
                    pair = (min(smallest, key=xr.__getitem__), _least_witness(cowitnesses_of(ys), xr))
                    chain_image[chain] = right[pair[0]] & right[pair[1]]
                allowed[mask] = chain_image[chain]
            bad = _first_unwitnessed_chain(k, allowed, frozenset(allowed[(1 << k) - 1]))
            if bad is not None:
                return Check(False, {"flag": cells, "order": bad})
    return Check(True)


# invariants ---------------------------------------------------------------------

def euler_characteristic(K: SimplicialComplex) -> int:
    return sum((-1) ** p * n for p, n in enumerate(K.f_vector()))


def _dense_snf(rows: list[list[int]]) -> list[int]:
    A = [r[:] for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    out = []
    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        done = False
                        break
            if not done:
                continue
            p = A[t][t]
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for r in A:
                        r[j] -= q * r[t]
                    if A[t][j]:
                        for r in A:
                            r[t], r[j] = r[j], r[t]
                        done = False
                        break
            if not done:
                continue
            p = A[t][t]
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is not None:
                A[t] = [a + b for a, b in zip(A[t], A[bad])]
                continue
            break
        out.append(abs(A[t][t]))
        t += 1
    return out


def _sparse_snf(rows: list[dict[int, int]]) -> list[int]:
    """Invariants from unit-pivot elimination, finishing densely on what is left."""
    rows = [dict(r) for r in rows if r]
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            col_rows.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    units = 0
    changed = True
    while changed:
        changed = False
        for i in sorted(alive, key=lambda k: len(rows[k])):
            if i not in alive:
                continue
            r = rows[i]
            if not r:
                alive.discard(i)
                continue
            j = next((c for c in sorted(r, key=lambda c: len(col_rows[c])) if abs(r[c]) == 1), None)
            if j is None:
                continue
            v = r[j]
            for k in list(col_rows[j]):
                if k == i:
                    continue
                rk = rows[k]
                q = rk[j] * v  # v = +-1 so v^-1 = v
                for c, a in r.items():
                    nv = rk.get(c, 0) - q * a
                    if nv:
                        if c not in rk:
                            col_rows[c].add(k)
                        rk[c] = nv
                    elif c in rk:
                        del rk[c]
                        col_rows[c].discard(k)
                if not rk:
                    alive.discard(k)
            for c in r:
                col_rows[c].discard(i)
            alive.discard(i)
            units += 1
            changed = True
    rest = [rows[i] for i in sorted(alive) if rows[i]]
    cols = sorted({c for r in rest for c in r})
    dense = [[r.get(c, 0) for c in cols] for r in rest]
    return [1] * units + (_dense_snf(dense) if dense else [])


def smith_normal_form(M) -> tuple[tuple[int, ...], int]:
    """Nonzero diagonal invariants d1 | d2 | ... and the rank of an integer matrix."""
    rows = [[int(v) for v in r] for r in M]
    sparse = [{j: v for j, v in enumerate(r) if v} for r in rows]
    inv = sorted(_sparse_snf(sparse))
    return tuple(inv), len(inv)


def boundary_rows(K: SimplicialComplex, p: int) -> list[dict[int, int]]:
    """Row per p-simplex: its boundary as a sparse vector over (p-1)-simplices."""
    if p <= 0:
        return []
    faces = {s: i for i, s in enumerate(K.simplices_of_dim(p - 1))}
    rows = []
    for s in K.simplices_of_dim(p):
        rows.append({faces[s[:i] + s[i + 1:]]: (-1) ** i for i in range(len(s))})
    return rows


def homology(K: SimplicialComplex) -> list[tuple[int, tuple[int, ...]]]:
    """Integral homology: (betti number, torsion coefficients) per dimension."""
    d = K.dim
    invariants = {}
    for p in range(1, d + 2):
        rows = boundary_rows(K, p)
        invariants[p] = sorted(_sparse_snf(rows))
    out = []
    for p in range(d + 1):
        n = len(K.simplices_of_dim(p))
        rank_in = len(invariants.get(p, []))
        rank_out = len(invariants.get(p + 1, []))
        torsion = tuple(x for x in invariants.get(p + 1, []) if x > 1)
        out.append((n - rank_in - rank_out, torsion))
    return out


def same_homology(K: SimplicialComplex, L: SimplicialComplex) -> bool:
    """Equal homology in every degree; missing top degrees count as zero."""
    hk, hl = homology(K), homology(L)
    n = max(len(hk), len(hl))
    zero = (0, ())
    return hk + [zero] * (n - len(hk)) == hl + [zero] * (n - len(hl))


def components(K: SimplicialComplex) -> list[list[int]]:
    verts = K.vertices()
    ds = DisjointSet(verts)
    for u, v in K.simplices_of_dim(1):
        ds.merge(u, v)
    return sorted(sorted(s) for s in ds.subsets())


def is_closed_surface(K: SimplicialComplex) -> bool:
    if K.dim != 2 or len(components(K)) != 1:
        return False
    tri = K.simplices_of_dim(2)
    count = {e: 0 for e in K.simplices_of_dim(1)}
    for t in tri:
        for e in itertools.combinations(t, 2):
            count[e] += 1
    if any(c != 2 for c in count.values()):
        return False
    for v in K.vertices():
        link = nx.Graph()
        for t in tri:
            if v in t:
                a, b = [w for w in t if w != v]
                link.add_edge(a, b)
        if link.number_of_nodes() == 0 or not nx.is_connected(link):
            return False
        if any(deg != 2 for _, deg in link.degree()):
            return False
    return True


def face_graph(K: SimplicialComplex) -> nx.Graph:
    g = nx.Graph()
    for s in K.simplices:
        g.add_node(s, dim=len(s))
        if len(s) > 1:
            for i in range(len(s)):
                g.add_edge(s, s[:i] + s[i + 1:])
    return g


def is_isomorphic(K: SimplicialComplex, L: SimplicialComplex) -> bool:
    if K.f_vector() != L.f_vector():
        return False
    return nx.is_isomorphic(face_graph(K), face_graph(L), node_match=lambda a, b: a["dim"] == b["dim"])


# group action on the nerve ----------------------------------------------------------

@dataclass(frozen=True)
class GroupActionOnComplex:
    """Right action: ``perms[g][v]`` is v.g."""

    complex: SimplicialComplex
    group: FiniteGroup
    perms: tuple[tuple[int, ...], ...]

    def act(self, s: Iterable[int], g: int) -> Simplex:
        p = self.perms[g]
        return tuple(sorted(p[v] for v in s))


def nerve_g_action(A: GroupoidAtlas, nerve: NerveComplex | None = None) -> GroupActionOnComplex:
    G = A.group
    if G is None or A.underlying_size != G.order:
        raise ValidationError("right translation needs a single-domain atlas")
    N = nerve if nerve is not None else nerve_complex(A)
    where = {frozenset(orb): v for v, orb in enumerate(N.vertex_sets)}
    perms = []
    for g in range(G.order):
        perms.append(tuple(where[frozenset(G.mul(x, g) for x in orb)] for orb in N.vertex_sets))
    act = GroupActionOnComplex(N, G, tuple(perms))
    _check_action(act)
    return act


def _check_action(act: GroupActionOnComplex):
    G, K = act.group, act.complex
    for g in range(G.order):
        for h in range(G.order):
            gh = G.mul(g, h)
            pg, ph = act.perms[g], act.perms[h]
            if any(ph[pg[v]] != act.perms[gh][v] for v in range(K.vertex_count)):
                raise ValidationError("vertex maps do not form a right action")
    for s in K.simplices:
        for g in range(G.order):
            img = act.act(s, g)
            if img not in K.simplices:
                raise ValidationError("action does not preserve simplices")
            if img == s and any(act.perms[g][v] != v for v in s):
                raise ValidationError("action has an inversion")


class OrbitSpace(SimplicialComplex):
    """Quotient complex; ``vertex_class[v]`` is the quotient vertex of v."""

    vertex_class: tuple[int, ...]


def orbit_space(act: GroupActionOnComplex) -> OrbitSpace:
    K = act.complex
    cls = [-1] * K.vertex_count
    n = 0
    for v in range(K.vertex_count):
        if cls[v] < 0:
            for g in range(act.group.order):
                cls[act.perms[g][v]] = n
            n += 1
    faces = {tuple(sorted({cls[v] for v in s})) for s in K.simplices}
    base = SimplicialComplex(n, faces)
    Q = OrbitSpace.__new__(OrbitSpace)
    Q.__dict__.update(base.__dict__)
    Q.vertex_class = tuple(cls)
    return Q


def simplex_stabilizer(act: GroupActionOnComplex, s: Iterable[int]) -> Subgroup:
    s = tuple(sorted(s))
    elems = [g for g in range(act.group.order) if act.act(s, g) == s]
    return Subgroup(act.group, tuple(elems), tuple(e for e in elems if e))


def stabilizer_formula(A: GroupoidAtlas, N: NerveComplex, s: Iterable[int], a: int) -> Subgroup:
    """a^-1 (intersection of the local groups of the vertices of s) a, for a in every vertex."""
    G = A.group
    H = None
    for v in s:
        if a not in N.vertex_sets[v]:
            raise ValidationError("a must lie in every vertex of the simplex")
        K = A.subgroups[N.sources[v][0][0]]
        H = K if H is None else subgroup_intersection(H, K)
    ai = G.inv(a)
    elems = tuple(sorted(G.mul(G.mul(ai, h), a) for h in H.elements))
    return Subgroup(G, elems, tuple(e for e in elems if e))


# morphisms ---------------------------------------------------------------------------

def vietoris_on_morphism(f: AtlasMorphism, VA: SimplicialComplex | None = None,
                         VB: SimplicialComplex | None = None) -> SimplicialMap:
    chk = is_weak_morphism(f)
    if not chk:
        raise ValidationError(f"not a weak morphism: {chk.witness}")
    VA = VA if VA is not None else vietoris_complex(f.source)
    VB = VB if VB is not None else vietoris_complex(f.target)
    return SimplicialMap(VA, VB, f.point_map)


def nerve_on_morphism(f: AtlasMorphism, NA: NerveComplex | None = None,
                      NB: NerveComplex | None = None) -> SimplicialMap:
    if f.strong is None:
        raise ValidationError("strong witness required")
    NA = NA if NA is not None else nerve_complex(f.source)
    NB = NB if NB is not None else nerve_complex(f.target)
    where = {orb: v for v, orb in enumerate(NB.vertex_sets)}
    vm = {}
    for v, orb in enumerate(NA.vertex_sets):
        images = set()
        for a, _ in NA.sources[v]:
            loc = f.target.locals[f.strong.coord_map[a]]
            ids = {loc.orbit_id(f.point_map[x]) for x in orb}
            if len(ids) != 1 or None in ids:
                raise ValidationError(f"orbit {orb} does not land in one target orbit")
            images.add(where[loc.orbits[ids.pop()]])
        if len(images) != 1:
            raise ValidationError(f"orbit {orb} has inconsistent images across coordinates")
        vm[v] = images.pop()
    return SimplicialMap(NA, NB, vm)


def export_complex(K: SimplicialComplex, path: str) -> None:
    with open(path, "w") as fh:
        if path.endswith(".json"):
            json.dump(K.to_json(), fh, indent=1, sort_keys=True)
        else:
            fh.write(K.to_text())
