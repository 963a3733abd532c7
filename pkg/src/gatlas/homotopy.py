"""Paths, homotopy grids, connected components and fundamental-group presentations.

Paths are finite point sequences with window (0, N); outside the window
they are constant.  Fundamental groups are computed on complexes as
edge-path groups; loop words in a single-domain atlas are compared through
normal forms in the amalgamated product of the subgroup family.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from scipy.cluster.hierarchy import DisjointSet

from .atlas import Check, GroupoidAtlas
from .complexes import SimplicialComplex, _sparse_snf
from .errors import BoundExceeded, UnsupportedShape, ValidationError
from .groups import Subgroup, Word, subgroup_intersection


@dataclass(frozen=True)
class Path:
    points: tuple[int, ...]

    def __post_init__(self):
        if not self.points:
            raise ValidationError("a path needs at least one point")
        object.__setattr__(self, "points", tuple(int(p) for p in self.points))

    @property
    def window(self) -> tuple[int, int]:
        return (0, len(self.points) - 1)

    @property
    def start(self) -> int:
        return self.points[0]

    @property
    def end(self) -> int:
        return self.points[-1]

    def __len__(self):
        return len(self.points)

    def at(self, n: int) -> int:
        """Value at any integer time; constant outside the window."""
        return self.points[min(max(n, 0), len(self.points) - 1)]

    def reverse(self) -> "Path":
        return Path(self.points[::-1])


@dataclass(frozen=True)
class StrongPath:
    points: tuple[int, ...]
    steps: tuple[tuple[int, object], ...]


def validate_path(A: GroupoidAtlas, pts: Sequence[int]) -> Path:
    pts = list(pts)
    if not pts:
        raise ValidationError("empty point list")
    bad = [n for n in range(len(pts) - 1) if not A.common_coords(pts[n:n + 2])]
    if len(pts) == 1 and not A.common_coords(pts):
        bad = [0]
    if bad:
        raise ValidationError("no common orbit at steps " + ", ".join(map(str, bad)))
    return Path(tuple(pts))


def validate_strong_path(A: GroupoidAtlas, sp: StrongPath) -> Check:
    if len(sp.steps) != len(sp.points) - 1:
        return Check(False, "one step per consecutive pair is required")
    for n, (c, arrow) in enumerate(sp.steps):
        loc = A.locals[c]
        if not loc.contains(arrow) or loc.source(arrow) != sp.points[n] or loc.target(arrow) != sp.points[n + 1]:
            return Check(False, {"step": n})
    return Check(True)


def concat(f: Path, g: Path) -> Path:
    if f.end != g.start:
        raise ValidationError("end of the first path differs from the start of the second")
    return Path(f.points + g.points[1:])


def pi0(A: GroupoidAtlas) -> list[list[int]]:
    ds = DisjointSet(range(A.underlying_size))
    for _, orb in A.all_orbits():
        for x in orb[1:]:
            ds.merge(orb[0], x)
    return sorted(sorted(s) for s in ds.subsets())


# homotopy grids ---------------------------------------------------------------------

@dataclass(frozen=True)
class HomotopyGrid:
    """Rows are paths from bottom to top; shorter rows are padded by their end value."""

    rows: tuple[Path, ...]

    def width(self) -> int:
        return max(len(r) for r in self.rows)

    def value(self, n: int, m: int) -> int:
        return self.rows[n].at(m)


def validate_homotopy(A: GroupoidAtlas, h: HomotopyGrid) -> Check:
    if not h.rows:
        return Check(False, "empty grid")
    w = h.width()
    starts = {r.start for r in h.rows}
    ends = {r.end for r in h.rows}
    if len(starts) != 1 or len(ends) != 1:
        return Check(False, {"reason": "end points move"})
    for n, r in enumerate(h.rows):
        for m in range(w - 1):
            if not A.common_coords([r.at(m), r.at(m + 1)]):
                return Check(False, {"reason": "row is not a path", "row": n, "column": m})
    for n in range(len(h.rows) - 1):
        for m in range(w - 1):
            corners = {h.value(n, m), h.value(n, m + 1), h.value(n + 1, m), h.value(n + 1, m + 1)}
            if not A.common_coords(corners):
                return Check(False, {"reason": "square in no orbit", "row": n, "column": m})
    return Check(True)


def _ripple_rows(points: list[int], i: int, stop: int) -> list[list[int]]:
    """Move a repeat at positions (i, i+1) rightwards until it sits at (stop, stop+1)."""
    rows = []
    row = list(points)
    while i < stop:
        row = row[:i + 1] + [row[i + 2]] + row[i + 2:]
        rows.append(row)
        i += 1
    return rows


def ripple_normalize(f: Path) -> tuple[Path, HomotopyGrid]:
    """Drop identity steps; returns the reduced path and a certifying grid."""
    row = list(f.points)
    rows = [list(row)]
    while True:
        tail = len(row) - 1
        while tail > 0 and row[tail - 1] == row[tail]:
            tail -= 1
        i = next((k for k in range(tail) if row[k] == row[k + 1]), None)
        if i is None:
            break
        moved = _ripple_rows(row, i, len(row) - 2)
        rows.extend(moved)
        row = moved[-1] if moved else row
    reduced = row[:tail + 1]
    return Path(tuple(reduced)), HomotopyGrid(tuple(Path(tuple(r)) for r in rows))


def shift_grid(f: Path) -> HomotopyGrid:
    """Homotopy from f to its one-step delay n -> f(n - 1)."""
    delayed = [f.start] + list(f.points)
    rows = [delayed] + _ripple_rows(delayed, 0, len(delayed) - 2)
    return HomotopyGrid(tuple(Path(tuple(r)) for r in reversed(rows)))


def cancellation_grid(f: Path) -> HomotopyGrid:
    """Homotopy from f * reverse(f) to the constant path, shrinking the turn point."""
    p = f.points
    N = len(p) - 1
    rows = []
    for k in range(N + 1):
        turn = N - k
        row = [p[min(i, turn)] if i <= N else p[min(2 * N - i, turn)] for i in range(2 * N + 1)]
        rows.append(Path(tuple(row)))
    return HomotopyGrid(tuple(rows))


# presentations ----------------------------------------------------------------------

def free_reduce(word: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> tuple[int, ...]:
    w = list(free_reduce(word))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def invert_word(word: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(word))


def canonical_relator(word: Sequence[int]) -> tuple[int, ...]:
    w = cyclic_reduce(word)
    if not w:
        return w
    cands = []
    for v in (w, invert_word(w)):
        cands.extend(v[i:] + v[:i] for i in range(len(v)))
    return min(cands)


@dataclass(frozen=True)
class Presentation:
    """Generators 1..n; relators are words of signed generator numbers."""

    generator_count: int
    relators: tuple[tuple[int, ...], ...]
    generator_labels: tuple[Hashable, ...] | None = None
    edge_letters: dict | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(tuple(int(x) for x in r) for r in self.relators))
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > self.generator_count:
                    raise ValidationError(f"relator letter {x} out of range")
        if self.generator_labels is not None and len(self.generator_labels) != self.generator_count:
            raise ValidationError("one label per generator")

    def label(self, k: int) -> Hashable:
        return self.generator_labels[k - 1] if self.generator_labels else f"g{k}"

    def __str__(self) -> str:
        gens = ",".join(f"g{k}" for k in range(1, self.generator_count + 1))
        rels = ",".join(" ".join(f"g{abs(x)}^{1 if x > 0 else -1}" for x in r) for r in self.relators)
        return f"<{gens} | {rels}>"

    def simplify(self, eliminable: Callable[[Hashable], bool] | None = None,
                 priority: Callable[[Hashable], int] | None = None,
                 max_length: int = 4) -> "Presentation":
        """Tietze reduction: repeatedly solve a short relator for a generator occurring once in it."""
        labels = list(self.generator_labels) if self.generator_labels else [f"g{k}" for k in range(1, self.generator_count + 1)]
        alive = set(range(1, self.generator_count + 1))
        rels = _clean(self.relators)
        can_go = eliminable or (lambda lab: True)
        prio = priority or (lambda lab: 0)
        while True:
            best = None
            for ri, r in enumerate(rels):
                if len(r) > max_length:
                    continue
                counts: dict[int, int] = {}
                for x in r:
                    counts[abs(x)] = counts.get(abs(x), 0) + 1
                for g, c in counts.items():
                    if c == 1 and can_go(labels[g - 1]):
                        key = (len(r), -prio(labels[g - 1]), -g, ri)
                        if best is None or key < best[0]:
                            best = (key, ri, g)
            if best is None:
                break
            _, ri, g = best
            r = rels[ri]
            pos = next(i for i, x in enumerate(r) if abs(x) == g)
            rot = r[pos:] + r[:pos]
            rest = rot[1:]
            # rot = g^e . rest = 1, so g = rest^-1 when e = 1 and g = rest when e = -1
            value = invert_word(rest) if rot[0] > 0 else tuple(rest)
            new_rels = []
            for k, s in enumerate(rels):
                if k == ri:
                    continue
                sub: list[int] = []
                for x in s:
                    if abs(x) == g:
                        sub.extend(value if x > 0 else invert_word(value))
                    else:
                        sub.append(x)
                new_rels.append(tuple(sub))
            rels = _clean(new_rels)
            alive.discard(g)
        keep = sorted(alive)
        renum = {g: i + 1 for i, g in enumerate(keep)}
        out = [tuple((renum[abs(x)] if x > 0 else -renum[abs(x)]) for x in r) for r in rels]
        return Presentation(len(keep), tuple(out), tuple(labels[g - 1] for g in keep))

    def canonical(self) -> tuple[tuple[Hashable, ...], tuple[tuple[tuple[Hashable, int], ...], ...]]:
        """Label-based canonical form: generators sorted by label, relators as label words."""
        labels = [self.label(k) for k in range(1, self.generator_count + 1)]
        order = sorted(range(1, self.generator_count + 1), key=lambda k: repr(labels[k - 1]))
        renum = {g: i + 1 for i, g in enumerate(order)}
        rels = set()
        for r in self.relators:
            w = canonical_relator(tuple(renum[abs(x)] * (1 if x > 0 else -1) for x in r))
            if w:
                rels.add(w)
        sorted_labels = tuple(labels[g - 1] for g in order)
        return sorted_labels, tuple(sorted(rels))

    def structurally_equal(self, other: "Presentation") -> bool:
        return self.canonical() == other.canonical()


def _clean(rels: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    seen, out = set(), []
    for r in rels:
        w = cyclic_reduce(r)
        if not w:
            continue
        c = canonical_relator(w)
        if c not in seen:
            seen.add(c)
            out.append(w)
    return out


def edge_path_presentation(K: SimplicialComplex, base_vertex: int | None = None) -> Presentation:
    verts = K.vertices()
    if not verts:
        raise ValidationError("empty complex")
    base = verts[0] if base_vertex is None else base_vertex
    if (base,) not in K.simplices:
        raise ValidationError(f"base vertex {base} is not in the complex")
    adj: dict[int, list[int]] = {v: [] for v in verts}
    edges = K.simplices_of_dim(1)
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    tree = set()
    seen = {base}
    queue = deque([base])
    while queue:
        u = queue.popleft()
        for v in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                tree.add((min(u, v), max(u, v)))
                queue.append(v)
    if len(seen) != len(verts):
        raise ValidationError("disconnected complex")
    letters: dict[tuple[int, int], int] = {}
    labels = []
    for e in edges:
        if e in tree:
            letters[e] = 0
        else:
            labels.append(e)
            letters[e] = len(labels)
    rels = []
    for u, v, w in K.simplices_of_dim(2):
        word = [x for x in (letters[(u, v)], letters[(v, w)], -letters[(u, w)]) if x]
        rels.append(tuple(word))
    return Presentation(len(labels), tuple(rels), tuple(labels), edge_letters=letters)


def abelianization(P: Presentation) -> tuple[int, tuple[int, ...]]:
    rows = []
    for r in P.relators:
        row: dict[int, int] = {}
        for x in r:
            row[abs(x) - 1] = row.get(abs(x) - 1, 0) + (1 if x > 0 else -1)
        rows.append({k: v for k, v in row.items() if v})
    inv = sorted(_sparse_snf(rows))
    return P.generator_count - len(inv), tuple(x for x in inv if x > 1)


def presentation_rank_report(P: Presentation, complex: SimplicialComplex | None = None) -> dict:
    from .complexes import euler_characteristic, is_closed_surface

    free_rank, torsion = abelianization(P)
    report = {"generators": P.generator_count, "relators": len(P.relators),
              "abelianization": {"free_rank": free_rank, "torsion": list(torsion)}}
    cert = None
    if not P.relators:
        cert = "no relators"
    elif complex is not None and complex.dim <= 1:
        cert = "complex is a graph"
    else:
        S = P.simplify()
        if not S.relators:
            cert = "relator-free simplification"
            report["simplified_generators"] = S.generator_count
    if cert:
        report["is_free_certificate"] = cert
        report["free_rank"] = free_rank
    if (complex is not None and free_rank == 0 and not torsion and is_closed_surface(complex)
          and euler_characteristic(complex) == 2):
        report["note"] = "simply connected sphere"
    return report


# words in the amalgamated product -----------------------------------------------------

def loop_words_to_kernel(A: GroupoidAtlas, loops: Iterable[Path]) -> list[Word]:
    """Letters g with f(n+1) = g f(n), listed as g_N ... g_1."""
    G, family = A.group, A.subgroups
    if G is None or family is None or A.underlying_size != G.order:
        raise ValidationError("needs a single-domain atlas")
    out = []
    for f in loops:
        steps = []
        for n in range(len(f) - 1):
            x, y = f.points[n], f.points[n + 1]
            e = G.mul(y, G.inv(x))
            if e == 0:
                continue
            i = next((k for k, H in enumerate(family) if e in H), None)
            if i is None:
                raise ValidationError(f"step {n} uses an element in no listed subgroup")
            steps.append((i, e))
        out.append(Word(tuple(reversed(steps)), family))
    return out


def amalgam_shape(family: Sequence[Subgroup]) -> tuple[str, Subgroup | None]:
    """('free', None) or ('central', C); anything else is unsupported."""
    if not family:
        raise UnsupportedShape("unsupported amalgam shape")
    G = family[0].parent
    inters = [subgroup_intersection(family[i], family[j])
              for i in range(len(family)) for j in range(i + 1, len(family))]
    if all(I.is_trivial() for I in inters):
        return "free", None
    C = inters[0]
    if all(I == C for I in inters):
        if all(G.mul(c, h) == G.mul(h, c) for H in family for h in H.elements for c in C.elements):
            return "central", C
    raise UnsupportedShape("unsupported amalgam shape")


def amalgam_normal_form(w: Word) -> Word:
    family = w.family
    if not w.letters:
        return w
    G = family[0].parent
    shape, C = amalgam_shape(family)
    central = 0
    stack: list[list[int]] = []
    in_c = (lambda g: g == 0) if C is None else (lambda g: g in C)
    for i, g in w.letters:
        if in_c(g):
            central = G.mul(central, g)
            continue
        if stack and stack[-1][0] == i:
            m = G.mul(stack[-1][1], g)
            if in_c(m):
                stack.pop()
                central = G.mul(central, m)
            else:
                stack[-1][1] = m
        else:
            stack.append([i, g])
    if shape == "free":
        return Word(tuple((i, g) for i, g in stack), family)
    letters = []
    for i, g in stack:
        t = min(G.mul(g, c) for c in C.elements)
        central = G.mul(central, G.mul(G.inv(t), g))
        letters.append((i, t))
    if central != 0:
        letters.insert(0, (0, central))
    return Word(tuple(letters), family)


def kernel_rank_oracle(group_order: int, vertex_group_orders: Sequence[int],
                       edge_group_orders: Sequence[int]) -> int:
    """Rank of the free kernel of a finite tree of finite groups mapping onto a group."""
    if len(edge_group_orders) != len(vertex_group_orders) - 1:
        raise UnsupportedShape("non-tree shape")
    chi = sum(Fraction(1, h) for h in vertex_group_orders) - sum(Fraction(1, e) for e in edge_group_orders)
    rank = 1 - group_order * chi
    if rank.denominator != 1 or rank < 0:
        raise ValidationError(f"oracle produced the non-rank value {rank}")
    return int(rank)


def family_kernel_rank(family: Sequence[Subgroup], group_order: int | None = None) -> int:
    shape, C = amalgam_shape(family)
    edge = 1 if C is None else C.order
    n = group_order if group_order is not None else family[0].parent.order
    return kernel_rank_oracle(n, [H.order for H in family], [edge] * (len(family) - 1))


# bounded loop object -------------------------------------------------------------------

@dataclass(frozen=True)
class LoopQuotient:
    loops: tuple[tuple[int, ...], ...]
    component: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(set(self.component))


def loop_components(A: GroupoidAtlas, base: int, window: int, max_loops: int = 200_000) -> LoopQuotient:
    """Loops p_0..p_N at ``base`` joined by single-square rewrites.

    A one-row homotopy between window-N loops factors through changes of one
    position at a time, so these rewrites generate every homotopy that stays
    inside the window.
    """
    nbr: dict[int, set[int]] = {}
    for _, orb in A.all_orbits():
        for x in orb:
            nbr.setdefault(x, set()).update(orb)
    if base not in nbr:
        raise ValidationError("base point lies in no local set")
    if window == 0:
        return LoopQuotient(((base,),), (0,))
    loops = []
    stack = [(base,)]
    while stack:
        p = stack.pop()
        if len(p) == window:
            if base in nbr[p[-1]]:
                loops.append(p + (base,))
                if len(loops) > max_loops:
                    raise BoundExceeded("loop enumeration bound exceeded")
            continue
        for y in sorted(nbr[p[-1]], reverse=True):
            stack.append(p + (y,))
    loops.sort()
    index = {p: i for i, p in enumerate(loops)}
    ds = DisjointSet(range(len(loops)))
    for p in loops:
        for m in range(1, window):
            a, b, c = p[m - 1], p[m], p[m + 1]
            for y in nbr[a] & nbr[c]:
                if y <= b:
                    continue
                if A.common_coords({a, b, y}) and A.common_coords({b, c, y}):
                    q = p[:m] + (y,) + p[m + 1:]
                    ds.merge(index[p], index[q])
    roots: dict[int, int] = {}
    comp = []
    for i in range(len(loops)):
        r = ds[i]
        roots.setdefault(r, len(roots))
        comp.append(roots[r])
    return LoopQuotient(tuple(loops), tuple(comp))


def bounded_loop_components(A: GroupoidAtlas, base: int, window: int, max_loops: int = 200_000) -> int:
    return loop_components(A, base, window, max_loops).count
