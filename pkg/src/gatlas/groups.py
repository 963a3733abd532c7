"""Finite groups as dense-index multiplication structures.

Elements are integers ``0..order-1`` with the identity at 0.  A group is
backed either by an explicit Cayley table or by hashable keys (permutation
tuples, flattened matrices) with a composition function; the table is only
materialized on request, since GL3(Z/3) has 11232 elements.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import BoundExceeded, ValidationError

CLOSURE_BOUND = 10**6
TABLE_LIMIT = 5000


class FiniteGroup:
    def __init__(
        self,
        keys: Sequence[Hashable] | None = None,
        compose: Callable[[Hashable, Hashable], Hashable] | None = None,
        table: np.ndarray | None = None,
        labels: Sequence[str] | None = None,
    ):
        if table is None and keys is None:
            raise ValidationError("need either keys or a table")
        self._table = None if table is None else np.asarray(table, dtype=np.int64)
        self._keys = None if keys is None else list(keys)
        self._compose = compose
        self._index = None if keys is None else {k: i for i, k in enumerate(self._keys)}
        self._inverses: list[int] | None = None
        self.order = len(self._keys) if keys is not None else int(self._table.shape[0])
        self.element_labels = list(labels) if labels is not None else None
        self.identity = 0

    @classmethod
    def from_table(cls, table, labels=None) -> "FiniteGroup":
        t = np.asarray(table, dtype=np.int64)
        n = t.shape[0]
        if t.ndim != 2 or t.shape != (n, n) or n == 0:
            raise ValidationError("Cayley table must be a nonempty square array")
        if t.min() < 0 or t.max() >= n:
            raise ValidationError("Cayley table entries out of range")
        if not (np.array_equal(t[0], np.arange(n)) and np.array_equal(t[:, 0], np.arange(n))):
            raise ValidationError("element 0 must be a two-sided identity")
        for row in t:
            if len(set(row.tolist())) != n:
                raise ValidationError("Cayley table rows must be permutations")
        g = cls(table=t, labels=labels)
        if n <= 200 and not is_associative(g):
            raise ValidationError("Cayley table is not associative")
        return g

    def mul(self, g: int, h: int) -> int:
        if self._table is not None:
            return int(self._table[g, h])
        return self._index[self._compose(self._keys[g], self._keys[h])]

    def inv(self, g: int) -> int:
        if self._inverses is None:
            self._inverses = self._compute_inverses()
        return self._inverses[g]

    @property
    def inverses(self) -> list[int]:
        if self._inverses is None:
            self._inverses = self._compute_inverses()
        return list(self._inverses)

    def _compute_inverses(self) -> list[int]:
        if self._table is not None:
            rows, cols = np.nonzero(self._table == 0)
            out = [0] * self.order
            for r, c in zip(rows.tolist(), cols.tolist()):
                out[r] = c
            return out
        out = [0] * self.order
        for g in range(self.order):
            # g^(k-1) where g^k = 1; element orders are tiny at desk scale
            prev, cur = 0, g
            while cur != 0:
                prev, cur = cur, self.mul(cur, g)
            out[g] = prev
        return out

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            if self.order > TABLE_LIMIT:
                raise BoundExceeded(f"table of a group of order {self.order} not materialized")
            t = np.empty((self.order, self.order), dtype=np.int64)
            for g in range(self.order):
                for h in range(self.order):
                    t[g, h] = self.mul(g, h)
            self._table = t
        return self._table

    def key(self, g: int) -> Hashable:
        return self._keys[g] if self._keys is not None else g

    def index_of(self, key: Hashable) -> int:
        if self._index is None:
            return int(key)
        return self._index[key]

    def label(self, g: int) -> str:
        if self.element_labels is not None:
            return self.element_labels[g]
        return str(g)

    def multiply(self, elements: Iterable[int]) -> int:
        out = 0
        for e in elements:
            out = self.mul(out, e)
        return out

    def subgroup(self, generators: Iterable[int]) -> "Subgroup":
        gens = tuple(dict.fromkeys(int(g) for g in generators))
        for g in gens:
            if not 0 <= g < self.order:
                raise ValidationError(f"element {g} out of range")
        elems = _bfs_closure(self, gens)
        return Subgroup(self, tuple(sorted(elems)), gens)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (0,), ())

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)), tuple(range(1, self.order)))

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


def _bfs_closure(G: FiniteGroup, gens: Sequence[int], bound: int = CLOSURE_BOUND) -> set[int]:
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = G.mul(s, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > bound:
                    raise BoundExceeded("closure bound exceeded")
                queue.append(y)
    return seen


def is_associative(G: FiniteGroup, triples: Iterable[tuple[int, int, int]] | None = None) -> bool:
    if triples is None:
        t = G.table
        # (g h) k == g (h k) for all triples, vectorized over k
        for g in range(G.order):
            left = t[t[g]]          # row h -> (g h) k over k
            right = t[g][t]         # row h -> g (h k) over k
            if not np.array_equal(left, right):
                return False
        return True
    return all(G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c)) for a, b, c in triples)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]
    generators: tuple[int, ...] = ()
    _members: frozenset = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self._members

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent and other._members == self._members

    def __hash__(self) -> int:
        return hash(self._members)

    def issubset(self, other: "Subgroup") -> bool:
        return self._members <= other._members

    def is_trivial(self) -> bool:
        return self.elements == (0,)


def closure_from_generators(domain_size: int, perms: Sequence[Sequence[int]], bound: int = CLOSURE_BOUND) -> FiniteGroup:
    """Permutation group generated by ``perms``; composition is ``(p*q)(i) = p(q(i))``."""
    ident = tuple(range(domain_size))
    gens = []
    for p in perms:
        p = tuple(int(v) for v in p)
        if sorted(p) != list(ident):
            raise ValidationError(f"{list(p)} is not a permutation of 0..{domain_size - 1}")
        gens.append(p)

    def compose(p, q):
        return tuple(p[i] for i in q)

    elems = [ident]
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = compose(s, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > bound:
                    raise BoundExceeded("closure bound exceeded")
                elems.append(y)
                queue.append(y)
    labels = [cycle_notation(p) for p in elems]
    return FiniteGroup(keys=elems, compose=compose, labels=labels)


def cycle_notation(p: Sequence[int]) -> str:
    seen, parts = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = p[x]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup.from_table([[(i + j) % n for j in range(n)] for i in range(n)],
                                  labels=[str(i) for i in range(n)])


def left_cosets(H: Subgroup) -> list[tuple[int, ...]]:
    """Orbits of H acting on its parent by left multiplication, i.e. the sets Hx."""
    G = H.parent
    seen: set[int] = set()
    blocks = []
    for x in range(G.order):
        if x in seen:
            continue
        block = tuple(sorted({G.mul(h, x) for h in H.elements}))
        seen.update(block)
        blocks.append(block)
    return blocks


def coset_space(K: Subgroup) -> list[tuple[int, ...]]:
    """The sets xK, ordered by least element; G acts on them from the left."""
    G = K.parent
    seen: set[int] = set()
    blocks = []
    for x in range(G.order):
        if x in seen:
            continue
        block = tuple(sorted({G.mul(x, k) for k in K.elements}))
        seen.update(block)
        blocks.append(block)
    return blocks


def subgroup_intersection(H: Subgroup, K: Subgroup) -> Subgroup:
    if H.parent is not K.parent:
        raise ValidationError("subgroups of different groups")
    elems = tuple(sorted(H._members & K._members))
    return Subgroup(H.parent, elems, tuple(e for e in elems if e != 0))


def generated_subgroup(G: FiniteGroup, subgroups: Iterable[Subgroup]) -> Subgroup:
    gens: list[int] = []
    for H in subgroups:
        gens.extend(H.generators if H.generators else H.elements)
    return G.subgroup(gens)


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, by joining cyclic subgroups until nothing new appears."""
    found: dict[frozenset, Subgroup] = {}
    for g in range(G.order):
        S = G.subgroup([g])
        found.setdefault(S._members, S)
    frontier = list(found.values())
    while frontier:
        new = []
        current = list(found.values())
        for A in frontier:
            for B in current:
                J = G.subgroup(list(A.elements) + list(B.elements))
                if J._members not in found:
                    found[J._members] = J
                    new.append(J)
        frontier = new
    return sorted(found.values(), key=lambda S: (S.order, S.elements))


@dataclass(frozen=True)
class Word:
    """Letters (subgroup index, element) read as the product g_N ... g_1.

    ``letters[0]`` is the leftmost factor; acting on a point, the last letter
    is applied first.
    """

    letters: tuple[tuple[int, int], ...]
    family: tuple[Subgroup, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple((int(i), int(g)) for i, g in self.letters))
        object.__setattr__(self, "family", tuple(self.family))
        for i, g in self.letters:
            if not 0 <= i < len(self.family) or g not in self.family[i]:
                raise ValidationError(f"letter ({i}, {g}) is not in the named subgroup")

    def __len__(self):
        return len(self.letters)

    def inverse(self) -> "Word":
        G = self.family[0].parent
        return Word(tuple((i, G.inv(g)) for i, g in reversed(self.letters)), self.family)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters, self.family)


def evaluate_word(w: Word) -> int:
    if not w.family:
        return 0
    return w.family[0].parent.multiply(g for _, g in w.letters)


@dataclass(frozen=True)
class ModularRing:
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValidationError("modulus must be positive")

    @property
    def elements(self) -> range:
        return range(self.modulus)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.modulus

    def neg(self, a: int) -> int:
        return (-a) % self.modulus

    @property
    def units(self) -> frozenset[int]:
        return frozenset(r for r in range(self.modulus) if math.gcd(r, self.modulus) == 1)


def _matmul(n: int, m: int):
    def compose(a, b):
        return tuple(
            sum(a[i * n + k] * b[k * n + j] for k in range(n)) % m
            for i in range(n) for j in range(n)
        )
    return compose


def _det(n: int, mats: np.ndarray) -> np.ndarray:
    a = mats
    if n == 2:
        return a[:, 0] * a[:, 3] - a[:, 1] * a[:, 2]
    return (a[:, 0] * (a[:, 4] * a[:, 8] - a[:, 5] * a[:, 7])
            - a[:, 1] * (a[:, 3] * a[:, 8] - a[:, 5] * a[:, 6])
            + a[:, 2] * (a[:, 3] * a[:, 7] - a[:, 4] * a[:, 6]))


def elementary_matrix(n: int, ring: ModularRing, i: int, j: int, r: int) -> tuple[int, ...]:
    """Identity with ``r`` at row i, column j (1-based, i != j)."""
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise ValidationError(f"bad elementary position ({i},{j})")
    flat = [1 if a == b else 0 for a in range(n) for b in range(n)]
    flat[(i - 1) * n + (j - 1)] = r % ring.modulus
    return tuple(flat)


def matrix_label(key: Sequence[int], n: int) -> str:
    rows = [",".join(str(key[i * n + j]) for j in range(n)) for i in range(n)]
    return "[" + ";".join(rows) + "]"


def general_linear_group(n: int, ring: ModularRing, bound: int = CLOSURE_BOUND):
    """All invertible n x n matrices over Z/m.

    Returns ``(group, elementary)`` where ``elementary[(i, j, r)]`` is the
    element index of the elementary matrix with ``r`` at (i, j), 1-based.
    """
    if n not in (2, 3):
        raise ValidationError("only n = 2 or 3 is supported")
    m = ring.modulus
    if n == 3 and m > 5:
        raise BoundExceeded("enumeration bound exceeded (n = 3 requires m <= 5)")
    mats = np.array(list(itertools.product(range(m), repeat=n * n)), dtype=np.int64)
    det = _det(n, mats) % m
    units = np.array(sorted(ring.units), dtype=np.int64)
    keep = np.isin(det, units)
    if int(keep.sum()) > bound:
        raise BoundExceeded("enumeration bound exceeded")
    ident = tuple(1 if a == b else 0 for a in range(n) for b in range(n))
    keys = [ident] + [k for k in map(tuple, mats[keep].tolist()) if k != ident]
    labels = [matrix_label(k, n) for k in keys]
    G = FiniteGroup(keys=keys, compose=_matmul(n, m), labels=labels)
    elementary = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                for r in range(m):
                    elementary[(i, j, r)] = G.index_of(elementary_matrix(n, ring, i, j, r))
    return G, elementary


def commutator(G: FiniteGroup, x: int, y: int) -> int:
    return G.multiply([x, y, G.inv(x), G.inv(y)])


def steinberg_violations(G: FiniteGroup, elementary: dict, n: int, ring: ModularRing) -> list[tuple]:
    """Failures of the Steinberg relations among elementary matrices.

    St1: e_ij(a) e_ij(b) = e_ij(a+b).  St2: [e_ij(a), e_kl(b)] is 1 when
    j != k and i != l, and e_il(ab) when j = k and i != l.
    """
    bad = []
    pos = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    R = ring.elements
    for i, j in pos:
        for a in R:
            for b in R:
                if G.mul(elementary[(i, j, a)], elementary[(i, j, b)]) != elementary[(i, j, ring.add(a, b))]:
                    bad.append(("St1", i, j, a, b))
    for i, j in pos:
        for k, l in pos:
            if i == l:
                continue
            for a in R:
                for b in R:
                    c = commutator(G, elementary[(i, j, a)], elementary[(k, l, b)])
                    if j != k and c != 0:
                        bad.append(("St2-trivial", i, j, k, l, a, b))
                    if j == k and c != elementary[(i, l, ring.mul(a, b))]:
                        bad.append(("St2-elementary", i, j, k, l, a, b))
    return bad
