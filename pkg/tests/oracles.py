"""Independent reference computations used to cross-check the library.

Everything here works from raw permutations, explicit cosets and sympy's
Smith normal form, and shares no code with the package beyond the catalog's
generator choices.
"""

from __future__ import annotations

import itertools
from collections import deque

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf


def perm_closure(gens):
    n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def right_cosets(elements, H, mul):
    """The sets Hx, as frozensets of raw group elements."""
    return {frozenset(mul(h, x) for h in H) for x in elements}


def nerve_f_vector(orbit_sets):
    """f-vector of the nerve: families of distinct orbit sets with a common point."""
    orbits = sorted(set(orbit_sets), key=sorted)
    counts = []
    k = 1
    while True:
        c = sum(1 for fam in itertools.combinations(orbits, k) if frozenset.intersection(*fam))
        if c == 0:
            return tuple(counts)
        counts.append(c)
        k += 1


def vietoris_f_vector(orbit_sets):
    simplices = set()
    for orb in set(orbit_sets):
        for k in range(1, len(orb) + 1):
            simplices.update(frozenset(c) for c in itertools.combinations(sorted(orb), k))
    top = max(len(s) for s in simplices)
    return tuple(sum(1 for s in simplices if len(s) == k) for k in range(1, top + 1))


def sympy_invariants(rows):
    """Nonzero Smith invariants of an integer matrix via sympy."""
    if not rows or not rows[0]:
        return []
    D = sympy_snf(Matrix(rows), domain=ZZ)
    out = [abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0]
    return sorted(out)


def homology_oracle(simplices):
    """Integral homology from dense boundary matrices and sympy SNF."""
    simplices = sorted({tuple(sorted(s)) for s in simplices}, key=lambda s: (len(s), s))
    by_dim = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(s)
    top = max(by_dim)
    inv = {}
    for p in range(1, top + 1):
        idx = {s: i for i, s in enumerate(by_dim[p - 1])}
        rows = []
        for s in by_dim[p]:
            row = [0] * len(idx)
            for i in range(len(s)):
                row[idx[s[:i] + s[i + 1:]]] = (-1) ** i
            rows.append(row)
        inv[p] = sympy_invariants(rows)
    out = []
    for p in range(top + 1):
        rin, rout = len(inv.get(p, [])), len(inv.get(p + 1, []))
        out.append((len(by_dim[p]) - rin - rout, tuple(x for x in inv.get(p + 1, []) if x > 1)))
    return out


def graph_cycle_rank(vertices, edges):
    """First Betti number of a graph: E - V + components."""
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    comps = len(parent)
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    return len(edges) - len(vertices) + comps


def gl_order(n, p, k=1):
    """|GL_n(Z/p^k)| for a prime p."""
    q = p
    base = 1
    for i in range(n):
        base *= q ** n - q ** i
    return base * p ** ((k - 1) * n * n)


def elementary_closure(n, m):
    """E_n(Z/m) by BFS over raw matrices."""
    def mul(a, b):
        return tuple(sum(a[i * n + k] * b[k * n + j] for k in range(n)) % m
                     for i in range(n) for j in range(n))

    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                for r in range(1, m):
                    e = [1 if a == b else 0 for a in range(n) for b in range(n)]
                    e[i * n + j] = r
                    gens.append(tuple(e))
    ident = tuple(1 if a == b else 0 for a in range(n) for b in range(n))
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(g, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def kernel_rank_by_euler(group_order, vertex_orders, edge_orders):
    """Rank of a free kernel from the rational Euler characteristic of a tree of groups."""
    from fractions import Fraction

    chi = sum(Fraction(1, h) for h in vertex_orders) - sum(Fraction(1, e) for e in edge_orders)
    return 1 - group_order * chi
