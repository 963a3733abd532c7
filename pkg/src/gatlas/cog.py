"""Scwols and complexes of groups built from actions on simplicial complexes."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .atlas import Check
from .complexes import (GroupActionOnComplex, NerveComplex, SimplicialComplex, orbit_space,
                        simplex_stabilizer)
from .errors import ValidationError
from .groups import FiniteGroup, Subgroup
from .homotopy import Presentation

Simplex = tuple[int, ...]


@dataclass(frozen=True)
class Scwol:
    """Objects are simplices; edge (tau, sigma) runs from sigma to its face tau."""

    objects: tuple[Simplex, ...]
    edges: tuple[tuple[int, int], ...]
    composite: Mapping[tuple[int, int], int]

    def i(self, a: int) -> int:
        return self.edges[a][1]

    def t(self, a: int) -> int:
        return self.edges[a][0]

    def composable_triples(self) -> list[tuple[int, int, int]]:
        out = []
        for (a, b), ba in self.composite.items():
            for (b2, c), cb in self.composite.items():
                if b2 == b:
                    out.append((a, b, c))
        return sorted(out)


def scwol_of_complex(K: SimplicialComplex) -> Scwol:
    objs = tuple(K.sorted_simplices())
    where = {s: k for k, s in enumerate(objs)}
    edges = []
    for s in objs:
        for t in objs:
            if len(t) < len(s) and set(t) < set(s):
                edges.append((where[t], where[s]))
    edges.sort()
    eidx = {e: k for k, e in enumerate(edges)}
    comp = {}
    for a, (ta, ia) in enumerate(edges):
        for b, (tb, ib) in enumerate(edges):
            if ia == tb:
                comp[(a, b)] = eidx[(ta, ib)]
    return Scwol(objs, tuple(edges), comp)


@dataclass
class ComplexOfGroups:
    base: SimplicialComplex
    scwol: Scwol
    ambient: FiniteGroup
    groups: list[Subgroup]
    psi: dict[int, dict[int, int]]
    twist: dict[tuple[int, int], int]
    lifts: list[Simplex] = field(default_factory=list)
    h: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        G = self.ambient
        return {
            "simplices": [list(s) for s in self.scwol.objects],
            "groups": [[G.label(g) for g in H.elements] for H in self.groups],
            "edges": [[list(self.scwol.objects[t]), list(self.scwol.objects[i])] for t, i in self.scwol.edges],
            "homs": [{G.label(x): G.label(y) for x, y in sorted(self.psi[a].items())}
                     for a in range(len(self.scwol.edges))],
            "twists": [[a, b, G.label(g)] for (a, b), g in sorted(self.twist.items())],
        }


def _default_lifts(act: GroupActionOnComplex, Q) -> list[Simplex]:
    K = act.complex
    lifts = []
    if isinstance(K, NerveComplex):
        rep = {}
        for v, orb in enumerate(K.vertex_sets):
            if 0 in orb:
                rep.setdefault(Q.vertex_class[v], v)
        for s in Q.sorted_simplices():
            lifts.append(tuple(sorted(rep[c] for c in s)))
        return lifts
    for s in Q.sorted_simplices():
        cand = sorted(t for t in K.simplices if len(t) == len(s)
                      and tuple(sorted(Q.vertex_class[v] for v in t)) == s)
        lifts.append(cand[0])
    return lifts


def cog_from_action(act: GroupActionOnComplex, lifts: Sequence[Simplex] | None = None,
                    h: Mapping[int, int] | None = None) -> ComplexOfGroups:
    G, K = act.group, act.complex
    Q = orbit_space(act)
    W = scwol_of_complex(Q)
    lifts = [tuple(sorted(s)) for s in (lifts if lifts is not None else _default_lifts(act, Q))]
    if len(lifts) != len(W.objects):
        raise ValidationError("one lift per simplex of the quotient")
    for s, lift in zip(W.objects, lifts):
        if lift not in K.simplices or len(lift) != len(s) or \
                tuple(sorted(Q.vertex_class[v] for v in lift)) != s:
            raise ValidationError(f"{lift} is not a lift of {s}")
    groups = [simplex_stabilizer(act, lift) for lift in lifts]
    hs = {}
    for a, (t, i) in enumerate(W.edges):
        face = tuple(v for v in lifts[i] if Q.vertex_class[v] in W.objects[t])
        target = lifts[t]
        if h is not None and a in h:
            g = int(h[a])
            if act.act(face, g) != target:
                raise ValidationError(f"h for edge {a} does not carry the face to the chosen lift")
        elif face == target:
            g = 0
        else:
            g = next(x for x in range(G.order) if act.act(face, x) == target)
        hs[a] = g
    psi = {}
    for a, (t, i) in enumerate(W.edges):
        ha = hs[a]
        psi[a] = {x: G.mul(G.mul(G.inv(ha), x), ha) for x in groups[i].elements}
    twist = {}
    for (a, b), ba in W.composite.items():
        twist[(a, b)] = G.mul(G.mul(G.inv(hs[ba]), hs[b]), hs[a])
    cog = ComplexOfGroups(Q, W, G, groups, psi, twist, list(lifts), hs)
    chk = verify_cog_axioms(cog)
    assert chk.ok, chk.witness
    return cog


def verify_cog_axioms(cog: ComplexOfGroups) -> Check:
    G, W = cog.ambient, cog.scwol
    for a in range(len(W.edges)):
        src, dst = cog.groups[W.i(a)], cog.groups[W.t(a)]
        f = cog.psi[a]
        if set(f) != set(src.elements):
            return Check(False, {"axiom": "injection", "edge": a, "reason": "not defined on the whole group"})
        if any(y not in dst for y in f.values()) or len(set(f.values())) != len(f):
            return Check(False, {"axiom": "injection", "edge": a})
        for x in src.elements:
            for y in src.elements:
                if f[G.mul(x, y)] != G.mul(f[x], f[y]):
                    return Check(False, {"axiom": "homomorphism", "edge": a, "elements": (x, y)})
    for (a, b), ba in W.composite.items():
        g = cog.twist[(a, b)]
        if g not in cog.groups[W.t(a)]:
            return Check(False, {"axiom": "twist location", "pair": (a, b)})
        gi = G.inv(g)
        for x in cog.groups[W.i(b)].elements:
            if G.mul(G.mul(gi, cog.psi[ba][x]), g) != cog.psi[a][cog.psi[b][x]]:
                return Check(False, {"axiom": "conjugation", "pair": (a, b), "element": x})
    for a, b, c in W.composable_triples():
        cb, ba = W.composite[(b, c)], W.composite[(a, b)]
        lhs = G.mul(cog.twist[(a, cb)], cog.psi[a][cog.twist[(b, c)]])
        rhs = G.mul(cog.twist[(ba, c)], cog.twist[(a, b)])
        if lhs != rhs:
            return Check(False, {"axiom": "cocycle", "triple": (a, b, c)})
    return Check(True)


def spanning_tree(W: Scwol, root: int = 0) -> set[int]:
    adj: dict[int, list[tuple[int, int]]] = {k: [] for k in range(len(W.objects))}
    for a, (t, i) in enumerate(W.edges):
        adj[t].append((i, a))
        adj[i].append((t, a))
    seen, tree = {root}, set()
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v, a in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                tree.add(a)
                queue.append(v)
    if len(seen) != len(W.objects):
        raise ValidationError("disconnected complex")
    return tree


def cog_pi1_presentation(cog: ComplexOfGroups, tree: set[int] | None = None,
                         simplify: bool = True) -> Presentation:
    G, W = cog.ambient, cog.scwol
    T = spanning_tree(W) if tree is None else set(tree)
    if len(T) != len(W.objects) - 1:
        raise ValidationError("tree must have one edge fewer than the scwol has objects")
    labels, index = [], {}
    for k, H in enumerate(cog.groups):
        for x in H.elements:
            if x:
                index[("G", k, x)] = len(labels) + 1
                labels.append(("G", W.objects[k], x))
    for a, (t, i) in enumerate(W.edges):
        index[("E", a)] = len(labels) + 1
        labels.append(("E", W.objects[t], W.objects[i]))

    def g(k, x):
        return [index[("G", k, x)]] if x else []

    def e(a):
        return index[("E", a)]

    rels = []
    for k, H in enumerate(cog.groups):
        for x in H.elements:
            for y in H.elements:
                if x and y:
                    rels.append(tuple(g(k, x) + g(k, y) + [-z for z in g(k, G.mul(x, y))]))
    for a, (t, i) in enumerate(W.edges):
        for x in cog.groups[i].elements:
            if x:
                rels.append(tuple([-e(a)] + g(i, x) + [e(a)] + [-z for z in g(t, cog.psi[a][x])]))
    for (a, b), ba in W.composite.items():
        rels.append(tuple([e(ba)] + g(W.t(a), cog.twist[(a, b)]) + [-e(a), -e(b)]))
    for a in sorted(T):
        rels.append((e(a),))
    P = Presentation(len(labels), tuple(rels), tuple(labels))
    if not simplify:
        return P
    P = P.simplify(eliminable=lambda lab: lab[0] == "E")
    return P.simplify(eliminable=lambda lab: lab[0] == "G" and len(lab[1]) > 1,
                      priority=lambda lab: len(lab[1]), max_length=2)
