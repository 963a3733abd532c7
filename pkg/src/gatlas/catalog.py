"""Small groups and subgroup families used as standard examples.

Points are numbered from 0, so the transposition (1 2) on {1, 2, 3} is the
permutation swapping 0 and 1 here.
"""

from __future__ import annotations

from typing import Callable

from .groups import FiniteGroup, Subgroup, closure_from_generators


def _perm(n: int, *cycles: tuple[int, ...]) -> tuple[int, ...]:
    p = list(range(n))
    for c in cycles:
        for k, x in enumerate(c):
            p[x] = c[(k + 1) % len(c)]
    return tuple(p)


def _perm_family(n: int, gens: dict[str, tuple], family: list[list[str]]):
    G = closure_from_generators(n, list(gens.values()))
    idx = {name: G.index_of(p) for name, p in gens.items()}
    return G, [G.subgroup([idx[x] for x in names]) for names in family], idx


def s3() -> tuple[FiniteGroup, list[Subgroup]]:
    """S3 with the 3-cycle subgroup and one transposition subgroup."""
    G, fam, _ = _perm_family(3, {"a": _perm(3, (0, 1, 2)), "b": _perm(3, (0, 1))}, [["a"], ["b"]])
    return G, fam


def s3_transpositions() -> tuple[FiniteGroup, list[Subgroup]]:
    G, fam, _ = _perm_family(3, {"x1": _perm(3, (0, 1)), "x2": _perm(3, (1, 2))}, [["x1"], ["x2"]])
    return G, fam


def k4() -> tuple[FiniteGroup, list[Subgroup]]:
    gens = {"a": _perm(4, (0, 1), (2, 3)), "b": _perm(4, (0, 2), (1, 3)), "c": _perm(4, (0, 3), (1, 2))}
    G, fam, _ = _perm_family(4, gens, [["a"], ["b"], ["c"]])
    return G, fam


def _hamilton(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


def q8() -> tuple[FiniteGroup, list[Subgroup]]:
    names = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
    units = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    keys = units + [tuple(-x for x in u) for u in units]
    G = FiniteGroup(keys=keys, compose=_hamilton, labels=names)
    return G, [G.subgroup([1]), G.subgroup([2]), G.subgroup([3])]


def s4() -> tuple[FiniteGroup, list[Subgroup]]:
    """S4 with <x1,x2>, <x2,x3>, <x1,x3> for the Coxeter generators x1, x2, x3."""
    gens = {"x1": _perm(4, (0, 1)), "x2": _perm(4, (1, 2)), "x3": _perm(4, (2, 3))}
    G, fam, _ = _perm_family(4, gens, [["x1", "x2"], ["x2", "x3"], ["x1", "x3"]])
    return G, fam


def trivial_family(G: FiniteGroup) -> list[Subgroup]:
    return [G.trivial_subgroup()]


FAMILIES: dict[str, Callable[[], tuple[FiniteGroup, list[Subgroup]]]] = {
    "s3": s3,
    "s3-transpositions": s3_transpositions,
    "k4": k4,
    "q8": q8,
    "s4": s4,
}
