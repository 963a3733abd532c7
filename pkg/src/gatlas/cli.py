"""Command-line front end.

Every subcommand reads one JSON job file and prints a JSON report with sorted
keys.  Exit codes: 0 success, 2 invalid input, 3 a size bound was hit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path as FilePath
from typing import Any

from . import __version__
from .atlas import (AtlasMorphism, CoordinateSystem, GroupoidAtlas, build_gl, build_intersection_closure,
                    build_relative, build_single_domain, check_infimum, explicit_atlas)
from .catalog import FAMILIES
from .cog import cog_from_action, cog_pi1_presentation
from .complexes import (SimplicialComplex, complex_from_json, dowker_contiguity, dowker_pair,
                        euler_characteristic, export_complex, homology, membership_relation,
                        nerve_complex, nerve_g_action, same_homology, vietoris_complex)
from .coverings import (CoveringCandidate, amalgam_presentation, build_cover_from_perm_rep,
                        deck_group, fiber_cardinalities, is_covering, single_domain_universal_data,
                        star_conditions)
from .errors import BoundExceeded, UnsupportedShape, ValidationError
from .groups import FiniteGroup, ModularRing, closure_from_generators, general_linear_group
from .homotopy import (edge_path_presentation, loop_components, pi0, presentation_rank_report)


# input parsing -----------------------------------------------------------------------

def _require(spec: dict, key: str, where: str):
    if key not in spec:
        raise ValidationError(f"{where}: missing key '{key}'")
    return spec[key]


def load_group(spec: dict) -> FiniteGroup:
    if "perm_generators" in spec:
        spec = spec["perm_generators"]
    if "cayley_table" in spec:
        return FiniteGroup.from_table(spec["cayley_table"], spec.get("labels"))
    if "gl" in spec:
        g = spec["gl"]
        return general_linear_group(int(_require(g, "n", "gl group")), ModularRing(int(_require(g, "mod", "gl group"))))[0]
    if "permutations" in spec or "perms" in spec:
        perms = spec.get("permutations", spec.get("perms"))
        n = len(perms[0]) if perms else int(spec.get("degree", 1))
        return closure_from_generators(n, perms)
    if "table" in spec:
        return FiniteGroup.from_table(spec["table"], spec.get("labels"))
    raise ValidationError("group: expected 'permutations', 'perm_generators', 'cayley_table', 'table' or 'gl'")


def _element(G: FiniteGroup, ref) -> int:
    if isinstance(ref, list):
        key = tuple(int(v) for v in ref)
        try:
            return G.index_of(key)
        except KeyError:
            raise ValidationError(f"permutation {ref} is not in the group") from None
    if isinstance(ref, int) and 0 <= ref < G.order:
        return ref
    raise ValidationError(f"bad element reference {ref!r}")


def load_family(spec: dict):
    spec = _unwrap(spec)
    if "catalog" in spec:
        name = spec["catalog"]
        if name not in FAMILIES:
            raise ValidationError(f"unknown catalog entry '{name}'; known: {sorted(FAMILIES)}")
        return FAMILIES[name]()
    G = load_group(_require(spec, "group", "atlas"))
    subs = _require(spec, "subgroups", "atlas")
    if not isinstance(subs, list) or not subs:
        raise ValidationError("atlas: 'subgroups' must be a nonempty list of generator lists")
    return G, [_subgroup(G, gens) for gens in subs]


def _subgroup(G: FiniteGroup, spec):
    gens = spec.get("generators", []) if isinstance(spec, dict) else spec
    if not isinstance(gens, list):
        raise ValidationError("subgroup: expected a list of generators")
    return G.subgroup([_element(G, r) for r in gens])


_WRAPPED = {"single_domain": "single-domain", "relative": "relative",
            "intersection_closure": "intersection-closure", "gl": "gl", "explicit": "explicit"}


def _unwrap(spec: dict) -> dict:
    """Accept {"single_domain": {...}} style specs alongside the flat {"kind": ...} form."""
    if "kind" in spec or len(spec) != 1:
        return spec
    (key, body), = spec.items()
    if key not in _WRAPPED or not isinstance(body, dict):
        return spec
    body = dict(body, kind=_WRAPPED[key])
    if key == "gl" and "mod" in body:
        body.setdefault("modulus", body["mod"])
    if key == "explicit" and "leq_pairs" in body:
        body.setdefault("leq", body["leq_pairs"])
    return body


def load_atlas(spec: dict) -> GroupoidAtlas:
    spec = _unwrap(spec)
    kind = spec.get("kind", "single-domain")
    if kind == "single-domain":
        G, fam = load_family(spec)
        return build_single_domain(G, fam)
    if kind == "relative":
        G, fam = load_family(spec)
        return build_relative(G, _subgroup(G, _require(spec, "K", "relative atlas")), fam)
    if kind == "intersection-closure":
        G, fam = load_family(spec)
        return build_intersection_closure(G, fam)
    if kind == "gl":
        n = int(_require(spec, "n", "gl atlas"))
        m = int(_require(spec, "modulus", "gl atlas"))
        if n < 1 or m < 2:
            raise ValidationError("gl atlas: need n >= 1 and modulus >= 2")
        return build_gl(n, ModularRing(m))
    if kind == "explicit":
        return explicit_atlas(int(_require(spec, "points", "explicit atlas")),
                              int(_require(spec, "coords", "explicit atlas")),
                              spec.get("leq", []), _require(spec, "local", "explicit atlas"),
                              spec.get("point_labels"))
    raise ValidationError(f"unknown atlas kind '{kind}'")


def _complex(spec: dict, choice: str) -> SimplicialComplex:
    spec = _unwrap(spec)
    if spec.get("kind") == "complex":
        return complex_from_json(spec)
    A = load_atlas(spec)
    if choice == "nerve":
        return nerve_complex(A)
    if choice == "vietoris":
        return vietoris_complex(A)
    raise ValidationError(f"unknown complex '{choice}'")


def _read_json(path: str) -> tuple[Any, str]:
    try:
        raw = FilePath(path).read_bytes()
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: top level must be an object")
    return data, hashlib.sha256(raw).hexdigest()


# commands ----------------------------------------------------------------------------

def _complex_summary(K: SimplicialComplex) -> dict:
    return {"f_vector": list(K.f_vector()), "euler_characteristic": euler_characteristic(K)}


def cmd_vietoris(spec, args):
    K = vietoris_complex(load_atlas(spec))
    return K, _complex_summary(K)


def cmd_nerve(spec, args):
    N = nerve_complex(load_atlas(spec))
    out = _complex_summary(N)
    out["vertex_sets"] = [list(s) for s in N.vertex_sets]
    return N, out


def cmd_pi0(spec, args):
    blocks = pi0(load_atlas(spec))
    return None, {"components": len(blocks), "blocks": blocks}


def cmd_pi1(spec, args):
    K = _complex(spec, args.complex)
    base = int(spec.get("base", 0)) if spec.get("kind") == "complex" else 0
    P = edge_path_presentation(K, base)
    report = presentation_rank_report(P, K)
    report["presentation"] = str(P)
    return K, report


def cmd_homology(spec, args):
    K = _complex(spec, args.complex)
    H = homology(K)
    out = _complex_summary(K)
    out["betti"] = [b for b, _ in H]
    out["torsion"] = [list(t) for _, t in H]
    return K, out


def cmd_check_dowker(spec, args):
    A = load_atlas(spec)
    N = nerve_complex(A)
    R = membership_relation(A, N)
    K, L = dowker_pair(R)
    V = vietoris_complex(A)
    out = {"K_is_vietoris": K == V, "L_is_nerve": L.simplices == N.simplices,
           "homology_agrees": same_homology(K, L)}
    sides = {"nerve_side": R.transpose()}
    if args.both_sides:
        sides["vietoris_side"] = R
    for name, rel in sides.items():
        chk = dowker_contiguity(rel)
        out[name + "_contiguous"] = chk.ok
    return None, out


def cmd_check_infimum(spec, args):
    chk = check_infimum(load_atlas(spec), args.max_frame)
    return None, {"holds": chk.ok, "counterexample": chk.witness}


def cmd_check_volodin(spec, args):
    from .atlas import is_volodin_model

    G, fam = load_family(spec)
    n = len(fam)
    leq = spec.get("leq")
    if leq is None:
        pairs = {(a, b) for a in range(n) for b in range(n) if fam[a].issubset(fam[b])}
    else:
        pairs = {tuple(p) for p in leq}
    chk = is_volodin_model(G, fam, CoordinateSystem(n, frozenset(pairs)))
    return None, {"holds": chk.ok, "reason": chk.witness}


def cmd_check_covering(spec, args):
    B = load_atlas(_require(spec, "upper", "candidate"))
    A = load_atlas(_require(spec, "lower", "candidate"))
    pm = tuple(int(v) for v in _require(spec, "map", "candidate"))
    if len(pm) != B.underlying_size or any(not 0 <= v < A.underlying_size for v in pm):
        raise ValidationError("candidate: 'map' must send every upstairs point to a downstairs point")
    c = CoveringCandidate(AtlasMorphism(B, A, pm))
    cov = is_covering(c, args.brute_frame)
    out = {"is_covering": cov.ok, "witness": cov.witness, "star_conditions": star_conditions(c).ok}
    if cov.ok:
        out["fiber_cardinalities"] = sorted(set(fiber_cardinalities(c).values()))
    return None, out


def cmd_build_cover(spec, args):
    K = _complex(_require(spec, "base_complex", "perm-rep"), args.complex)
    perms = {int(k): v for k, v in _require(spec, "perms", "perm-rep").items()}
    sc = build_cover_from_perm_rep(K, int(spec.get("base", 0)), perms)
    from .complexes import components

    out = {"fiber_index": sc.fiber_index, "components": len(components(sc.total)),
           "total": _complex_summary(sc.total), "base": _complex_summary(K),
           "deck_group_order": deck_group(sc).order}
    return sc.total, out


def cmd_universal(spec, args):
    G, fam = load_family(spec)
    u = single_domain_universal_data(G, fam, args.bound)
    out = {"verdict": u.verdict, "kernel_rank": u.kernel_rank,
           "presentation": {"generators": u.colimit_presentation.generator_count,
                            "relators": len(u.colimit_presentation.relators)}}
    if u.finite_colimit is not None:
        out["colimit_order"] = u.finite_colimit.order
        out["covering_degree"] = u.covering_degree
    return None, out


def cmd_cog_pi1(spec, args):
    G, fam = load_family(spec)
    A = build_single_domain(G, fam)
    cog = cog_from_action(nerve_g_action(A))
    P = cog_pi1_presentation(cog)
    out = {"base_f_vector": list(cog.base.f_vector()),
           "generators": P.generator_count, "relators": len(P.relators),
           "matches_amalgam": P.structurally_equal(amalgam_presentation(fam)),
           "complex_of_groups": cog.to_json()}
    return None, out


def cmd_k1(spec, args):
    spec = dict(_unwrap(spec), kind="gl")
    blocks = pi0(load_atlas(spec))
    return None, {"components": len(blocks), "identity_component_size": len(blocks[0])}


def cmd_loops(spec, args):
    A = load_atlas(spec)
    base = A.base_point if A.base_point is not None else 0
    q = loop_components(A, base, args.window, args.max_loops)
    return None, {"window": args.window, "loops": len(q.loops), "components": q.count}


COMMANDS = {
    "vietoris": cmd_vietoris, "nerve": cmd_nerve, "pi0": cmd_pi0, "pi1": cmd_pi1,
    "homology": cmd_homology, "check-dowker": cmd_check_dowker, "check-infimum": cmd_check_infimum,
    "check-volodin": cmd_check_volodin, "check-covering": cmd_check_covering,
    "build-cover": cmd_build_cover, "universal": cmd_universal, "cog-pi1": cmd_cog_pi1,
    "k1": cmd_k1, "loops": cmd_loops,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gatlas", description="Global actions and groupoid atlases.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        if name == "check-covering":
            s.add_argument("--candidate", required=True)
        elif name == "build-cover":
            s.add_argument("--perm-rep", dest="input", required=True)
        else:
            s.add_argument("--input", required=True)
        s.add_argument("--out")
        s.add_argument("--export-complex")
        if name in ("pi1", "homology", "build-cover"):
            s.add_argument("--complex", choices=["nerve", "vietoris"], default="nerve")
        if name == "check-infimum":
            s.add_argument("--max-frame", type=int, default=3)
        if name == "check-covering":
            s.add_argument("--brute-frame", type=int, default=3)
        if name == "check-dowker":
            s.add_argument("--both-sides", action="store_true")
        if name == "universal":
            s.add_argument("--bound", type=int, default=20_000)
        if name == "loops":
            s.add_argument("--window", type=int, required=True)
            s.add_argument("--max-loops", type=int, default=200_000)
    return p


def run(argv: list[str] | None = None) -> tuple[int, str]:
    args = build_parser().parse_args(argv)
    try:
        for opt in ("max_frame", "brute_frame", "bound", "window", "max_loops"):
            if getattr(args, opt, 1) is not None and getattr(args, opt, 1) < 0:
                raise ValidationError(f"--{opt.replace('_', '-')} must be non-negative")
        path = args.candidate if args.command == "check-covering" else args.input
        spec, digest = _read_json(path)
        K, report = COMMANDS[args.command](spec, args)
        report = dict(report, command=args.command, version=__version__, input_sha256=digest)
        if args.export_complex:
            if K is None:
                raise ValidationError(f"{args.command} produces no complex to export")
            export_complex(K, args.export_complex)
        text = json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"
        if args.out:
            FilePath(args.out).write_text(text)
        return 0, text
    except (ValidationError, UnsupportedShape, KeyError, TypeError) as e:
        return 2, json.dumps({"error": str(e), "kind": type(e).__name__}, sort_keys=True) + "\n"
    except BoundExceeded as e:
        return 3, json.dumps({"error": str(e), "kind": "BoundExceeded"}, sort_keys=True) + "\n"


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    (sys.stdout if code == 0 else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
