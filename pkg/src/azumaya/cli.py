"""Command-line front end.

Every subcommand reads JSON (a file path, or the JSON text itself) and prints
one JSON document on standard output.  Exit codes: 0 success, 1 a negative
mathematical answer (not unramifiable, not Azumaya, tree rejected), 2 bad
input or a library error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from . import hensel
from .algebra import AlgebraElement, canonical_map_det, center, center_is_scalars, is_azumaya
from .decomp import DEFAULT_MAX_DEGREE, is_unramifiable
from .errors import AlgebraError, DescriptorError
from .local import check_local
from .poly import Poly
from .serialize import algebra_from_json, poly_from_json, ring_from_json, tree_from_json, tree_to_json
from .splittree import (
    FAMILIES,
    MODES,
    build_tree,
    check_automorphism,
    parse_automorphism,
    skolem_noether_matrix,
    skolem_noether_module,
    split_over_finite_local,
    standard_matrix_units,
    verify_tree,
)


class InputError(Exception):
    pass


def _load(arg: str, what: str) -> Any:
    if os.path.exists(arg):
        try:
            with open(arg, encoding="utf-8") as fh:
                return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{what}: {arg} is not valid JSON ({exc})") from None
    try:
        return json.loads(arg)
    except json.JSONDecodeError:
        raise InputError(f"{what}: no such file {arg!r} (and not inline JSON)") from None


def _emit(obj: Any) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _dump_list(xs) -> list:
    return [x.dump() for x in xs]


# ---------------------------------------------------------------------------
# Subcommands


def cmd_unramifiable(ns) -> int:
    R = ring_from_json(_load(ns.ring, "--ring"))
    f = poly_from_json(R, _load(ns.poly, "--poly"), "--poly")
    res = is_unramifiable(R, f, max_degree=ns.max_degree)
    out = {
        "unramifiable": res.unramifiable,
        "deltas": _dump_list(res.deltas),
        "cofactors": _dump_list(res.cofactors) if res.cofactors is not None else None,
        "unramifiable_in_L": res.unramifiable_in_L,
    }
    if ns.verbose:
        out["uda_rank"] = res.uda.rank
        out["cofactors_in_L"] = _dump_list(res.cofactors_in_L) if res.cofactors_in_L is not None else None
    _emit(out)
    return 0 if res.unramifiable else 1


def cmd_lift_root(ns) -> int:
    R = ring_from_json(_load(ns.ring, "--ring"))
    P = poly_from_json(R, _load(ns.poly, "--poly"), "--poly")
    cert = check_local(R)
    if ns.residue is None:
        a = hensel.find_simple_root(P, cert)
    else:
        a = hensel.lift_simple_root(P, _load(ns.residue, "--residue"), cert)
    _emit({"root": a.dump(), "residue": cert.residue(a).dump()})
    return 0


def cmd_lift_idempotent(ns) -> int:
    elem = _load(ns.element, "--element")
    if ns.algebra is not None:
        A = algebra_from_json(_load(ns.algebra, "--algebra"))
        e = hensel.lift_idempotent_algebra(A, elem, method=ns.method)
        _emit({"idempotent": e.dump()})
        return 0
    if ns.ring is None or ns.poly is None:
        raise InputError("lift-idempotent needs --algebra, or both --ring and --poly")
    R = ring_from_json(_load(ns.ring, "--ring"))
    P = poly_from_json(R, _load(ns.poly, "--poly"), "--poly")
    if not isinstance(elem, list):
        raise InputError("--element: expected a coefficient list for R[X]/(P)")
    u = hensel.lift_idempotent_monic_quotient(P, elem, method=ns.method)
    _emit({"idempotent": u.dump(), "method": ns.method})
    return 0


def cmd_hensel_factor(ns) -> int:
    R = ring_from_json(_load(ns.ring, "--ring"))
    P = poly_from_json(R, _load(ns.poly, "--poly"), "--poly")
    cert = check_local(R)
    F = cert.residue_field
    f = poly_from_json(F, _load(ns.f, "--f"), "--f")
    g = poly_from_json(F, _load(ns.g, "--g"), "--g")
    FF, GG = hensel.hensel_factor(P, f, g, cert, method=ns.method)
    _emit({"F": FF.dump(), "G": GG.dump()})
    return 0


def cmd_is_azumaya(ns) -> int:
    A = algebra_from_json(_load(ns.algebra, "--algebra"))
    ok = is_azumaya(A)
    out: dict = {"azumaya": ok}
    if A.rank:
        d = canonical_map_det(A)
        out["determinant"] = d.dump()
        out["determinant_inverse"] = d.inverse().dump() if ok else None
    _emit(out)
    return 0 if ok else 1


def cmd_center(ns) -> int:
    A = algebra_from_json(_load(ns.algebra, "--algebra"))
    gens = center(A)
    _emit({"center": [g.dump() for g in gens], "scalars_only": center_is_scalars(A)})
    return 0


def cmd_split(ns) -> int:
    A = algebra_from_json(_load(ns.algebra, "--algebra"))
    tree = build_tree(A, ns.family, seed=ns.seed, mode=ns.mode)
    rep = verify_tree(tree)
    if not rep.ok:
        raise AssertionError("built tree failed verification: " + "; ".join(rep.lines()))
    _emit(tree_to_json(tree))
    return 0


def cmd_verify_tree(ns) -> int:
    tree = tree_from_json(_load(ns.tree, "tree"))
    if ns.mode is not None:
        tree.mode = ns.mode
    rep = verify_tree(tree)
    _emit({
        "ok": rep.ok,
        "nodes": rep.checked,
        "failures": [{"path": p, "message": m} for p, m in rep.failures],
    })
    return 0 if rep.ok else 1


def cmd_skolem_noether(ns) -> int:
    A = algebra_from_json(_load(ns.algebra, "--algebra"))
    rows = _load(ns.automorphism, "--automorphism")
    if not isinstance(rows, list):
        raise InputError("--automorphism: expected a square matrix (column j = image of basis j)")
    psi = parse_automorphism(A, rows)
    check_automorphism(A, psi)
    cert = check_local(A.ring)
    w = standard_matrix_units(A) or split_over_finite_local(A, cert, seed=ns.seed)
    a = skolem_noether_matrix(w, psi, cert)
    mod = skolem_noether_module(A, psi, cert)
    _emit({
        "conjugator": a.dump(),
        "module_generators": [g.dump() for g in mod.generators],
        "module_rank": mod.rank,
        "module_unit_generator": mod.generator.dump() if isinstance(mod.generator, AlgebraElement) else None,
    })
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="azumaya", description="Exact Hensel lifting and Azumaya-algebra certificates.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=False):
        if seed:
            sp.add_argument("--seed", type=int, default=0, help="seed for randomized splitting (default 0)")
        sp.add_argument("--verbose", action="store_true", help="include large intermediate data")

    s = sub.add_parser("unramifiable", help="decide 1 = Delta(f) and report the deltas")
    s.add_argument("--ring", required=True)
    s.add_argument("--poly", required=True)
    s.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    common(s)
    s.set_defaults(func=cmd_unramifiable)

    s = sub.add_parser("lift-root", help="lift a residually simple root (or find a simple root)")
    s.add_argument("--ring", required=True)
    s.add_argument("--poly", required=True)
    s.add_argument("--residue", help="residual root; omit to search for a simple root")
    common(s)
    s.set_defaults(func=cmd_lift_root)

    s = sub.add_parser("lift-idempotent", help="lift an idempotent of R[X]/(P) or of a finite algebra")
    s.add_argument("--ring")
    s.add_argument("--poly")
    s.add_argument("--algebra")
    s.add_argument("--element", required=True)
    s.add_argument("--method", choices=hensel.METHODS, default="newton")
    common(s)
    s.set_defaults(func=cmd_lift_idempotent)

    s = sub.add_parser("hensel-factor", help="lift a coprime residual factorization P = f g")
    s.add_argument("--ring", required=True)
    s.add_argument("--poly", required=True)
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--method", choices=hensel.METHODS, default="newton")
    common(s)
    s.set_defaults(func=cmd_hensel_factor)

    s = sub.add_parser("is-azumaya", help="test whether the canonical map is an isomorphism")
    s.add_argument("--algebra", required=True)
    common(s)
    s.set_defaults(func=cmd_is_azumaya)

    s = sub.add_parser("center", help="generators of the center")
    s.add_argument("--algebra", required=True)
    common(s)
    s.set_defaults(func=cmd_center)

    s = sub.add_parser("split", help="build a splitting tree for a supported family")
    s.add_argument("--algebra", required=True)
    s.add_argument("--family", choices=FAMILIES)
    s.add_argument("--mode", choices=MODES, default="etale")
    common(s, seed=True)
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("verify-tree", help="verify a splitting tree")
    s.add_argument("tree")
    s.add_argument("--mode", choices=MODES, help="override the tree's mode")
    common(s)
    s.set_defaults(func=cmd_verify_tree)

    s = sub.add_parser("skolem-noether", help="conjugator realizing an automorphism")
    s.add_argument("--algebra", required=True)
    s.add_argument("--automorphism", required=True)
    common(s, seed=True)
    s.set_defaults(func=cmd_skolem_noether)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DescriptorError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2
    except AlgebraError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        print(f"error: malformed input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
