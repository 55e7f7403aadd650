"""JSON forms of rings, polynomials, algebras and splitting trees."""

from __future__ import annotations

from typing import Any

from .algebra import FiniteAlgebra
from .errors import DescriptorError
from .poly import Poly
from .rings import BaseSpec, Localize, MonicQuotient, Ring, RingDescriptor, make_ring
from .splittree import MODES, Leaf, LocalizationCover, MatrixUnitWitness, RootAdjunction, SplitTree

_BASE_KINDS = ("integers", "rationals", "prime_field", "zmod_pk")


def _req(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise DescriptorError(f"{where}: expected an object, got {type(d).__name__}")
    if key not in d:
        raise DescriptorError(f"{where}: missing field '{key}'")
    return d[key]


def _int_field(d: dict, key: str, where: str) -> int:
    v = _req(d, key, where)
    if isinstance(v, str):
        try:
            v = int(v)
        except ValueError:
            raise DescriptorError(f"{where}.{key}: not an integer: {v!r}") from None
    if not isinstance(v, int) or isinstance(v, bool):
        raise DescriptorError(f"{where}.{key}: not an integer: {v!r}")
    return v


def descriptor_from_json(d: Any) -> RingDescriptor:
    base = _req(d, "base", "ring")
    kind = _req(base, "kind", "ring.base")
    if kind not in _BASE_KINDS:
        raise DescriptorError(f"ring.base.kind: unknown kind {kind!r}; expected one of {_BASE_KINDS}")
    if kind in ("prime_field", "zmod_pk"):
        p = _int_field(base, "p", "ring.base")
        k = _int_field(base, "k", "ring.base") if kind == "zmod_pk" else None
        spec = BaseSpec(kind, p=p, k=k)
    else:
        spec = BaseSpec(kind)
    steps = []
    raw_steps = d.get("steps", [])
    if not isinstance(raw_steps, list):
        raise DescriptorError("ring.steps: expected a list")
    for i, s in enumerate(raw_steps):
        where = f"ring.steps[{i}]"
        sk = _req(s, "kind", where)
        if sk == "monic_quotient":
            mod = _req(s, "modulus", where)
            if not isinstance(mod, list):
                raise DescriptorError(f"{where}.modulus: expected a coefficient list")
            steps.append(MonicQuotient(str(s.get("var", f"x{i}")), tuple(mod)))
        elif sk == "localize":
            steps.append(Localize(_req(s, "u", where)))
        else:
            raise DescriptorError(f"{where}.kind: unknown step kind {sk!r}")
    return RingDescriptor(spec, tuple(steps))


def ring_from_json(d: Any) -> Ring:
    return make_ring(descriptor_from_json(d))


def descriptor_to_json(desc: RingDescriptor) -> dict:
    b = desc.base
    base: dict = {"kind": b.kind}
    if b.p is not None:
        base["p"] = b.p
    if b.k is not None:
        base["k"] = b.k
    steps = []
    for s in desc.steps:
        if isinstance(s, MonicQuotient):
            steps.append({"kind": "monic_quotient", "var": s.var, "modulus": list(s.modulus)})
        else:
            steps.append({"kind": "localize", "u": s.u})
    return {"base": base, "steps": steps}


def ring_to_json(R: Ring) -> dict:
    return descriptor_to_json(R.descriptor)


def poly_from_json(R: Ring, coeffs: Any, where: str = "poly") -> Poly:
    if not isinstance(coeffs, list):
        raise DescriptorError(f"{where}: expected a coefficient list (degree 0 first)")
    return Poly(R, coeffs)


def poly_to_json(f: Poly) -> list:
    return f.dump()


def algebra_from_json(d: Any, ring: Ring | None = None) -> FiniteAlgebra:
    if ring is None:
        ring = ring_from_json(_req(d, "ring", "algebra"))
    rank = _int_field(d, "rank", "algebra")
    sc = _req(d, "sc", "algebra")
    unit = _req(d, "unit", "algebra")
    return FiniteAlgebra(ring, rank, sc, unit)


def algebra_to_json(A: FiniteAlgebra, with_ring: bool = True) -> dict:
    out = {"rank": A.rank, "sc": A.dump_sc(), "unit": [A.ring.dump(x) for x in A.unit]}
    if with_ring:
        out["ring"] = ring_to_json(A.ring)
    return out


# ---------------------------------------------------------------------------
# Splitting trees


def _node_to_json(node, A: FiniteAlgebra) -> dict:
    S = A.ring
    if isinstance(node, Leaf):
        w = node.witness
        out = {"kind": "leaf", "n": w.n, "units": [list(u.dump()) if hasattr(u, "dump") else u for u in w.flat()]}
        claimed = node.algebra if node.algebra is not None else A
        out["sc"] = claimed.dump_sc() if isinstance(claimed, FiniteAlgebra) else claimed["sc"]
        return out
    if isinstance(node, RootAdjunction):
        P = node.poly if isinstance(node.poly, Poly) else Poly(S, node.poly)
        child = A.base_change(S.quotient(P, node.var))
        return {"kind": "adjoin", "poly": P.dump(), "var": node.var, "child": _node_to_json(node.child, child)}
    if isinstance(node, LocalizationCover):
        units = [S(u) for u in node.units]
        kids = [_node_to_json(c, A.base_change(S.localize(u))) for u, c in zip(units, node.children)]
        return {"kind": "cover", "units": [u.dump() for u in units], "children": kids}
    raise DescriptorError(f"unknown node type {type(node).__name__}")


def tree_to_json(tree: SplitTree) -> dict:
    return {
        "mode": tree.mode,
        "ring": ring_to_json(tree.algebra.ring),
        "algebra": algebra_to_json(tree.algebra, with_ring=False),
        "node": _node_to_json(tree.node, tree.algebra),
    }


def _node_from_json(d: Any, where: str):
    kind = _req(d, "kind", where)
    if kind == "leaf":
        n = _int_field(d, "n", where)
        flat = _req(d, "units", where)
        if not isinstance(flat, list):
            raise DescriptorError(f"{where}.units: expected a list of coordinate lists")
        units = [flat[i * n:(i + 1) * n] for i in range(n)]
        algebra = None
        if "sc" in d:
            algebra = {"sc": d["sc"]}
            if "unit" in d:
                algebra["unit"] = d["unit"]
        return Leaf(MatrixUnitWitness(n, units), algebra)
    if kind == "adjoin":
        poly = _req(d, "poly", where)
        if not isinstance(poly, list):
            raise DescriptorError(f"{where}.poly: expected a coefficient list")
        return RootAdjunction(poly, _node_from_json(_req(d, "child", where), where + ".child"), str(d.get("var", "y")))
    if kind == "cover":
        units = _req(d, "units", where)
        children = _req(d, "children", where)
        if not isinstance(units, list) or not isinstance(children, list):
            raise DescriptorError(f"{where}: 'units' and 'children' must be lists")
        kids = [_node_from_json(c, f"{where}.children[{i}]") for i, c in enumerate(children)]
        return LocalizationCover(list(units), kids)
    raise DescriptorError(f"{where}.kind: unknown node kind {kind!r}; expected leaf, adjoin or cover")


def tree_from_json(d: Any):
    mode = d.get("mode", "etale") if isinstance(d, dict) else None
    if mode not in MODES:
        raise DescriptorError(f"tree.mode: expected one of {MODES}, got {mode!r}")
    alg = _req(d, "algebra", "tree")
    ring = ring_from_json(_req(d, "ring", "tree")) if "ring" in d else ring_from_json(_req(alg, "ring", "tree.algebra"))
    A = algebra_from_json(alg, ring)
    return SplitTree(A, _node_from_json(_req(d, "node", "tree"), "$.node"), mode)
