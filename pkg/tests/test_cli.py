from __future__ import annotations

import json
import subprocess
import sys

import pytest

from azumaya import QQ, IntegersModPrimePower, ZZ, matrix_algebra, monic_quotient_algebra, quaternion_algebra
from azumaya.cli import main
from azumaya.serialize import algebra_to_json

Z9 = {"base": {"kind": "zmod_pk", "p": 3, "k": 2}}
Z25 = {"base": {"kind": "zmod_pk", "p": 5, "k": 2}}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def dump(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


def test_unramifiable_x_squared_over_z(capsys, tmp_path):
    z = dump(tmp_path, "z.json", {"base": {"kind": "integers"}})
    f = dump(tmp_path, "xsq.json", [0, 0, 1])
    code, out, _ = run(capsys, "unramifiable", "--ring", z, "--poly", f)
    assert code == 1 and out["unramifiable"] is False and out["deltas"] == ["0", "0"]


def test_unramifiable_positive_with_cofactors(capsys):
    ring = {"base": {"kind": "integers"}, "steps": [{"kind": "localize", "u": 2}]}
    code, out, _ = run(capsys, "unramifiable", "--ring", json.dumps(ring), "--poly", "[1, 0, 1]", "--verbose")
    assert code == 0 and out["unramifiable"] and out["unramifiable_in_L"]
    assert out["deltas"] == ["0", "4"] and out["uda_rank"] == 2


def test_is_azumaya(capsys, tmp_path):
    m2q = dump(tmp_path, "m2q.json", algebra_to_json(matrix_algebra(QQ, 2)))
    code, out, _ = run(capsys, "is-azumaya", "--algebra", m2q)
    assert code == 0 and out["azumaya"] is True
    eps = json.dumps(algebra_to_json(monic_quotient_algebra(QQ, [0, 0, 1])))
    code, out, _ = run(capsys, "is-azumaya", "--algebra", eps)
    assert code == 1 and out["azumaya"] is False and out["determinant"] == "0"


def test_center(capsys):
    H = json.dumps(algebra_to_json(quaternion_algebra(IntegersModPrimePower(5, 1), -1, -1)))
    code, out, _ = run(capsys, "center", "--algebra", H)
    assert code == 0 and out["scalars_only"] and len(out["center"]) == 1


def test_hensel_commands(capsys):
    code, out, _ = run(capsys, "lift-root", "--ring", json.dumps(Z25), "--poly", "[1, 0, 1]", "--residue", "2")
    assert code == 0 and out["root"] == "7"
    code, out, _ = run(capsys, "lift-root", "--ring", json.dumps(Z25), "--poly", "[0, 0, -1, 1]")
    assert code == 0 and out["root"] == "1"
    code, out, _ = run(capsys, "hensel-factor", "--ring", json.dumps(Z25), "--poly", "[1, 0, 1]",
                       "--f", "[-2, 1]", "--g", "[-3, 1]", "--method", "paper")
    assert code == 0 and out == {"F": ["18", "1"], "G": ["7", "1"]}
    for method in ("newton", "paper"):
        code, out, _ = run(capsys, "lift-idempotent", "--ring", json.dumps(Z9), "--poly", "[2, -3, 1]",
                           "--element", "[2, 2]", "--method", method)
        assert code == 0 and out["idempotent"] == ["2", "8"]
    A = json.dumps(algebra_to_json(matrix_algebra(IntegersModPrimePower(3, 2), 2)))
    code, out, _ = run(capsys, "lift-idempotent", "--algebra", A, "--element", "[1, 1, 3, 0]")
    assert code == 0 and len(out["idempotent"]) == 4


def test_split_verify_round_trip(capsys, tmp_path):
    H = dump(tmp_path, "h.json", algebra_to_json(quaternion_algebra(ZZ.localize(2), -1, -1)))
    code, tree, _ = run(capsys, "split", "--algebra", H)
    assert code == 0 and tree["node"]["kind"] == "adjoin"
    t = dump(tmp_path, "tree.json", tree)
    code, rep, _ = run(capsys, "verify-tree", t)
    assert code == 0 and rep == {"ok": True, "nodes": 2, "failures": []}
    code, rep, _ = run(capsys, "verify-tree", t, "--mode", "fppf")
    assert code == 0
    tree["node"]["child"]["units"][0][0] = ["1", "0"]
    code, rep, _ = run(capsys, "verify-tree", dump(tmp_path, "bad.json", tree))
    assert code == 1 and rep["failures"][0]["path"] == "$.node.child"


def test_verify_bad_cover(capsys, tmp_path):
    leaf = {"kind": "leaf", "n": 2, "units": [[str(int(i == k)) for i in range(4)] for k in range(4)]}
    doc = {
        "mode": "etale",
        "ring": {"base": {"kind": "integers"}},
        "algebra": algebra_to_json(matrix_algebra(ZZ, 2), with_ring=False),
        "node": {"kind": "cover", "units": ["2", "4"], "children": [leaf, leaf]},
    }
    code, rep, _ = run(capsys, "verify-tree", dump(tmp_path, "bad_cover.json", doc))
    assert code == 1 and rep["failures"][0]["path"] == "$.node"
    assert "cover" in rep["failures"][0]["message"] or "unit ideal" in rep["failures"][0]["message"]


def test_skolem_noether(capsys):
    A = json.dumps(algebra_to_json(matrix_algebra(IntegersModPrimePower(3, 2), 2)))
    # conjugation by [[1,1],[0,1]]: columns are images of E11, E12, E21, E22
    psi = [[1, 0, 1, 0], [-1, 1, -1, 1], [0, 0, 1, 0], [0, 0, -1, 1]]
    code, out, _ = run(capsys, "skolem-noether", "--algebra", A, "--automorphism", json.dumps(psi))
    assert code == 0 and out["module_rank"] == 1 and out["conjugator"] == ["1", "1", "0", "1"]
    bad = [[0] * 4 for _ in range(4)]
    code, out, err = run(capsys, "skolem-noether", "--algebra", A, "--automorphism", json.dumps(bad))
    assert code == 2 and "NotAutomorphism" in err


@pytest.mark.parametrize("argv, needle", [
    (["unramifiable", "--ring", '{"base": {"kind": "foo"}}', "--poly", "[1]"], "ring.base.kind"),
    (["unramifiable", "--ring", '{"base": {"kind": "prime_field", "p": 6}}', "--poly", "[1]"], "6"),
    (["unramifiable", "--ring", '{"base": {"kind": "zmod_pk", "p": 5}}', "--poly", "[1]"], "ring.base"),
    (["unramifiable", "--ring", '{"base": {"kind": "integers"}}', "--poly", "[1, 2]"], "monic"),
    (["unramifiable", "--ring", "missing.json", "--poly", "[1]"], "missing.json"),
    (["lift-root", "--ring", json.dumps(Z25), "--poly", "[1, 0, 1]", "--residue", "1"], "NotSimpleRoot"),
    (["lift-root", "--ring", '{"base": {"kind": "integers"}}', "--poly", "[1, 1]"], "UnsupportedBase"),
    (["hensel-factor", "--ring", json.dumps(Z9), "--poly", "[1, 0, 1]", "--f", "[0, 1]", "--g", "[0, 1]"], "ResidueMismatch"),
    (["split", "--algebra", json.dumps(algebra_to_json(monic_quotient_algebra(QQ, [0, 0, 1])))], "NotAzumaya"),
    (["is-azumaya", "--algebra", '{"rank": 1}'], "ring"),
])
def test_errors_exit_2(capsys, argv, needle):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out is None
    assert needle in err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["is-azumaya", "--algebra", "{}", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_deterministic_bytes(tmp_path):
    A = dump(tmp_path, "a.json", algebra_to_json(quaternion_algebra(IntegersModPrimePower(3, 2), -1, -1)))
    cmd = [sys.executable, "-m", "azumaya", "split", "--algebra", str(A), "--seed", "3"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and json.loads(first)["node"]["kind"] == "leaf"
