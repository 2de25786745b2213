from __future__ import annotations

import json
import subprocess
import sys

import pytest

from cyschottky.cli import main, parse_config
from cyschottky.report import envelope, parse, render

K3_JET = {"frame": {"n": 2, "hodge": [1, 2, 1]}, "order": 3,
          "components": {"phi": [{"coeff": "1", "exp": [1, 0, 1]}, {"coeff": "-1", "exp": [0, 2, 0]}]}}
N3_JET = {"frame": {"n": 3, "hodge": [1, 1, 1, 1]}, "order": 4,
          "components": {"psi": [{"coeff": "1", "exp": [1, 1]}], "phi": [{"coeff": "1", "exp": [2, 1]}]}}
BROKEN = {"frame": {"n": 3, "hodge": [1, 1, 1, 1]}, "order": 4,
          "components": {"psi": [{"coeff": "1", "exp": [1, 0]}], "phi": []}}


def fermat_toml(nv):
    terms = ", ".join(f'["1", {[nv if i == j else 0 for j in range(nv)]}]' for i in range(nv))
    return f"vars = {nv}\ndegree = {nv}\nterms = [{terms}]\n"


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, data in (("k3.json", K3_JET), ("n3.json", N3_JET), ("broken.json", BROKEN)):
        (tmp_path / name).write_text(json.dumps(data))
        out[name] = str(tmp_path / name)
    for name, nv in (("quartic.toml", 4), ("quintic.toml", 5)):
        (tmp_path / name).write_text(fermat_toml(nv))
        out[name] = str(tmp_path / name)
    (tmp_path / "bad.json").write_text("{not json")
    out["bad.json"] = str(tmp_path / "bad.json")
    out["dir"] = tmp_path
    return out


def run(argv, capsys):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_parse_config(files):
    cfg = parse_config(["schottky", "--jet", files["n3.json"], "--order", "4"])
    assert cfg.subcommand == "schottky" and cfg.order == 4
    cfg = parse_config(["yukawa", "--hypersurface", files["quintic.toml"]])
    assert cfg.subcommand == "yukawa"


@pytest.mark.parametrize("argv", [
    ["schottky", "--jet", "N3", "--order", "1"],
    ["schottky", "--jet", "missing.json"],
    ["schottky", "--jet", "BAD"],
    ["schottky", "--jet", "N3", "--bogus"],
    ["verify", "nosuch"],
])
def test_usage_errors(files, argv, capsys):
    subst = {"N3": files["n3.json"], "BAD": files["bad.json"]}
    code, _, err = run([subst.get(a, a) for a in argv], capsys)
    assert code == 2
    assert err


def test_toy_report(files, capsys):
    code, out, _ = run(["schottky", "--jet", files["k3.json"]], capsys)
    assert code == 0
    rep = parse(out.encode())
    assert rep["relations"] == ["phi - t0*t2 + t1^2"]
    assert rep["generator_terms"][0]
    assert rep["seed"] is not None and rep["version"]
    assert rep["provenance"] and rep["normalization"]


def test_byte_identical(files, tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"out{k}.json"
        assert main(["schottky", "--jet", files["n3.json"], "--order", "4", "--output", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_broken_jet_exit_3(files, capsys):
    code, out, err = run(["schottky", "--jet", files["broken.json"]], capsys)
    assert code == 3
    assert parse(out.encode())["error"]["component"] == "psi"
    assert "psi" in err


def test_k3_quadric_pipeline(files, capsys):
    code, out, _ = run(["k3", "quadric", "--hypersurface", files["quartic.toml"]], capsys)
    assert code == 0
    rep = parse(out.encode())
    (rel,) = rep["relations"]
    assert rel.startswith("phi - ")
    assert {f"t{i}" for i in range(1, 20)} <= set(rel.replace("*", " ").replace("^2", "").split())


def test_verify_os_duality(capsys):
    code, out, _ = run(["verify", "os-duality", "--seed", "7", "--trials", "100"], capsys)
    assert code == 0
    (suite,) = parse(out.encode())["suites"]
    assert suite["passed"] == 100 and suite["seed"] == 7


def test_verify_failure_exit_1(capsys):
    code, out, _ = run(["verify", "generation", "--trials", "10"], capsys)
    rep = parse(out.encode())
    assert code == (0 if rep["ok"] else 1)


def test_jacobian_modular(files, capsys):
    code, out, _ = run(["jacobian", "--hypersurface", files["quartic.toml"], "--modular-check", "7,11"], capsys)
    rep = parse(out.encode())
    assert code == 0 and rep["modular_check"]["agree"]
    assert rep["dims"] == [1, 4, 10, 16, 19, 16, 10, 4, 1]


def test_singular_exit_3(tmp_path, capsys):
    p = tmp_path / "sing.toml"
    p.write_text('vars = 3\ndegree = 3\nterms = [["1", [3, 0, 0]], ["1", [0, 3, 0]]]\n')
    code, _, err = run(["jacobian", "--hypersurface", str(p)], capsys)
    assert code == 3 and "singular" in err


def test_os_and_frame(files, tmp_path, capsys):
    alg = tmp_path / "alg.json"
    alg.write_text(json.dumps({"monomial_ideal": [[3]], "names": ["x"]}))
    code, out, _ = run(["os", "chain", "--algebra", str(alg), "--order", "2"], capsys)
    assert code == 0 and parse(out.encode())["B0_dims"] == [1, 2, 3]
    code, out, _ = run(["os", "duality", "--algebra", str(alg), "--order", "2", "--module", "free:3"], capsys)
    assert code == 0 and parse(out.encode())["report"]["is_isomorphism"]
    code, out, _ = run(["frame", "--hypersurface", files["quintic.toml"]], capsys)
    assert parse(out.encode())["frame"]["hodge"] == [1, 101, 101, 1]


def test_jet_build_and_validate(files, capsys):
    code, out, _ = run(["jet", "build", "--hypersurface", files["quartic.toml"], "--order", "3"], capsys)
    assert code == 0
    jet = parse(out.encode())["jet"]
    p = files["dir"] / "built.json"
    p.write_text(json.dumps(jet))
    code, out, _ = run(["jet", "validate", "--jet", str(p)], capsys)
    assert code == 0 and parse(out.encode())["valid"]


def test_render_roundtrip():
    rep = envelope("schottky", {"relations": []}, 1)
    data = render(rep)
    assert b'"relations": []' in data
    assert render(parse(data)) == data


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "cyschottky", "schottky", "--jet", files["k3.json"]],
                         capture_output=True)
    assert res.returncode == 0
    assert b"phi - t0*t2 + t1^2" in res.stdout
