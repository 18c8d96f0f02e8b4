import json
import pathlib

import pytest

from qconn.cli import main

DATA = pathlib.Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", str(DATA / "indiscrete_split.json"))
    assert code == 0
    assert json.loads(out)["valid"] is True


def test_validate_triangle_violation_exit_2(capsys):
    code, _, err = run(capsys, "validate", str(DATA / "bad_triangle.json"))
    assert code == 2
    diag = json.loads(err)
    assert diag["error"]["type"] == "SchemaError"
    assert "TriangleViolation(i=0, j=1, k=2" in diag["error"]["message"]


def test_validate_non_json_exit_3(tmp_path, capsys):
    p = tmp_path / "garbage.bin"
    p.write_bytes(b"\x00\xffnot json")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 3
    assert json.loads(err)["error"]["type"] == "ParseError"


def test_validate_missing_file_exit_3(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/file.json")
    assert code == 3
    assert json.loads(err)["error"]["type"] == "ParseError"


def test_analyze_components_fixture(capsys):
    code, out, _ = run(capsys, "analyze", str(DATA / "indiscrete_split.json"),
                       "--components", "--local")
    assert code == 0
    report = json.loads(out)
    comp = report["analyses"]["components"]
    assert comp["antisym_connected"] is True
    assert comp["symmetric"] == [[0, 1], [2]]
    assert comp["antisymmetric"] == [[0, 1, 2]]
    assert comp["certificate"] is None
    assert report["analyses"]["local"]["all_pass"] is True


def test_analyze_single_point(tmp_path, capsys):
    p = tmp_path / "one.json"
    p.write_text(json.dumps({
        "kind": "bitopology", "points": ["x"],
        "forward_min_nbhd": [[0]], "backward_min_nbhd": [[0]],
    }))
    code, out, _ = run(capsys, "analyze", str(p), "--components", "--local")
    assert code == 0
    report = json.loads(out)
    assert report["analyses"]["components"]["antisym_connected"] is True
    assert report["analyses"]["local"]["all_pass"] is True


def test_analyze_digraph_scale(capsys):
    code, out, _ = run(capsys, "analyze", str(DATA / "chain_digraph.json"),
                       "--scale", "10")
    assert code == 0
    scale = json.loads(out)["analyses"]["scale"]
    assert scale["antisymmetric"] == [[0], [1], [2]]


def test_analyze_smyth_and_formal_balls(capsys):
    code, out, _ = run(capsys, "analyze", str(DATA / "chain_digraph.json"),
                       "--smyth", "--formal-balls", "0,1,2")
    assert code == 0
    report = json.loads(out)["analyses"]
    assert report["smyth"]["hypotheses"]["smyth_complete"] is True
    assert report["formal_balls"]["elements"]


def test_analyze_cauchy(capsys):
    code, out, _ = run(capsys, "analyze", str(DATA / "asym_pair.json"),
                       "--cauchy", str(DATA / "constant_seq.json"))
    assert code == 0
    cauchy = json.loads(out)["analyses"]["cauchy"]
    assert cauchy["left_k_cauchy"] is True
    assert 0 in cauchy["forward_limits"]


def test_analyze_scale_on_bitopology_is_usage_error(capsys):
    code, _, err = run(capsys, "analyze", str(DATA / "indiscrete_split.json"),
                       "--scale", "1")
    assert code == 2
    assert json.loads(err)["error"]["type"] == "SchemaError"


def test_analyze_deterministic_bytes(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    for out in (out1, out2):
        code, _, _ = run(capsys, "analyze", str(DATA / "orlicz_pair.json"),
                         "--components", "--local", "--out", str(out))
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_analyze_dot_output(tmp_path, capsys):
    dot_path = tmp_path / "components.dot"
    code, _, _ = run(capsys, "analyze", str(DATA / "indiscrete_split.json"),
                     "--components", "--dot", str(dot_path))
    assert code == 0
    text = dot_path.read_text()
    assert text.startswith("digraph components {")
    assert "subgraph cluster_0" in text


def test_export_dot_formal_balls(tmp_path, capsys):
    out = tmp_path / "balls.dot"
    code, _, _ = run(capsys, "export-dot", str(DATA / "chain_digraph.json"),
                     "--what", "formal-balls", "--radii", "0,1,3",
                     "--out", str(out))
    assert code == 0
    assert out.read_text().startswith("digraph formal_balls {")


def test_search_exit_codes_and_determinism(tmp_path, capsys):
    f1 = tmp_path / "f1.json"
    f2 = tmp_path / "f2.json"
    code1, _, err1 = run(capsys, "search", "--target", "cor61_join_local",
                         "--out", str(f1))
    code2, _, _ = run(capsys, "search", "--target", "cor61_join_local",
                      "--out", str(f2))
    assert code1 == code2 == 1  # findings expected for this target
    assert f1.read_bytes() == f2.read_bytes()
    assert "wall" in err1  # timing goes to stderr, not the findings file
    doc = json.loads(f1.read_text())
    assert doc["stats"]["failures_found"] == len(doc["findings"]) > 0


def test_search_clean_target_exit_zero(capsys):
    code, out, _ = run(capsys, "search", "--target", "prop54_inclusion",
                       "--n", "3", "--mode", "exhaustive", "--budget", "900")
    assert code == 0
    assert json.loads(out)["stats"]["failures_found"] == 0


def test_search_unknown_target_exit_2(capsys):
    code, _, err = run(capsys, "search", "--target", "nope")
    assert code == 2
    assert json.loads(err)["error"]["type"] == "UnknownProperty"


def test_malformed_inputs_never_crash(tmp_path, capsys):
    samples = [
        b"",
        b"[]",
        b"{}",
        b'{"kind": 5}',
        b'{"kind": "quasi_metric"}',
        b'{"kind": "quasi_metric", "points": ["a"], "dist": [[{}]]}',
        b'{"kind": "bitopology", "points": ["a"], "forward_min_nbhd": [[true]], "backward_min_nbhd": [[0]]}',
        b'{"kind": "digraph", "vertices": ["a"], "edges": [["a"]]}',
        b'\xf0\x9f\x92\xa5',
    ]
    for t, payload in enumerate(samples):
        p = tmp_path / f"fuzz{t}.json"
        p.write_bytes(payload)
        code = main(["validate", str(p)])
        capsys.readouterr()
        assert code in (2, 3), payload
        code = main(["analyze", str(p), "--components"])
        capsys.readouterr()
        assert code in (2, 3), payload
