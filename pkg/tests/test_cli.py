import json
import subprocess
import sys
from pathlib import Path

from berkline.bradial import expr_from_json, set_equal
from berkline.cli import main
from strategies import P2

ROOT = Path(__file__).resolve().parents[1]
SAMPLE = ROOT / "samples" / "annulus_graph_complement.json"
T2 = '{"num":{"coeffs":["0","0","1"]},"den":{"coeffs":["1"]}}'
DISC_TRI = '{"domain":{"disc":{"a":"0","r":{"exp":"0"}}},"points":[{"a":"0","r":{"exp":"0"}}]}'
A1_TRI = '{"domain":"A1","points":[{"a":"0","r":{"exp":"0"}}]}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_degree_example(capsys):
    code, out, _ = run(capsys, "degree", "--p", "2", "--map", T2, "--point", '{"a":"1","r":{"exp":"-2"}}')
    assert (code, out) == (0, "1\n")


def test_normalize_annulus_graph_complement_listing(capsys):
    # the required listing has 10 pieces
    code, out, _ = run(capsys, "normalize", "--expr", str(SAMPLE))
    assert code == 0
    assert json.loads(out)["count"] == 10


def test_normalize_reports_disjointness_and_round_trips(capsys):
    code, out, _ = run(capsys, "normalize", "--expr", str(SAMPLE))
    doc = json.loads(out)
    assert code == 0 and doc["disjoint"] is True and doc["count"] == len(doc["pieces"])
    again = run(capsys, "normalize", "--expr", json.dumps(doc["pieces"]))[1]
    assert set_equal(expr_from_json(doc["pieces"]), expr_from_json(json.loads(again)["pieces"]), P2)
    assert set_equal(expr_from_json(doc["pieces"]), expr_from_json(json.loads(SAMPLE.read_text())), P2)


def test_normalize_text_format(capsys):
    code, out, _ = run(capsys, "normalize", "--format", "text", "--expr", str(SAMPLE))
    assert code == 0 and out.splitlines()[-1].endswith("disjoint: true")


def test_skeleton_example(capsys, tmp_path):
    dot = tmp_path / "out.dot"
    code, out, _ = run(capsys, "skeleton", "--tri", A1_TRI, "--dot", str(dot))
    assert code == 0
    text = dot.read_text()
    assert text.count("[label=\"η(") == 1 and text.count(" -- ") == 1
    graph = json.loads(out)
    assert len(graph["vertices"]) == 1 and graph["edges"][0]["hi"] is None


def test_output_is_bit_stable(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "facade", "--tri", A1_TRI, "--out", str(a))
    run(capsys, "facade", "--tri", A1_TRI, "--out", str(b))
    data = a.read_bytes()
    assert data == b.read_bytes() and b"\r" not in data
    assert json.dumps(json.loads(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n" == data.decode()


def test_schema_errors_exit_2(capsys):
    code, _, err = run(capsys, "degree", "--map", T2, "--point", '{"a":"1"}')
    assert code == 2 and "--point" in err
    code, _, err = run(capsys, "degree", "--map", "{not json", "--point", '{"a":"1","r":"zero"}')
    assert code == 2 and "--map" in err
    code, _, err = run(capsys, "member", "--expr", '{"kind":"R9"}', "--point", '{"a":"1","r":"zero"}')
    assert code == 2 and "--expr" in err
    code, _, err = run(capsys, "skeleton", "--tri", A1_TRI, "--format", "csv")
    assert code == 2 and "--format" in err
    code, _, err = run(capsys, "skeleton", "--tri", '{"domain":"A1","points":[]}')
    assert code == 2 and "--tri" in err


def test_kernel_errors_exit_3(capsys):
    code, _, err = run(capsys, "encode", "--tri", DISC_TRI, "--point", '{"a":"0","r":{"exp":"1"}}')
    assert code == 3 and "DomainError" in err
    code, _, err = run(capsys, "fiber", "--map", '{"num":{"coeffs":["0","0","0","1"]}}', "--point", '{"a":"8","r":"zero"}')
    assert code == 3 and "IncompleteOracleError" in err


def test_point_and_map_commands(capsys):
    code, out, _ = run(capsys, "image", "--map", T2, "--point", '{"a":"1","r":{"exp":"-2"}}')
    assert code == 0 and json.loads(out) == {"a": "1/1", "r": {"exp": "-3/1"}}
    code, out, _ = run(capsys, "member", "--expr", '{"kind":"R0","a":"5","s":"zero"}', "--point", '{"a":"5","r":"zero"}')
    assert out == "true\n"
    code, out, _ = run(capsys, "fiber", "--map", T2, "--point", '{"a":"1","r":{"exp":"-3"}}')
    assert json.loads(out)["count"] == 2
    code, out, _ = run(capsys, "locus", "--map", T2, "--d", "2")
    doc = json.loads(out)
    assert code == 0 and doc["residual"] is False and doc["locus"]["pieces"]


def test_facade_commands(capsys):
    code, out, _ = run(capsys, "encode", "--tri", DISC_TRI, "--point", '{"a":"3","r":{"exp":"-2"}}')
    enc = json.loads(out)
    assert code == 0 and enc["kind"] == "tube" and enc["alpha"] == 1
    code, out, _ = run(capsys, "decode", "--tri", DISC_TRI, "--enc", json.dumps(enc))
    assert json.loads(out) == {"a": "3/1", "r": {"exp": "-2/1"}}
    bad = dict(enc, alpha=0)
    assert run(capsys, "decode", "--tri", DISC_TRI, "--enc", json.dumps(bad))[0] == 2
    fine = DISC_TRI.replace('"points":[', '"points":[{"a":"0","r":{"exp":"-1"}},')
    code, out, _ = run(capsys, "transport", "--tri", DISC_TRI, "--tri2", fine, "--enc", json.dumps(enc))
    assert json.loads(out)["case"] == "Y1"
    code, out, _ = run(capsys, "transport", "--tri", DISC_TRI, "--enc", json.dumps(enc), "--map", T2)
    assert json.loads(out)["encoded"] == {"kind": "tube", "index": 0, "alpha": 1, "eta": {"a": "9/1", "r": {"exp": "-3/1"}}}
    code, out, _ = run(capsys, "compile-map", "--map", T2, "--tri", A1_TRI)
    assert json.loads(out)["edges"][0]["degree"] == 2


def test_sample_csv(capsys, monkeypatch):
    expr = '{"kind":"R6","a":"0","s":{"exp":"0"},"s1":{"exp":"-2"}}'
    code, out, _ = run(capsys, "sample", "--expr", expr)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "a,r,member" and len(lines) == 1 + 32 * 32
    assert {line.rsplit(",", 1)[1] for line in lines[1:]} == {"0", "1"}
    base = run(capsys, "sample", "--expr", expr, "--samples", "20", "--seed", "4")[1]
    other = run(capsys, "sample", "--expr", expr, "--samples", "20", "--seed", "5")[1]
    monkeypatch.setenv("BERK_SEED", "4")
    overridden = run(capsys, "sample", "--expr", expr, "--samples", "20", "--seed", "5")[1]
    assert base == overridden != other


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--criteria", "3,4")
    assert code == 0 and out.count("PASS") == 2
    code, out, _ = run(capsys, "verify", "--criteria", "1")
    assert code == 1 and "FAIL" in out
    assert run(capsys, "verify", "--criteria", "12")[0] == 2


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "berkline", "degree", "--map", T2, "--point", '{"a":"0","r":{"exp":"1"}}'],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0 and res.stdout == "2\n"
