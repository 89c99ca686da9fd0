import json

import numpy as np
import pytest

from freespec import jsonio
from freespec.cli import main
from freespec.freesets import commuting_context, example_context_s2, pseudo_ellipse_context


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, ctx in (("c1", pseudo_ellipse_context()), ("c2", example_context_s2()), ("cc", commuting_context())):
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(jsonio.dumps(jsonio.encode_context(ctx)))
    for name, z in (("inside", (0.5, 0.4)), ("outside", (0.7, 0.4))):
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(jsonio.dumps(jsonio.encode_tuple(np.array(z).reshape(2, 1, 1))))
    paths["zero"] = tmp_path / "zero.json"
    paths["zero"].write_text(jsonio.dumps(jsonio.encode_tuple(np.zeros((2, 2, 2)))))
    paths["dir"] = tmp_path
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_check_hypotheses_exit_codes(files, capsys):
    assert run(capsys, "check-hypotheses", files["c1"])[0] == 0
    assert run(capsys, "check-hypotheses", files["c2"])[0] == 0
    code, report = run(capsys, "check-hypotheses", files["cc"])
    assert code == 1 and report["col_algebra_dim"] == 2


def test_membership_examples(files, capsys):
    code, report = run(capsys, "membership", files["c1"], files["inside"])
    assert code == 0 and report["classification"]["region"] == "inside"
    assert set(report["tests"]) == {"L", "T", "L_prime", "L_prime_star"}
    _, report = run(capsys, "membership", files["c1"], files["outside"])
    assert report["classification"]["region"] == "outside"
    for pencil in ("BE", "BEr", "BEc", "row-ball"):
        _, report = run(capsys, "membership", files["c2"], files["zero"], "--pencil", pencil)
        assert report["classification"]["region"] == "inside"


def test_membership_shape_error(files, capsys):
    code, _ = run(capsys, "membership", files["c1"], files["c1"])
    assert code == 2


def test_verify_julia(files, capsys):
    code, report = run(capsys, "verify", files["c1"], "--suite", "julia", "--seed", "7")
    assert code == 0 and report["unitary"] == 100 == report["checks"]


def test_verify_ball_minimal(files, capsys):
    code, report = run(capsys, "verify", files["c2"], "--suite", "ball-minimal")
    assert code == 0 and report["certificate"]["algebra_dim"] == 72


def test_verify_not_a_ball(files, capsys):
    code, report = run(capsys, "verify", files["c2"], "--suite", "not-a-ball")
    assert code == 0 and all(report["checks"].values())


def test_verify_deterministic_with_output_file(files, capsys):
    out1, out2 = files["dir"] / "r1.json", files["dir"] / "r2.json"
    run(capsys, "verify", files["c2"], "--suite", "fp-alt", "--samples", "30", "--out", out1)
    run(capsys, "verify", files["c2"], "--suite", "fp-alt", "--samples", "30", "--workers", "3", "--out", out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_unknown_suite_is_usage_error(files, capsys):
    assert main(["verify", str(files["c1"]), "--suite", "nope"]) == 2


def test_malformed_json(files, capsys):
    bad = files["dir"] / "bad.json"
    bad.write_text("{not json")
    assert main(["check-hypotheses", str(bad)]) == 2


def test_jet_analyze(files, capsys):
    jet = files["dir"] / "jet.json"
    jet.write_text(json.dumps({"b": [[0, 0], [0, 0]], "L": jsonio.encode_matrix(np.diag([1j, -1]))}))
    code, report = run(capsys, "jet-analyze", files["c2"], jet, "--samples", "50")
    assert code == 0 and report["verdict"] == "trivial"
    jet.write_text(json.dumps({"b": [[0, 0], [0, 0]], "L": jsonio.encode_matrix(np.diag([0.5, 1]))}))
    code, report = run(capsys, "jet-analyze", files["c2"], jet, "--samples", "20")
    assert code == 1 and report["classification"]["violation"] == "L_unitary"
    jet.write_text(json.dumps({"b": [[0.9, 0], [0.9, 0]], "L": jsonio.encode_matrix(np.eye(2))}))
    code, report = run(capsys, "jet-analyze", files["c1"], jet)
    assert code == 1 and report["verdict"] == "invalid-jet"


def test_gen_random(files, capsys):
    code, ctx = run(capsys, "gen-random", "context", "--s", "3", "--seed", "4")
    assert code == 0 and jsonio.decode_context(ctx).s == 3
    _, X = run(capsys, "gen-random", "tuple", "--n", "3")
    assert jsonio.decode_tuple(X).shape == (2, 3, 3)
    _, jet = run(capsys, "gen-random", "jet", "--context", files["c2"])
    assert jsonio.decode_jet(jet).L.shape == (2, 2)
