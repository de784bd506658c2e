import json

import pytest

from pwtpack import cli
from pwtpack.gen import generate_instance
from pwtpack.model import format_instance


def run(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def solve_args(files, *extra):
    inst, tour = files
    return ["solve", "--instance", str(inst), "--tour", str(tour), *extra]


def test_solve_r3(capsys, toy4_files):
    code, out, _ = run(capsys, *solve_args(toy4_files, "--heuristic", "r3"))
    assert code == 0
    rep = json.loads(out)
    assert rep["objective"] == 64.0 and rep["items"] == [1, 3] and rep["algorithm"] == "Pack"


@pytest.mark.parametrize("extra", [
    ["--heuristic", "r6"],
    ["--heuristic", "r5", "--gamma", "2"],
    ["--heuristic", "r3", "--chance", "--alpha", "0.9"],
    ["--heuristic", "r1", "--alpha", "0.9"],
    ["--heuristic", "r7", "--chance"],
    ["--heuristic", "r7", "--chance", "--alpha", "1.5"],
])
def test_solve_usage_errors(capsys, toy4_files, extra):
    code, _, err = run(capsys, *solve_args(toy4_files, *extra))
    assert code == 2 and "error" in err


def test_argparse_usage_exit(capsys, toy4_files):
    with pytest.raises(SystemExit) as info:
        cli.main(solve_args(toy4_files, "--heuristic", "r9"))
    assert info.value.code == 2


def test_missing_file_exit_1(capsys, toy4_files, tmp_path):
    _, tour = toy4_files
    code, _, _ = run(capsys, "solve", "--instance", str(tmp_path / "nope.ttp"), "--tour", str(tour),
                     "--heuristic", "r1")
    assert code == 1


def test_bad_data_exit_1(capsys, toy4_files, tmp_path):
    inst, _ = toy4_files
    bad = tmp_path / "bad.tour"
    bad.write_text("1 2 2 4")
    code, _, _ = run(capsys, "solve", "--instance", str(inst), "--tour", str(bad), "--heuristic", "r1")
    assert code == 1


def test_solve_chance_and_trace(capsys, toy4_files):
    code, out, _ = run(capsys, *solve_args(toy4_files, "--heuristic", "r7", "--chance", "--alpha", "0.9",
                                           "--delta", "2", "--bound", "chebyshev", "--trace"))
    rep = json.loads(out)
    assert code == 0 and rep["algorithm"] == "Pack_SF" and rep["surrogate_weight"] <= 15
    assert rep["bound"] == "chebyshev" and rep["trace"]


def test_hh(capsys, toy4_files):
    inst, tour = toy4_files
    base = ["hh", "--instance", str(inst), "--tour", str(tour)]
    code, out, _ = run(capsys, *base, "--variant", "HH2", "--iters", "0", "--seed", "1")
    assert code == 0 and json.loads(out)["objective"] == 64.0
    code, _, _ = run(capsys, *base, "--variant", "HH5", "--seed", "1")
    assert code == 2
    reps = []
    for _ in range(2):
        code, out, _ = run(capsys, *base, "--variant", "HH3", "--iters", "50", "--seed", "9")
        rep = json.loads(out)
        rep.pop("runtime_ms")
        reps.append(json.dumps(rep, sort_keys=True))
    assert reps[0] == reps[1]
    assert "trajectory" in json.loads(reps[0]) and "sequence" in json.loads(reps[0])


def test_hh_requires_seed(capsys, toy4_files):
    inst, tour = toy4_files
    with pytest.raises(SystemExit):
        cli.main(["hh", "--instance", str(inst), "--tour", str(tour), "--variant", "HH1"])


def test_oracle(capsys, toy4_files, tmp_path):
    inst, tour = toy4_files
    code, out, _ = run(capsys, "oracle", "--instance", str(inst), "--tour", str(tour))
    rep = json.loads(out)
    assert code == 0 and rep["items"] == [1, 3] and rep["objective"] == 64.0
    code, out, _ = run(capsys, "oracle", "--instance", str(inst), "--tour", str(tour), "--capacity", "0")
    rep = json.loads(out)
    assert rep["items"] == [] and rep["objective"] == -4.0
    big = tmp_path / "big.ttp"
    big.write_text(format_instance(generate_instance(26, "unc", seed=1)))
    code, _, err = run(capsys, "oracle", "--instance", str(big), "--tour-seed", "0")
    assert code == 2 and "cap" in err


def _plan(tmp_path, payload):
    p = tmp_path / "plan.json"
    p.write_text(json.dumps(payload))
    return str(p)


def test_validate(capsys, toy4_files, tmp_path):
    inst, tour = toy4_files
    common = ["validate", "--instance", str(inst), "--alpha", "0.9", "--delta", "2", "--samples", "20000"]
    code, out, _ = run(capsys, *common, "--plan", _plan(tmp_path, {"selected": [2]}))
    rep = json.loads(out)
    assert code == 0 and rep["violation_rate"] == 0 and rep["verdict"] == "PASS"
    # lightest draw is 20 - 3 = 17 > 15
    overfull = [a if a != "2" else "1" for a in common]
    code, out, _ = run(capsys, *overfull, "--plan", _plan(tmp_path, {"items": [1, 2, 3]}))
    rep = json.loads(out)
    assert rep["violation_rate"] == 1 and rep["verdict"] == "FAIL"
    code, _, _ = run(capsys, *common, "--plan", _plan(tmp_path, [7]))
    assert code == 1


def test_validate_surrogate_plan(capsys, toy4_files, tmp_path):
    inst, tour = toy4_files
    code, out, _ = run(capsys, *solve_args(toy4_files, "--heuristic", "r7", "--chance", "--alpha", "0.9",
                                           "--delta", "2"))
    plan = _plan(tmp_path, json.loads(out))
    code, out, _ = run(capsys, "validate", "--instance", str(inst), "--plan", plan,
                       "--alpha", "0.9", "--delta", "2")
    assert json.loads(out)["verdict"] == "PASS"


def test_generators(capsys, tmp_path):
    inst = tmp_path / "g.ttp"
    assert cli.main(["gen-instance", "--cities", "12", "--kind", "bsc", "--seed", "4", "-o", str(inst)]) == 0
    tour = tmp_path / "g.tour"
    assert cli.main(["gen-tour", "--instance", str(inst), "--seed", "2", "-o", str(tour)]) == 0
    code, out, _ = run(capsys, "solve", "--instance", str(inst), "--tour", str(tour), "--heuristic", "r5")
    assert code == 0 and json.loads(out)["algorithm"] == "Pack_IH"
