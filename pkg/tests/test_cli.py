import pytest

from bnsl import cli
from bnsl.instances import parse_nonzero, parse_solution, score_of, validate


@pytest.fixture
def example_file(tmp_path, example4_text):
    p = tmp_path / "ex.scores"
    p.write_text(example4_text)
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_yes(capsys, example_file):
    code, out, _ = run(capsys, "solve", example_file, "--target", "6")
    assert code == 0
    assert out.strip() == "max_score=7 answer=YES"


def test_solve_no(capsys, example_file):
    code, out, _ = run(capsys, "solve", example_file, "--target", "8")
    assert code == 1
    assert out.strip() == "max_score=7 answer=NO"


def test_solve_no_target(capsys, example_file):
    code, out, _ = run(capsys, "solve", example_file)
    assert code == 0 and out.strip() == "max_score=7"


@pytest.mark.parametrize("algo", ["oracle", "lfen", "kernel-lfen", "depset"])
def test_solve_algorithms_agree(capsys, example_file, algo):
    code, out, _ = run(capsys, "solve", example_file, "--algo", algo)
    assert code == 0 and out.strip() == "max_score=7"


def test_solve_writes_solution(capsys, example_file, tmp_path, example4):
    out_file = tmp_path / "sol.txt"
    code, _, _ = run(capsys, "solve", example_file, "--out", str(out_file))
    assert code == 0
    net = parse_solution(out_file.read_text(), example4)
    assert score_of(example4, net) == 7 and validate(net, "dag").ok


def test_rep_algo_mismatch_is_usage_error(capsys, example_file):
    code, _, err = run(capsys, "solve", example_file, "--algo", "twdp")
    assert code == 2 and "additive" in err


def test_mst_with_bound_rejected(capsys, tmp_path):
    p = tmp_path / "a.inst"
    p.write_text("additive 3\nb a 2\nc b 1\n")
    code, _, err = run(capsys, "solve", str(p), "--mode", "polytree",
                       "--algo", "mst", "--max-parents", "1")
    assert code == 2 and "matroid" in err


def test_additive_auto_routes(capsys, tmp_path):
    p = tmp_path / "a.inst"
    p.write_text("additive 3\nb a 2\nc b 1\n")
    code, out, _ = run(capsys, "solve", str(p))
    assert code == 0 and out.strip() == "max_score=3"
    code, out, _ = run(capsys, "solve", str(p), "--mode", "polytree")
    assert code == 0 and out.strip() == "max_score=3"
    code, out, _ = run(capsys, "solve", str(p), "--mode", "polytree",
                       "--max-parents", "1")
    assert code == 0 and out.strip() == "max_score=3"


def test_malformed_file_is_error(capsys, tmp_path):
    p = tmp_path / "bad.scores"
    p.write_text("2\na 1\n1 1 zz\nb 0\n")
    code, _, err = run(capsys, "solve", str(p))
    assert code == 2 and "line 3" in err


def test_params_output(capsys, example_file):
    code, out, _ = run(capsys, "params", example_file)
    assert code == 0
    assert out.strip() == "fen=2 lfen<=2 exact tw<=2"


def test_params_witness_lists_tree(capsys, example_file):
    code, out, _ = run(capsys, "params", example_file, "--witness")
    lines = out.strip().splitlines()
    assert len(lines) == 4  # summary + 3 tree edges
    assert all(len(line.split()) == 2 for line in lines[1:])


def test_verify_valid(capsys, example_file, tmp_path):
    sol = tmp_path / "sol.txt"
    sol.write_text("b <- a c\nc <- a\nd <- b c\n")
    code, out, _ = run(capsys, "verify", example_file, str(sol))
    assert code == 0 and out.strip() == "valid score=7"


def test_verify_detects_cycle(capsys, example_file, tmp_path):
    sol = tmp_path / "sol.txt"
    sol.write_text("a <- b\nb <- c\nc <- a\n")
    code, out, _ = run(capsys, "verify", example_file, str(sol))
    assert code == 1 and out.startswith("invalid")


def test_verify_polytree_mode(capsys, example_file, tmp_path):
    sol = tmp_path / "sol.txt"
    sol.write_text("b <- a c\nc <- a\nd <- b c\n")
    code, out, _ = run(capsys, "verify", example_file, str(sol),
                       "--mode", "polytree")
    assert code == 1 and "skeleton" in out


def test_gen_deterministic(capsys):
    code1, out1, _ = run(capsys, "gen", "--n", "8", "--fen", "2", "--seed", "5")
    code2, out2, _ = run(capsys, "gen", "--n", "8", "--fen", "2", "--seed", "5")
    assert code1 == code2 == 0 and out1 == out2
    inst = parse_nonzero(out1)
    assert inst.n == 8


def test_gen_additive(capsys):
    code, out, _ = run(capsys, "gen", "--rep", "additive", "--n", "5",
                       "--fen", "1", "--seed", "3", "--max-parents", "2")
    assert code == 0
    assert out.startswith("additive 5 2")


def test_kernelize_roundtrip(capsys, tmp_path):
    inst_file = tmp_path / "inst.scores"
    code, out, _ = run(capsys, "gen", "--n", "12", "--fen", "2", "--seed", "42",
                       "--subdivide", "7")
    inst_file.write_text(out)
    red_file = tmp_path / "red.scores"
    map_file = tmp_path / "lift.json"
    code, _, err = run(capsys, "kernelize", str(inst_file),
                       "--out", str(red_file), "--map", str(map_file))
    assert code == 0 and "reduced_n=" in err
    sol_file = tmp_path / "red.sol"
    code, _, _ = run(capsys, "solve", str(red_file), "--algo", "oracle",
                     "--out", str(sol_file))
    assert code == 0
    code, out, _ = run(capsys, "verify", str(inst_file), str(sol_file),
                       "--lift", str(map_file),
                       "--reduced-instance", str(red_file))
    assert code == 0 and out.startswith("valid score=")
    lifted_score = int(out.strip().split("=")[1])
    code, out, _ = run(capsys, "solve", str(inst_file), "--algo", "oracle")
    assert int(out.strip().split("=")[1]) == lifted_score


def test_solve_with_supplied_tree(capsys, example_file, tmp_path):
    tree = tmp_path / "tree.txt"
    tree.write_text("a b\nb d\nc d\n")
    code, out, _ = run(capsys, "solve", example_file, "--algo", "lfen",
                       "--tree", str(tree))
    assert code == 0 and out.strip() == "max_score=7"


def test_solve_with_supplied_td(capsys, tmp_path):
    p = tmp_path / "a.inst"
    p.write_text("additive 3\nb a 2\nc b 1\n")
    td = tmp_path / "td.txt"
    td.write_text("b 0 a b\nb 1 b c\ne 0 1\n")
    code, out, _ = run(capsys, "solve", str(p), "--algo", "twdp",
                       "--td", str(td))
    assert code == 0 and out.strip() == "max_score=3"


def test_bad_td_rejected(capsys, tmp_path):
    p = tmp_path / "a.inst"
    p.write_text("additive 3\nb a 2\nc b 1\n")
    td = tmp_path / "td.txt"
    td.write_text("b 0 a b\nb 1 c\ne 0 1\n")  # edge bc not covered
    code, _, err = run(capsys, "solve", str(p), "--algo", "twdp",
                       "--td", str(td))
    assert code == 2 and "decomposition" in err


def test_depset_polytree_rejected(capsys, example_file):
    code, _, err = run(capsys, "solve", example_file, "--mode", "polytree",
                       "--algo", "depset")
    assert code == 2


def test_cross_algorithm_agreement_on_generated_files(capsys, tmp_path):
    # oracle and the kernel+record pipeline agree on 50 generated files
    for seed in range(50):
        code, out, _ = run(capsys, "gen", "--n", "10", "--fen",
                           str(seed % 4 + 1), "--seed", str(seed),
                           "--subdivide", str(seed % 5))
        assert code == 0
        p = tmp_path / f"g{seed}.scores"
        p.write_text(out)
        results = {}
        for algo in ("oracle", "lfen", "kernel-lfen"):
            code, out, _ = run(capsys, "solve", str(p), "--algo", algo)
            assert code == 0
            results[algo] = out.strip()
        assert len(set(results.values())) == 1, results


def test_solve_deterministic_across_processes(tmp_path):
    import subprocess
    import sys

    inst = tmp_path / "inst.scores"
    subprocess.run(
        [sys.executable, "-m", "bnsl.cli", "gen", "--n", "11", "--fen", "3",
         "--seed", "77", "--out", str(inst)],
        check=True,
    )
    outs = []
    for i, hashseed in enumerate(("1", "31337")):
        sol = tmp_path / f"sol{i}.txt"
        r = subprocess.run(
            [sys.executable, "-m", "bnsl.cli", "solve", str(inst),
             "--out", str(sol)],
            capture_output=True, text=True,
            env={"PYTHONHASHSEED": hashseed, "PATH": "/usr/bin:/bin"},
        )
        assert r.returncode == 0, r.stderr
        outs.append((r.stdout, sol.read_text()))
    assert outs[0] == outs[1]
