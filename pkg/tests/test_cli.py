import io
import re
import subprocess
import sys

import pytest

from gridturan.cli import main
from gridturan.generators import make_cycle, make_grid, make_path, random_graph
from gridturan.graph import format_graph, parse_graph

KV = re.compile(r"^[a-z_0-9]+=\S.*$")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def kv(text):
    lines = text.splitlines()
    assert all(KV.match(line) for line in lines), lines
    return dict(line.split("=", 1) for line in lines)


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, G in {
        "tree": make_path(12),
        "c4": make_cycle(4),
        "g60": random_graph(60, 0.5, seed=1),
        "f3": make_grid(3),
    }.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(format_graph(G))
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def test_gen_grid():
    code, out, _ = run("gen", "--type", "grid", "--t", "3", "--d", "2")
    assert code == 0 and parse_graph(out) == make_grid(3)


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--type", "path", "--n", "4"],
        ["gen", "--type", "polarity", "--q", "3"],
        ["gen", "--type", "random", "--n", "20", "--p", "0.3"],
        ["gen", "--type", "star", "--n", "5"],
    ],
)
def test_gen_outputs_canonical_lists(argv):
    code, out, _ = run(*argv)
    assert code == 0 and format_graph(parse_graph(out)) == out


def test_gen_missing_flag_is_an_error():
    code, out, err = run("gen", "--type", "polarity")
    assert code == 2 and out == "" and err.startswith("error[missing-flag]")


def test_gen_blowup_and_tensor(files):
    code, out, _ = run("gen", "--type", "blowup", "--input", files["c4"], "--r", "2")
    assert code == 0 and parse_graph(out).m == 16
    code, out, _ = run("gen", "--type", "tensor", "--input", files["c4"], "--k", "2")
    assert code == 0 and parse_graph(out).m == 32


def test_parse_error_reports_line(files):
    bad = files["dir"] / "bad.txt"
    bad.write_text("2 1\n1 1\n")
    code, out, err = run("clean", "--input", str(bad))
    assert code == 2 and "self-loop at line 2" in err and err.startswith("error[parse-error]")


def test_clean_writes_graph_and_report(files):
    report = files["dir"] / "report.txt"
    code, out, _ = run("clean", "--input", files["g60"], "--report", str(report))
    assert code == 0
    H = parse_graph(out)
    assert all(re.match(r"^(T1 \d+|T2 \d+ \d+)$", line) for line in report.read_text().splitlines())
    assert H.n == 60


def test_embed_tree_host_not_found(files):
    code, out, _ = run("embed", "--host", files["tree"], "--tree", "P2", "--t", "2")
    assert code == 1 and kv(out)["found"] == "false"


def test_embed_success(files):
    code, out, _ = run("embed", "--host", files["g60"], "--tree", "P2", "--t", "2")
    assert code == 0
    lines = out.splitlines()
    head = kv("\n".join(lines[:2]))
    assert head == {"found": "true", "coordinate": "0"}
    G = parse_graph(open(files["g60"]).read())
    phi = {}
    for line in lines[2:]:
        p, i, v = map(int, line.split())
        phi[p, i] = v
    assert len(set(phi.values())) == 4
    assert G.has_edge(phi[0, 0], phi[0, 1]) and G.has_edge(phi[0, 0], phi[1, 0])


def test_embed_rejects_non_tree(files):
    code, _, err = run("embed", "--host", files["g60"], "--tree", files["c4"], "--t", "2")
    assert code == 2 and "invalid-tree" in err


def test_ladders(files):
    spec = files["dir"] / "s.txt"
    code, out, _ = run("ladders", "--input", files["f3"], "--t", "2", "--alpha", "1", "--count-only", "--spec-out", str(spec))
    rep = kv(out)
    assert code == 0 and int(rep["count"]) > 0
    assert spec.read_text().split() == rep["s"].split(",")
    code, _, err = run("ladders", "--input", files["c4"], "--t", "2", "--alpha", "1/2", "--strict")
    assert code == 2 and err.startswith("error[precondition]")


def test_turan(files):
    w = files["dir"] / "w.txt"
    code, out, _ = run("turan", "--n", "5", "--forbidden", files["c4"], "--witness", str(w))
    assert code == 0 and kv(out) == {"n": "5", "value": "6", "exact": "true"}
    assert parse_graph(w.read_text()).m == 6
    code, out, _ = run("turan", "--n", "7", "--forbidden", files["c4"], "--budget", "0")
    assert code == 1 and kv(out)["exact"] == "false"


def test_diagonals():
    code, out, _ = run("diagonals", "--t", "4", "--exhaustive")
    assert code == 0 and kv(out)["verified"] == "512"
    code, out, _ = run("diagonals", "--t", "4", "--assignment", "000000000")
    assert code == 0 and kv(out)["path"] == "0,0 1,1 2,2 3,3"
    code, _, err = run("diagonals", "--t", "3", "--assignment", "01")
    assert code == 2 and "invalid-assignment" in err


def test_verify_lb():
    code, out, _ = run("verify-lb", "--q", "2", "--t", "3")
    rep = kv(out)
    assert code == 0
    assert rep["ft_free"] == "true" and rep["blowup_edges"] == "36" and rep["blowup_n"] == "14"


def test_usage_error_exit_code():
    code, _, _ = run("nonsense")
    assert code == 2


def test_repeated_runs_are_byte_identical(files):
    argvs = [
        ["gen", "--type", "random", "--n", "30", "--p", "0.4"],
        ["embed", "--host", files["g60"], "--tree", "P2", "--t", "2", "--seed", "5"],
        ["clean", "--input", files["g60"]],
    ]
    for argv in argvs:
        outs = {run(*argv)[1] for _ in range(2)}
        outs |= {run("--threads", "3", *argv)[1]}
        assert len(outs) == 1


def test_console_entry_point_subprocess(files):
    cmd = [sys.executable, "-m", "gridturan.cli", "--threads", "2", "turan", "--n", "6", "--forbidden", files["c4"]]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b == b"n=6\nvalue=7\nexact=true\n"
