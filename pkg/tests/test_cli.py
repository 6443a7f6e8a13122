import pathlib
import random
import subprocess
import sys

import pytest

from planext.apex import Mold, cast_from_subdivision, pinwheel_mold
from planext.catalog import format_edge_list, planar_ladder
from planext.cli import main
from planext.instances import apex_host

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "tools"))
from make_golden import CASES, GOLDEN, run  # noqa: E402


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_outputs(name):
    code, out = run(CASES[name])
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_repeated_runs_agree():
    assert run(["extend", "catalog:cube", "catalog:W"]) == run(["extend", "catalog:cube", "catalog:W"])
    a = run(["catalog", "random9", "--seed", "5"])
    assert a == run(["catalog", "random9", "--seed", "5"])
    assert a != run(["catalog", "random9", "--seed", "6"])


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_exit_codes(tmp_path):
    assert main(["check", "catalog:cube"]) == 0
    assert main(["check", "catalog:prism"]) == 1
    assert main(["faces", "catalog:W"]) == 1
    assert main(["check", "catalog:nosuch"]) == 2
    assert main(["check", str(tmp_path / "missing.txt")]) == 2
    assert main(["check", write(tmp_path, "bad.txt", "0 x\n")]) == 2
    assert main(["embed", "catalog:V8", "catalog:cube"]) == 1
    assert main(["extend", "catalog:cube", "catalog:cube"]) == 1        # planar host
    assert main(["extend", "catalog:K4", "catalog:W", "--unsafe"]) == 1
    assert main(["nosuchcommand"]) == 2
    assert main(["verify", write(tmp_path, "junk.cert", "hello\n")]) == 2


def test_budget_exhaustion_exit_code():
    assert main(["embed", "catalog:V8", "catalog:dodecahedron", "--budget", "5"]) == 3


def test_verify_rejects_a_tampered_certificate(tmp_path, capsys):
    code, out = run(["extend", "catalog:cube", "catalog:W"])
    cert = write(tmp_path, "bad.cert", out.replace("path 0 7", "path 0 5 7"))
    capsys.readouterr()
    assert main(["verify", cert]) == 1
    text = capsys.readouterr().out
    assert text.startswith("fail") and "not a host edge" in text


def pipe_to_verify(tmp_path, argv, fmt="text"):
    code, out = run(argv + ["--format", fmt])
    assert code == 0
    return run(["verify", write(tmp_path, "out.cert", out)])


@pytest.mark.parametrize("fmt", ["text", "json"])
def test_every_certificate_command_pipes_into_verify(tmp_path, fmt):
    cc = write(tmp_path, "cc.txt", "0 1\n0 2\n0 4\n1 3\n1 5\n2 3\n2 6\n3 7\n4 5\n4 6\n5 7\n6 7\n0 3\n1 2\n")
    assert pipe_to_verify(tmp_path, ["extend", "catalog:cube", "catalog:W"], fmt) == (0, "pass\n")
    assert pipe_to_verify(tmp_path, ["extend", "catalog:cube", cc], fmt) == (0, "pass\n")
    assert pipe_to_verify(tmp_path, ["minorize", "catalog:cube", cc], fmt) == (0, "pass\n")
    assert pipe_to_verify(tmp_path, ["cube-demo", "catalog:W"], fmt) == (0, "pass\n")
    assert pipe_to_verify(tmp_path, ["embed", "catalog:K4", "catalog:cube"], "json") == (0, "pass\n")
    assert pipe_to_verify(tmp_path, ["pinwheel", "1", "2", "--contains", "catalog:K4"], fmt) == (0, "pass\n")


def test_minorize_from_a_certificate(tmp_path):
    _, out = run(["extend", "catalog:cube", "catalog:W"])
    cert = write(tmp_path, "jump.cert", out)
    assert pipe_to_verify(tmp_path, ["minorize", "--certificate", cert]) == (0, "pass\n")
    assert main(["minorize"]) == 2


def test_apex_command(tmp_path):
    g = planar_ladder(8)
    f8 = sorted(pinwheel_mold(8, [0]).f_set)
    eta_l, lab = apex_host(g, f8, random.Random(3), face_crossings=2)
    mold = Mold({e: {lab} for e in f8})
    eta, _ = cast_from_subdivision(eta_l, g, mold)
    args = [write(tmp_path, "g.txt", format_edge_list(g)), write(tmp_path, "h.txt", format_edge_list(eta_l.host)),
            write(tmp_path, "m.txt", mold.to_text())]
    emb = write(tmp_path, "e.txt", eta.to_text())
    assert pipe_to_verify(tmp_path, ["apex", *args, "--embedding", emb]) == (0, "pass\n")
    assert main(["apex", args[0], args[1], write(tmp_path, "m2.txt", "edge 1 9 : 99\n")]) == 2


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "planext.cli", "catalog"], capture_output=True, text=True)
    assert proc.returncode == 0 and "cube" in proc.stdout.split()
