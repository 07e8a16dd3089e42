import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from syzygy.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_k3(capsys, tmp_path):
    out_json = tmp_path / "r.json"
    code, out, _ = run(["verify", "--k", "3", "--json", str(out_json)], capsys)
    assert code == 0
    assert "K_{3,1}(C,L) = 3" in out
    doc = json.loads(out_json.read_text())
    assert doc["schema_version"] == "1" and doc["theorem_holds"] and doc["violation_index"] == 3
    curve = [e for e in doc["entries"] if e["side"] == "curve"][0]
    assert curve["p"] == 3 and curve["q"] == 1 and curve["dim_K"] >= 1 and curve["certified"]
    assert "timings_ms" not in doc


def test_verify_k3_golden(capsys, tmp_path):
    out_json = tmp_path / "r.json"
    assert run(["verify", "--k", "3", "--injection", "--json", str(out_json)], capsys)[0] == 0
    assert out_json.read_bytes() == (GOLDEN / "verify_k3.json").read_bytes()


def test_betti_golden(capsys):
    code, out, _ = run(["betti", "--k", "3", "--side", "veronese", "--qmax", "1", "--pmax", "4", "--json", "-"], capsys)
    assert code == 0
    assert out.encode() == (GOLDEN / "betti_k3_veronese.json").read_bytes()
    doc = json.loads(out)
    q1 = {e["p"]: e["dim_K"] for e in doc["entries"] if e["q"] == 1}
    assert (q1[1], q1[2], q1[3]) == (6, 8, 3)


def test_betti_q0(capsys):
    code, out, _ = run(["betti", "--k", "3", "--side", "veronese", "--qmax", "0", "--json", "-"], capsys)
    doc = json.loads(out)
    q0 = {e["p"]: e["dim_K"] for e in doc["entries"]}
    assert code == 0 and q0.pop(0) == 1 and set(q0.values()) == {0}


def test_betti_curve_k4(capsys):
    code, out, _ = run(["betti", "--k", "4", "--side", "curve", "--qmax", "1", "--pmax", "7", "--json", "-"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert [e["dim_K"] for e in doc["entries"] if e["q"] == 1 and e["p"] == 6] == [27]


def test_verify_bad_prime(capsys):
    code, _, err = run(["verify", "--k", "3", "--prime", "6"], capsys)
    assert code == 2 and "CompositeModulus" in err


def test_verify_wiedemann_k4(capsys):
    code, out, _ = run(["verify", "--k", "4", "--method", "wiedemann", "--json", "-"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["certified"] is False
    assert all(e["certified"] is False for e in doc["entries"])
    assert [e["dim_K"] for e in doc["entries"]] == [27, 27]


def test_certify_refuses_wiedemann(capsys):
    code, _, err = run(["verify", "--k", "3", "--method", "wiedemann", "--certify"], capsys)
    assert code == 2 and "--certify" in err


def test_invalid_flags(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--k", "3", "--method", "lanczos"])
    assert exc.value.code == 2
    assert run(["verify", "--k", "2"], capsys)[0] == 2
    assert run(["verify", "--k", "4", "--prime", "5"], capsys)[0] == 2
    assert run(["verify", "--k", "3", "--curve", "nonsense"], capsys)[0] == 2


def test_resource_cap_exit(capsys, monkeypatch):
    monkeypatch.setenv("SYZYGY_MEM_BUDGET", "1000")
    code, _, err = run(["verify", "--k", "3"], capsys)
    assert code == 3 and "ResourceCap" in err
    monkeypatch.delenv("SYZYGY_MEM_BUDGET")
    assert run(["row", "--k", "5"], capsys)[0] == 3


def test_row_k3(capsys):
    code, out, _ = run(["row", "--k", "3", "--from", "0", "--to", "5", "--json", "-"], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc["entries"]) == 6
    nonzero = {e["p"]: e["conjecture_predicts_zero"] for e in doc["entries"] if e["dim_K"]}
    assert nonzero[3] is True and doc["violations"] == [3]


def test_row_single(capsys):
    code, out, _ = run(["row", "--k", "3", "--from", "0", "--to", "0", "--json", "-"], capsys)
    doc = json.loads(out)
    assert code == 0 and [e["dim_K"] for e in doc["entries"]] == [0]


def test_row_k4(capsys):
    code, out, _ = run(["row", "--k", "4", "--from", "5", "--to", "7", "--json", "-"], capsys)
    dims = {e["p"]: e["dim_K"] for e in json.loads(out)["entries"]}
    assert code == 0 and dims[6] >= 1 and dims[7] == 0


def test_row_bad_range(capsys):
    assert run(["row", "--k", "3", "--from", "3", "--to", "1"], capsys)[0] == 2


def test_rank_identity(capsys, tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("3 3 7\n1 1 1\n2 2 1\n3 3 1\n0 0 0\n")
    for method in ("elim", "wiedemann"):
        code, out, _ = run(["rank", "--matrix", str(f), "--method", method], capsys)
        assert code == 0 and out.strip() == "3"


def test_rank_empty_and_mismatch(capsys, tmp_path):
    f = tmp_path / "z.txt"
    f.write_text("4 5 2147483647\n0 0 0\n")
    assert run(["rank", "--matrix", str(f)], capsys)[1].strip() == "0"
    assert run(["rank", "--matrix", str(f), "--prime", "7"], capsys)[0] == 2
    g = tmp_path / "bad.txt"
    g.write_text("2 2 7\n1 1\n0 0 0\n")
    assert run(["rank", "--matrix", str(g)], capsys)[0] == 2
    assert run(["rank", "--matrix", str(tmp_path / "missing.txt")], capsys)[0] == 2


def test_json_byte_identical_across_threads(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--k", "4", "--json", str(a), "--threads", "1"]) == 0
    assert main(["verify", "--k", "4", "--json", str(b), "--threads", "0"]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_timings_opt_in(capsys):
    doc = json.loads(run(["verify", "--k", "3", "--timings", "--json", "-"], capsys)[1])
    assert set(doc["timings_ms"]) >= {"instance", "veronese", "curve"}


def test_module_entry_point():
    env = dict(os.environ)
    res = subprocess.run([sys.executable, "-m", "syzygy", "verify", "--k", "3"], capture_output=True,
                         text=True, env=env)
    assert res.returncode == 0 and "HOLDS" in res.stdout


def test_pure_python_backend_matches(tmp_path):
    """The whole pipeline under the forced fallback yields the same report."""
    outs = {}
    for backend in ("python", ""):
        env = dict(os.environ, SYZYGY_BACKEND=backend)
        path = tmp_path / f"{backend or 'default'}.json"
        res = subprocess.run([sys.executable, "-m", "syzygy", "verify", "--k", "4", "--json", str(path)],
                             capture_output=True, text=True, env=env)
        assert res.returncode == 0, res.stderr
        outs[backend] = path.read_bytes()
    assert outs["python"] == outs[""]
    res = subprocess.run([sys.executable, "-c", "import syzygy.linalg as L; print(L.BACKEND)"],
                         capture_output=True, text=True, env=dict(os.environ, SYZYGY_BACKEND="python"))
    assert res.stdout.strip() == "python"
