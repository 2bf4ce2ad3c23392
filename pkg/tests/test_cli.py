import json
import subprocess
import sys

import pytest

from poscomm import cli
from poscomm.certificate import verify_certificate
from poscomm.exact_linalg import Matrix


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def mat(rows):
    return Matrix.from_rows(rows).to_json()


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_central_two_by_two(tmp_path, capsys):
    src = write(tmp_path / "c.json", mat([[0, 1], [0, 0]]))
    code, out, _ = run(["construct", "--method", "central-nilpotent", "--input", src], capsys)
    assert code == 0
    cert = json.loads(out)
    assert Matrix.from_json(cert["A"]) == Matrix.diag([1, 0])
    assert Matrix.from_json(cert["B"]) == Matrix.from_rows([[0, 1], [0, 0]])
    assert verify_certificate(cert).ok


def test_verify_tampered(tmp_path, capsys):
    src = write(tmp_path / "c.json", mat([[0, 1, 2], [0, 0, 3], [0, 0, 0]]))
    out_path = tmp_path / "cert.json"
    assert cli.main(["construct", "--method", "central-nilpotent", "--input", src,
                     "--output", str(out_path)]) == 0
    obj = json.loads(out_path.read_text())
    obj["B"]["data"][0][2] = "7"
    bad = write(tmp_path / "bad.json", obj)
    code, _, err = run(["verify", "--input", bad], capsys)
    assert code == 3 and "(0, 2)" in err


def test_decompose_not_nilpotent(tmp_path, capsys):
    src = write(tmp_path / "c.json", mat([[0, 1], [1, 0]]))
    code, _, err = run(["decompose", "--input", src], capsys)
    assert code == 2 and "not nilpotent" in err


def test_decompose_output(tmp_path, capsys):
    src = write(tmp_path / "c.json", mat([[0, 1, 0], [0, 0, 1], [0, 0, 0]]))
    code, out, _ = run(["decompose", "--input", src], capsys)
    assert code == 0 and json.loads(out)["parts"] == [[0], [1], [2]]


def test_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["construct", "--method", "jordan", "--input", str(bad)], capsys)[0] == 1
    assert run(["construct", "--method", "nope", "--input", str(bad)], capsys)[0] == 1
    assert run(["verify", "--input", str(tmp_path / "missing.json")], capsys)[0] == 1
    src = write(tmp_path / "c.json", {"kind": "exact", "rows": 1, "cols": 1, "data": [[0.5]]})
    assert run(["decompose", "--input", src], capsys)[0] == 1


def test_jordan_with_and_without_k(tmp_path, capsys):
    src = write(tmp_path / "c.json", mat([[0, 0, 1], [0, 0, 0], [0, 0, 0]]))
    assert run(["construct", "--method", "jordan", "--k", "2", "--input", src], capsys)[0] == 0
    assert run(["construct", "--method", "jordan", "--input", src], capsys)[0] == 0
    j4 = write(tmp_path / "j4.json", Matrix.jordan(4).to_json())
    code, _, err = run(["construct", "--method", "jordan", "--input", j4], capsys)
    assert code == 2 and "2-super" in err
    assert run(["construct", "--method", "jordan", "--k", "2", "--input", j4], capsys)[0] == 2


def test_diagonal_quasi_weights(tmp_path, capsys):
    src = write(tmp_path / "c.json", mat([[0, 2, 0], [0, 0, 5], [0, 0, 0]]))
    w = write(tmp_path / "w.json", ["1", "1/2", "1"])
    code, out, _ = run(["construct", "--method", "diagonal-quasi", "--input", src,
                        "--weights", w], capsys)
    assert code == 0 and json.loads(out)["exact"]
    code, out, _ = run(["construct", "--method", "diagonal-quasi", "--input", src], capsys)
    assert code == 0 and not json.loads(out)["exact"]


def test_pelczynski_and_embed(tmp_path, capsys):
    blocks = {"partition": {"y_dim": 1, "x_dim": 2, "count": 4, "p": "1"},
              "blocks": {"0,0": mat([[1]]), "1,0": mat([[1], [2]]), "0,2": mat([[3, 0]])}}
    src = write(tmp_path / "b.json", blocks)
    code, out, _ = run(["construct", "--method", "pelczynski", "--input", src], capsys)
    assert code == 0
    cert = json.loads(out)
    assert cert["window"] is not None and verify_certificate(cert).ok
    code, out, _ = run(["embed", "--n", "2", "--p", "1", "--grid", "4"], capsys)
    pair = json.loads(out)
    assert code == 0 and pair["S"]["kind"] == "exact"
    pair_path = write(tmp_path / "pair.json", pair)
    blocks2 = {"partition": {"y_dim": 2, "x_dim": 4, "count": 3, "p": "1"},
               "blocks": {"0,0": mat([[1, 0], [0, 2]])}}
    src2 = write(tmp_path / "b2.json", blocks2)
    assert run(["construct", "--method", "pelczynski", "--input", src2,
                "--embedding", pair_path], capsys)[0] == 0
    assert run(["embed", "--n", "3", "--grid", "4"], capsys)[0] == 2


def test_weighted_shift_demo(capsys):
    code, out, _ = run(["demo", "weighted-shift", "--n", "101"], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "N,sum_w,normA_inf_times_normB_upper,normC_inf"
    last = lines[-1].split(",")
    assert last[0] == "101" and abs(float(last[1]) - 5.18737751763962) < 1e-12
    assert float(last[2]) >= float(last[1]) - 1e-9


def test_random_demo_deterministic(capsys):
    a = run(["demo", "random-nilpotent", "--n", "6", "--seed", "4"], capsys)[1]
    b = run(["demo", "random-nilpotent", "--n", "6", "--seed", "4"], capsys)[1]
    assert a == b and Matrix.from_json(json.loads(a)).shape == (6, 6)


def test_byte_determinism(tmp_path):
    src = write(tmp_path / "c.json", mat([[0, 3, 1, 0], [0, 0, 0, 2], [0, 0, 0, 5], [0, 0, 0, 0]]))
    outs = []
    for t in range(2):
        path = tmp_path / f"o{t}.json"
        assert cli.main(["construct", "--method", "diagonal-quasi", "--input", src,
                         "--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_max_dim_env(tmp_path, capsys, monkeypatch):
    src = write(tmp_path / "c.json", Matrix.zeros(5).to_json())
    monkeypatch.setenv("POSCOMM_MAX_DIM", "4")
    assert run(["decompose", "--input", src], capsys)[0] == 2


def test_console_entry_point(tmp_path):
    src = write(tmp_path / "c.json", mat([[0, 1], [0, 0]]))
    proc = subprocess.run([sys.executable, "-m", "poscomm.cli", "construct", "--method",
                           "central-nilpotent", "--input", src], capture_output=True, text=True)
    assert proc.returncode == 0 and '"method": "central_nilpotent"' in proc.stdout


@pytest.mark.parametrize("argv", [[], ["construct"], ["demo", "unknown"]])
def test_argparse_errors_exit_1(argv, capsys):
    assert cli.main(argv) == 1
