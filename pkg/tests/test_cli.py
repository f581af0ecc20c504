import json

import pytest

from tileforge.cli import EXIT_BUDGET, EXIT_ERROR, EXIT_NO, EXIT_OK, run_cli


def envelope(capsys):
    out = capsys.readouterr().out.strip().splitlines()
    return json.loads(out[-1])


@pytest.fixture(scope="module")
def coherent_witness(tmp_path_factory, fixtures_dir):
    out = tmp_path_factory.mktemp("w") / "w3.json"
    rc = run_cli(["witness", "--dim", "3", "--wang", str(fixtures_dir / "coherent.json"),
                  "--tiling", str(fixtures_dir / "uniform_1x1.json"), "--out", str(out)])
    assert rc == EXIT_OK
    return out


@pytest.mark.parametrize("dim,count", [(3, 5), (4, 4)])
def test_reduce(tmp_path, fixtures_dir, capsys, dim, count):
    out = tmp_path / "ts"
    rc = run_cli(["--json", "reduce", "--dim", str(dim), "--wang", str(fixtures_dir / "three_tiles.json"), "--out", str(out)])
    assert rc == EXIT_OK
    env = envelope(capsys)
    assert env["status"] == "ok" and len(env["data"]["tiles"]) == count
    assert len(list(out.glob("*.vox"))) == count
    assert (out / "manifest.json").exists()


def test_wang_solve(tmp_path, fixtures_dir, capsys):
    wang = str(fixtures_dir / "three_tiles.json")
    assert run_cli(["--json", "wang-solve", "--wang", wang, "--h", "2", "--v", "3", "--out", str(tmp_path / "t.json")]) == EXIT_OK
    assert envelope(capsys)["data"]["v"] == 3
    assert json.loads((tmp_path / "t.json").read_text())["h"] == 2
    assert run_cli(["wang-solve", "--wang", wang, "--h", "1", "--v", "2"]) == EXIT_NO


def test_verify_good(coherent_witness, capsys):
    assert run_cli(["--json", "verify", "--witness", str(coherent_witness)]) == EXIT_OK
    assert envelope(capsys)["status"] == "verified"


def test_verify_with_tile_dir(tmp_path, coherent_witness, fixtures_dir):
    ts = tmp_path / "ts"
    assert run_cli(["reduce", "--dim", "3", "--wang", str(fixtures_dir / "coherent.json"), "--out", str(ts)]) == EXIT_OK
    assert run_cli(["verify", "--witness", str(coherent_witness), "--tiles", str(ts)]) == EXIT_OK


def test_verify_double_cover(tmp_path, coherent_witness, capsys):
    data = json.loads(coherent_witness.read_text())
    data["placements"].append(data["placements"][0])
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    capsys.readouterr()
    assert run_cli(["verify", "--witness", str(bad)]) == EXIT_NO
    out = capsys.readouterr().out
    assert "covered more than once" in out and "cell (" in out


def test_witness_4d(tmp_path, fixtures_dir, capsys):
    out = tmp_path / "w4.json"
    rc = run_cli(["--json", "witness", "--dim", "4", "--wang", str(fixtures_dir / "coherent.json"),
                  "--tiling", str(fixtures_dir / "uniform_1x1.json"), "--out", str(out), "--slices", "2"])
    assert rc == EXIT_OK
    assert envelope(capsys)["data"]["region"]["extents"] == [48, 96, 8, 16]
    assert run_cli(["verify", "--witness", str(out)]) == EXIT_OK


def test_solve_paths(tmp_path, fixtures_dir, capsys):
    tiles = str(fixtures_dir / "dominoes")
    cnf = tmp_path / "x.cnf"
    wit = tmp_path / "s.json"
    assert run_cli(["--json", "solve", "--region", "box:2,4", "--tiles", tiles, "--sat", str(cnf), "--out", str(wit)]) == EXIT_OK
    env = envelope(capsys)
    assert env["status"] == "solved" and len(env["data"]["placements"]) == 4
    assert cnf.read_text().startswith("p cnf")
    assert run_cli(["verify", "--witness", str(wit), "--tiles", tiles]) == EXIT_OK
    assert run_cli(["solve", "--region", "box:3,3", "--tiles", tiles]) == EXIT_NO
    assert run_cli(["solve", "--region", "box:4,6", "--tiles", tiles, "--budget", "1", "--backend", "dlx"]) == EXIT_BUDGET
    # keep the first placement and allow only vertical dominoes
    fixed = tmp_path / "fixed.json"
    fixed.write_text(json.dumps({"region": {"kind": "box", "extents": [2, 2]}, "placements": [{"tile": 0, "offset": [0, 0]}]}))
    assert run_cli(["solve", "--region", "box:2,2", "--tiles", tiles, "--fixed", str(fixed), "--allow", "1"]) == EXIT_NO
    assert run_cli(["solve", "--region", "box:2,2", "--tiles", tiles, "--fixed", str(fixed), "--allow", "0"]) == EXIT_OK


@pytest.mark.parametrize("argv", [
    ["solve", "--region", "sphere:2", "--tiles", "x"],
    ["solve", "--region", "box:2,2", "--tiles", "/nonexistent"],
    ["verify", "--witness", "/nonexistent.json"],
    ["reduce", "--dim", "5", "--wang", "x", "--out", "y"],
    ["no-such-command"],
])
def test_malformed_input(argv, fixtures_dir):
    if argv[0] == "reduce":
        argv[4] = str(fixtures_dir / "coherent.json")
    assert run_cli(argv) == EXIT_ERROR


def test_malformed_wang(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"q": 2, "tiles": [{"n": 5, "e": 0, "s": 0, "w": 0}]}')
    assert run_cli(["--json", "wang-solve", "--wang", str(bad), "--h", "1", "--v", "1"]) == EXIT_ERROR
    assert envelope(capsys)["status"] == "error"


def test_render_paths(tmp_path, fixtures_dir, capsys):
    assert run_cli(["render", "--block", "c"]) == EXIT_OK
    assert "layer 8 (64 filled)" in capsys.readouterr().out
    assert run_cli(["render", "--block", "E", "--dim", "4", "--format", "svg", "--out", str(tmp_path / "e.svg")]) == EXIT_OK
    assert (tmp_path / "e.svg").read_text().startswith("<svg")
    ts = tmp_path / "ts"
    run_cli(["reduce", "--dim", "3", "--wang", str(fixtures_dir / "three_tiles.json"), "--out", str(ts)])
    capsys.readouterr()
    assert run_cli(["render", "--tiles", str(ts), "--tile", "0", "--level", "2"]) == EXIT_OK
    assert capsys.readouterr().out.count("(36 filled)") == 3
    assert run_cli(["render", "--tiles", str(ts), "--tile", "2", "--level", "2"]) == EXIT_ERROR
    vox = fixtures_dir / "dominoes" / "00_domino_h.vox"
    assert run_cli(["render", "--voxels", str(vox)]) == EXIT_ERROR  # 2D sets have no layers
    assert run_cli(["render"]) == EXIT_ERROR


def test_atlas_audit(tmp_path, capsys):
    assert run_cli(["--json", "atlas-audit", "--emit", str(tmp_path / "a4")]) == EXIT_OK
    env = envelope(capsys)
    assert env["data"]["problems"] == [] and env["data"]["onion"] == [296, 152, 56, 8]
    assert len(list((tmp_path / "a4").glob("*.vox"))) == 14
    assert run_cli(["atlas-audit", "--dim", "3"]) == EXIT_OK


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "tileforge", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "0.1.0"
