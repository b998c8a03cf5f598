import json
import shutil
from argparse import Namespace

import pytest

from src.cli import main
from src.command import base
from src.utils.tools import SURFACES_DIR, make_console, parse_config_file


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_usage_errors(capsys):
    assert run(capsys, )[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    code, _, err = run(capsys, "zariski", "f1")
    assert code == 1
    assert "-D" in err


def test_domain_errors_exit_2(capsys):
    code, _, err = run(capsys, "mv", "no_such_surface")
    assert code == 2
    assert "PreconditionError" in err
    code, _, err = run(capsys, "zariski", "f1", "-D", "3L + X")
    assert code == 2
    assert "unknown label" in err


def test_zariski_and_mv(capsys):
    code, out, _ = run(capsys, "zariski", "f1", "-D", "L + 2E")
    assert code == 0
    assert "P = L, N = 2 E" in out
    assert "vol(D) = P^2 = 1" in out
    code, out, _ = run(capsys, "mv", "k3_s2")
    assert code == 0
    assert "mv = 7 (certified)" in out


def test_json_output_is_exact(capsys):
    code, out, _ = run(capsys, "zariski", "k3_s1", "-D", "O + F", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["negative_coeffs"] == {"O": "1/2"}
    assert payload["positive_coords"] == ["1/2", "1/2", 0]


def test_nu_and_mu(capsys):
    assert run(capsys, "nu", "f1", "-D", "3L - E", "--flag", "E")[1].strip() == "nu_E(D) = 0"
    assert run(capsys, "mu", "f1", "-D", "3L - E", "--flag", "E")[1].strip() == "mu_E(D) = 2"


def test_nob_writes_files(capsys, tmp_path):
    csv, svg = tmp_path / "f1.csv", tmp_path / "f1.svg"
    code, out, _ = run(
        capsys, "nob", "f1", "-D", "3L - E", "--flag", "F", "--point", "at:E", "--csv", str(csv), "--svg", str(svg)
    )
    assert code == 0
    assert "4 vertices, area 4" in out
    assert csv.read_text() == "vertex,t,s\n0,0,0\n1,1,0\n2,3,2\n3,0,2\n"
    assert svg.exists()
    assert run(capsys, "nob", "f1", "-D", "3L - E", "--flag", "F", "--point", "on:E")[0] == 2


@pytest.mark.parametrize("target", [3, 4, 5])
def test_search(capsys, target):
    code, out, _ = run(capsys, "search", "f1", "--target", str(target), "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["found"]
    assert payload["divisor"] == "2 L - E"
    assert payload["polygon"]["vertex_count"] == target


def test_search_target_out_of_range(capsys):
    assert run(capsys, "search", "f1", "--target", "6")[0] == 2


def test_verify_paper_passes(capsys):
    code, out, _ = run(capsys, "verify-paper", "--json")
    rows = json.loads(out)
    assert code == 0
    assert len(rows) == 22
    assert all(row["status"] == "PASS" for row in rows)


def test_verify_paper_detects_a_tampered_fixture(capsys, tmp_path):
    fixtures = tmp_path / "surfaces"
    shutil.copytree(SURFACES_DIR, fixtures)
    doc = json.loads((fixtures / "k3_s1.surface").read_text())
    doc["elliptic"]["fibres"] = ["I3"]
    (fixtures / "k3_s1.surface").write_text(json.dumps(doc))

    code, out, err = run(capsys, "verify-paper", "--fixtures", str(fixtures), "--json")
    assert code == 3
    assert "mv(S1)" in err and "SurfaceFileError" in err
    status = {row["check"]: row["status"] for row in json.loads(out)}
    assert status["mv(S1)"] == "FAIL"
    assert status["Shioda-Tate r(S1)"] == "FAIL"
    assert status["mv(P2)"] == "PASS"
    assert status["mv(S2), certified by the A2 bound"] == "PASS"


def test_config_file_overrides_defaults(tmp_path):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("bound: 4\nmod: [2]\n")
    args = parse_config_file(Namespace(config_file=str(cfg), bound=6, mod=[2, 3, 4], json=False))
    assert (args.bound, args.mod, args.json) == (4, [2], False)


def test_color_switch(monkeypatch):
    monkeypatch.setenv("NOK_COLOR", "1")
    assert make_console().is_terminal
    monkeypatch.setenv("NOK_COLOR", "0")
    assert make_console().no_color


def test_lattice_info_and_embed(capsys):
    code, out, _ = run(capsys, "lattice", "info", "E8", "U", "--json")
    assert code == 0
    e8, u = json.loads(out)["lattices"]
    assert (e8["rank"], e8["discriminant"], e8["signature"], e8["even"], e8["unimodular"]) == (8, 1, [0, 8], True, True)
    assert (u["discriminant"], u["signature"]) == (-1, [1, 1])

    code, out, _ = run(capsys, "lattice", "embed", "A2", "U+A1", "--json")
    assert code == 0
    assert json.loads(out)["verdict"]["status"] == "yes"
    assert run(capsys, "lattice", "embed", "A2")[0] == 2


def test_ellsurf_build(capsys):
    code, out, _ = run(capsys, "ellsurf", "build", "k3_s2", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["mordell_weil_rank"] == 2
    assert payload["height_pairing"] == [[4, 2], [2, 4]]
    assert payload["discriminant"] == -12
    assert payload["signature"] == [1, 3]


def test_debug_records_need_verbose(capsys):
    argv = ["nob", "f1", "-D", "3L - E", "--flag", "F", "--point", "at:E"]
    assert "sweep piece" not in run(capsys, *argv)[2]
    code, _, err = run(capsys, *argv, "--verbose")
    assert code == 0
    assert "sweep piece" in err
    assert "sweep piece" not in run(capsys, *argv)[2]


def test_debug_records_reach_the_saved_log(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(base, "OUT_DIR", tmp_path)
    code, _, _ = run(capsys, "nob", "f1", "-D", "3L - E", "--flag", "E", "--verbose", "--save_log", "1")
    assert code == 0
    (html,) = (tmp_path / "nob").glob("*/output.html")
    assert "sweep piece" in html.read_text()
