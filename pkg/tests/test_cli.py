import json
import subprocess
import sys

import pytest

from l1cert.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    assert code == 0, out
    return json.loads(out)


class TestCoreCommands:
    def test_distortion_identity_matches_the_wire_example(self, capsys, tmp_path):
        d_file = tmp_path / "m-r-d.json"
        rho_file = tmp_path / "m-r-rho.json"
        assert main(["build", "m-r", "--N", "3", "--out", str(d_file)]) == 0
        assert main(["metric", "rho", "--kind", "m-r", "--n", "3", "--out", str(rho_file)]) == 0
        payload = run_json(
            capsys,
            "distortion", "--source", str(d_file), "--target", str(rho_file),
            "--map", "identity",
        )
        assert payload["C1"] == "1/2"
        assert payload["C2"] == "3/2"
        assert payload["dist"] == 3

    def test_build_rejects_bad_n(self, capsys):
        assert main(["build", "m-ell1", "--n", "0"]) == 2

    def test_calc_min_k(self, capsys):
        assert run_json(capsys, "calc", "min-k", "--D", "3/2", "--alpha", "4/5") == {
            "statement": 13,
            "proof": 11,
        }

    def test_calc_james_and_cube(self, capsys):
        assert run_json(capsys, "calc", "james", "--b", "9", "--w", "1") == {"constant": 3}
        assert run_json(capsys, "calc", "cube-size", "--D", "11/10", "--eps", "1") == {
            "size": "n^2",
            "w": 1,
        }

    def test_eta(self, capsys):
        payload = run_json(capsys, "eta", "--alpha", "4/5")
        assert payload["approx"].startswith("0.2209")

    def test_stability_presets(self, capsys):
        payload = run_json(capsys, "stability", "--preset", "m-ell1-d", "--horizon", "32")
        assert payload == {"lim_mn": 3, "lim_nm": 1, "ratio": 3}
        payload = run_json(capsys, "stability", "--preset", "m-r-rho", "--horizon", "32")
        assert payload == {"lim_mn": 2, "lim_nm": 2, "ratio": 1}

    def test_james_gap_on_phi(self, capsys):
        payload = run_json(capsys, "james-gap", "--map", "gen:phi:6", "--n", "3")
        assert payload == {"gap": 2, "n": 3}

    def test_shatter(self, capsys, tmp_path):
        fam = tmp_path / "fam.json"
        fam.write_text(json.dumps({"k": 4, "members": ["0", "1", "2", "4", "8", "3"]}))
        payload = run_json(capsys, "shatter", "--family", str(fam), "--m", "2")
        assert payload["H"] == [1, 2]
        fam.write_text(json.dumps({"k": 4, "members": ["0", "1", "2", "4", "8"]}))
        payload = run_json(capsys, "shatter", "--family", str(fam), "--m", "2")
        assert payload["H"] is None


class TestExtractAndVerify:
    @pytest.fixture
    def cert_setup(self, tmp_path):
        space = tmp_path / "m4.json"
        emb = tmp_path / "emb.json"
        cert = tmp_path / "cert.json"
        assert main(["build", "m-ell1", "--n", "4", "--out", str(space)]) == 0
        assert main(["embed", "kuratowski", "--space", str(space), "--base", "0", "--out", str(emb)]) == 0
        assert main(["extract", "thm4a", "--map", str(emb), "--D", "6/5", "--out", str(cert)]) == 0
        return space, emb, cert

    def test_extract_verify_round_trip(self, capsys, cert_setup):
        _, emb, cert = cert_setup
        payload = run_json(capsys, "verify", "--certificate", str(cert), "--map", str(emb))
        assert payload["status"] == "verified"

    def test_tampered_certificate_exits_three(self, capsys, cert_setup):
        _, emb, cert = cert_setup
        obj = json.loads(cert.read_text())
        some_mask = next(iter(obj["witnesses"]))
        obj["witnesses"][some_mask]["eps"] *= -1
        cert.write_text(json.dumps(obj))
        assert main(["verify", "--certificate", str(cert), "--map", str(emb)]) == 3

    def test_envelope_wraps_and_verifies(self, capsys, cert_setup, tmp_path):
        _, emb, _ = cert_setup
        env_file = tmp_path / "env.json"
        assert main([
            "extract", "thm4a", "--map", str(emb), "--D", "6/5",
            "--envelope", "--out", str(env_file),
        ]) == 0
        env = json.loads(env_file.read_text())
        assert env["status"] == "ok"
        assert set(env["inputs"]) == {"map"}
        payload = run_json(capsys, "verify", "--certificate", str(env_file), "--map", str(emb))
        assert payload["status"] == "verified"

    def test_generator_shorthand(self, capsys):
        payload = run_json(
            capsys,
            "extract", "thm4a", "--space", "gen:m-ell1:4",
            "--map", "gen:kuratowski", "--D", "1",
        )
        assert payload["H"] == [1, 2, 3, 4]
        assert payload["ratio"] == 1

    def test_thm4b_via_cli(self, capsys):
        payload = run_json(
            capsys,
            "extract", "thm4b", "--space", "gen:m-ell1:11", "--map", "gen:kuratowski",
            "--D", "3/2", "--alpha", "4/5", "--allow-proof-bound", "--audit",
        )
        assert len(payload["H"]) == 3
        assert payload["delta"] == "1/2"
        assert payload["audit"]["chosen_j"] == 1

    def test_thm4b_bound_enforced(self, capsys):
        code = main([
            "extract", "thm4b", "--space", "gen:m-ell1:11", "--map", "gen:kuratowski",
            "--D", "3/2", "--alpha", "4/5",
        ])
        assert code == 2


class TestDeterminism:
    def test_identical_bytes_across_runs(self, capsys):
        outs = []
        for _ in range(2):
            code = main(["extract", "thm4a", "--space", "gen:m-ell1:3",
                         "--map", "gen:kuratowski", "--D", "6/5"])
            assert code == 0
            outs.append(capsys.readouterr().out)
        assert outs[0] == outs[1]

    def test_missing_file_exits_two(self, capsys):
        assert main(["verify", "--certificate", "/nonexistent.json", "--map", "x.json"]) == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "l1cert.cli", "calc", "min-k", "--D", "3/2", "--alpha", "4/5"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"statement": 13, "proof": 11}
