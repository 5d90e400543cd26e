import json

import pytest

from spinsym import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCount:
    def test_spin_one_sector_count(self, capsys):
        code, out, err = run_cli(capsys, "count", "--lattice", "chain:3", "--spin", "1", "--mz", "0")
        assert code == 0
        assert out.strip() == "7"

    def test_large_binomial(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--lattice", "chain:16", "--spin", "1/2", "--mz", "0")
        assert code == 0 and out.strip() == "12870"

    def test_infeasible_warns_but_succeeds(self, capsys):
        code, out, err = run_cli(capsys, "count", "--lattice", "chain:4", "--spin", "1/2", "--mz", "5/2")
        assert code == 0
        assert out.strip() == "0"
        assert "warning" in err

    def test_invalid_input_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "count", "--lattice", "pyramid:3", "--spin", "1/2")
        assert code == 2
        assert "error" in err


class TestOrbits:
    def test_four_site_rows(self, capsys):
        code, out, _ = run_cli(capsys, "orbits", "--lattice", "chain:4", "--spin", "1/2", "--mz", "0")
        assert code == 0
        rows = [line.split("\t") for line in out.strip().splitlines()]
        assert len(rows) == 2
        assert sorted(int(size) for _, size in rows) == [2, 4]

    def test_polarized_single_row(self, capsys):
        code, out, _ = run_cli(capsys, "orbits", "--lattice", "chain:4", "--spin", "1/2", "--mz", "2")
        assert code == 0
        assert out.strip() == "++++\t1"

    def test_resource_cap_exits_3(self, capsys):
        code, _, err = run_cli(
            capsys, "orbits", "--lattice", "chain:16", "--spin", "1/2",
            "--mz", "0", "--sector-cap", "100",
        )
        assert code == 3

    def test_square_orbit_sizes_sum_to_sector(self, capsys):
        code, out, _ = run_cli(capsys, "orbits", "--lattice", "square:4x4", "--spin", "1/2", "--mz", "0")
        assert code == 0
        sizes = [int(line.split("\t")[1]) for line in out.strip().splitlines()]
        assert sum(sizes) == 12870


class TestGround:
    def test_summary_and_json(self, capsys, tmp_path):
        out_file = tmp_path / "ground.json"
        code, out, _ = run_cli(
            capsys, "ground", "--lattice", "chain:4", "--spin", "1/2",
            "-J", "-1", "--json", str(out_file),
        )
        assert code == 0
        table = dict(line.split("\t") for line in out.strip().splitlines())
        assert table["energy_per_spin"] == "-0.500000"
        assert table["S"] == "0" and table["M"] == "0"
        assert table["method"] == "symmetric"
        doc = json.loads(out_file.read_text())
        assert doc["energy"]["per_spin"] == pytest.approx(-0.5)
        assert len(doc["amplitudes"]) == 6

    def test_amplitudes_flag(self, capsys):
        code, out, _ = run_cli(
            capsys, "ground", "--lattice", "chain:4", "--spin", "1/2",
            "-J", "-1", "--amplitudes",
        )
        assert code == 0
        lines = out.strip().splitlines()
        start = lines.index("configuration\tamplitude")
        amp_rows = dict(line.split("\t") for line in lines[start + 1 :])
        assert amp_rows["+-+-"] in ("-0.577350269190", "0.577350269190")

    def test_solver_failure_exits_4(self, capsys):
        code, _, err = run_cli(
            capsys, "ground", "--lattice", "chain:10", "--spin", "1/2", "-J", "-1",
            "--method", "raw-lanczos", "--lanczos-max-iter", "2", "--lanczos-tol", "1e-14",
        )
        assert code == 4

    def test_byte_stable_across_runs(self, capsys):
        args = ("ground", "--lattice", "chain:8", "--spin", "1/2", "-J", "-1")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2

    def test_sixteen_spin_chain_json(self, capsys, tmp_path):
        out_file = tmp_path / "n16.json"
        code, out, _ = run_cli(
            capsys, "ground", "--lattice", "chain:16", "--spin", "1/2",
            "-J", "-1", "--json", str(out_file),
        )
        assert code == 0
        doc = json.loads(out_file.read_text())
        assert doc["energy"]["per_spin"] == pytest.approx(-0.446, abs=5e-4)
        assert doc["energy"]["reference_infinite_chain_per_spin"] == pytest.approx(
            -0.4431, abs=1e-4
        )
        assert doc["method"] == "symmetric"
        assert len(doc["amplitudes"]) == 12870


class TestClassify:
    def test_golden_table(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "--lattice", "chain:4", "--spin", "1/2", "-J", "-1")
        assert code == 0
        from pathlib import Path

        golden = Path(__file__).parent / "golden" / "classify_chain4.tsv"
        assert out == golden.read_text()


class TestSweep:
    def test_transition_column(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--lattice", "chain:4", "--spin", "1/2",
            "-J", "-1", "--h", "0:3:0.1",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "h\tS\tM\tenergy_per_spin\tgap_per_spin\tdegeneracy"
        rows = [line.split("\t") for line in lines[1:]]
        assert len(rows) == 31
        spins = [row[1] for row in rows]
        assert spins[0] == "0" and spins[12] == "1" and spins[-1] == "2"
        transitions = [k for k in range(1, len(spins)) if spins[k] != spins[k - 1]]
        assert len(transitions) == 2
        h_first = float(rows[transitions[0]][0])
        h_second = float(rows[transitions[1]][0])
        assert abs(h_first - 1.0) <= 0.1 + 1e-9
        assert abs(h_second - 2.0) <= 0.1 + 1e-9

    def test_bad_grid_exits_2(self, capsys):
        code, _, _ = run_cli(
            capsys, "sweep", "--lattice", "chain:4", "--spin", "1/2", "-J", "-1", "--h", "0:3",
        )
        assert code == 2


class TestConfigFile:
    def test_flags_override_file(self, capsys, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("sector_cap=100\n# comment\nseed=3\n")
        # The file cap alone would refuse chain:16; the flag must win.
        code, out, _ = run_cli(
            capsys, "orbits", "--lattice", "chain:16", "--spin", "1/2", "--mz", "8",
            "--config", str(config), "--sector-cap", "1000000",
        )
        assert code == 0
        assert out.strip() == "++++++++++++++++\t1"

    def test_file_applies_when_no_flag(self, capsys, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("sector_cap=100\n")
        code, _, _ = run_cli(
            capsys, "orbits", "--lattice", "chain:16", "--spin", "1/2",
            "--mz", "0", "--config", str(config),
        )
        assert code == 3

    def test_unknown_key_rejected(self, capsys, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("bogus=1\n")
        code, _, err = run_cli(
            capsys, "count", "--lattice", "chain:4", "--spin", "1/2", "--config", str(config),
        )
        assert code == 2


class TestRemote:
    def test_remote_round_trip(self, capsys, monkeypatch):
        from fastapi.testclient import TestClient

        import httpx
        from spinsym.service.app import app

        def fake_client(base_url, timeout):
            return TestClient(app)

        monkeypatch.setattr(httpx, "Client", fake_client)
        code, out, _ = run_cli(
            capsys, "count", "--lattice", "chain:3", "--spin", "1",
            "--mz", "0", "--server", "http://solver.example",
        )
        assert code == 0 and out.strip() == "7"

    def test_remote_error_mapping(self, capsys, monkeypatch):
        from fastapi.testclient import TestClient

        import httpx
        from spinsym.service.app import app

        monkeypatch.setattr(httpx, "Client", lambda base_url, timeout: TestClient(app))
        code, _, err = run_cli(
            capsys, "orbits", "--lattice", "chain:16", "--spin", "1/2",
            "--mz", "0", "--sector-cap", "100", "--server", "http://solver.example",
        )
        assert code == 3


class TestThreads:
    def test_env_mirrors_flag(self, capsys, monkeypatch):
        monkeypatch.delenv("OMP_NUM_THREADS", raising=False)
        monkeypatch.setenv("SPINSYM_THREADS", "2")
        code, out, _ = run_cli(capsys, "count", "--lattice", "chain:4", "--spin", "1/2", "--mz", "0")
        assert code == 0
        import os

        assert os.environ["OMP_NUM_THREADS"] == "2"

    def test_invalid_env_rejected(self, capsys, monkeypatch):
        monkeypatch.setenv("SPINSYM_THREADS", "lots")
        code, _, err = run_cli(capsys, "count", "--lattice", "chain:4", "--spin", "1/2")
        assert code == 2
