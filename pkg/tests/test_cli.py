import json

import pytest

from curlflux import cli

SHIFT = "x: xy\ny: y\n"
SHIFT_WITH_INVERSE = "x: xy\ny: y\ninverse:\nx: xY\ny: y\n"
SHIFT_BAD_INVERSE = "x: xy\ny: y\ninverse:\nx: xy\ny: y\n"
COLLAPSE = "x: xy\ny: 1\n"


@pytest.fixture
def shift_file(tmp_path):
    path = tmp_path / "shift.map"
    path.write_text(SHIFT)
    return str(path)


def run(argv):
    return cli.main(argv)


class TestTable:
    def test_tsv_golden_rows(self, shift_file, tmp_path, capsys):
        out = tmp_path / "table.tsv"
        code = run(["table", "--map", shift_file, "--n", "10,20",
                    "--engine", "dp", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "n\tCURL_RATIO\tCURL_ROOT\tFLUX_RATIO\tFLUX_ROOT"
        assert lines[1] == "10\t0.331634\t0.895501\t0.668366\t0.960509"
        assert lines[2] == "20\t0.181176\t0.918132\t0.818824\t0.990055"

    def test_engines_produce_identical_tsv(self, shift_file, tmp_path):
        paths = {}
        for engine in ("brute", "dp"):
            out = tmp_path / f"{engine}.tsv"
            assert run(["table", "--map", shift_file, "--n", "1..8",
                        "--engine", engine, "--out", str(out)]) == 0
            paths[engine] = out.read_bytes()
        assert paths["brute"] == paths["dp"]

    def test_identity_map(self, tmp_path):
        path = tmp_path / "id.map"
        path.write_text("x: x\ny: y\n")
        out = tmp_path / "id.tsv"
        assert run(["table", "--map", str(path), "--n", "3,6",
                    "--out", str(out)]) == 0
        for line in out.read_text().splitlines()[1:]:
            fields = line.split("\t")
            assert fields[1] == "1" and fields[3] == "0"

    def test_rank_three_stabilization_row(self, tmp_path):
        path = tmp_path / "stab.map"
        path.write_text("x: xy\ny: y\nz: z\n")
        out = tmp_path / "stab.tsv"
        assert run(["table", "--map", str(path), "--n", "10",
                    "--engine", "dp", "--out", str(out)]) == 0
        row = out.read_text().splitlines()[1].split("\t")
        assert row[1] == "0.220658"

    def test_json_carries_exact_counts(self, shift_file, tmp_path):
        out = tmp_path / "table.json"
        assert run(["table", "--map", shift_file, "--n", "10",
                    "--format", "json", "--engine", "dp",
                    "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["engine"] == "dp"
        assert doc["rows"][0]["curl_count"] == 39165
        assert doc["rows"][0]["ball"] == 118097

    def test_range_radii(self, shift_file, tmp_path):
        out = tmp_path / "r.tsv"
        assert run(["table", "--map", shift_file, "--n", "1..5",
                    "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 6

    def test_parse_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.map"
        bad.write_text("x: xX\ny: y\n")
        assert run(["table", "--map", str(bad), "--n", "3"]) == cli.EXIT_PARSE

    def test_missing_file_exit_code(self, tmp_path):
        assert run(["table", "--map", str(tmp_path / "none.map"),
                    "--n", "3"]) == cli.EXIT_PARSE

    def test_sample_engine(self, shift_file, tmp_path):
        out = tmp_path / "s.json"
        assert run(["table", "--map", shift_file, "--n", "10",
                    "--engine", "sample", "--samples", "2000",
                    "--seed", "9", "--format", "json",
                    "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["rows"][0]["samples"] == 2000
        assert doc["rows"][0]["seed"] == 9

    def test_auto_falls_back_to_sampling_on_closure_failure(
            self, tmp_path, capsys):
        path = tmp_path / "collapse.map"
        path.write_text(COLLAPSE)
        out = tmp_path / "c.tsv"
        code = run(["table", "--map", str(path), "--n", "16",
                    "--samples", "500", "--out", str(out)])
        assert code == 0
        err = capsys.readouterr().err
        assert "falling back to sampling" in err
        assert len(out.read_text().splitlines()) == 2

    def test_dp_failure_without_auto_is_engine_error(self, tmp_path):
        path = tmp_path / "collapse.map"
        path.write_text(COLLAPSE)
        assert run(["table", "--map", str(path), "--n", "12",
                    "--engine", "dp"]) == cli.EXIT_ENGINE

    def test_sample_output_deterministic_given_seed(self, shift_file, tmp_path):
        outs = []
        for name in ("s1.tsv", "s2.tsv"):
            out = tmp_path / name
            assert run(["table", "--map", shift_file, "--n", "6,10",
                        "--engine", "sample", "--samples", "1500",
                        "--seed", "21", "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_memory_cap_env(self, shift_file, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("CURLFLUX_MEMORY_CAP_MB", "0")
        code = run(["table", "--map", shift_file, "--n", "60",
                    "--engine", "dp"])
        assert code == cli.EXIT_ENGINE
        assert "largest completed n" in capsys.readouterr().err


class TestCheck:
    def test_quick_battery_passes(self, tmp_path):
        out = tmp_path / "report.json"
        code = run(["check", "--quick", "--pairs", "4", "--autos", "2",
                    "--format", "json", "--out", str(out)])
        assert code == 0
        reports = json.loads(out.read_text())
        assert all(r["ok"] for r in reports)
        assert sum(r["instances"] for r in reports) >= 50

    def test_map_inverse_verified(self, tmp_path):
        path = tmp_path / "good.map"
        path.write_text(SHIFT_WITH_INVERSE)
        assert run(["check", "--map", str(path)]) == 0

    def test_corrupted_inverse_reported(self, tmp_path, capsys):
        path = tmp_path / "bad.map"
        path.write_text(SHIFT_BAD_INVERSE)
        code = run(["check", "--map", str(path)])
        assert code == cli.EXIT_VIOLATION
        assert "does not fix generator" in capsys.readouterr().out


class TestGrowth:
    def test_shift_growth_column(self, shift_file, tmp_path):
        out = tmp_path / "g.tsv"
        assert run(["growth", "--map", shift_file, "--m", "1",
                    "--n-max", "20", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "m\tn\tGROWTH\tGROWTH_ROOT"
        values = [int(line.split("\t")[2]) for line in lines[1:]]
        assert values == [n + 1 for n in range(1, 21)]

    def test_fibonacci_growth_values(self, tmp_path):
        path = tmp_path / "fib.map"
        path.write_text("x: xy\ny: x\n")
        out = tmp_path / "g.tsv"
        assert run(["growth", "--map", str(path), "--m", "1",
                    "--n-max", "10", "--out", str(out)]) == 0
        values = [int(line.split("\t")[2])
                  for line in out.read_text().splitlines()[1:]]
        fib = [1, 1]
        while len(fib) < 14:
            fib.append(fib[-1] + fib[-2])
        assert values == [fib[n + 1] for n in range(1, 11)]

    def test_permutation_constant(self, tmp_path):
        path = tmp_path / "swap.map"
        path.write_text("x: y\ny: x\n")
        out = tmp_path / "g.tsv"
        assert run(["growth", "--map", str(path), "--m", "2",
                    "--n-max", "6", "--out", str(out)]) == 0
        values = [int(line.split("\t")[2])
                  for line in out.read_text().splitlines()[1:]]
        assert values == [2] * 6

    def test_exponential_blowup_is_engine_failure(self, tmp_path, capsys):
        path = tmp_path / "fib.map"
        path.write_text("x: xy\ny: x\n")
        code = run(["growth", "--map", str(path), "--m", "1", "--n-max", "60"])
        assert code == cli.EXIT_ENGINE
        assert "blow-up cap" in capsys.readouterr().err


class TestClassify:
    @pytest.mark.parametrize("text,kind", [
        ("x: y\ny: x\n", "permutation"),
        ("x: x\ny: xyX\n", "inner"),
        ("x: xyX\ny: x\n", "simple"),     # swap then conjugation by x
        ("x: xxxxx\ny: yyyyy\n", "power"),
        (SHIFT, "general"),
    ])
    def test_kinds(self, tmp_path, text, kind, capsys):
        path = tmp_path / "m.map"
        path.write_text(text)
        assert run(["classify", "--map", str(path)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["kind"] == kind
