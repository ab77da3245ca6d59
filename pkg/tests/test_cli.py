import numpy as np
import pytest

from wscan.cli import main
from wscan.data import load_text, read_packed, unpack, write_text
from wscan.hf import read_hf_tables
from wscan.simulate import simulate_null_dataset


@pytest.fixture
def d0_text(tmp_path, d0):
    path = tmp_path / "d0.tsv"
    write_text(d0, path)
    return path


class TestConvert:
    def test_text_packed_text_roundtrip(self, tmp_path, d0, d0_text):
        wpk = tmp_path / "d0.wpk"
        txt2 = tmp_path / "d0_back.tsv"
        assert main(["convert", str(d0_text), str(wpk), "--phenotype", "phenotype"]) == 0
        assert unpack(read_packed(wpk)) == d0
        assert main(["convert", str(wpk), str(txt2)]) == 0
        assert load_text(txt2, "phenotype") == d0

    def test_corrupt_file_exit_2(self, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("a,phenotype\n7,1\n0,0\n")
        assert main(["convert", str(bad), str(tmp_path / "o.wpk"), "--phenotype", "phenotype"]) == 2

    def test_missing_input_exit_1(self, tmp_path):
        rc = main(["convert", str(tmp_path / "nope.tsv"), str(tmp_path / "o.wpk"),
                   "--phenotype", "phenotype"])
        assert rc == 1

    def test_random_file_roundtrip(self, tmp_path):
        ds = simulate_null_dataset(50, 1000, seed=3, missing_rate=0.02)
        src = tmp_path / "r.tsv"
        write_text(ds, src)
        wpk = tmp_path / "r.wpk"
        back = tmp_path / "r2.tsv"
        assert main(["convert", str(src), str(wpk), "--phenotype", "phenotype"]) == 0
        assert main(["convert", str(wpk), str(back)]) == 0
        assert src.read_text() == back.read_text()


class TestEstimateHf:
    def test_writes_tsv_and_seed_determinism(self, tmp_path, capsys):
        ds = simulate_null_dataset(150, 40, seed=2)
        data = tmp_path / "d.tsv"
        write_text(ds, data)
        outs = []
        for name in ("hf1.tsv", "hf2.tsv"):
            out = tmp_path / name
            rc = main([
                "estimate-hf", str(data), "--phenotype", "phenotype",
                "--order", "1", "--B", "20", "--n-sample", "40",
                "--seed", "5", "--out", str(out),
            ])
            assert rc == 0
            outs.append(out.read_text())
        assert outs[0] == outs[1]
        tables = read_hf_tables(tmp_path / "hf1.tsv")
        assert 1 in tables

    def test_bad_order_usage_error(self, tmp_path, d0_text):
        with pytest.raises(SystemExit) as exc:
            main(["estimate-hf", str(d0_text), "--phenotype", "phenotype",
                  "--order", "3", "--out", str(tmp_path / "x.tsv")])
        assert exc.value.code == 64

    def test_defaulted_seed_warns(self, tmp_path, d0_text, capsys):
        out = tmp_path / "hf.tsv"
        rc = main(["estimate-hf", str(d0_text), "--phenotype", "phenotype",
                   "--order", "1", "--B", "5", "--n-sample", "2", "--out", str(out)])
        assert rc == 0
        assert "seed" in capsys.readouterr().err


class TestScan:
    def test_order1_d0_matches_library(self, tmp_path, d0, d0_text):
        out = tmp_path / "res.tsv"
        rc = main(["scan", str(d0_text), "--phenotype", "phenotype",
                   "--order", "1", "--out", str(out), "--quiet"])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 3  # header + 2 markers

    def test_input_pval_zero_empty(self, tmp_path, d0_text):
        out = tmp_path / "res.tsv"
        rc = main(["scan", str(d0_text), "--phenotype", "phenotype",
                   "--order", "2", "--input-pval", "0", "--out", str(out), "--quiet"])
        assert rc == 0
        assert len(out.read_text().splitlines()) == 1  # header only

    def test_order2_with_hf_file(self, tmp_path):
        ds = simulate_null_dataset(150, 12, seed=4)
        data = tmp_path / "d.tsv"
        write_text(ds, data)
        hf_path = tmp_path / "hf.tsv"
        rc = main(["estimate-hf", str(data), "--phenotype", "phenotype",
                   "--order", "2", "--B", "10", "--n-sample", "30",
                   "--seed", "1", "--out", str(hf_path)])
        assert rc == 0
        out = tmp_path / "pairs.tsv"
        rc = main(["scan", str(data), "--phenotype", "phenotype", "--order", "2",
                   "--hf", str(hf_path), "--out", str(out), "--quiet"])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("rank\tmarker1\tmarker2")
        assert len(lines) == 1 + 12 * 11 // 2

    def test_reproducible_outputs(self, tmp_path):
        ds = simulate_null_dataset(100, 10, seed=6)
        data = tmp_path / "d.tsv"
        write_text(ds, data)
        texts = []
        for name in ("a.tsv", "b.tsv"):
            out = tmp_path / name
            rc = main(["scan", str(data), "--phenotype", "phenotype",
                       "--order", "2", "--out", str(out), "--quiet"])
            assert rc == 0
            texts.append(out.read_text())
        assert texts[0] == texts[1]


class TestDiagnoseAndBench:
    def test_diagnose_writes_reports(self, tmp_path):
        ds = simulate_null_dataset(300, 60, seed=10)
        data = tmp_path / "d.tsv"
        write_text(ds, data)
        out_dir = tmp_path / "diag"
        rc = main(["diagnose", str(data), "--phenotype", "phenotype",
                   "--order", "1", "--n-rep", "5", "--n-sample", "60",
                   "--seed", "3", "--out-dir", str(out_dir), "--quiet"])
        assert rc == 0
        names = {p.name for p in out_dir.iterdir()}
        assert "diag_density_k3.svg" in names
        assert "diag_qq_k3.tsv" in names

    def test_bench_three_methods(self, tmp_path):
        ds = simulate_null_dataset(100, 6, seed=11)
        data = tmp_path / "d.tsv"
        write_text(ds, data)
        out = tmp_path / "bench.tsv"
        rc = main(["bench", str(data), "--phenotype", "phenotype",
                   "--methods", "wtest,chisq,logistic", "--out", str(out)])
        assert rc == 0
        assert len(out.read_text().splitlines()) == 4

    def test_unknown_method_usage_error(self, tmp_path, d0, d0_text):
        rc = main(["bench", str(d0_text), "--phenotype", "phenotype",
                   "--methods", "anova", "--out", str(tmp_path / "b.tsv")])
        assert rc == 64
