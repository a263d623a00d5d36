import json

import numpy as np
import pytest

from retime import Signal, align_pair, dtw_full, fastdtw, read_csv, write_csv
from retime.bench import derive_seed
from retime.cli import VERIFY_THRESHOLD, main
from retime.generate import TemplateSpec, generate_template, warped_pair


@pytest.fixture(scope="module")
def pair_files(tmp_path_factory):
    """A warped pair written to CSV, plus the in-memory originals."""
    d = tmp_path_factory.mktemp("pair")
    template = generate_template(TemplateSpec("trajectory3d", 150, 3, seed=7))
    a, b = warped_pair(template, seed=7)
    pa, pb = d / "a.csv", d / "b.csv"
    write_csv(a, pa)
    write_csv(b, pb)
    return pa, pb, a, b


class TestGen:
    def test_writes_template_pairs_and_manifest(self, tmp_path, capsys):
        rc = main(
            [
                "gen",
                "--kind",
                "trajectory3d",
                "--T",
                "40",
                "--pairs",
                "2",
                "--seed",
                "3",
                "--out",
                str(tmp_path),
                "--quiet",
            ]
        )
        assert rc == 0
        names = {p.name for p in tmp_path.iterdir()}
        assert names == {
            "template.csv",
            "pair00_a.csv",
            "pair00_b.csv",
            "pair01_a.csv",
            "pair01_b.csv",
            "manifest.json",
        }

        tpl = read_csv(tmp_path / "template.csv")
        assert tpl == generate_template(TemplateSpec("trajectory3d", 40, 3, seed=3))

        a = read_csv(tmp_path / "pair00_a.csv")
        expect_a, _ = warped_pair(tpl, derive_seed(3, 0))
        assert a == expect_a

        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["kind"] == "trajectory3d"
        assert manifest["T"] == 40 and manifest["n"] == 3
        assert manifest["pairs"] == 2
        assert manifest["files"]["pair01"] == ["pair01_a.csv", "pair01_b.csv"]

    def test_highdim_needs_explicit_n(self, tmp_path, capsys):
        rc = main(["gen", "--kind", "highdim", "--T", "30", "--out", str(tmp_path)])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_highdim_with_n(self, tmp_path):
        rc = main(
            ["gen", "--kind", "highdim", "--T", "30", "--n", "5", "--out", str(tmp_path), "--quiet"]
        )
        assert rc == 0
        assert read_csv(tmp_path / "template.csv").n == 5

    def test_bad_spec_exits_2(self, tmp_path, capsys):
        rc = main(["gen", "--T", "3", "--out", str(tmp_path)])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_progress_note_unless_quiet(self, tmp_path, capsys):
        main(["gen", "--T", "20", "--out", str(tmp_path / "x")])
        assert "wrote template" in capsys.readouterr().err
        main(["gen", "--T", "20", "--out", str(tmp_path / "y"), "--quiet"])
        assert capsys.readouterr().err == ""


class TestAlign:
    def test_default_method_matches_library(self, pair_files, capsys):
        pa, pb, a, b = pair_files
        rc = main(["align", str(pa), str(pb)])
        assert rc == 0
        printed = capsys.readouterr().out.strip()
        expected, _, _ = align_pair(a, b)
        assert printed == repr(float(expected))

    def test_self_alignment_is_zero(self, pair_files, capsys):
        pa, _, _, _ = pair_files
        rc = main(["align", str(pa), str(pa)])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "0.0"

    def test_dtw_matches_library(self, pair_files, capsys):
        pa, pb, a, b = pair_files
        rc = main(["align", str(pa), str(pb), "--method", "dtw"])
        assert rc == 0
        printed = capsys.readouterr().out.strip()
        assert printed == repr(float(dtw_full(a, b).normalized))

    def test_fastdtw_default_radius_with_notice(self, pair_files, capsys):
        pa, pb, a, b = pair_files
        rc = main(["align", str(pa), str(pb), "--method", "fastdtw"])
        assert rc == 0
        out = capsys.readouterr()
        assert out.out.strip() == repr(float(fastdtw(a, b, radius=1).normalized))
        assert "radius" in out.err

    def test_fastdtw_explicit_radius(self, pair_files, capsys):
        pa, pb, a, b = pair_files
        rc = main(["align", str(pa), str(pb), "--method", "fastdtw", "--radius", "3"])
        assert rc == 0
        out = capsys.readouterr()
        assert out.out.strip() == repr(float(fastdtw(a, b, radius=3).normalized))
        assert "notice" not in out.err

    def test_gora_emit_writes_both_sides(self, pair_files, tmp_path, capsys):
        pa, pb, a, b = pair_files
        rc = main(["align", str(pa), str(pb), "--emit", str(tmp_path)])
        assert rc == 0
        for side in ("a", "b"):
            for name in ("tau_star.csv", "reparameterized.csv", "summary.json"):
                assert (tmp_path / side / name).is_file()
        _, r1, _ = align_pair(a, b)
        tau = read_csv(tmp_path / "a" / "tau_star.csv")
        assert np.array_equal(tau.samples[:, 0], r1.warp.values)

    def test_dtw_emit_writes_path(self, pair_files, tmp_path, capsys):
        pa, pb, a, b = pair_files
        rc = main(["align", str(pa), str(pb), "--method", "dtw", "--emit", str(tmp_path)])
        assert rc == 0
        pairs = np.loadtxt(tmp_path / "path.csv", delimiter=",", dtype=int)
        assert np.array_equal(pairs, dtw_full(a, b).pairs)

    def test_shape_mismatch_exits_2(self, tmp_path, capsys):
        pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(Signal(np.zeros((5, 2))), pa)
        write_csv(Signal(np.zeros((6, 2))), pb)
        rc = main(["align", str(pa), str(pb)])
        assert rc == 2
        assert "shapes" in capsys.readouterr().err

    def test_missing_file_exits_2(self, tmp_path, capsys):
        rc = main(["align", str(tmp_path / "no.csv"), str(tmp_path / "no.csv")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_ragged_csv_reports_row(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("1,2\n3\n4,5\n")
        ok = tmp_path / "ok.csv"
        write_csv(Signal(np.zeros((3, 2))), ok)
        rc = main(["align", str(bad), str(ok)])
        assert rc == 2
        assert "row 2" in capsys.readouterr().err

    def test_radius_requires_fastdtw(self, pair_files, capsys):
        pa, pb, _, _ = pair_files
        rc = main(["align", str(pa), str(pb), "--method", "dtw", "--radius", "2"])
        assert rc == 2
        assert "--radius" in capsys.readouterr().err


class TestVerify:
    def test_table_and_exit_zero(self, capsys):
        rc = main(["verify", "--trials", "4", "--T", "20", "30", "--seed", "1", "--quiet"])
        out = capsys.readouterr().out.splitlines()
        assert rc == 0
        assert out[0] == "T,percentage,trials"
        assert len(out) == 3
        for line, T in zip(out[1:], (20, 30)):
            cols = line.split(",")
            assert int(cols[0]) == T
            assert 0.0 <= float(cols[1]) <= 100.0
            assert int(cols[2]) == 4

    def test_threshold_constant(self):
        assert VERIFY_THRESHOLD == 95.0

    def test_emits_report_when_out_given(self, tmp_path, capsys):
        rc = main(
            [
                "verify",
                "--trials",
                "2",
                "--T",
                "20",
                "--seed",
                "1",
                "--out",
                str(tmp_path),
                "--quiet",
            ]
        )
        assert rc == 0
        assert (tmp_path / "fig2a.csv").is_file()
        assert (tmp_path / "fig2bc.csv").is_file()
        capsys.readouterr()

    def test_progress_goes_to_stderr(self, capsys):
        main(["verify", "--trials", "2", "--T", "20", "--seed", "1"])
        err = capsys.readouterr().err
        assert "done" in err


class TestBench:
    @staticmethod
    def write_config(path, **overrides):
        config = {
            "t_values": [20],
            "templates_per_t": 2,
            "warps_per_template": 1,
            "methods": ["gora", "dtw", "fastdtw:r=1"],
            "master_seed": 5,
        }
        config.update(overrides)
        path.write_text(json.dumps(config))

    def test_runs_and_prints_output_dir(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        self.write_config(cfg)
        out_dir = tmp_path / "results"
        rc = main(["bench", "--config", str(cfg), "--out", str(out_dir), "--quiet"])
        assert rc == 0
        assert capsys.readouterr().out.strip() == str(out_dir)
        names = {p.name for p in out_dir.iterdir()}
        assert {"fig_error.csv", "fig_runtime.csv", "summary.json", "config.json"} <= names

    def test_output_dir_from_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        self.write_config(cfg, output_dir=str(tmp_path / "from_config"))
        rc = main(["bench", "--config", str(cfg), "--quiet"])
        assert rc == 0
        assert (tmp_path / "from_config" / "fig_error.csv").is_file()
        capsys.readouterr()

    def test_no_output_dir_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        self.write_config(cfg)
        rc = main(["bench", "--config", str(cfg), "--quiet"])
        assert rc == 2
        assert "output directory" in capsys.readouterr().err

    def test_unknown_config_key_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        self.write_config(cfg, mystery=1)
        rc = main(["bench", "--config", str(cfg), "--out", str(tmp_path / "o")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_seed_override_changes_config_json(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        self.write_config(cfg)
        out_dir = tmp_path / "seeded"
        rc = main(
            ["bench", "--config", str(cfg), "--seed", "99", "--out", str(out_dir), "--quiet"]
        )
        assert rc == 0
        stored = json.loads((out_dir / "config.json").read_text())
        assert stored["master_seed"] == 99
        capsys.readouterr()
