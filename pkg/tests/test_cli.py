import json
import os

import pytest

from heavybd.cli import main, parse_config, read_config_file


def test_alpha_domain_rejected_with_interval_message():
    with pytest.raises(ValueError, match=r"\(0, 2\)"):
        parse_config(["height", "--alpha", "2.0", "--p", "1", "--T", "5", "--seed", "1"])


def test_missing_seed_defaults_to_zero_with_warning(capsys):
    cfg = parse_config(["height", "--alpha", "1.5", "--p", "1", "--T", "5"])
    assert cfg["seed"] == 0
    assert "default 0" in capsys.readouterr().err


def test_zeta_and_p_are_contradictory():
    with pytest.raises(ValueError, match="contradictory"):
        parse_config(["height", "--p", "0.5", "--zeta", "0.3", "--T", "5", "--seed", "1"])


def test_config_file_roundtrip_and_flag_override(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("# demo\nalpha = 1.2\nreps = 7\nseed = 3\n")
    cfg = parse_config(["height", "--config", str(cfg_file), "--T", "4", "--reps", "9"])
    assert cfg["alpha"] == 1.2
    assert cfg["reps"] == 9  # flag beats file
    assert cfg["seed"] == 3


def test_unknown_config_key_rejected(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("frobnicate = 1\n")
    with pytest.raises(ValueError, match="frobnicate"):
        read_config_file(bad)


def test_height_command_row_count(tmp_path):
    out = tmp_path / "o"
    rc = main(["height", "--alpha", "1.5", "--p", "1", "--T", "50", "--reps", "100",
               "--seed", "7", "--out", str(out)])
    assert rc == 0
    lines = (out / "heights.csv").read_text().splitlines()
    assert lines[0] == "rep,T,p,alpha,height,normalized"
    assert len(lines) == 101
    summary = json.loads((out / "summary.json").read_text())
    assert summary["master_seed"] == 7
    assert summary["config"]["experiment"] == "height"
    assert summary["provenance"].startswith("heavybd-")


def test_rerun_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    argv = ["height", "--alpha", "1.5", "--p", "0.5", "--T", "10", "--reps", "40", "--seed", "2"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert (a / "heights.csv").read_bytes() == (b / "heights.csv").read_bytes()
    assert (a / "summary.json").read_text().replace(str(a), "X") == \
        (b / "summary.json").read_text().replace(str(b), "X")


def test_moments_command_reports_targets(tmp_path):
    out = tmp_path / "m"
    rc = main(["moments", "--p", "1", "--T", "10", "--reps", "2000", "--seed", "11",
               "--out", str(out)])
    assert rc == 0
    lines = (out / "moments.csv").read_text().splitlines()
    header = lines[0].split(",")
    row = dict(zip(header, lines[1].split(",")))
    assert float(row["interior_target"]) == pytest.approx(90.9999546, abs=1e-4)
    assert float(row["boundary_target"]) == pytest.approx(19.0000454, abs=1e-4)
    assert abs(float(row["interior_mean"]) - 91.0) < 3.0
    assert abs(float(row["boundary_mean"]) - 19.0) < 1.0


def test_forward_command_writes_blocklog(tmp_path):
    out = tmp_path / "f"
    rc = main(["forward", "--geometry", "torus:50", "--T", "4", "--p", "1",
               "--seed", "5", "--out", str(out)])
    assert rc == 0
    lines = (out / "blocklog.csv").read_text().splitlines()
    assert lines[0] == "site,time,base,top,sticky"
    assert len(lines) > 50


def test_bad_flags_exit_code(tmp_path, capsys):
    assert main(["height", "--alpha", "2.5", "--T", "5", "--seed", "1",
                 "--out", str(tmp_path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_geometry_parse_errors():
    with pytest.raises(ValueError, match="geometry"):
        parse_config(["forward", "--geometry", "sphere:5", "--T", "2", "--seed", "1"])


def test_continuous_sample_and_rd_commands(tmp_path):
    out = tmp_path / "c"
    rc = main(["continuous-sample", "--alpha", "1.5", "--k", "64", "--reps", "3",
               "--seed", "9", "--out", str(out)])
    assert rc == 0
    assert (out / "points.csv").read_text().splitlines()[0] == "x,t,m"
    assert (out / "hsample.csv").read_text().splitlines()[0] == "replicate,k,value"
    out2 = tmp_path / "r"
    rc = main(["rd-check", "--alpha", "0.8", "--T", "20,40", "--reps", "500",
               "--seed", "9", "--out", str(out2)])
    assert rc == 0
    assert (out2 / "rd.csv").read_text().splitlines()[0] == "T_lo,T_hi,ks"
