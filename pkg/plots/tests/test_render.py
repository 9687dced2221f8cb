import os
import shutil
import subprocess

import numpy as np
import pytest

from bdplots import EXPECTED_HEADERS, FigureSpec, render

DATA = os.path.join(os.path.dirname(__file__), "data")
GOLDEN_BLOCKLOG = os.path.join(DATA, "blocklog_golden.csv")


def write_heights_csv(path, t, values):
    rows = [f"{r},{t},1,1.5,{v},{v}" for r, v in enumerate(values)]
    path.write_text("rep,T,p,alpha,height,normalized\n" + "\n".join(rows) + "\n")


def test_interface_renders_golden_blocklog(tmp_path):
    out = tmp_path / "interface.png"
    res = render(FigureSpec(inputs=(GOLDEN_BLOCKLOG,), kind="interface", output=str(out)))
    assert out.exists()
    assert res.n_rows == 9956
    assert res.width_px > 0 and res.height_px > 0


def test_interface_rectangles_preserve_overhangs(tmp_path):
    # a sticky block resting above its own column top must be drawn at its base
    csv = tmp_path / "log.csv"
    csv.write_text(
        "site,time,base,top,sticky\n"
        "0,0.5,0,1,0\n"
        "1,0.7,0,4,0\n"
        "0,0.9,4,5,1\n"  # overhang: base 4 > previous top 1 at site 0
    )
    out = tmp_path / "overhang.png"
    res = render(FigureSpec(inputs=(str(csv),), kind="interface", output=str(out)))
    assert res.n_rows == 3
    assert out.exists()


def test_render_is_idempotent(tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    ra = render(FigureSpec(inputs=(GOLDEN_BLOCKLOG,), kind="interface", output=str(a)))
    rb = render(FigureSpec(inputs=(GOLDEN_BLOCKLOG,), kind="interface", output=str(b)))
    assert (ra.width_px, ra.height_px, ra.n_rows) == (rb.width_px, rb.height_px, rb.n_rows)
    assert a.read_bytes() == b.read_bytes()


def test_ecdf_overlay_two_series(tmp_path):
    rng = np.random.default_rng(0)
    h1, h2 = tmp_path / "h1.csv", tmp_path / "h2.csv"
    write_heights_csv(h1, 10.0, rng.pareto(1.5, size=200))
    write_heights_csv(h2, 25.0, rng.pareto(1.5, size=300))
    out = tmp_path / "ecdf.png"
    res = render(FigureSpec(inputs=(str(h1), str(h2)), kind="ecdf-overlay", output=str(out)))
    assert res.n_series == 2
    assert res.n_rows == 500
    assert out.exists()


def test_identical_samples_give_coincident_curves(tmp_path):
    vals = np.linspace(1.0, 5.0, 50)
    h1, h2 = tmp_path / "h1.csv", tmp_path / "h2.csv"
    write_heights_csv(h1, 10.0, vals)
    write_heights_csv(h2, 10.0, vals)
    res = render(FigureSpec(inputs=(str(h1), str(h2)), kind="ecdf-overlay",
                            output=str(tmp_path / "same.png")))
    assert res.n_series == 2


def test_schema_mismatch_names_headers(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("foo,bar\n1,2\n")
    out = tmp_path / "x.png"
    with pytest.raises(ValueError) as err:
        render(FigureSpec(inputs=(str(bad),), kind="interface", output=str(out)))
    assert EXPECTED_HEADERS["interface"] in str(err.value)
    assert "foo,bar" in str(err.value)
    assert not out.exists()


def test_empty_input_is_an_error_and_writes_nothing(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("rep,T,p,alpha,height,normalized\n")
    out = tmp_path / "y.png"
    with pytest.raises(ValueError, match="no data rows"):
        render(FigureSpec(inputs=(str(empty),), kind="ecdf-overlay", output=str(out)))
    assert not out.exists()
    empty.write_text("")
    with pytest.raises(ValueError, match="empty file"):
        render(FigureSpec(inputs=(str(empty),), kind="ecdf-overlay", output=str(out)))


def test_loglog_sweep_and_moments(tmp_path):
    sweep = tmp_path / "sweep.csv"
    rows = ["zeta,T,p,median,q1,q3,reps"]
    for z in (0.2, 0.8):
        for T in (50, 100, 200):
            m = T ** (0.2 if z == 0.8 else 0.0)
            rows.append(f"{z},{T},{T ** -z},{m},{0.9 * m},{1.1 * m},100")
    sweep.write_text("\n".join(rows) + "\n")
    res = render(FigureSpec(inputs=(str(sweep),), kind="loglog-sweep",
                            output=str(tmp_path / "sweep.png")))
    assert res.n_series == 2 and res.n_rows == 6

    mom = tmp_path / "moments.csv"
    mom.write_text(
        EXPECTED_HEADERS["moments"] + "\n"
        "1,10,1000,90.9,0.1,91.0,19.0,0.05,19.0,0.99,0.01,1.0\n"
    )
    res = render(FigureSpec(inputs=(str(mom),), kind="moments",
                            output=str(tmp_path / "moments.png")))
    assert res.n_series == 3


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError, match="figure kind"):
        FigureSpec(inputs=("x.csv",), kind="pie", output=str(tmp_path / "p.png"))


def test_svg_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    render(FigureSpec(inputs=(GOLDEN_BLOCKLOG,), kind="interface", output=str(a)))
    render(FigureSpec(inputs=(GOLDEN_BLOCKLOG,), kind="interface", output=str(b)))
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.skipif(shutil.which("heavybd") is None, reason="primary CLI not installed")
def test_golden_blocklog_regenerates_from_primary_cli(tmp_path):
    subprocess.run(
        ["heavybd", "forward", "--geometry", "torus:400", "--T", "25", "--p", "1",
         "--alpha", "1.5", "--seed", "4242", "--out", str(tmp_path)],
        check=True, capture_output=True,
    )
    regenerated = (tmp_path / "blocklog.csv").read_bytes()
    assert regenerated == open(GOLDEN_BLOCKLOG, "rb").read()


def test_cli_end_to_end(tmp_path, capsys):
    from bdplots.cli import main

    out = tmp_path / "iface.png"
    rc = main(["interface", GOLDEN_BLOCKLOG, "--out", str(out)])
    assert rc == 0 and out.exists()
    rc = main(["interface", GOLDEN_BLOCKLOG.replace("blocklog_golden", "missing"),
               "--out", str(tmp_path / "no.png")])
    assert rc == 1
