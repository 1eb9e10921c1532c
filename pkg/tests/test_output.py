import json

import numpy as np

from polarsl.output import emit_plot, format_real, to_csv, to_json, write_text


def test_format_real_is_lossless():
    rng = np.random.default_rng(0)
    for x in np.concatenate([rng.normal(size=200) * 10.0 ** rng.integers(-30, 30, 200), [0.1, 1 / 3]]):
        text = format_real(x)
        assert float(text) == x
        assert len(text.split("e")[0].replace("-", "").replace(".", "")) == 17


def test_csv_layout():
    text = to_csv(("n", "W"), [(0, 1.125), (1, 3.125)])
    assert text == "n,W\n0,1.1250000000000000e+00\n1,3.1250000000000000e+00\n"
    assert "\r" not in text


def test_csv_numpy_scalars():
    text = to_csv(("k", "x"), [(np.int64(2), np.float64(0.5))])
    assert text.splitlines()[1] == "2,5.0000000000000000e-01"


def test_json_layout():
    text = to_json({"b": 1, "a": [0.5, None]})
    assert text.endswith("}\n")
    assert list(json.loads(text)) == ["b", "a"]
    assert text.startswith('{\n  "b": 1')


def test_write_text_to_file(tmp_path):
    target = tmp_path / "out.csv"
    write_text("a\nb\n", target)
    assert target.read_bytes() == b"a\nb\n"


def test_write_text_to_stdout(capsys):
    write_text("hello\n")
    assert capsys.readouterr().out == "hello\n"


def test_emit_plot(tmp_path):
    theta = np.linspace(0.0, np.pi, 5)
    dat, script = emit_plot(
        tmp_path / "density",
        {"theta": theta, "density": np.sin(theta)},
        xlabel="theta",
        ylabel="p",
        title="t",
    )
    assert dat.name == "density.dat" and script.name == "density.gp"
    lines = dat.read_text().splitlines()
    assert lines[0] == "# theta density"
    assert len(lines) == 6
    assert [float(v) for v in lines[3].split()] == [theta[2], np.sin(theta[2])]
    gp = script.read_text()
    assert "'density.dat' using 1:2 with lines title 'density'" in gp
