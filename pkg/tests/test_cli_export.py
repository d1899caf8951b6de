import csv
import io
import json
import math
import re

import pytest

from bergman_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--no-timestamp")
    assert code == 0
    return json.loads(out)


def test_classify_examples(capsys):
    v = run_json(capsys, "classify", "--d", "1", "--alpha", "2", "--p", "2", "--q", "2")["verdict"]
    assert v["bounded"] is True and v["compact"] is False and v["clause"].startswith("Thm2")
    v = run_json(capsys, "classify", "--d", "1", "--alpha", "5", "--p", "2", "--q", "2")["verdict"]
    assert v["bounded"] is False
    v = run_json(capsys, "classify", "--d", "1", "--alpha", "-1", "--p", "1", "--q", "inf")
    assert v["verdict"]["bounded"] is True and v["verdict"]["compact"] is True
    assert v["formula_source"] == "Cor-gke"


def test_classify_text(capsys):
    code, out, _ = run(capsys, "classify", "--d", "1", "--alpha", "2", "--p", "2", "--q", "2",
                       "--format", "text")
    assert code == 0
    assert re.fullmatch(r"bounded=true compact=false clause=Thm2\S*\n", out)


def test_float_alpha_warning(capsys):
    out = run_json(capsys, "classify", "--d", "1", "--alpha", "2.0", "--p", "2", "--q", "2")
    assert "warning" in out


def test_json_provenance_and_sorted_keys(capsys):
    code, out, _ = run(capsys, "classify", "--d", "1", "--alpha", "3/2", "--p", "2", "--q", "4")
    data = json.loads(out)
    assert {"command", "seed", "params", "formula_source", "method", "timestamp"} <= set(data)
    assert data["seed"] == 42 and data["params"] == {"d": 1, "alpha": "3/2"}
    assert list(data) == sorted(data)


@pytest.mark.parametrize("argv", [
    ["classify", "--d", "2", "--alpha", "5/2", "--p", "3", "--q", "3"],
    ["integral", "--d", "2", "--beta", "0.7", "--gamma", "0.1", "--r", "0.3", "--mc",
     "--n-samples", "20000", "--seed", "9"],
    ["verify", "--d", "1", "--alpha", "1", "--kind", "hls", "--p", "2", "--s", "2",
     "--trials", "3"],
])
def test_byte_identical_reruns(capsys, argv):
    first = run(capsys, *argv, "--no-timestamp")
    second = run(capsys, *argv, "--no-timestamp")
    assert first[0] == 0 and first == second


def test_trace_spectrum_integral_examples(capsys):
    assert run_json(capsys, "trace", "--d", "1", "--alpha", "1")["trace"] == pytest.approx(
        math.pi ** 2 / 6, rel=1e-12)
    eig = run_json(capsys, "spectrum", "--d", "1", "--alpha", "1", "--n", "5")["eigenvalues"]
    assert eig == pytest.approx([1, 1 / 2, 1 / 3, 1 / 4, 1 / 5], rel=1e-14)
    out = run_json(capsys, "integral", "--d", "2", "--beta", "0", "--gamma", "0", "--r", "0.5")
    assert out["value"] == pytest.approx(1.0, rel=1e-15)
    assert out["method"] == "closed-form"


def test_identity_and_norm(capsys):
    out = run_json(capsys, "identity", "--alpha", "0.5", "--n", "100000")
    assert out["status"] == "agree"
    out = run_json(capsys, "norm", "--d", "1", "--alpha", "1", "--kind", "l1-lq", "--q", "1")
    assert out["norm"]["value"] == pytest.approx(4 / math.pi, rel=1e-14)
    assert out["formula_source"] == "Lem-ld1"


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "classify", "--d", "1", "--alpha", "2", "--p", "2")[0] == 2
    assert run(capsys, "classify", "--d", "1", "--alpha", "2", "--p", "0.5", "--q", "2")[0] == 1
    code, _, err = run(capsys, "trace", "--d", "1", "--alpha", "2")
    assert code == 1 and "error" in err
    assert run(capsys, "trace", "--d", "1", "--alpha", "1", "--format", "svg")[0] == 2
    bad = tmp_path / "missing" / "out.svg"
    assert run(capsys, "diagram", "--d", "1", "--alpha", "2", "--output", str(bad))[0] == 1


def test_diagram_csv(capsys):
    code, out, _ = run(capsys, "diagram", "--d", "1", "--alpha", "5/2", "--format", "csv",
                       "--resolution", "8")
    assert code == 0
    assert out.count("\r\n") == 82 and "\n" not in out.replace("\r\n", "")
    rows = list(csv.reader(io.StringIO(out, newline="")))
    assert rows[0] == ["inv_p", "inv_q", "bounded", "compact", "clause"]
    assert len(rows) == 82
    cells = {(r[0], r[1]): r for r in rows[1:]}
    assert cells[("1/8", "7/8")][2] == "true"
    assert cells[("1/2", "1/2")][2] == "false"
    assert cells[("0", "1")][2:4] == ["true", "true"]


def _svg(capsys, alpha, d="1", path=None):
    argv = ["diagram", "--d", d, "--alpha", alpha]
    if path:
        argv += ["--output", str(path)]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return path.read_text() if path else out


def test_svg_frame_and_labels(capsys):
    s = _svg(capsys, "2")
    assert 'width="800" height="800"' in s and 'viewBox="0 0 800 800"' in s
    assert ">1/p</text>" in s and ">1/q</text>" in s
    assert 'class="axis-of-symmetry"' in s
    assert 'class="bounded"' in s


def test_svg_regions(capsys):
    empty = _svg(capsys, "3")
    assert 'class="bounded"' not in empty and 'class="compact"' not in empty
    full = _svg(capsys, "0")
    # the whole square E: corners (80,80)..(720,720)
    m = re.search(r'class="bounded" d="([^"]+)"', full)
    pts = set(re.findall(r"(\d+\.\d+) (\d+\.\d+)", m.group(1)))
    assert pts == {("80.000", "80.000"), ("720.000", "80.000"), ("720.000", "720.000"),
                   ("80.000", "720.000")}
    tri = _svg(capsys, "5/2")
    m = re.search(r'class="bounded" d="([^"]+)"', tri)
    pts = set(re.findall(r"(\d+\.\d+) (\d+\.\d+)", m.group(1)))
    # (1/2, 1), (0, 1/2), (0, 1) in viewport coordinates
    assert pts == {("400.000", "80.000"), ("80.000", "400.000"), ("80.000", "80.000")}


def test_svg_bit_stable(capsys, tmp_path):
    a = _svg(capsys, "3/2", d="2", path=tmp_path / "a.svg")
    b = _svg(capsys, "3/2", d="2", path=tmp_path / "b.svg")
    assert a == b
