import csv
import io
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dispgen import GridPointSet, format_points, parse_points, read_points, write_points
from dispgen.cli import main
from dispgen.core import to_unit_points
from dispgen.pointfile import PointFileError


@st.composite
def unit_sets(draw):
    m = draw(st.integers(1, 6))
    d = draw(st.integers(1, 5))
    rows = draw(
        st.lists(st.lists(st.integers(1, 2**m - 1), min_size=d, max_size=d), max_size=15)
    )
    return to_unit_points(GridPointSet(np.array(rows, dtype=np.int64).reshape(-1, d), m, d))


@given(unit_sets(), st.sampled_from(["rational", "decimal"]))
def test_round_trip(points, fmt):
    pf = parse_points(format_points(points, "uv", 3, fmt))
    assert pf.points == points
    assert (pf.algo, pf.seed) == ("uv", 3)
    if len(points):
        assert pf.fmt == fmt


def test_format_is_literal():
    pts = to_unit_points(GridPointSet([[1, 2], [3, 3]], 2))
    assert format_points(pts) == "#dispgen v1 d=2 m=2 n=2 algo=- seed=-\n1/4,2/4\n3/4,3/4\n"
    assert format_points(pts, fmt="decimal").splitlines()[1:] == ["0.25,0.5", "0.75,0.75"]


@pytest.mark.parametrize(
    "body, line",
    [
        ("nonsense\n1/4,1/4\n", 1),
        ("#dispgen v1 d=2 m=2 n=1 algo=x seed=-\n0/4,1/4\n", 2),
        ("#dispgen v1 d=2 m=2 n=2 algo=x seed=-\n1/4,1/4\n1/4\n", 3),
        ("#dispgen v1 d=2 m=2 n=1 algo=x seed=-\n1/8,1/4\n", 2),
        ("#dispgen v1 d=2 m=2 n=1 algo=x seed=-\n0.25,1/4\n", 2),
        ("#dispgen v1 d=1 m=2 n=1 algo=x seed=-\n0.3\n", 2),
    ],
)
def test_parse_errors_name_the_line(body, line):
    with pytest.raises(PointFileError) as err:
        parse_points(body)
    assert err.value.line == line


def test_parse_count_and_duplicates():
    with pytest.raises(PointFileError):
        parse_points("#dispgen v1 d=1 m=2 n=2 algo=x seed=-\n1/4\n")
    with pytest.raises(PointFileError):
        parse_points("#dispgen v1 d=1 m=2 n=2 algo=x seed=-\n1/4\n1/4\n")


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def summary(text):
    line = [s for s in text.splitlines() if s.startswith("algorithm=") or s.startswith("mode=")]
    return dict(kv.split("=", 1) for kv in line[-1].split())


def test_generate_examples(tmp_path, capsys):
    f = tmp_path / "a.txt"
    code, out, _ = run_cli(
        capsys, "generate", "--epsilon", "1/4", "--dim", "2", "--algorithm", "sosnovec",
        "--output", str(f),
    )
    assert code == 0 and len(read_points(f).points) == 9
    s = summary(out)
    assert s["n"] == "9" and s["certified"] == "condition-S" and s["m"] == "2"

    code, out, _ = run_cli(
        capsys, "generate", "--epsilon", "0.25", "--dim", "3", "--output", str(f)
    )
    assert code == 0 and summary(out)["certified"] == "condition-S-prime"
    assert len(read_points(f).points) <= 1024

    code, out, _ = run_cli(
        capsys, "generate", "--epsilon", "1/4", "--dim", "16", "--algorithm", "random",
        "--seed", "1", "--output", str(f),
    )
    assert code == 0 and summary(out)["certified"] == "unchecked"
    assert read_points(f).seed == 1


def test_generate_to_stdout(capsys):
    code, out, _ = run_cli(capsys, "generate", "--epsilon", "1/4", "--dim", "2")
    assert code == 0 and out.startswith("#dispgen v1 d=2 m=2")


def test_verify_examples(tmp_path, capsys):
    f = tmp_path / "grid.txt"
    run_cli(capsys, "generate", "--epsilon", "1/4", "--dim", "2", "--algorithm", "sosnovec",
            "--output", str(f))
    code, out, _ = run_cli(capsys, "verify", str(f), "--mode", "exact")
    assert code == 0
    assert summary(out) == {"mode": "exact", "dispersion": "1/4", "witness": "(0,1/4)×(0,1)"}
    code, out, _ = run_cli(capsys, "verify", str(f), "--mode", "condition-s", "--order", "2")
    assert code == 0 and summary(out)["result"] == "pass"
    code, out, _ = run_cli(capsys, "verify", str(f), "--mode", "condition-s-prime")
    assert code == 0
    code, out, _ = run_cli(capsys, "verify", str(f), "--mode", "lower-bound", "--samples", "50")
    assert code == 0 and summary(out)["dispersion_at_least"] == "1/4"
    code, out, _ = run_cli(
        capsys, "verify", str(f), "--mode", "exact", "--threshold", "1/8"
    )
    assert code == 1


def test_verify_at_finer_order(tmp_path, capsys):
    f = tmp_path / "grid.txt"
    write_points(f, to_unit_points(GridPointSet([[1, 2]], 2)))
    code, out, _ = run_cli(capsys, "verify", str(f), "--mode", "condition-s-prime",
                           "--order", "3")
    assert code == 1 and summary(out)["order"] == "3"
    code, _, err = run_cli(capsys, "verify", str(f), "--mode", "condition-s", "--order", "1")
    assert code == 2 and json.loads(err)["error"] == "DomainError"


def test_verify_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("#dispgen v1 d=2 m=2 n=1 algo=x seed=-\n0/4,1/4\n")
    code, _, err = run_cli(capsys, "verify", str(bad), "--mode", "exact")
    rec = json.loads(err)
    assert code == 2 and rec["line"] == 2 and rec["error"] == "PointFileError"
    dec = tmp_path / "dec.txt"
    dec.write_text("#dispgen v1 d=1 m=2 n=1 algo=x seed=-\n0.5\n")
    code, _, err = run_cli(capsys, "verify", str(dec), "--mode", "exact")
    assert code == 2 and "rational" in json.loads(err)["message"]
    code, _, err = run_cli(capsys, "verify", str(tmp_path / "missing"), "--mode", "exact")
    assert code == 2


def test_budget_error_is_machine_readable(capsys):
    code, _, err = run_cli(capsys, "generate", "--epsilon", "1/5", "--dim", "3")
    rec = json.loads(err)
    assert code == 2 and rec["error"] == "InfeasibleInstance" and rec["budget"] == "index-pair"


def test_bounds(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--epsilon", "1/4", "--dim", "16")
    row = dict(kv.split("=") for kv in out.splitlines()[0].split())
    assert code == 0
    assert (row["lower"], row["uv_upper"], row["sparse_grid"]) == ("2", "73728", "1024")
    _, out, _ = run_cli(capsys, "bounds", "--epsilon", "1/8", "--dim", "16")
    assert "uv_upper=524288" in out


def test_bench(capsys):
    argv = ["bench", "--epsilons", "1/4", "--dims", "2,3", "--algorithms", "sosnovec,uv"]
    code, out, _ = run_cli(capsys, *argv)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert list(rows[0]) == ["algorithm", "epsilon", "d", "size", "certified", "seconds"]
    _, again, _ = run_cli(capsys, *argv)
    strip = lambda rs: [{k: v for k, v in r.items() if k != "seconds"} for r in rs]
    assert strip(rows) == strip(list(csv.DictReader(io.StringIO(again))))


def test_bench_records_cell_errors(capsys):
    code, out, _ = run_cli(capsys, "bench", "--epsilons", "1/4,1/5", "--dims", "3",
                           "--algorithms", "uv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[1]["certified"] == "error:InfeasibleInstance"


def test_help_lists_defaults(capsys):
    with pytest.raises(SystemExit):
        main(["generate", "--help"])
    assert "default" in capsys.readouterr().out
