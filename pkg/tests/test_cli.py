import json

from gausslat.cli import main
from gausslat.lattices import gamma_2g, save_lattice


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_info_gamma8(capsys):
    code, out, _ = run(capsys, "info", "--builtin", "gamma2g", "--g", "4")
    assert code == 0
    assert "rank=8" in out and "unimodular=true" in out and "even=true" in out


def test_info_gauss_zn(capsys):
    code, out, _ = run(capsys, "info", "--builtin", "gauss_zn", "--n", "3")
    assert code == 0
    assert "rank=6" in out and "unimodular=true" in out and "even=false" in out


def test_info_bad_file_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "label": "bad", "rank": 2,
        "gram": [[1, 0], [0, 1]], "aut": [[1, 0], [0, 1]],
    }), encoding="utf-8")
    code, _, err = run(capsys, "info", "--file", str(bad))
    assert code == 2
    assert "error" in err


def test_census_gamma8(capsys):
    code, out, _ = run(capsys, "census", "--builtin", "gamma2g", "--g", "4")
    assert code == 0
    data = json.loads(out)
    assert data["counts"]["m0"][2] == 10
    assert data["match"] is True
    assert data["seed"] == 0


def test_census_gauss_z5(capsys):
    code, out, _ = run(capsys, "census", "--builtin", "gauss_zn", "--n", "5")
    assert code == 0
    data = json.loads(out)
    assert data["counts"]["m0"][2] == 10 and data["match"] is True


def test_census_domain_error_exit_2(capsys):
    code, _, err = run(capsys, "census", "--builtin", "gamma2g", "--g", "3")
    assert code == 2
    assert "error" in err


def test_census_from_file_and_out(tmp_path, capsys):
    path = tmp_path / "gamma8.json"
    save_lattice(gamma_2g(4), path)
    out_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "census", "--file", str(path), "--out", str(out_path))
    assert code == 0 and out == ""
    data = json.loads(out_path.read_text(encoding="utf-8"))
    assert data["counts"]["m0"][2] == 10


def test_census_deterministic_bytes(tmp_path, capsys):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "census", "--builtin", "gauss_zn", "--n", "2", "--out", str(p1))[0] == 0
    assert run(capsys, "census", "--builtin", "gauss_zn", "--n", "2", "--out", str(p2))[0] == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_census_workers_deterministic(tmp_path, capsys):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "census", "--builtin", "gamma2g", "--g", "4", "--out", str(p1))
    run(capsys, "census", "--builtin", "gamma2g", "--g", "4", "--workers", "2", "--out", str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_sum_builtin(capsys):
    code, out, _ = run(
        capsys, "census", "--builtin", "sum", "--of", "gauss_zn:2,gauss_zn:3"
    )
    assert code == 0
    data = json.loads(out)
    assert data["g"] == 5 and data["match"] is True


def test_sum_builtin_requires_of(capsys):
    code, _, err = run(capsys, "census", "--builtin", "sum")
    assert code == 2


def test_verify_numeric_rank_two(capsys):
    code, out, _ = run(
        capsys, "verify", "--builtin", "gauss_zn", "--n", "1", "--numeric"
    )
    assert code == 0
    data = json.loads(out)
    assert data["all_pass"] is True
    numeric = next(c for c in data["checks"] if c["name"] == "numeric_theta")
    assert numeric["even_vanishing_count"] == 0


def test_verify_gamma8_numeric(capsys):
    code, out, _ = run(
        capsys, "verify", "--builtin", "gamma2g", "--g", "4", "--numeric"
    )
    assert code == 0
    data = json.loads(out)
    numeric = next(c for c in data["checks"] if c["name"] == "numeric_theta")
    assert numeric["even_vanishing_count"] == 10


def test_verify_exact_only_gamma8(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "gamma2g", "--g", "8")
    assert code == 0
    data = json.loads(out)
    trace = next(c for c in data["checks"] if c["name"] == "trace_identity")
    assert trace["forms"] == 256 and trace["pass"]


def test_missing_source_exits_2(capsys):
    code, _, err = run(capsys, "census")
    assert code == 2 and "error" in err
