import pandas as pd
import pytest

from src.cli import main
from src.common.io import read_algebra


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def pfn1_file(fixtures_dir):
    return str(fixtures_dir / "pfn1.skl")


@pytest.fixture
def pfn2_file(tmp_path, capsys):
    path = tmp_path / "pfn2.skl"
    assert main(["model", "pfn", "--m", "2", "--out", str(path)]) == 0
    capsys.readouterr()
    return str(path)


def test_model_pfn1_is_golden(capsys, fixtures_dir):
    code, out, _ = run(capsys, "model", "pfn", "--m", "1")
    assert code == 0
    assert out == (fixtures_dir / "pfn1.skl").read_text(encoding="utf-8")


def test_model_over_budget(capsys):
    code, _, err = run(capsys, "model", "pfn", "--m", "5")
    assert code == 4
    assert err.startswith("[ERROR]")


def test_model_kinds(capsys, tmp_path, pfn1_file):
    code, out, _ = run(capsys, "model", "rect", "--n", "3", "--hand", "right")
    assert code == 0 and "name rect-right-3" in out
    code, out, _ = run(capsys, "model", "bool", "--k", "2")
    assert code == 0 and "size 4" in out
    out_file = tmp_path / "prod.skl"
    code, _, _ = run(capsys, "model", "product", "--left", pfn1_file, "--right", pfn1_file, "--out", str(out_file))
    assert code == 0
    assert read_algebra(str(out_file)).size == 9


def test_validate_ok(capsys, pfn1_file):
    code, out, _ = run(capsys, "validate", pfn1_file)
    assert code == 0
    assert "[PASS] absorption_join_then_meet" in out
    assert out.rstrip().splitlines()[-1].startswith("[OK] pfn1")


def test_validate_reports_witness(capsys, fixtures_dir):
    code, out, _ = run(capsys, "validate", str(fixtures_dir / "not_associative.skl"))
    assert code == 1
    assert "[FAIL] associative_meet witness=(0, 0, 0)" in out


def test_validate_parse_error(capsys, fixtures_dir):
    code, _, err = run(capsys, "validate", str(fixtures_dir / "bad_row.skl"))
    assert code == 2
    assert "bad_row.skl:5:1:" in err


def test_validate_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "validate", str(tmp_path / "absent.skl"))
    assert code == 3
    assert err.startswith("[ERROR]")


def test_classify_pfn2(capsys, pfn2_file):
    code, out, _ = run(capsys, "classify", pfn2_file)
    assert code == 0
    assert "summary: left-handed, strongly distributive, normal, symmetric; quotient = 2^2" in out
    assert "D3 = {4, 5, 7, 8}" in out
    assert "lattice section t=8: {0, 2, 6, 8}" in out


def test_classify_lattice_and_rectangular(capsys, tmp_path):
    chain_file = tmp_path / "c.skl"
    rect_file = tmp_path / "r.skl"
    main(["model", "chain", "--n", "3", "--out", str(chain_file)])
    main(["model", "rect", "--n", "2", "--out", str(rect_file)])
    capsys.readouterr()
    assert "summary: commutative; classes singleton" in run(capsys, "classify", str(chain_file))[1]
    assert "summary: rectangular; one D-class" in run(capsys, "classify", str(rect_file))[1]


def test_imp_default_t(capsys, pfn1_file):
    code, out, _ = run(capsys, "imp", pfn1_file)
    assert code == 0
    assert out == "2 1 2\n0 1 2\n0 1 2\n"


def test_imp_both_methods_agree(capsys, pfn1_file):
    code, out, _ = run(capsys, "imp", pfn1_file, "--method", "both")
    assert code == 0
    assert "# diff nh/sup: 0 cell(s)" in out


def test_imp_all_t(capsys, pfn1_file):
    code, out, _ = run(capsys, "imp", pfn1_file, "--all-t")
    assert code == 0
    assert out.splitlines()[0] == "# t = 1"
    assert "# t = 2" in out


def test_imp_outside_top_class(capsys, pfn1_file):
    code, _, err = run(capsys, "imp", pfn1_file, "--t", "0")
    assert code == 1
    assert err.startswith("[ERROR]")


def test_verify_empty_corpus(capsys, fixtures_dir):
    code, out, _ = run(capsys, "verify", "--spec", str(fixtures_dir / "empty_corpus.yaml"))
    assert code == 0
    assert "0 check(s)" in out


def test_verify_machine_output(capsys, fixtures_dir, tmp_path):
    report = tmp_path / "reports" / "theorems.csv"
    code, out, _ = run(capsys, "verify", "--spec", str(fixtures_dir / "small_corpus.yaml"),
                       "--machine", "--report-csv", str(report))
    assert code == 0
    lines = out.splitlines()
    assert lines and all(len(line.split("\t")) == 4 for line in lines)
    assert {line.split("\t")[2] for line in lines} <= {"pass", "skip"}
    frame = pd.read_csv(report)
    assert len(frame) == len(lines)


def test_verify_files(capsys, pfn1_file):
    code, out, _ = run(capsys, "verify", pfn1_file)
    assert code == 0
    assert "[OK] 1 instance(s)" in out


@pytest.mark.slow
def test_verify_mutations(capsys):
    code, out, _ = run(capsys, "verify", "--mutate", "pfn1")
    assert code == 1
    assert "[INFO] mutants detected: 54/54" in out


def test_draw(capsys, tmp_path, pfn1_file):
    png = tmp_path / "fig" / "pfn1.png"
    code, _, _ = run(capsys, "draw", pfn1_file, "--out", str(png))
    assert code == 0
    assert png.exists() and png.stat().st_size > 0


def test_verbose_logs_go_to_stderr(capsys, pfn1_file):
    code, out, err = run(capsys, "-v", "verify", pfn1_file)
    assert code == 0
    assert "[OK] 1 instance(s)" in out
    assert "run_all" in err
