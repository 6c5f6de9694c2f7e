import pandas as pd
import pytest

from src.common.config import Config, load_config
from src.common.errors import ParseError, StructuralError
from src.common.io import format_algebra, parse_algebra, read_algebra, write_algebra, write_csv_safe
from src.models.builders import rectangular_band


def test_golden_pfn1_text(pfn1, fixtures_dir):
    assert format_algebra(pfn1) == (fixtures_dir / "pfn1.skl").read_text(encoding="utf-8")


def test_read_golden_file(pfn1, fixtures_dir):
    alg = read_algebra(fixtures_dir / "pfn1.skl")
    assert alg == pfn1
    assert alg.name == "pfn1"


def test_write_then_read(tmp_path, pfn2):
    path = tmp_path / "models" / "pfn2.skl"
    write_algebra(pfn2, str(path))
    assert read_algebra(str(path)) == pfn2


def test_optional_fields_are_omitted():
    text = format_algebra(rectangular_band(2, "left").renamed(""))
    assert text.splitlines()[:2] == ["skl1", "size 2"]
    assert "imp" not in text and "zero" not in text


def test_comments_and_blank_lines():
    alg = parse_algebra("skl1  # en-tête\n\nsize 1\nmeet\n0\njoin   # table ∨\n0\n")
    assert alg.size == 1 and alg.name == ""


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("", 1, 1),
        ("skl2\n", 1, 1),
        ("skl1\nsize 2\nsize 2\n", 3, 1),
        ("skl1\nsize 2\nfoo\n", 3, 1),
        ("skl1\nmeet\n0\n", 2, 1),
        ("skl1\nsize 2\nmeet\n0 0\n0 7\njoin\n0 1\n1 1\n", 5, 3),
        ("skl1\nsize 2\nmeet\n0 0\n0 1\n", 6, 1),
        ("skl1\nsize x\n", 2, 6),
    ],
)
def test_parse_errors_are_positioned(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_algebra(text, source="doc.skl")
    assert (info.value.line, info.value.column) == (line, column)
    assert str(info.value).startswith(f"doc.skl:{line}:{column}: ")


def test_bad_row_fixture(fixtures_dir):
    with pytest.raises(ParseError) as info:
        read_algebra(fixtures_dir / "bad_row.skl")
    assert info.value.line == 5


def test_parse_error_is_structural():
    assert issubclass(ParseError, StructuralError)


def test_write_csv_safe(tmp_path):
    path = tmp_path / "out" / "r.csv"
    write_csv_safe(pd.DataFrame({"a": [1, 2]}), str(path))
    assert pd.read_csv(path)["a"].tolist() == [1, 2]


def test_default_config_file():
    config = load_config()
    assert config.max_elements == 81
    assert config.cap == 12
    assert config.corpus["pfn_arities"] == [1, 2, 3]


def test_config_from_env(tmp_path, monkeypatch):
    path = tmp_path / "c.yaml"
    path.write_text("budget:\n  max_elements: 27\nverify:\n  jobs: 2\ncorpus:\n  pfn_arities: [1]\n", encoding="utf-8")
    monkeypatch.setenv("SKEWLAB_CONFIG", str(path))
    config = load_config()
    assert config.max_elements == 27 and config.jobs == 2
    assert config.subset_budget == Config().subset_budget
    assert dict(config.corpus) == {"pfn_arities": [1]}


def test_config_missing_explicit_path(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(str(tmp_path / "absent.yaml"))


def test_config_must_be_mapping(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(StructuralError):
        load_config(str(path))
