import pytest

from src.common.config import Config, DEFAULT_CORPUS
from src.common.errors import StructuralError
from src.models.builders import chain
from src.verify.corpus import (
    Corpus,
    CorpusSpec,
    enumerate_instances,
    load_instances,
    mutation_corpus,
)
from src.verify.theorems import (
    FAIL,
    FRAME,
    IMP_T_UNIQUE,
    INSTANCE_CHECKS,
    JC_SECTIONS,
    NH_AXIOMS,
    PASS,
    SEARCH_INSTANCE,
    SECTION_ISO,
    SKEW_AXIOMS,
    SKIP,
    SUP_FORMULA,
    TAU_JOIN,
    TOP_COMMUTES,
    TheoremResult,
    check_instance,
    results_frame,
    run_all,
    search_two_sided_top,
    summarize,
)


def statuses(results):
    return {r.theorem: r for r in results}


def test_corpus_spec_defaults_to_empty():
    assert len(enumerate_instances(CorpusSpec())) == 0
    assert run_all(enumerate_instances(CorpusSpec())) == []


def test_corpus_spec_rejects_unknown_keys():
    with pytest.raises(StructuralError):
        CorpusSpec.from_mapping({"pfn": [1]})


def test_corpus_spec_from_yaml(fixtures_dir):
    spec = CorpusSpec.from_yaml(str(fixtures_dir / "small_corpus.yaml"))
    assert spec.pfn_arities == (1,) and spec.rect_sizes == (2,)
    assert CorpusSpec.from_yaml(str(fixtures_dir / "empty_corpus.yaml")) == CorpusSpec()


def test_closures_of_pfn1_are_deduplicated():
    corpus = enumerate_instances(CorpusSpec.from_mapping({"pfn_arities": [1], "closure_arity": 1}))
    assert corpus.names == ["pfn1", "pfn1-sub[0]", "pfn1-sub[0,1]", "pfn1-sub[1,2]", "pfn1-sub[0,1,2]"]
    assert corpus.provenance["pfn1"] == "build_pfn_algebra(m=1)"


def test_corpus_is_deterministic():
    spec = CorpusSpec.from_mapping({"pfn_arities": [1, 2], "rect_sizes": [2], "random_count": 3, "seed": 7,
                                    "closure_arity": 2, "closure_max_generators": 1})
    first, second = enumerate_instances(spec), enumerate_instances(spec)
    assert first.names == second.names
    assert [a.table_hash() for _, a in first] == [a.table_hash() for _, a in second]


def test_corpus_notes_budget():
    corpus = enumerate_instances(CorpusSpec.from_mapping({"pfn_arities": [5], "chain_sizes": [1, 2, 3],
                                                          "max_instances": 2}))
    assert corpus.names == ["chain1", "chain2"]
    assert any("P(5)" in note for note in corpus.notes)
    assert any("tronqué" in note for note in corpus.notes)


@pytest.fixture(scope="module")
def default_corpus():
    return enumerate_instances(CorpusSpec.from_mapping(DEFAULT_CORPUS))


@pytest.fixture(scope="module")
def default_results(default_corpus):
    return run_all(default_corpus, Config())


@pytest.mark.slow
def test_default_corpus_is_large(default_corpus):
    assert len(default_corpus) >= 30
    assert "pfn3" in default_corpus.names and "pfn2-mirror" in default_corpus.names
    assert "bool2*bool2" in default_corpus.names


@pytest.mark.slow
def test_default_corpus_has_no_failure(default_corpus, default_results):
    assert summarize(default_results)[FAIL] == 0, [str(r) for r in default_results if r.status == FAIL]
    assert len(default_results) == len(default_corpus) * len(INSTANCE_CHECKS) + 1
    by_key = {(r.theorem, r.instance): r for r in default_results}
    for name in ("pfn1", "pfn2", "pfn3"):
        assert by_key[(SUP_FORMULA, name)].status == PASS
        assert by_key[(SECTION_ISO, name)].status == PASS


@pytest.mark.slow
def test_frame_checks_are_never_skipped_for_budget(default_results):
    frame_ids = {JC_SECTIONS, TAU_JOIN, FRAME, SUP_FORMULA}
    over_budget = [str(r) for r in default_results if r.theorem in frame_ids and r.reason.startswith("budget")]
    assert over_budget == []
    by_key = {(r.theorem, r.instance): r for r in default_results}
    assert by_key[(FRAME, "bool2*bool2")].status == PASS


def test_load_instances(fixtures_dir, pfn1):
    corpus = load_instances([fixtures_dir / "pfn1.skl"])
    assert corpus.names == ["pfn1"]
    assert corpus.instances[0][1] == pfn1


@pytest.mark.parametrize("m", [1, 2])
def test_pfn_instances_pass(m):
    from src.models.partial_functions import build_pfn_algebra

    results = check_instance(f"pfn{m}", build_pfn_algebra(m), Config())
    assert {r.theorem for r in results} == set(INSTANCE_CHECKS)
    failures = [str(r) for r in results if r.status == FAIL]
    assert failures == []
    by_id = statuses(results)
    assert by_id[NH_AXIOMS].status == PASS
    assert by_id[IMP_T_UNIQUE].status == PASS


def test_hypotheses_produce_skips(rect_left2):
    results = statuses(check_instance("rect-left-2", rect_left2, Config()))
    assert results[SKEW_AXIOMS].status == PASS
    assert results[NH_AXIOMS].status == SKIP
    assert "zero" in results[NH_AXIOMS].reason
    assert all(r.status != FAIL for r in results.values())


def test_invalid_instance_skips_everything(fixtures_dir):
    from src.common.io import read_algebra

    results = check_instance("bad", read_algebra(fixtures_dir / "not_absorptive.skl"), Config())
    by_id = statuses(results)
    assert by_id[SKEW_AXIOMS].status == FAIL
    assert by_id[SKEW_AXIOMS].witness == (0, 1)
    assert all(r.status == SKIP for r in results if r.theorem != SKEW_AXIOMS)


def test_wrong_implication_is_caught(pfn1):
    imp = pfn1.imp.copy()
    imp[0, 1] = 2
    results = statuses(check_instance("mutant", pfn1.with_implication(imp), Config()))
    assert results[IMP_T_UNIQUE].status == FAIL
    assert results[IMP_T_UNIQUE].witness == (0, 1)


def test_search_two_sided_top_finds_no_counterexample():
    corpus = Corpus([("chain2", chain(2))])
    result = search_two_sided_top(corpus)
    assert result.theorem == TOP_COMMUTES and result.instance == SEARCH_INSTANCE
    assert result.status == PASS


def test_run_all_is_sorted_and_reproducible():
    corpus = enumerate_instances(CorpusSpec.from_mapping({"pfn_arities": [1], "rect_sizes": [1, 2]}))
    first = run_all(corpus)
    assert first == run_all(corpus)
    assert first == sorted(first, key=lambda r: (r.theorem, r.instance))
    counts = summarize(first)
    assert counts[FAIL] == 0
    assert sum(counts.values()) == len(first) == len(corpus) * len(INSTANCE_CHECKS) + 1


def test_run_all_parallel_matches_serial():
    corpus = enumerate_instances(CorpusSpec.from_mapping({"pfn_arities": [1], "chain_sizes": [2, 3]}))
    assert run_all(corpus, Config(jobs=2)) == run_all(corpus, Config(jobs=1))


def test_result_rendering():
    r = TheoremResult("nh-axioms", "pfn1", FAIL, (0, 1), "nh_reflexive")
    assert r.machine_line() == "nh-axioms\tpfn1\tfail\t0,1"
    assert str(r) == "[FAIL] nh-axioms pfn1 witness=(0,1) (nh_reflexive)"
    assert TheoremResult("x", "y", PASS).witness_text() == "-"
    empty = TheoremResult("join-complete-sections", "bool0", FAIL, ())
    assert empty.witness_text() == "()"
    assert empty.machine_line().split("\t")[3] == "()"
    assert str(empty) == "[FAIL] join-complete-sections bool0 witness=()"
    frame = results_frame([r])
    assert list(frame.columns) == ["theorem", "instance", "status", "witness", "reason"]


@pytest.mark.slow
def test_every_single_cell_mutation_is_detected():
    corpus = mutation_corpus(1)
    assert len(corpus) == 54
    failing = {r.instance for r in run_all(corpus) if r.status == FAIL}
    assert failing == set(corpus.names)
