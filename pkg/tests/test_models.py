import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.core import d_partition, failed, is_skew_lattice, lattice_isomorphism, two_sided_top
from src.algebra.heyting import NcHeytingCandidate, verify_nh
from src.algebra.properties import is_rectangular, is_strongly_distributive, top_class
from src.common.errors import DomainError, ResourceError, StructuralError
from src.models.builders import (
    adjoin_bounds,
    boolean_lattice,
    bounded_extensions,
    chain,
    direct_product,
    lattice_from_leq,
    rectangular_band,
    subalgebra_closure,
)
from src.models.partial_functions import (
    PartialFunctionCode,
    SetFormulaOracle,
    build_pfn_algebra,
    digit_matrix,
    pfn_mutants,
    pfn_tau,
)


def test_partial_function_code():
    code = PartialFunctionCode.from_index(7, 2)
    assert code.digits == (1, 2)
    assert code.domain == frozenset({0, 1})
    assert code.as_function() == {0: 0, 1: 1}
    assert str(code) == "{0↦0, 1↦1}"
    assert PartialFunctionCode.from_digits((1, 2)).index == 7
    assert str(PartialFunctionCode.from_index(0, 3)) == "∅"


def test_partial_function_code_range():
    with pytest.raises(DomainError):
        PartialFunctionCode.from_index(9, 2)
    with pytest.raises(DomainError):
        PartialFunctionCode.from_digits((0, 3))


def test_encoding_constants():
    assert pfn_tau(2) == 8
    assert digit_matrix(2)[5].tolist() == [2, 1]
    total = [i for i in range(9) if (digit_matrix(2)[i] != 0).all()]
    assert total == [4, 5, 7, 8]


@pytest.mark.parametrize("m", [1, 2, pytest.param(3, marks=pytest.mark.slow)])
def test_pfn_model_matches_set_formulas(m):
    alg = build_pfn_algebra(m)
    oracle = SetFormulaOracle(m)
    assert np.array_equal(alg.meet, oracle.table("meet"))
    assert np.array_equal(alg.join, oracle.table("join"))
    assert np.array_equal(alg.imp, oracle.table("imp"))
    # S/D ≅ 2^m, classe du haut = fonctions totales, axiomes NH sur toute la table
    assert lattice_isomorphism(d_partition(alg).quotient, boolean_lattice(m)) is not None
    total = [i for i in range(alg.size) if (digit_matrix(m)[i] != 0).all()]
    assert [int(i) for i in top_class(alg)] == total
    assert failed(verify_nh(NcHeytingCandidate(alg))) == []


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 26), st.integers(0, 26), st.integers(0, 26))
def test_nh_axioms_reduce_to_set_formulas(f, g, h):
    # chaque axiome : les deux membres calculés par les tables valent la forme réduite ensembliste
    alg = build_pfn_algebra(3)
    o = SetFormulaOracle(3)
    M, J, I, t = alg.meet, alg.join, alg.imp, alg.top_t
    txt = lambda x: int(M[M[t, x], t])
    reduced = {k: o.encode(v) for k, v in o.nh_reductions(o.decode(f), o.decode(g), o.decode(h)).items()}
    assert I[f, g] == I[J[J[g, txt(f)], g], g] == reduced["nh_local_reduction"]
    assert I[f, f] == J[J[f, t], f] == reduced["nh_reflexive"]
    assert M[M[f, I[f, g]], f] == M[M[f, g], f] == reduced["nh_sandwich"]
    assert M[g, I[f, g]] == M[I[f, g], g] == g == reduced["nh_absorbs"]
    assert I[f, txt(M[g, h])] == M[I[f, txt(g)], I[f, txt(h)]] == reduced["nh_meet_split"]


def test_build_pfn_budget_and_domain():
    with pytest.raises(DomainError):
        build_pfn_algebra(0)
    with pytest.raises(ResourceError):
        build_pfn_algebra(5)
    assert build_pfn_algebra(4).size == 81


def test_pfn_mutants_count():
    names = [name for name, _ in pfn_mutants(1)]
    assert len(names) == 3 * 9 * 2
    assert names[0] == "pfn1-meet[0,0]=1"


def test_rectangular_band():
    left = rectangular_band(3, "left")
    assert left.name == "rect-left-3"
    assert left.meet[1, 2] == 1 and left.join[1, 2] == 2
    assert left.zero is None
    assert rectangular_band(1).zero == 0
    with pytest.raises(DomainError):
        rectangular_band(2, "up")


def test_lattices():
    assert chain(4).top_t == 3
    assert boolean_lattice(0).size == 1
    assert boolean_lattice(3).join[1, 6] == 7
    with pytest.raises(StructuralError):
        lattice_from_leq([[True, False], [False, True]])


def test_direct_product(pfn1, rect_left2):
    prod = direct_product(pfn1, rect_left2)
    assert prod.size == 6
    assert prod.name == "pfn1*rect-left-2"
    assert prod.imp is None
    assert is_skew_lattice(prod)
    assert len(d_partition(prod).classes) == 2
    with pytest.raises(ResourceError):
        direct_product(pfn1, pfn1, max_elements=8)


def test_direct_product_keeps_shared_structure(pfn1):
    prod = direct_product(pfn1, chain(2))
    assert prod.imp is None
    both = direct_product(pfn1, pfn1)
    assert both.zero == 0 and both.top_t == 8
    assert both.imp is not None


def test_subalgebra_closure(pfn1, pfn2):
    sub, emb = subalgebra_closure(pfn1, [1, 2])
    assert emb == (1, 2)
    assert is_rectangular(sub).passed
    assert sub.name == "pfn1-sub[1,2]"
    sub, emb = subalgebra_closure(pfn2, [1, 6], include_imp=True)
    assert 8 in emb and sub.imp is not None
    with pytest.raises(DomainError):
        subalgebra_closure(pfn1, [])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=1, max_size=3, unique=True))
def test_closures_are_skew_lattices(gens):
    sub, _ = subalgebra_closure(build_pfn_algebra(2), gens)
    assert is_skew_lattice(sub)


def test_adjoin_bounds(rect_left2):
    bounded = adjoin_bounds(rect_left2)
    assert bounded.size == 4
    assert two_sided_top(bounded) == 3
    assert is_skew_lattice(bounded)


def test_bounded_extensions_with_top_are_commutative_when_sd():
    for size in (2, 3, 4):
        for alg in bounded_extensions(size):
            assert is_skew_lattice(alg)
            if is_strongly_distributive(alg).passed:
                assert alg.is_commutative()
    with pytest.raises(DomainError):
        next(bounded_extensions(5))
