import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.core import compute_orders
from src.algebra.properties import (
    Handedness,
    binary_join_agreement,
    check_commuting_translates,
    commuting_subsets,
    handedness,
    image_suprema,
    is_distributive,
    is_join_complete,
    is_normal,
    is_rectangular,
    is_strongly_distributive,
    is_symmetric,
    iter_commuting,
    lattice_section_at,
    profile,
    supremum,
    top_class,
)
from src.common.errors import DomainError, ResourceError
from src.models.builders import adjoin_bounds, boolean_lattice, chain, rectangular_band
from src.models.partial_functions import build_pfn_algebra


def test_pfn2_profile(pfn2):
    prof = profile(pfn2, cap=None)
    assert prof.symmetric and prof.normal and prof.regular
    assert prof.left_handed and not prof.right_handed
    assert prof.strongly_distributive and prof.distributive
    assert not prof.rectangular
    assert prof.has_zero and prof.has_top_class
    assert prof.join_complete is True


def test_profile_undecided_when_budget_exceeded(pfn2):
    assert profile(pfn2, cap=None, budget=3).join_complete is None


@pytest.mark.parametrize(
    "alg, expected",
    [
        (rectangular_band(2, "left"), Handedness.LEFT),
        (rectangular_band(2, "right"), Handedness.RIGHT),
        (chain(3), Handedness.BOTH),
    ],
)
def test_handedness(alg, expected):
    assert handedness(alg) is expected


def test_mirror_swaps_handedness(pfn1):
    assert handedness(pfn1) is Handedness.LEFT
    assert handedness(pfn1.mirror()) is Handedness.RIGHT


def test_rectangular(rect_left2, pfn1):
    assert is_rectangular(rect_left2).passed
    assert not is_rectangular(pfn1).passed


def test_top_class(pfn2, rect_left2):
    assert top_class(pfn2) == (4, 5, 7, 8)
    assert top_class(rect_left2) == (0, 1)


def test_lattice_sections_pfn2(pfn2):
    for t in top_class(pfn2):
        section = lattice_section_at(pfn2, t)
        assert section.report.passed
        assert len(section.members) == 4
    assert lattice_section_at(pfn2, 8).members == (0, 2, 6, 8)


def test_lattice_section_outside_top_class(pfn2):
    with pytest.raises(DomainError):
        lattice_section_at(pfn2, 0)


def test_distributivity_on_lattices(m3, n5):
    assert is_strongly_distributive(boolean_lattice(3)).passed
    for lat in (m3, n5):
        assert not is_distributive(lat).passed
        assert not is_strongly_distributive(lat).passed


def test_bounded_rectangular_band_is_not_strongly_distributive(rect_left2):
    bounded = adjoin_bounds(rect_left2)
    assert not bounded.is_commutative()
    assert not is_strongly_distributive(bounded).passed


def test_normal_and_symmetric_on_pfn(pfn1, pfn2):
    for alg in (pfn1, pfn2, pfn2.mirror()):
        assert is_normal(alg).passed
        assert is_symmetric(alg).passed


def test_iter_commuting_order(pfn1):
    # 0 commute avec tout, 1 et 2 ne commutent pas
    assert list(iter_commuting(pfn1)) == [(), (0,), (0, 1), (0, 2), (1,), (2,)]
    assert list(iter_commuting(pfn1, max_size=1)) == [(), (0,), (1,), (2,)]


def test_iter_commuting_budget(pfn2):
    with pytest.raises(ResourceError):
        list(iter_commuting(pfn2, budget=10))


def test_supremum(pfn2, rect_left2):
    assert supremum(pfn2, ()) == 0
    assert supremum(pfn2, (2, 6)) == 8
    assert supremum(rect_left2, ()) is None


def test_commuting_subsets_carry_suprema(pfn1):
    sups = {s.members: s.supremum for s in commuting_subsets(pfn1)}
    assert sups[()] == 0
    assert sups[(0, 2)] == 2


def test_join_complete(pfn1, rect_left2):
    assert is_join_complete(pfn1).passed
    report = is_join_complete(rect_left2)
    assert not report.passed and report.witness == ()


def test_binary_join_agreement_on_lattice():
    assert binary_join_agreement(boolean_lattice(2)).passed


def test_commuting_translates(pfn2):
    assert check_commuting_translates(pfn2).passed


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=8), min_size=1, max_size=4, unique=True))
def test_image_suprema_matches_scan(members):
    # comparaison au balayage direct de supremum
    alg = build_pfn_algebra(2)
    leq = compute_orders(alg).leq
    idx = np.array(sorted(members))
    images = alg.meet[np.ix_(idx, np.arange(alg.size))]
    got = image_suprema(leq, images)
    for y in range(alg.size):
        expected = supremum(alg, [int(v) for v in images[:, y]])
        assert got[y] == (-1 if expected is None else expected)
