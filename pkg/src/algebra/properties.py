#!/usr/bin/env python3
"""
Prédicats de classification d'un skew lattice validé.

- latéralité (gauche / droite / les deux / aucune)
- symétrie, normalité, régularité
- distributivité forte et distributivité des identités x∨(y∧z)∨x = ...
- D-classe du haut et sections treillis t↓
- sous-ensembles commutants, suprema, complétude pour les sups

Les suprema sont calculés dans l'ordre naturel ≤ (bornes supérieures puis
plus petite d'entre elles), sans supposer qu'un sup fini coïncide avec un
∨ itéré : cette coïncidence est seulement mesurée (binary_join_agreement).
"""

import logging
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.core import (
    CheckReport,
    DownSet,
    FiniteAlgebra,
    bottom,
    check_regularity,
    combine,
    compute_orders,
    d_partition,
    down_set,
    failed,
    law_report,
    per_element_law,
)
from src.common.errors import DomainError, ResourceError

logger = logging.getLogger(__name__)


class Handedness(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    BOTH = "both"
    NEITHER = "neither"


def is_symmetric(alg: FiniteAlgebra) -> CheckReport:
    """x∧y = y∧x si et seulement si x∨y = y∨x, pour toute paire."""
    M, J = alg.meet, alg.join
    return law_report("symmetric", (M == M.T) == (J == J.T))


def is_normal(alg: FiniteAlgebra) -> CheckReport:
    """
    Normalité : x∧y∧z∧x = x∧z∧y∧x (quadruplets, témoin (x, y, z)).

    Pour x fixé, la matrice (y, z) -> x∧y∧z∧x doit être symétrique.
    """
    M = alg.meet
    ar = np.arange(alg.size)

    def law(x: int) -> np.ndarray:
        lhs = M[M[M[x, ar][:, None], ar[None, :]], x]
        return lhs == lhs.T

    return per_element_law("normal", alg.size, law)


def strong_distributivity_laws(alg: FiniteAlgebra) -> List[CheckReport]:
    """(x∨y)∧z = (x∧z)∨(y∧z) et x∧(y∨z) = (x∧y)∨(x∧z) ; témoins (x, y, z)."""
    M, J = alg.meet, alg.join
    ar = np.arange(alg.size)
    X, Y, Z = ar[:, None, None], ar[None, :, None], ar[None, None, :]
    return [
        law_report("sd_right", M[J[X, Y], Z] == J[M[X, Z], M[Y, Z]]),
        law_report("sd_left", M[X, J[Y, Z]] == J[M[X, Y], M[X, Z]]),
    ]


def is_strongly_distributive(alg: FiniteAlgebra) -> CheckReport:
    return combine("strongly_distributive", strong_distributivity_laws(alg))


def distributivity_laws(alg: FiniteAlgebra) -> List[CheckReport]:
    """x∨(y∧z)∨x = (x∨y∨x)∧(x∨z∨x) et x∧(y∨z)∧x = (x∧y∧x)∨(x∧z∧x)."""
    M, J = alg.meet, alg.join
    ar = np.arange(alg.size)
    X, Y, Z = ar[:, None, None], ar[None, :, None], ar[None, None, :]
    return [
        law_report("distributive_join_meet", J[J[X, M[Y, Z]], X] == M[J[J[X, Y], X], J[J[X, Z], X]]),
        law_report("distributive_meet_join", M[M[X, J[Y, Z]], X] == J[M[M[X, Y], X], M[M[X, Z], X]]),
    ]


def is_distributive(alg: FiniteAlgebra) -> CheckReport:
    return combine("distributive", distributivity_laws(alg))


def handedness(alg: FiniteAlgebra) -> Handedness:
    """Gauche : x∧y∧x = x∧y ; droite : x∧y∧x = y∧x."""
    M = alg.meet
    xyx = M[M, np.arange(alg.size)[:, None]]
    left = bool((xyx == M).all())
    right = bool((xyx == M.T).all())
    if left and right:
        return Handedness.BOTH
    if left:
        return Handedness.LEFT
    if right:
        return Handedness.RIGHT
    return Handedness.NEITHER


def is_rectangular(alg: FiniteAlgebra) -> CheckReport:
    """Une seule D-classe : x∧y = y∨x pour toute paire."""
    return law_report("rectangular", alg.meet == alg.join.T)


def top_class(alg: FiniteAlgebra) -> Optional[Tuple[int, ...]]:
    """D-classe envoyée sur le sommet du quotient, ou None si le quotient n'en a pas."""
    part = d_partition(alg)
    top = part.quotient.top_t
    return None if top is None else part.classes[top]


def lattice_section_at(alg: FiniteAlgebra, t: int) -> DownSet:
    """
    Section treillis t↓ pour t dans la D-classe du haut d'une algèbre normale.

    Le rapport joint vérifie que t↓ est un treillis et rencontre chaque
    D-classe exactement une fois.

    Raises:
        DomainError: t hors de la classe du haut, ou algèbre non normale
    """
    top = top_class(alg)
    if top is None or t not in top:
        raise DomainError(f"{t} n'appartient pas à la D-classe du haut")
    if not is_normal(alg).passed:
        raise DomainError("lattice_section_at exige une algèbre normale")
    ds = down_set(alg, t)
    part = d_partition(alg)
    hits = np.bincount(part.class_of[list(ds.members)], minlength=len(part.classes))
    section = law_report("one_per_class", hits == 1)
    if not section.passed:
        # le témoin est une classe : on rapporte son plus petit élément
        section = CheckReport("one_per_class", False, (part.classes[section.witness[0]][0],))
    report = combine("lattice_section", [ds.report, section])
    return DownSet(t, ds.members, report)


@dataclass(frozen=True)
class CommutingSubset:
    members: Tuple[int, ...]
    supremum: Optional[int]


def supremum(alg: FiniteAlgebra, members: Sequence[int]) -> Optional[int]:
    """
    Plus petite borne supérieure sous ≤ ; None si elle n'existe pas.

    Deux passes : bornes supérieures, puis celle qui est sous toutes les autres.
    L'ensemble vide a pour sup le plus petit élément (s'il existe).
    """
    leq = compute_orders(alg).leq
    idx = list(members)
    upper = leq[idx].all(axis=0) if idx else np.ones(alg.size, dtype=bool)
    cands = np.flatnonzero(upper)
    for c in cands:
        if leq[c, cands].all():
            return int(c)
    return None


def image_suprema(leq: np.ndarray, images: np.ndarray) -> np.ndarray:
    """
    Sup colonne par colonne d'une famille d'images.

    Args:
        leq: ordre naturel (n, n)
        images: (k, m), images[i, y] = i-ème élément de la famille indexée par y

    Returns:
        np.ndarray: (m,) sup de chaque colonne, -1 si absent
    """
    k, m = images.shape
    n = len(leq)
    upper = leq[images].all(axis=0) if k else np.ones((m, n), dtype=bool)
    # least[y, c] : c majorant, et sous tous les majorants
    least = upper & (~upper[:, None, :] | leq[None, :, :]).all(axis=2)
    return np.where(least.any(axis=1), least.argmax(axis=1), -1)


def iter_commuting(
    alg: FiniteAlgebra,
    candidates: Optional[Sequence[int]] = None,
    max_size: Optional[int] = None,
    budget: Optional[int] = None,
) -> Iterator[Tuple[int, ...]]:
    """
    Parcours en profondeur des sous-ensembles deux à deux commutants.

    Ordre lexicographique, ensemble vide en premier, élagage par la
    commutation des paires.

    Raises:
        ResourceError: plus de `budget` sous-ensembles visités
    """
    comm = alg.meet == alg.meet.T
    pool = list(range(alg.size)) if candidates is None else sorted(int(c) for c in candidates)
    limit = len(pool) if max_size is None else max_size
    visited = 0
    current: List[int] = []

    def extend(pending: List[int]) -> Iterator[Tuple[int, ...]]:
        nonlocal visited
        visited += 1
        if budget is not None and visited > budget:
            raise ResourceError(f"{alg.name}: plus de {budget} sous-ensembles commutants")
        yield tuple(current)
        if len(current) >= limit:
            return
        for pos, c in enumerate(pending):
            rest = [d for d in pending[pos + 1:] if comm[c, d]]
            current.append(c)
            yield from extend(rest)
            current.pop()

    yield from extend(pool)


def commuting_subsets(
    alg: FiniteAlgebra,
    max_size: Optional[int] = None,
    budget: Optional[int] = None,
) -> Iterator[CommutingSubset]:
    """
    Énumère les sous-ensembles commutants de taille ≤ max_size avec leur sup.

    Coût exponentiel : max_size=None énumère tout.
    """
    for members in iter_commuting(alg, max_size=max_size, budget=budget):
        yield CommutingSubset(members, supremum(alg, members))


def is_join_complete(alg: FiniteAlgebra, cap: Optional[int] = None, budget: Optional[int] = None) -> CheckReport:
    """Chaque sous-ensemble commutant (jusqu'à cap) a un sup ; témoin : le sous-ensemble."""
    for subset in commuting_subsets(alg, cap, budget):
        if subset.supremum is None:
            return CheckReport("join_complete", False, subset.members)
    return CheckReport("join_complete", True)


def binary_join_agreement(alg: FiniteAlgebra, cap: Optional[int] = None, budget: Optional[int] = None) -> CheckReport:
    """Compare le sup de chaque sous-ensemble commutant non vide au ∨ itéré dans l'ordre des indices."""
    J = alg.join
    for subset in commuting_subsets(alg, cap, budget):
        if not subset.members or subset.supremum is None:
            continue
        acc = subset.members[0]
        for m in subset.members[1:]:
            acc = int(J[acc, m])
        if acc != subset.supremum:
            return CheckReport("sup_equals_iterated_join", False, subset.members)
    return CheckReport("sup_equals_iterated_join", True)


def check_commuting_translates(alg: FiniteAlgebra) -> CheckReport:
    """Si a et b commutent, y∧a et y∧b commutent ainsi que a∧y et b∧y ; témoin (a, b, y)."""
    M = alg.meet
    comm = M == M.T
    ar = np.arange(alg.size)
    A, B, Y = ar[:, None, None], ar[None, :, None], ar[None, None, :]
    ok = ~comm[A, B] | (comm[M[Y, A], M[Y, B]] & comm[M[A, Y], M[B, Y]])
    return law_report("commuting_translates", ok)


@dataclass(frozen=True)
class PropertyProfile:
    symmetric: bool
    normal: bool
    regular: bool
    left_handed: bool
    right_handed: bool
    strongly_distributive: bool
    distributive: bool
    rectangular: bool
    has_zero: bool
    has_top_class: bool
    join_complete: Optional[bool]

    def as_dict(self) -> Dict[str, Optional[bool]]:
        return asdict(self)


def profile(alg: FiniteAlgebra, cap: Optional[int] = None, budget: Optional[int] = None) -> PropertyProfile:
    """
    Calcule tous les drapeaux ; join_complete vaut None si le budget d'énumération est dépassé.
    """
    hand = handedness(alg)
    try:
        jc: Optional[bool] = is_join_complete(alg, cap, budget).passed
    except ResourceError as e:
        logger.info("%s: complétude non décidée (%s)", alg.name, e)
        jc = None
    return PropertyProfile(
        symmetric=is_symmetric(alg).passed,
        normal=is_normal(alg).passed,
        regular=not failed(check_regularity(alg)),
        left_handed=hand in (Handedness.LEFT, Handedness.BOTH),
        right_handed=hand in (Handedness.RIGHT, Handedness.BOTH),
        strongly_distributive=is_strongly_distributive(alg).passed,
        distributive=is_distributive(alg).passed,
        rectangular=is_rectangular(alg).passed,
        has_zero=bottom(alg) is not None,
        has_top_class=top_class(alg) is not None,
        join_complete=jc,
    )
