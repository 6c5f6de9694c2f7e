#!/usr/bin/env python3
"""
Implications : Heyting commutatif, →_t non commutatif et formule par sup.

Ce module couvre :
1. l'implication de Heyting d'un treillis distributif borné (maximum de
   {z | z∧x ≤ y}) et les axiomes d'implication
2. l'élément unique sous a dans une D-classe inférieure (b = a∧w∧a)
3. la construction x →_t y = y∨u∨y, où u est l'élément de la classe
   D_x → D_y situé sous t
4. la formule a→b = ⋁{x ∈ (b∨t∨b)↓ | x∧(b∨(t∧a∧t)∨b) ≤ b}
5. la vérification des axiomes NH d'une table candidate, les lois
   distributives infinies (cadre non commutatif), l'isomorphisme
   φ(x) = t'∧x∧t' entre sections et la structure de Heyting de S/D

Usage:
    from src.models.partial_functions import build_pfn_algebra
    alg = build_pfn_algebra(2)
    table = implication_t(alg, 8)             # égale à alg.imp
    verify_nh(NcHeytingCandidate(alg))        # liste de CheckReport
    implication_sup_table(alg, 8)             # même table par la formule par sup
"""

import logging
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.core import (
    CheckReport,
    FiniteAlgebra,
    bottom,
    combine,
    compute_orders,
    d_partition,
    down_set,
    first_violation,
    induced_subalgebra,
    law_report,
)
from src.algebra.properties import (
    image_suprema,
    is_strongly_distributive,
    iter_commuting,
    lattice_section_at,
    supremum,
    top_class,
)
from src.common.errors import DomainError, InconsistencyError, StructuralError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeytingLattice:
    """Treillis distributif borné muni de son implication (one = sommet, zero = base)."""

    base: FiniteAlgebra
    imp: np.ndarray
    one: int
    zero: int

    def implies(self, x: int, y: int) -> int:
        return int(self.imp[x, y])


def _require_lattice(lat: FiniteAlgebra) -> Tuple[int, int]:
    if not lat.is_commutative():
        raise DomainError(f"{lat.name}: treillis commutatif attendu")
    zero = bottom(lat)
    one = _lattice_top(lat)
    if zero is None or one is None:
        raise DomainError(f"{lat.name}: treillis non borné")
    return zero, one


def _lattice_top(lat: FiniteAlgebra) -> Optional[int]:
    J = lat.join
    for c in range(lat.size):
        if (J[c, :] == c).all():
            return c
    return None


def heyting_implication(lat: FiniteAlgebra, x: int, y: int) -> int:
    """
    Maximum de {z | z∧x ≤ y} par balayage complet.

    Raises:
        DomainError: entrée non bornée / non commutative, ou pas de maximum
            (treillis non distributif)
    """
    _require_lattice(lat)
    leq = compute_orders(lat).leq
    cands = np.flatnonzero(leq[lat.meet[:, x], y])
    for z in cands:
        if leq[cands, z].all():
            return int(z)
    raise DomainError(f"{lat.name}: pas de maximum pour {x} → {y}")


def heyting_lattice(lat: FiniteAlgebra) -> HeytingLattice:
    """Table complète de l'implication de Heyting (DomainError si un couple n'a pas de maximum)."""
    zero, one = _require_lattice(lat)
    leq = compute_orders(lat).leq
    n = lat.size
    table = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        # cand[z, y] : z∧x ≤ y ; is_max[z, y] : z candidat au-dessus de tous les candidats
        cand = leq[lat.meet[:, x][:, None], np.arange(n)[None, :]]
        is_max = cand & (~cand[:, None, :] | leq[:, :, None]).all(axis=0)
        missing = np.flatnonzero(~is_max.any(axis=0))
        if len(missing):
            raise DomainError(f"{lat.name}: pas de maximum pour {x} → {int(missing[0])}")
        table[x] = is_max.argmax(axis=0)
    table.flags.writeable = False
    return HeytingLattice(lat, table, one, zero)


def check_heyting_axioms(lat: FiniteAlgebra, imp: np.ndarray, one: int) -> List[CheckReport]:
    """
    Axiomes d'une implication de Heyting, exhaustivement.

    x→x = 1 ; x∧(x→y) = x∧y ; y∧(x→y) = y ; x→(y∧z) = (x→y)∧(x→z) ;
    x∧y ≤ z ⇔ x ≤ y→z.
    """
    M = lat.meet
    I = np.asarray(imp)
    leq = compute_orders(lat).leq
    ar = np.arange(lat.size)
    x, y = ar[:, None], ar[None, :]
    X, Y, Z = ar[:, None, None], ar[None, :, None], ar[None, None, :]
    return [
        law_report("imp_reflexive", I[ar, ar] == one),
        law_report("imp_modus_ponens", M[x, I[x, y]] == M[x, y]),
        law_report("imp_weakening", M[y, I[x, y]] == y),
        law_report("imp_meet_distributes", I[X, M[Y, Z]] == M[I[X, Y], I[X, Z]]),
        law_report("imp_residuation", leq[M[X, Y], Z] == leq[X, I[Y, Z]]),
    ]


def unique_below(alg: FiniteAlgebra, class_members: Sequence[int], a: int) -> int:
    """
    Unique élément b d'une D-classe B sous a, pour a dans une classe A ≥ B.

    b = a∧w∧a pour n'importe quel w de B ; la classe est ensuite balayée pour
    vérifier b ≤ a et l'unicité.

    Raises:
        DomainError: class_members n'est pas une D-classe, ou classes non comparables
        InconsistencyError: b n'est pas sous a ou n'est pas unique (algèbre non normale)
    """
    part = d_partition(alg)
    leq = compute_orders(alg).leq
    members = tuple(sorted(int(m) for m in class_members))
    if not members:
        raise DomainError("classe vide")
    b_class = int(part.class_of[members[0]])
    if members != part.classes[b_class]:
        raise DomainError(f"{members} n'est pas une D-classe")
    a_class = int(part.class_of[a])
    if part.quotient.meet[b_class, a_class] != b_class:
        raise DomainError(f"la classe de {a} n'est pas au-dessus de {members}")
    M = alg.meet
    b = int(M[M[a, members[0]], a])
    below = [m for m in members if leq[m, a]]
    if below != [b]:
        raise InconsistencyError(f"{alg.name}: éléments de {members} sous {a}: {below}, attendu [{b}]")
    return b


def _require_nc_hypotheses(alg: FiniteAlgebra, t: int) -> Tuple[int, ...]:
    if not is_strongly_distributive(alg).passed:
        raise DomainError(f"{alg.name}: algèbre non fortement distributive")
    if bottom(alg) is None:
        raise DomainError(f"{alg.name}: pas de zéro")
    top = top_class(alg)
    if top is None or t not in top:
        raise DomainError(f"{t} n'appartient pas à la D-classe du haut")
    return top


def implication_t(alg: FiniteAlgebra, t: int) -> np.ndarray:
    """
    Table de x →_t y = y∨u∨y.

    u est l'élément, sous t, de la classe D_x → D_y (implication de Heyting du
    quotient).

    Args:
        alg (FiniteAlgebra): skew lattice fortement distributif avec zéro
        t (int): élément de la D-classe du haut

    Returns:
        np.ndarray: table n×n de →_t, en lecture seule

    Raises:
        DomainError: hypothèses non satisfaites ou quotient non distributif

    Example:
        implication_t(build_pfn_algebra(1), 2)
        # [[2, 1, 2], [0, 1, 2], [0, 1, 2]]  (égale à la table imp de P(1))
        implication_t(build_pfn_algebra(1), 1)
        # [[1, 1, 2], [0, 1, 2], [0, 1, 2]]  (un autre t donne une autre table)
    """
    _require_nc_hypotheses(alg, t)
    part = d_partition(alg)
    try:
        qh = heyting_lattice(part.quotient)
    except DomainError as e:
        raise DomainError(f"{alg.name}: quotient sans implication de Heyting ({e})") from e
    C = part.class_of
    u = np.array([unique_below(alg, members, t) for members in part.classes], dtype=np.int64)
    U = u[qh.imp[C[:, None], C[None, :]]]
    y = np.arange(alg.size)[None, :]
    J = alg.join
    table = J[J[y, U], y]
    table.flags.writeable = False
    return table


@lru_cache(maxsize=128)
def is_nc_frame(alg: FiniteAlgebra, subset_cap: Optional[int] = None, budget: Optional[int] = None) -> CheckReport:
    """
    Cadre non commutatif : fortement distributif, sups des sous-ensembles
    commutants, et pour chacun (jusqu'à subset_cap éléments) :
    (⋁x_i)∧y = ⋁(x_i∧y) et y∧(⋁x_i) = ⋁(y∧x_i) pour tout y.

    Le témoin d'une loi en échec est (x_1, ..., x_k, y) ; celui d'un sup
    manquant est le sous-ensemble lui-même. subset_cap=None énumère tout
    (coût exponentiel).

    Raises:
        ResourceError: budget d'énumération dépassé
    """
    sd = is_strongly_distributive(alg)
    if not sd.passed:
        return CheckReport("nc_frame", False, sd.witness)
    leq = compute_orders(alg).leq
    M = alg.meet
    for members in iter_commuting(alg, max_size=subset_cap, budget=budget):
        s = supremum(alg, members)
        if s is None:
            return CheckReport("nc_frame", False, members)
        idx = np.array(members, dtype=np.int64)
        right = image_suprema(leq, M[idx, :]) == M[s, :]
        bad = first_violation(right)
        if bad is None:
            left = image_suprema(leq, M[:, idx].T) == M[:, s]
            bad = first_violation(left)
        if bad is not None:
            return CheckReport("nc_frame", False, (*members, bad[0]))
    return CheckReport("nc_frame", True)


def _sup_formula(alg: FiniteAlgebra, t: int, a: int, b: int) -> int:
    M, J = alg.meet, alg.join
    leq = compute_orders(alg).leq
    local_top = J[J[b, t], b]
    guard = J[J[b, M[M[t, a], t]], b]
    chosen = [int(x) for x in np.flatnonzero(leq[:, local_top]) if leq[M[x, guard], b]]
    # join dans le treillis (b∨t∨b)↓ ; 0 est toujours retenu
    return int(reduce(lambda acc, x: J[acc, x], chosen))


def implication_via_sup(
    alg: FiniteAlgebra,
    t: int,
    a: int,
    b: int,
    subset_cap: Optional[int] = None,
    budget: Optional[int] = None,
) -> int:
    """
    a → b = ⋁{x ∈ (b∨t∨b)↓ | x∧(b∨(t∧a∧t)∨b) ≤ b}.

    Raises:
        DomainError: l'algèbre n'est pas un cadre non commutatif, ou t hors de la classe du haut
    """
    _require_nc_hypotheses(alg, t)
    frame = is_nc_frame(alg, subset_cap, budget)
    if not frame.passed:
        raise DomainError(f"{alg.name}: pas un cadre non commutatif (témoin {frame.witness})")
    return _sup_formula(alg, t, a, b)


def implication_sup_table(
    alg: FiniteAlgebra,
    t: int,
    subset_cap: Optional[int] = None,
    budget: Optional[int] = None,
) -> np.ndarray:
    """Table complète de la formule par sup (hypothèse de cadre vérifiée une seule fois)."""
    _require_nc_hypotheses(alg, t)
    frame = is_nc_frame(alg, subset_cap, budget)
    if not frame.passed:
        raise DomainError(f"{alg.name}: pas un cadre non commutatif (témoin {frame.witness})")
    n = alg.size
    table = np.array([[_sup_formula(alg, t, a, b) for b in range(n)] for a in range(n)], dtype=np.int64)
    table.flags.writeable = False
    return table


@dataclass(frozen=True)
class NcHeytingCandidate:
    """Algèbre portant une table → candidate, un zéro et un t distingué."""

    alg: FiniteAlgebra

    def __post_init__(self):
        missing = [label for label in ("imp", "zero", "top_t") if getattr(self.alg, label) is None]
        if missing:
            raise StructuralError(f"{self.alg.name}: candidat incomplet ({', '.join(missing)} manquant)")


def verify_nh(cand: NcHeytingCandidate) -> List[CheckReport]:
    """
    Axiomes d'implication non commutative, plus x∧t∧x = x et la
    conséquence y ≤ x→y.

    nh_local_reduction : x→y = (y∨(t∧x∧t)∨y)→y
    nh_reflexive       : x→x = x∨t∨x
    nh_sandwich        : x∧(x→y)∧x = x∧y∧x
    nh_absorbs         : y∧(x→y) = y = (x→y)∧y
    nh_meet_split      : x→(t∧(y∧z)∧t) = (x→(t∧y∧t))∧(x→(t∧z∧t))
    """
    alg = cand.alg
    M, J, I = alg.meet, alg.join, alg.imp
    t = alg.top_t
    leq = compute_orders(alg).leq
    ar = np.arange(alg.size)
    x, y = ar[:, None], ar[None, :]
    X, Y, Z = ar[:, None, None], ar[None, :, None], ar[None, None, :]
    txt = M[M[t, ar], t]
    return [
        law_report("nh_local_reduction", I[x, y] == I[J[J[y, txt[x]], y], y]),
        law_report("nh_reflexive", I[ar, ar] == J[J[ar, t], ar]),
        law_report("nh_sandwich", M[M[x, I[x, y]], x] == M[M[x, y], x]),
        law_report("nh_absorbs", (M[y, I[x, y]] == y) & (M[I[x, y], y] == y)),
        law_report("nh_meet_split", I[X, txt[M[Y, Z]]] == M[I[X, txt[Y]], I[X, txt[Z]]]),
        law_report("t_in_top_class", M[M[ar, t], ar] == ar),
        law_report("nh_below_implication", leq[y, I[x, y]]),
    ]


@dataclass(frozen=True)
class SectionIsomorphism:
    """φ : t↓ -> t'↓, son inverse ψ et les rapports de vérification."""

    t: int
    t_prime: int
    mapping: Dict[int, int]
    inverse: Dict[int, int]
    reports: Tuple[CheckReport, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


def _each_report(name: str, members: Sequence[int], ok_fn) -> CheckReport:
    for a in members:
        if not ok_fn(a):
            return CheckReport(name, False, (a,))
    return CheckReport(name, True)


def _pairs_report(name: str, members: Sequence[int], ok_fn) -> CheckReport:
    for a in members:
        for b in members:
            if not ok_fn(a, b):
                return CheckReport(name, False, (a, b))
    return CheckReport(name, True)


def phi_iso(alg: FiniteAlgebra, t: int, t_prime: int) -> SectionIsomorphism:
    """
    φ(x) = t'∧x∧t' de t↓ vers t'↓, d'inverse ψ(y) = t∧y∧t.

    Sur t↓ l'implication est la table de l'algèbre (t↓ est clos pour →) ; sur
    t'↓ c'est l'implication de Heyting du treillis t'↓.

    Raises:
        DomainError: t ou t' hors de la classe du haut, ou table → absente
    """
    top = top_class(alg)
    for label, value in (("t", t), ("t'", t_prime)):
        if top is None or value not in top:
            raise DomainError(f"{label} = {value} n'appartient pas à la D-classe du haut")
    if alg.imp is None or alg.zero is None:
        raise DomainError(f"{alg.name}: algèbre sans implication ou sans zéro")
    M, J, I = alg.meet, alg.join, alg.imp
    src = down_set(alg, t).members
    dst = down_set(alg, t_prime).members
    phi = {x: int(M[M[t_prime, x], t_prime]) for x in src}
    psi = {y: int(M[M[t, y], t]) for y in dst}
    C = d_partition(alg).class_of

    target, emb = induced_subalgebra(alg, dst, keep_imp=False)
    target_imp = heyting_lattice(target).imp
    pos = {orig: i for i, orig in enumerate(emb)}

    def target_implies(a: int, b: int) -> int:
        return emb[int(target_imp[pos[a], pos[b]])]

    reports = [
        CheckReport("phi_bijective", True) if sorted(phi.values()) == list(dst)
        else CheckReport("phi_bijective", False, tuple(sorted(set(dst) - set(phi.values()))) or (t,)),
        combine("psi_inverse", [
            _each_report("psi_phi", src, lambda a: psi.get(phi[a]) == a),
            _each_report("phi_psi", dst, lambda a: phi.get(psi[a]) == a),
        ]),
        _pairs_report("phi_meet", src, lambda a, b: phi[int(M[a, b])] == M[phi[a], phi[b]]),
        _pairs_report("phi_join", src, lambda a, b: phi[int(J[a, b])] == J[phi[a], phi[b]]),
        _pairs_report("phi_imp", src, lambda a, b: int(I[a, b]) in phi
                      and phi[int(I[a, b])] == target_implies(phi[a], phi[b])),
        CheckReport("phi_bounds", True) if phi.get(alg.zero) == alg.zero and phi[t] == t_prime
        else CheckReport("phi_bounds", False, (alg.zero, t)),
        _each_report("phi_d_related", src, lambda a: C[a] == C[phi[a]]),
    ]
    return SectionIsomorphism(t, t_prime, phi, psi, tuple(reports))


def quotient_heyting(alg: FiniteAlgebra) -> HeytingLattice:
    """
    Implication induite par → sur S/D.

    La compatibilité de D avec → est vérifiée sur toutes les paires :
    classe(x→y) ne doit dépendre que des classes de x et de y.

    Raises:
        DomainError: pas de table →
        InconsistencyError: D non compatible avec →
    """
    if alg.imp is None:
        raise DomainError(f"{alg.name}: pas de table d'implication")
    part = d_partition(alg)
    C = part.class_of
    reps = np.array([c[0] for c in part.classes])
    q_imp = C[alg.imp[np.ix_(reps, reps)]]
    witness = first_violation(C[alg.imp] == q_imp[C[:, None], C[None, :]])
    if witness is not None:
        raise InconsistencyError(f"{alg.name}: D non compatible avec → en {witness}")
    zero, one = _require_lattice(part.quotient)
    q_imp.flags.writeable = False
    return HeytingLattice(part.quotient, q_imp, one, zero)


def section_quotient_iso(alg: FiniteAlgebra, t: Optional[int] = None) -> CheckReport:
    """t↓ ≅ S/D comme algèbres de Heyting via x ↦ classe(x)."""
    t = alg.top_t if t is None else t
    if t is None:
        raise DomainError(f"{alg.name}: pas de t distingué")
    members = down_set(alg, t).members
    part = d_partition(alg)
    qh = quotient_heyting(alg)
    C = part.class_of
    idx = np.array(members)
    if sorted(C[idx].tolist()) != list(range(len(part.classes))):
        return CheckReport("section_quotient_iso", False, (t,))
    grid = np.ix_(idx, idx)
    a, b = C[idx][:, None], C[idx][None, :]
    ok = (C[alg.meet[grid]] == part.quotient.meet[a, b]) & (C[alg.join[grid]] == part.quotient.join[a, b])
    ok &= C[alg.imp[grid]] == qh.imp[a, b]
    return law_report("section_quotient_iso", ok, labels=members)


def check_tau_join_identity(
    alg: FiniteAlgebra,
    subset_cap: Optional[int] = None,
    budget: Optional[int] = None,
) -> CheckReport:
    """
    Pour t dans la classe du haut, x_i ≤ t, x = ⋁x_i et τ = y∨x∨t∨y∨x :
    (⋁(x_i∧τ))∧y = (⋁x_i)∧y pour tout y. Témoin (t, x_1, ..., x_k, y).
    """
    top = top_class(alg)
    if top is None:
        raise DomainError(f"{alg.name}: pas de D-classe du haut")
    M, J = alg.meet, alg.join
    leq = compute_orders(alg).leq
    ar = np.arange(alg.size)
    for t in top:
        local = down_set(alg, t).members
        for members in iter_commuting(alg, candidates=local, max_size=subset_cap, budget=budget):
            x = supremum(alg, members)
            if x is None:
                return CheckReport("tau_join_identity", False, (t, *members))
            tau = J[J[J[J[ar, x], t], ar], x]
            idx = np.array(members, dtype=np.int64)
            sups = image_suprema(leq, M[idx[:, None], tau[None, :]])
            ok = (sups >= 0) & (M[np.maximum(sups, 0), ar] == M[x, ar])
            bad = first_violation(ok)
            if bad is not None:
                return CheckReport("tau_join_identity", False, (t, *members, bad[0]))
    return CheckReport("tau_join_identity", True)


def check_join_complete_sections(alg: FiniteAlgebra) -> List[CheckReport]:
    """Conséquences de la complétude : zéro, u↓ treillis pour tout u, t↓ section pour t en haut."""
    zero = bottom(alg)
    reports = [CheckReport("has_zero", True) if zero is not None else CheckReport("has_zero", False, ())]
    reports.append(combine("all_down_sets_lattices", (down_set(alg, u).report for u in range(alg.size))))
    top = top_class(alg)
    if top is None:
        reports.append(CheckReport("top_class_sections", False, ()))
    else:
        reports.append(combine("top_class_sections", (lattice_section_at(alg, t).report for t in top)))
    return reports
