#!/usr/bin/env python3
"""
Harnais de vérification : chaque énoncé est testé sur chaque instance du
corpus dont il satisfait les hypothèses.

Identifiants des vérifications (voir DESIGN.md pour l'énoncé de chacun) :

    skew-lattice-axioms            regularity                 preorder-sandwich
    sd-iff-symmetric-normal        normal-iff-downsets-lattices
    unique-element-below           commuting-translates       join-complete-sections
    tau-join-identity              quotient-frame-nc-frame    top-element-forces-commutativity
    nh-axioms                      implication-t-satisfies-axioms
    implication-t-uniqueness       implication-to-top         implication-local-lattice
    section-heyting-iso            implication-sup-formula

Une hypothèse non satisfaite produit un résultat "skip" dont la raison nomme
l'hypothèse ; une exception de la bibliothèque pendant une vérification est
rapportée comme "fail" avec le message. Les résultats sont triés par
(identifiant, instance) : deux exécutions identiques donnent la même liste.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from src.algebra.core import (
    CheckReport,
    FiniteAlgebra,
    bottom,
    check_preorder_sandwich,
    check_regularity,
    combine,
    compute_orders,
    d_partition,
    down_set,
    failed,
    first_violation,
    induced_subalgebra,
    law_report,
    two_sided_top,
    validate_skew_lattice,
)
from src.algebra.heyting import (
    NcHeytingCandidate,
    check_heyting_axioms,
    check_join_complete_sections,
    check_tau_join_identity,
    heyting_lattice,
    implication_sup_table,
    implication_t,
    is_nc_frame,
    phi_iso,
    quotient_heyting,
    section_quotient_iso,
    unique_below,
    verify_nh,
)
from src.algebra.properties import (
    check_commuting_translates,
    is_join_complete,
    is_normal,
    is_strongly_distributive,
    is_symmetric,
    top_class,
)
from src.common.config import Config
from src.common.errors import ResourceError, SkewlabError
from src.models.builders import adjoin_bounds, bounded_extensions, rectangular_band
from src.verify.corpus import Corpus

logger = logging.getLogger(__name__)

PASS, FAIL, SKIP = "pass", "fail", "skip"

SKEW_AXIOMS = "skew-lattice-axioms"
REGULARITY = "regularity"
SANDWICH = "preorder-sandwich"
SD_IFF = "sd-iff-symmetric-normal"
NORMAL_IFF = "normal-iff-downsets-lattices"
UNIQUE_BELOW = "unique-element-below"
TRANSLATES = "commuting-translates"
JC_SECTIONS = "join-complete-sections"
TAU_JOIN = "tau-join-identity"
FRAME = "quotient-frame-nc-frame"
TOP_COMMUTES = "top-element-forces-commutativity"
NH_AXIOMS = "nh-axioms"
IMP_T_AXIOMS = "implication-t-satisfies-axioms"
IMP_T_UNIQUE = "implication-t-uniqueness"
IMP_TO_TOP = "implication-to-top"
IMP_LOCAL = "implication-local-lattice"
SECTION_ISO = "section-heyting-iso"
SUP_FORMULA = "implication-sup-formula"

INSTANCE_CHECKS = (
    SKEW_AXIOMS, REGULARITY, SANDWICH, SD_IFF, NORMAL_IFF, UNIQUE_BELOW, TRANSLATES,
    JC_SECTIONS, TAU_JOIN, FRAME, NH_AXIOMS, IMP_T_AXIOMS, IMP_T_UNIQUE, IMP_TO_TOP,
    IMP_LOCAL, SECTION_ISO, SUP_FORMULA,
)
SEARCH_INSTANCE = "<search>"


@dataclass(frozen=True)
class TheoremResult:
    theorem: str
    instance: str
    status: str
    witness: Optional[Tuple[int, ...]] = None
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def witness_text(self) -> str:
        """Colonne témoin : - sans témoin, () pour le témoin vide, sinon les indices séparés par des virgules."""
        if self.witness is None:
            return "-"
        if not self.witness:
            return "()"
        return ",".join(str(w) for w in self.witness)

    def machine_line(self) -> str:
        return "\t".join((self.theorem, self.instance, self.status, self.witness_text()))

    def __str__(self) -> str:
        tag = {PASS: "[PASS]", FAIL: "[FAIL]", SKIP: "[SKIP]"}[self.status]
        text = f"{tag} {self.theorem} {self.instance}"
        if self.witness is not None:
            text += f" witness=({','.join(str(w) for w in self.witness)})"
        if self.reason:
            text += f" ({self.reason})"
        return text


class _InstanceRun:
    """Collecte les résultats d'une instance ; une erreur de la bibliothèque devient un échec."""

    def __init__(self, name: str, alg: FiniteAlgebra, config: Config):
        self.name = name
        self.alg = alg
        self.config = config
        self.results: Dict[str, TheoremResult] = {}

    def record(self, theorem: str, report: CheckReport, reason: str = "") -> None:
        if report.passed:
            self.results[theorem] = TheoremResult(theorem, self.name, PASS, None, reason)
        else:
            self.results[theorem] = TheoremResult(theorem, self.name, FAIL, report.witness, reason or report.name)

    def skip(self, theorem: str, reason: str) -> None:
        self.results[theorem] = TheoremResult(theorem, self.name, SKIP, None, reason)

    def guarded(self, theorem: str, check: Callable[[], None]) -> None:
        try:
            check()
        except ResourceError as e:
            self.skip(theorem, f"budget: {e}")
        except SkewlabError as e:
            self.results[theorem] = TheoremResult(theorem, self.name, FAIL, (), f"{type(e).__name__}: {e}")


def _reason_first_failure(reports: Sequence[CheckReport]) -> str:
    bad = failed(reports)
    return bad[0].name if bad else ""


def check_instance(name: str, alg: FiniteAlgebra, config: Config) -> List[TheoremResult]:
    """Toutes les vérifications applicables à une instance."""
    run = _InstanceRun(name, alg, config)
    axioms = validate_skew_lattice(alg)
    if failed(axioms):
        run.record(SKEW_AXIOMS, combine("skew_lattice", axioms), _reason_first_failure(axioms))
        for theorem in INSTANCE_CHECKS[1:]:
            run.skip(theorem, "not a skew lattice")
        return list(run.results.values())
    try:
        compute_orders(alg)
        part = d_partition(alg)
    except SkewlabError as e:
        run.results[SKEW_AXIOMS] = TheoremResult(SKEW_AXIOMS, name, FAIL, (), f"{type(e).__name__}: {e}")
        for theorem in INSTANCE_CHECKS[1:]:
            run.skip(theorem, "orders or D-partition inconsistent")
        return list(run.results.values())
    run.record(SKEW_AXIOMS, combine("skew_lattice", axioms))

    # énumération complète ; frame_limit borne la taille des instances concernées
    cap, budget = None, config.subset_budget
    regularity = check_regularity(alg)
    run.record(REGULARITY, combine("regularity", regularity), _reason_first_failure(regularity))
    sandwich = check_preorder_sandwich(alg)
    run.record(SANDWICH, combine("preorder_sandwich", sandwich), _reason_first_failure(sandwich))

    sym = is_symmetric(alg).passed
    normal = is_normal(alg).passed
    sd = is_strongly_distributive(alg).passed
    quotient_distributive = is_strongly_distributive(part.quotient).passed
    detail = f"sd={sd} symmetric={sym} normal={normal} quotient_distributive={quotient_distributive}"
    if sd == (sym and normal and quotient_distributive):
        run.record(SD_IFF, CheckReport("sd_iff", True), detail)
    else:
        run.record(SD_IFF, CheckReport("sd_iff", False, ()), detail)

    def normal_iff_downsets() -> None:
        not_lattice = [u for u in range(alg.size) if not down_set(alg, u).report.passed]
        if normal == (not not_lattice):
            run.record(NORMAL_IFF, CheckReport("normal_iff", True), f"normal={normal}")
        else:
            run.record(NORMAL_IFF, CheckReport("normal_iff", False, tuple(not_lattice[:1])), f"normal={normal}")

    run.guarded(NORMAL_IFF, normal_iff_downsets)

    def unique_below_all() -> None:
        q = part.quotient
        for a in range(alg.size):
            a_class = int(part.class_of[a])
            for b_class, members in enumerate(part.classes):
                if q.meet[b_class, a_class] != b_class:
                    continue
                unique_below(alg, members, a)
        run.record(UNIQUE_BELOW, CheckReport("unique_below", True))

    if normal:
        run.guarded(UNIQUE_BELOW, unique_below_all)
    else:
        run.skip(UNIQUE_BELOW, "hypothesis: normal")

    if sd:
        run.record(TRANSLATES, check_commuting_translates(alg))
    else:
        run.skip(TRANSLATES, "hypothesis: strongly distributive")

    zero = bottom(alg)
    top = top_class(alg)
    _frame_checks(run, sd, zero, top, cap, budget)
    _implication_checks(run, sd, zero, top, cap, budget)
    return list(run.results.values())


def _frame_checks(run: _InstanceRun, sd: bool, zero, top, cap, budget) -> None:
    alg = run.alg
    frame_ids = (JC_SECTIONS, TAU_JOIN, FRAME)
    if not sd:
        for theorem in frame_ids:
            run.skip(theorem, "hypothesis: strongly distributive")
        return
    if alg.size > run.config.frame_limit:
        for theorem in frame_ids:
            run.skip(theorem, f"carrier {alg.size} > frame_limit {run.config.frame_limit}")
        return
    try:
        join_complete = is_join_complete(alg, cap, budget)
    except ResourceError as e:
        for theorem in frame_ids:
            run.skip(theorem, f"budget: {e}")
        return

    if join_complete.passed:
        run.guarded(JC_SECTIONS, lambda: run.record(
            JC_SECTIONS, combine("join_complete_sections", check_join_complete_sections(alg))))
        if top is not None:
            run.guarded(TAU_JOIN, lambda: run.record(TAU_JOIN, check_tau_join_identity(alg, cap, budget)))
        else:
            run.skip(TAU_JOIN, "hypothesis: top D-class")
    else:
        run.skip(JC_SECTIONS, f"hypothesis: join complete (no supremum for {join_complete.witness})")
        run.skip(TAU_JOIN, "hypothesis: join complete")

    if zero is None:
        run.skip(FRAME, "hypothesis: zero")
    else:
        run.guarded(FRAME, lambda: run.record(FRAME, is_nc_frame(alg, cap, budget)))


def _with_table(alg: FiniteAlgebra, table, zero: int, t: int) -> FiniteAlgebra:
    return FiniteAlgebra(alg.size, alg.meet, alg.join, table, zero, t, alg.name)


def _own_candidate(alg: FiniteAlgebra) -> Optional[NcHeytingCandidate]:
    if alg.imp is None or alg.top_t is None or bottom(alg) is None:
        return None
    return NcHeytingCandidate(_with_table(alg, alg.imp, bottom(alg), alg.top_t))


def _implication_checks(run: _InstanceRun, sd: bool, zero, top, cap, budget) -> None:
    alg = run.alg
    imp_ids = (NH_AXIOMS, IMP_T_AXIOMS, IMP_T_UNIQUE, IMP_TO_TOP, IMP_LOCAL, SECTION_ISO, SUP_FORMULA)
    missing = [label for label, ok in (("strongly distributive", sd), ("zero", zero is not None),
                                       ("top D-class", top is not None)) if not ok]
    if missing:
        for theorem in imp_ids:
            run.skip(theorem, "hypothesis: " + ", ".join(missing))
        return

    own = _own_candidate(alg)
    if own is not None:
        def own_axioms() -> None:
            reports = verify_nh(own)
            run.record(NH_AXIOMS, combine("nh_axioms", reports), _reason_first_failure(reports))
        run.guarded(NH_AXIOMS, own_axioms)
    else:
        run.skip(NH_AXIOMS, "hypothesis: implication table and distinguished t")

    tables: Dict[int, np.ndarray] = {}

    def construct_all() -> None:
        for t in top:
            table = implication_t(alg, t)
            reports = verify_nh(NcHeytingCandidate(_with_table(alg, table, zero, t)))
            bad = failed(reports)
            if bad:
                run.record(IMP_T_AXIOMS, CheckReport("implication_t", False, (t, *bad[0].witness)), bad[0].name)
                return
            tables[t] = table
        run.record(IMP_T_AXIOMS, CheckReport("implication_t", True), f"{len(tables)} distinguished element(s)")

    run.guarded(IMP_T_AXIOMS, construct_all)

    if own is not None:
        def uniqueness() -> None:
            expected = tables.get(own.alg.top_t)
            if expected is None:
                expected = implication_t(alg, own.alg.top_t)
            witness = first_violation(own.alg.imp == expected)
            if witness is None:
                run.record(IMP_T_UNIQUE, CheckReport("imp_equals_implication_t", True))
            else:
                run.record(IMP_T_UNIQUE, CheckReport("imp_equals_implication_t", False, witness),
                           f"imp{witness} = {int(own.alg.imp[witness])}, expected {int(expected[witness])}")
        run.guarded(IMP_T_UNIQUE, uniqueness)
    else:
        run.skip(IMP_T_UNIQUE, "hypothesis: implication table and distinguished t")

    candidate, origin = _nh_candidate(run, own, tables, zero)
    if candidate is None:
        for theorem in (IMP_TO_TOP, IMP_LOCAL, SECTION_ISO):
            run.skip(theorem, origin)
    else:
        run.guarded(IMP_TO_TOP, lambda: run.record(IMP_TO_TOP, _check_implication_to_top(candidate), origin))
        run.guarded(IMP_LOCAL, lambda: run.record(IMP_LOCAL, _check_local_lattice(candidate), origin))
        run.guarded(SECTION_ISO, lambda: run.record(SECTION_ISO, _check_section_iso(candidate, top), origin))

    if alg.size > run.config.frame_limit:
        run.skip(SUP_FORMULA, f"carrier {alg.size} > frame_limit {run.config.frame_limit}")
    elif not tables:
        run.skip(SUP_FORMULA, "hypothesis: implication_t tables")
    else:
        run.guarded(SUP_FORMULA, lambda: _check_sup_formula(run, tables, cap, budget))


def _nh_candidate(run: _InstanceRun, own, tables, zero) -> Tuple[Optional[FiniteAlgebra], str]:
    nh = run.results.get(NH_AXIOMS)
    if own is not None and nh is not None and nh.passed:
        return own.alg, "own implication table"
    if tables:
        t = min(tables)
        alg = run.alg
        return _with_table(alg, tables[t], zero, t), f"implication_t with t={t}"
    return None, "hypothesis: verified implication"


def _check_implication_to_top(alg: FiniteAlgebra) -> CheckReport:
    """x→t = t, et t↓ clos pour →."""
    t, I = alg.top_t, alg.imp
    ar = np.arange(alg.size)
    to_top = I[ar, t] == t
    members = np.array(down_set(alg, t).members)
    closed = np.isin(I[np.ix_(members, members)], members)
    return combine("implication_to_top", [
        CheckReport("x_imp_t", True) if to_top.all()
        else CheckReport("x_imp_t", False, (int(np.flatnonzero(~to_top)[0]),)),
        CheckReport("section_closed", True) if closed.all()
        else CheckReport("section_closed", False, tuple(int(members[i]) for i in first_violation(closed))),
    ])


def _check_local_lattice(alg: FiniteAlgebra) -> CheckReport:
    """y, y∨(t∧x∧t)∨y et x→y sont sous y∨t∨y ; témoin (x, y)."""
    M, J, I, t = alg.meet, alg.join, alg.imp, alg.top_t
    leq = compute_orders(alg).leq
    ar = np.arange(alg.size)
    x, y = ar[:, None], ar[None, :]
    local = J[J[ar, t], ar][None, :]
    guard = J[J[y, M[M[t, x], t]], y]
    return law_report("local_lattice", leq[y, local] & leq[guard, local] & leq[I[x, y], local])


def _check_section_iso(alg: FiniteAlgebra, top: Sequence[int]) -> CheckReport:
    """t↓ est de Heyting, φ est un isomorphisme vers chaque t'↓, S/D ≅ t↓."""
    t = alg.top_t
    section, emb = induced_subalgebra(alg, down_set(alg, t).members, keep_imp=True)
    if section.imp is None:
        return CheckReport("section_heyting", False, (t,))
    one = emb.index(t)
    reports = list(check_heyting_axioms(section, section.imp, one))
    for t_prime in top:
        iso = phi_iso(alg, t, t_prime)
        reports.append(combine(f"phi[{t}->{t_prime}]", iso.reports))
    qh = quotient_heyting(alg)
    reports.extend(check_heyting_axioms(qh.base, qh.imp, qh.one))
    reports.append(section_quotient_iso(alg, t))
    # l'implication du quotient est celle de Heyting du treillis S/D
    expected = heyting_lattice(qh.base).imp
    reports.append(CheckReport("quotient_imp_is_heyting", True) if np.array_equal(expected, qh.imp)
                   else CheckReport("quotient_imp_is_heyting", False, first_violation(expected == qh.imp)))
    bad = failed(reports)
    return bad[0] if bad else CheckReport("section_heyting_iso", True)


def _check_sup_formula(run: _InstanceRun, tables: Dict[int, np.ndarray], cap, budget) -> None:
    frame = is_nc_frame(run.alg, cap, budget)
    if not frame.passed:
        run.skip(SUP_FORMULA, "hypothesis: noncommutative frame")
        return
    for t in sorted(tables):
        sup_table = implication_sup_table(run.alg, t, cap, budget)
        witness = first_violation(sup_table == tables[t])
        if witness is not None:
            run.record(SUP_FORMULA, CheckReport("sup_formula", False, (t, *witness)), f"t={t}")
            return
    run.record(SUP_FORMULA, CheckReport("sup_formula", True), f"{len(tables)} distinguished element(s)")


def search_two_sided_top(corpus: Corpus, config: Optional[Config] = None) -> TheoremResult:
    """
    Recherche de contre-exemple : une algèbre fortement distributive avec un
    sommet bilatère 1 (1∧x = x = x∧1, 1∨x = 1 = x∨1) doit être commutative.

    Examine le corpus, les sommes ordinales ⊥ ⊕ S ⊕ ⊤ de ses instances non
    commutatives (et des bandes rectangulaires à 2 et 3 éléments), puis toutes
    les tables bornées à au plus 4 éléments.
    """
    config = config or Config()
    pool: List[Tuple[str, FiniteAlgebra]] = list(corpus.instances)
    seeds = [alg for _, alg in corpus.instances if not alg.is_commutative()]
    seeds += [rectangular_band(n, hand) for n in (2, 3) for hand in ("left", "right")]
    for alg in seeds:
        if alg.size + 2 <= config.max_elements:
            bounded = adjoin_bounds(alg)
            pool.append((bounded.name, bounded))
    for size in (2, 3, 4):
        pool.extend((alg.name, alg) for alg in bounded_extensions(size))

    examined = 0
    for name, alg in pool:
        if failed(validate_skew_lattice(alg)):
            continue
        one = two_sided_top(alg)
        if one is None or not is_strongly_distributive(alg).passed:
            continue
        examined += 1
        if not alg.is_commutative():
            witness = first_violation(alg.meet == alg.meet.T) or first_violation(alg.join == alg.join.T)
            return TheoremResult(TOP_COMMUTES, SEARCH_INSTANCE, FAIL, witness, f"refuted by {name} (top {one})")
    return TheoremResult(TOP_COMMUTES, SEARCH_INSTANCE, PASS, None,
                         f"{examined} instance(s) with a two-sided top examined")


def run_all(corpus: Corpus, config: Optional[Config] = None) -> List[TheoremResult]:
    """
    Exécute toutes les vérifications sur le corpus ; liste triée par (identifiant, instance).

    Chaque instance produit un résultat par identifiant de INSTANCE_CHECKS, puis
    la recherche search_two_sided_top ajoute une ligne "<search>". Un corpus
    vide donne une liste vide.

    Args:
        corpus (Corpus): instances à vérifier
        config (Config): budgets, frame_limit et nombre de workers joblib

    Returns:
        List[TheoremResult]: résultats pass / fail / skip

    Example:
        corpus = enumerate_instances(CorpusSpec.from_mapping({"pfn_arities": [1, 2]}))
        results = run_all(corpus, Config(jobs=2))
        summarize(results)      # {"pass": ..., "fail": 0, "skip": ...}
        write_csv_safe(results_frame(results), "reports/theorems.csv")
    """
    config = config or Config()
    if not len(corpus):
        return []
    if config.jobs > 1 and len(corpus) > 1:
        chunks = Parallel(n_jobs=config.jobs)(
            delayed(check_instance)(name, alg, config) for name, alg in corpus.instances
        )
    else:
        chunks = [check_instance(name, alg, config) for name, alg in corpus.instances]
    results = [r for chunk in chunks for r in chunk]
    results.append(search_two_sided_top(corpus, config))
    results.sort(key=lambda r: (r.theorem, r.instance))
    logger.info("run_all: %d résultat(s) sur %d instance(s)", len(results), len(corpus))
    return results


def summarize(results: Sequence[TheoremResult]) -> Dict[str, int]:
    counts = {PASS: 0, FAIL: 0, SKIP: 0}
    for r in results:
        counts[r.status] += 1
    return counts


def results_frame(results: Sequence[TheoremResult]) -> pd.DataFrame:
    """Résultats en DataFrame (colonnes theorem, instance, status, witness, reason)."""
    return pd.DataFrame(
        [
            {
                "theorem": r.theorem,
                "instance": r.instance,
                "status": r.status,
                "witness": r.witness_text(),
                "reason": r.reason,
            }
            for r in results
        ],
        columns=["theorem", "instance", "status", "witness", "reason"],
    )
