#!/usr/bin/env python3
"""
Interface en ligne de commande de skewlab.

Sous-commandes :
    validate PATH                 axiomes de skew lattice (témoin en cas d'échec)
    classify PATH                 profil, D-classes, quotient, sections treillis
    imp PATH [--t T] [--method nh|sup|both] [--all-t]
                                  table d'implication (construction par le quotient
                                  ou formule par sup ; diff des deux avec both)
    model KIND [...]              algèbre canonique "skl1" sur la sortie standard
    verify [PATHS] [--spec YAML]  harnais de vérification sur un corpus
    draw PATH --out PNG           diagramme de Hasse

Codes de sortie : 0 succès, 1 échec d'une vérification ou hypothèse non
satisfaite, 2 fichier mal formé, 3 erreur d'entrée/sortie, 4 budget dépassé.

Usage:
    python -m src.cli model pfn --m 2 > data/models/pfn2.skl
    python -m src.cli classify data/models/pfn2.skl
    python -m src.cli verify --machine
"""

import argparse
import logging
import sys
from dataclasses import replace
from typing import List, Optional, Sequence

import numpy as np

from src.algebra.core import (
    FiniteAlgebra,
    d_partition,
    failed,
    lattice_isomorphism,
    validate_skew_lattice,
)
from src.algebra.heyting import implication_sup_table, implication_t
from src.algebra.properties import (
    Handedness,
    PropertyProfile,
    binary_join_agreement,
    handedness,
    lattice_section_at,
    profile,
    top_class,
)
from src.common.config import Config, load_config
from src.common.errors import DomainError, InconsistencyError, ResourceError, StructuralError
from src.common.io import format_algebra, read_algebra, write_algebra, write_csv_safe
from src.common.log import setup_logging
from src.models.builders import (
    HANDS,
    boolean_lattice,
    chain,
    check_size,
    direct_product,
    rectangular_band,
)
from src.models.partial_functions import build_pfn_algebra
from src.verify.corpus import CorpusSpec, enumerate_instances, load_instances, mutation_corpus
from src.verify.theorems import FAIL, results_frame, run_all, summarize

logger = logging.getLogger("skewlab")

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_IO, EXIT_RESOURCE = 0, 1, 2, 3, 4


def _table_lines(table: np.ndarray) -> List[str]:
    return [" ".join(str(int(v)) for v in row) for row in table]


def _set_text(members: Sequence[int]) -> str:
    return "{" + ", ".join(str(m) for m in members) + "}"


def describe_quotient(q: FiniteAlgebra) -> str:
    """Nom lisible du treillis quotient : 2^k, chainN ou latticeN."""
    n = q.size
    k = n.bit_length() - 1
    if 2 ** k == n and lattice_isomorphism(q, boolean_lattice(k)) is not None:
        return f"2^{k}"
    if lattice_isomorphism(q, chain(n)) is not None:
        return f"chain{n}"
    return f"lattice{n}"


def summary_line(alg: FiniteAlgebra, prof: PropertyProfile) -> str:
    if alg.is_commutative():
        return "commutative; classes singleton"
    if prof.rectangular:
        return "rectangular; one D-class"
    hand = handedness(alg)
    words = []
    if hand is Handedness.LEFT:
        words.append("left-handed")
    elif hand is Handedness.RIGHT:
        words.append("right-handed")
    for flag, label in ((prof.strongly_distributive, "strongly distributive"),
                        (prof.normal, "normal"), (prof.symmetric, "symmetric")):
        if flag:
            words.append(label)
    return f"{', '.join(words)}; quotient = {describe_quotient(d_partition(alg).quotient)}"


def cmd_validate(args, config: Config) -> int:
    alg = read_algebra(args.path)
    reports = validate_skew_lattice(alg)
    for report in reports:
        print(report)
    bad = failed(reports)
    if bad:
        print(f"[ERROR] {alg.name or args.path}: {len(bad)} loi(s) en échec")
        return EXIT_FAIL
    print(f"[OK] {alg.name or args.path}: skew lattice à {alg.size} éléments")
    return EXIT_OK


def cmd_classify(args, config: Config) -> int:
    alg = read_algebra(args.path)
    bad = failed(validate_skew_lattice(alg))
    if bad:
        print(f"[ERROR] pas un skew lattice: {bad[0]}")
        return EXIT_FAIL
    cap = args.cap if args.cap is not None else config.cap
    prof = profile(alg, cap, config.subset_budget)
    part = d_partition(alg)

    print(f"== {alg.name or args.path} ({alg.size} elements) ==")
    print(f"summary: {summary_line(alg, prof)}")
    print(f"handedness: {handedness(alg).value}")
    print("flags:")
    for key, value in prof.as_dict().items():
        shown = "undecided" if value is None else ("yes" if value else "no")
        print(f"  {key:<22} {shown}")
    print(f"D-classes ({len(part.classes)}):")
    for i, members in enumerate(part.classes):
        print(f"  D{i} = {_set_text(members)}")
    print("quotient meet:")
    for line in _table_lines(part.quotient.meet):
        print(f"  {line}")
    print("quotient join:")
    for line in _table_lines(part.quotient.join):
        print(f"  {line}")
    top = top_class(alg)
    print(f"top class: {_set_text(top) if top is not None else 'none'}")
    if top is not None and prof.normal:
        for t in top:
            section = lattice_section_at(alg, t)
            status = "" if section.report.passed else f"  [FAIL] {section.report}"
            print(f"lattice section t={t}: {_set_text(section.members)}{status}")
    if prof.symmetric:
        try:
            agreement = binary_join_agreement(alg, cap, config.subset_budget)
            text = "agree" if agreement.passed else f"differ at {_set_text(agreement.witness)}"
        except ResourceError:
            text = "undecided (budget)"
        print(f"suprema vs iterated joins: {text}")
    return EXIT_OK


def cmd_imp(args, config: Config) -> int:
    alg = read_algebra(args.path)
    cap = args.cap if args.cap is not None else config.cap
    if args.all_t:
        top = top_class(alg)
        if top is None:
            raise DomainError("pas de D-classe du haut")
        ts = list(top)
    elif args.t is not None:
        ts = [args.t]
    elif alg.top_t is not None:
        ts = [alg.top_t]
    else:
        top = top_class(alg)
        if top is None:
            raise DomainError("pas de D-classe du haut")
        ts = [min(top)]

    differing = 0
    for t in ts:
        if len(ts) > 1:
            print(f"# t = {t}")
        nh = implication_t(alg, t) if args.method in ("nh", "both") else None
        sup = implication_sup_table(alg, t, cap, config.subset_budget) if args.method in ("sup", "both") else None
        for line in _table_lines(nh if nh is not None else sup):
            print(line)
        if nh is not None and sup is not None:
            cells = np.argwhere(nh != sup)
            differing += len(cells)
            print(f"# diff nh/sup: {len(cells)} cell(s)")
            for x, y in cells:
                print(f"# {x} {y} nh={int(nh[x, y])} sup={int(sup[x, y])}")
    return EXIT_FAIL if differing else EXIT_OK


def build_model(args, config: Config) -> FiniteAlgebra:
    budget = config.max_elements
    if args.kind == "pfn":
        return build_pfn_algebra(args.m, budget)
    if args.kind == "rect":
        check_size(args.n, budget, "rect")
        return rectangular_band(args.n, args.hand)
    if args.kind == "chain":
        check_size(args.n, budget, "chain")
        return chain(args.n)
    if args.kind == "bool":
        check_size(2 ** args.k, budget, "bool")
        return boolean_lattice(args.k)
    if args.kind == "product":
        if not args.left or not args.right:
            raise DomainError("product attend --left et --right")
        return direct_product(read_algebra(args.left), read_algebra(args.right), budget)
    raise DomainError(f"modèle inconnu: {args.kind}")


def cmd_model(args, config: Config) -> int:
    alg = build_model(args, config)
    if args.out:
        write_algebra(alg, args.out)
        print(f"[OK] {alg.name} -> {args.out}")
    else:
        sys.stdout.write(format_algebra(alg))
    return EXIT_OK


def cmd_verify(args, config: Config) -> int:
    if args.jobs is not None:
        config = replace(config, jobs=args.jobs)

    if args.mutate:
        if not args.mutate.startswith("pfn"):
            raise DomainError(f"--mutate attend pfnM, lu {args.mutate}")
        corpus = mutation_corpus(int(args.mutate[3:]), config.max_elements)
    elif args.paths:
        corpus = load_instances(args.paths)
    else:
        spec = CorpusSpec.from_yaml(args.spec) if args.spec else CorpusSpec.from_mapping(config.corpus)
        overrides = {}
        if args.p4:
            overrides["include_p4"] = True
        if args.seed is not None:
            overrides["seed"] = args.seed
            overrides["random_count"] = args.random_count if args.random_count is not None else max(spec.random_count, 10)
        elif args.random_count is not None:
            overrides["random_count"] = args.random_count
        corpus = enumerate_instances(replace(spec, **overrides))

    results = run_all(corpus, config)
    if args.machine:
        for r in results:
            print(r.machine_line())
    else:
        for note in corpus.notes:
            print(f"# note: {note}")
        for r in results:
            print(r)
        counts = summarize(results)
        tag = "[ERROR]" if counts[FAIL] else "[OK]"
        print(f"{tag} {len(corpus)} instance(s), {len(results)} check(s): "
              f"{counts['pass']} pass, {counts['fail']} fail, {counts['skip']} skip")
        if args.mutate:
            detected = {r.instance for r in results if r.status == FAIL}
            print(f"[INFO] mutants detected: {len(detected & set(corpus.names))}/{len(corpus)}")
    if args.report_csv:
        write_csv_safe(results_frame(results), args.report_csv)
        logger.info("rapport écrit: %s", args.report_csv)
    return EXIT_FAIL if summarize(results)[FAIL] else EXIT_OK


def cmd_draw(args, config: Config) -> int:
    from src.viz.hasse import draw_hasse

    alg = read_algebra(args.path)
    bad = failed(validate_skew_lattice(alg))
    if bad:
        print(f"[ERROR] pas un skew lattice: {bad[0]}")
        return EXIT_FAIL
    draw_hasse(alg, args.out)
    print(f"[OK] {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skewlab", description="Skew lattices finis, implications NH et cadres non commutatifs")
    ap.add_argument("--config", default=None, help="Fichier YAML de configuration (défaut: config/skewlab.yaml)")
    ap.add_argument("--verbose", "-v", action="store_true", help="Logs détaillés sur stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="Vérifie les axiomes de skew lattice")
    p.add_argument("path")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("classify", help="Profil de propriétés et structure en D-classes")
    p.add_argument("path")
    p.add_argument("--cap", type=int, default=None, help="Taille max des sous-ensembles commutants")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("imp", help="Table d'implication pour un t de la classe du haut")
    p.add_argument("path")
    p.add_argument("--t", type=int, default=None, help="Élément distingué (défaut: top du fichier)")
    p.add_argument("--method", choices=("nh", "sup", "both"), default="nh")
    p.add_argument("--all-t", action="store_true", help="Une table par élément de la classe du haut")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(handler=cmd_imp)

    p = sub.add_parser("model", help="Émet une algèbre canonique au format skl1")
    p.add_argument("kind", choices=("pfn", "rect", "chain", "bool", "product"))
    p.add_argument("--m", type=int, default=1, help="pfn: taille de A")
    p.add_argument("--n", type=int, default=2, help="rect/chain: nombre d'éléments")
    p.add_argument("--k", type=int, default=2, help="bool: rang")
    p.add_argument("--hand", choices=HANDS, default="left")
    p.add_argument("--left", default=None, help="product: premier facteur (fichier)")
    p.add_argument("--right", default=None, help="product: second facteur (fichier)")
    p.add_argument("--out", default=None, help="Fichier de sortie (défaut: sortie standard)")
    p.set_defaults(handler=cmd_model)

    p = sub.add_parser("verify", help="Harnais de vérification sur un corpus")
    p.add_argument("paths", nargs="*", help="Fichiers skl1 (sinon corpus généré)")
    p.add_argument("--spec", default=None, help="Spécification YAML du corpus")
    p.add_argument("--p4", action="store_true", help="Ajoute P(4) au corpus")
    p.add_argument("--seed", type=int, default=None, help="Graine des instances aléatoires")
    p.add_argument("--random-count", type=int, default=None)
    p.add_argument("--mutate", default=None, help="Corpus des mutations d'une case (ex: pfn1)")
    p.add_argument("--jobs", type=int, default=None, help="Nombre de workers joblib")
    p.add_argument("--machine", action="store_true", help="Sortie tabulée theorem/instance/status/witness")
    p.add_argument("--report-csv", default=None, help="Export CSV des résultats")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("draw", help="Diagramme de Hasse (PNG)")
    p.add_argument("path")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_draw)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging("DEBUG" if args.verbose else None)
    try:
        config = load_config(args.config)
        return args.handler(args, config)
    except StructuralError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceError as e:
        print(f"[ERROR] budget: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DomainError, InconsistencyError) as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
