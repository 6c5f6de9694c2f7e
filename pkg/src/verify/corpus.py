#!/usr/bin/env python3
"""
Construction du corpus d'instances du harnais de vérification.

Le corpus est déterministe pour une spécification donnée : les instances
sont produites dans un ordre fixe, dédoublonnées par empreinte de tables
(le premier nom rencontré est conservé) et la provenance de chacune est
enregistrée. Les dépassements de budget sont notés, pas levés.

Usage (spécification YAML, toutes les clés sont optionnelles) :

    pfn_arities: [1, 2, 3]
    include_p4: false
    mirrors: true
    rect_sizes: [1, 2, 3]
    chain_sizes: [1, 2, 3]
    boolean_ranks: [0, 1, 2]
    product_factors: [pfn1, chain2, rect-left-2]
    max_product_size: 81
    closure_arity: 2
    closure_max_generators: 3
    closure_with_imp: true
    random_count: 0
    seed: null
    max_instances: 500
"""

import logging
from dataclasses import dataclass, field, fields
from itertools import combinations
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np
import yaml

from src.algebra.core import FiniteAlgebra
from src.common.errors import ResourceError, StructuralError
from src.common.io import read_algebra, read_text_safe
from src.models.builders import (
    HANDS,
    boolean_lattice,
    chain,
    direct_product,
    rectangular_band,
    subalgebra_closure,
)
from src.models.partial_functions import build_pfn_algebra, pfn_mutants, pfn_tau

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusSpec:
    """Paramètres du générateur ; les valeurs par défaut donnent un corpus vide."""

    pfn_arities: Tuple[int, ...] = ()
    include_p4: bool = False
    mirrors: bool = False
    rect_sizes: Tuple[int, ...] = ()
    chain_sizes: Tuple[int, ...] = ()
    boolean_ranks: Tuple[int, ...] = ()
    product_factors: Tuple[str, ...] = ()
    max_product_size: int = 81
    closure_arity: Optional[int] = None
    closure_max_generators: int = 3
    closure_with_imp: bool = False
    random_count: int = 0
    seed: Optional[int] = None
    max_instances: int = 500
    max_elements: int = 81

    @classmethod
    def from_mapping(cls, data: Optional[Mapping[str, Any]]) -> "CorpusSpec":
        data = dict(data or {})
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise StructuralError(f"clé(s) de corpus inconnue(s): {', '.join(unknown)}")
        for key in ("pfn_arities", "rect_sizes", "chain_sizes", "boolean_ranks", "product_factors"):
            if key in data:
                data[key] = tuple(data[key] or ())
        return cls(**data)

    @classmethod
    def from_yaml(cls, path: str) -> "CorpusSpec":
        return cls.from_mapping(yaml.safe_load(read_text_safe(path)))


@dataclass
class Corpus:
    instances: List[Tuple[str, FiniteAlgebra]] = field(default_factory=list)
    provenance: Dict[str, str] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self):
        return iter(self.instances)

    @property
    def names(self) -> List[str]:
        return [name for name, _ in self.instances]


class _CorpusBuilder:
    def __init__(self, spec: CorpusSpec):
        self.spec = spec
        self.corpus = Corpus()
        self.seen: Dict[str, str] = {}
        self.full = False

    def add(self, alg: FiniteAlgebra, provenance: str) -> None:
        if self.full:
            return
        if alg.size > self.spec.max_elements:
            self.corpus.notes.append(f"{alg.name}: {alg.size} éléments > {self.spec.max_elements}, ignoré")
            return
        digest = alg.table_hash()
        if digest in self.seen:
            return
        if len(self.corpus) >= self.spec.max_instances:
            self.full = True
            self.corpus.notes.append(f"corpus tronqué à {self.spec.max_instances} instances")
            return
        self.seen[digest] = alg.name
        self.corpus.instances.append((alg.name, alg))
        self.corpus.provenance[alg.name] = provenance


def _pfn(m: int, spec: CorpusSpec) -> FiniteAlgebra:
    return build_pfn_algebra(m, spec.max_elements)


def _factor(label: str, spec: CorpusSpec) -> FiniteAlgebra:
    """Résout un nom de facteur : pfnM, chainN, boolK, rect-left-N, rect-right-N."""
    if label.startswith("pfn"):
        return _pfn(int(label[3:]), spec)
    if label.startswith("chain"):
        return chain(int(label[5:]))
    if label.startswith("bool"):
        return boolean_lattice(int(label[4:]))
    if label.startswith("rect-"):
        _, hand, n = label.split("-")
        return rectangular_band(int(n), hand)
    raise StructuralError(f"facteur inconnu: {label}")


def enumerate_instances(spec: CorpusSpec) -> Corpus:
    """
    Corpus déterministe : P(m), miroirs, bandes rectangulaires, chaînes,
    algèbres de Boole, produits deux à deux, fermetures dans P(closure_arity),
    puis instances aléatoires (graine enregistrée).

    Les doublons (même empreinte de tables) sont écartés ; un dépassement de
    budget ou de max_instances est consigné dans corpus.notes.

    Args:
        spec (CorpusSpec): description du corpus (voir config/skewlab.yaml)

    Returns:
        Corpus: instances nommées, provenance et notes

    Example:
        spec = CorpusSpec.from_mapping({"pfn_arities": [1], "closure_arity": 1})
        enumerate_instances(spec).names
        # ["pfn1", "pfn1-sub[0]", "pfn1-sub[0,1]", "pfn1-sub[1,2]", "pfn1-sub[0,1,2]"]
    """
    builder = _CorpusBuilder(spec)
    arities = list(spec.pfn_arities) + ([4] if spec.include_p4 and 4 not in spec.pfn_arities else [])
    for m in arities:
        try:
            builder.add(_pfn(m, spec), f"build_pfn_algebra(m={m})")
        except ResourceError as e:
            builder.corpus.notes.append(str(e))
    if spec.mirrors:
        for m in spec.pfn_arities:
            builder.add(_pfn(m, spec).mirror(), f"build_pfn_algebra(m={m}).mirror()")
    for n in spec.rect_sizes:
        for hand in HANDS:
            builder.add(rectangular_band(n, hand), f"rectangular_band(n={n}, hand={hand})")
    for n in spec.chain_sizes:
        builder.add(chain(n), f"chain(n={n})")
    for k in spec.boolean_ranks:
        builder.add(boolean_lattice(k), f"boolean_lattice(k={k})")

    factors = [(label, _factor(label, spec)) for label in spec.product_factors]
    for i, (la, a) in enumerate(factors):
        for lb, b in factors[i:]:
            if a.size * b.size > spec.max_product_size:
                builder.corpus.notes.append(f"{la}*{lb}: produit > {spec.max_product_size}, ignoré")
                continue
            builder.add(direct_product(a, b), f"direct_product({la}, {lb})")

    if spec.closure_arity is not None:
        source = _pfn(spec.closure_arity, spec)
        tau = pfn_tau(spec.closure_arity)
        for k in range(1, spec.closure_max_generators + 1):
            for gens in combinations(range(source.size), k):
                sub, _ = subalgebra_closure(source, gens)
                builder.add(sub, f"subalgebra_closure({source.name}, {list(gens)})")
        if spec.closure_with_imp:
            for k in range(1, spec.closure_max_generators + 1):
                for gens in combinations(range(source.size), k):
                    full = sorted(set(gens) | {0, tau})
                    label = f"{source.name}-himp[{','.join(map(str, gens))}]"
                    sub, _ = subalgebra_closure(source, full, include_imp=True, name=label)
                    builder.add(sub, f"subalgebra_closure({source.name}, {full}, include_imp=True)")

    if spec.random_count:
        rng = np.random.default_rng(spec.seed)
        source = _pfn(spec.closure_arity or 3, spec)
        tau = pfn_tau(spec.closure_arity or 3)
        for i in range(spec.random_count):
            k = int(rng.integers(1, 5))
            gens = sorted({int(g) for g in rng.choice(source.size, size=k, replace=False)} | {0, tau})
            label = f"rand{spec.seed}-{i}"
            sub, _ = subalgebra_closure(source, gens, include_imp=True, name=label)
            builder.add(sub, f"random closure seed={spec.seed} draw={i} generators={gens}")

    logger.info("corpus: %d instance(s), %d note(s)", len(builder.corpus), len(builder.corpus.notes))
    return builder.corpus


def load_instances(paths: Iterable[str]) -> Corpus:
    """Corpus lu depuis des fichiers "skl1" (nom du fichier si l'algèbre n'en porte pas)."""
    corpus = Corpus()
    for path in paths:
        alg = read_algebra(path)
        name = alg.name or str(path)
        if name in corpus.provenance:
            name = f"{name}@{path}"
        corpus.instances.append((name, alg.renamed(name)))
        corpus.provenance[name] = f"file:{path}"
    return corpus


def mutation_corpus(m: int = 1, max_elements: int = 81) -> Corpus:
    """Une instance par mutation d'une case de P(m)."""
    corpus = Corpus()
    for name, alg in pfn_mutants(m, max_elements):
        corpus.instances.append((name, alg))
        corpus.provenance[name] = f"pfn_mutants(m={m})"
    return corpus
