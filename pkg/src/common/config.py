#!/usr/bin/env python3
"""
Chargement de la configuration YAML du projet.

Ordre de résolution du fichier :
1. chemin explicite (option --config)
2. variable d'environnement SKEWLAB_CONFIG
3. config/skewlab.yaml à la racine du dépôt

Les clés absentes prennent les valeurs par défaut ci-dessous ; un fichier
absent donne la configuration par défaut complète.
"""

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml

from src.common.errors import StructuralError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "config" / "skewlab.yaml"

# Corpus par défaut : modèles P(m), bandes rectangulaires, chaînes, algèbres
# de Boole, produits deux à deux et sous-algèbres engendrées dans P(2).
DEFAULT_CORPUS: Mapping[str, Any] = {
    "pfn_arities": [1, 2, 3],
    "include_p4": False,
    "mirrors": True,
    "rect_sizes": [1, 2, 3],
    "chain_sizes": [1, 2, 3, 4, 5, 6, 7, 8],
    "boolean_ranks": [0, 1, 2, 3],
    "product_factors": ["pfn1", "chain2", "chain3", "rect-left-2", "rect-right-2", "bool2", "pfn2"],
    "max_product_size": 81,
    "closure_arity": 2,
    "closure_max_generators": 3,
    "closure_with_imp": True,
    "random_count": 0,
    "seed": None,
    "max_instances": 500,
}


@dataclass(frozen=True)
class Config:
    """Paramètres d'exécution (budgets, harnais de vérification, corpus)."""

    max_elements: int = 81
    subset_budget: int = 131072
    cap: Optional[int] = 12
    frame_limit: int = 27
    jobs: int = 1
    corpus: Mapping[str, Any] = field(default_factory=lambda: dict(DEFAULT_CORPUS))

    @classmethod
    def from_mapping(cls, data: Optional[Mapping[str, Any]]) -> "Config":
        data = data or {}
        if not isinstance(data, Mapping):
            raise StructuralError("la configuration doit être un dictionnaire YAML")
        budget = data.get("budget") or {}
        verify = data.get("verify") or {}
        corpus = data.get("corpus")
        return cls(
            max_elements=int(budget.get("max_elements", cls.max_elements)),
            subset_budget=int(budget.get("subset_budget", cls.subset_budget)),
            cap=verify.get("cap", cls.cap),
            frame_limit=int(verify.get("frame_limit", cls.frame_limit)),
            jobs=int(verify.get("jobs", cls.jobs)),
            corpus=dict(DEFAULT_CORPUS) if corpus is None else dict(corpus),
        )


def load_config(path: Optional[str] = None) -> Config:
    """
    Lit la configuration YAML et retourne un Config figé.

    Args:
        path (str): chemin explicite, prioritaire sur SKEWLAB_CONFIG

    Returns:
        Config: configuration avec valeurs par défaut pour les clés absentes

    Raises:
        StructuralError: si le YAML n'est pas un dictionnaire
    """
    candidate = path or os.environ.get("SKEWLAB_CONFIG")
    resolved = Path(candidate) if candidate else DEFAULT_CONFIG_PATH
    if not resolved.exists():
        if candidate:
            # Un chemin demandé explicitement doit exister
            raise FileNotFoundError(str(resolved))
        logger.info("pas de fichier de configuration, valeurs par défaut")
        return Config()
    with open(resolved, encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    logger.info("configuration chargée depuis %s", resolved)
    return Config.from_mapping(data)
