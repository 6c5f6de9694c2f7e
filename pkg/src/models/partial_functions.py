#!/usr/bin/env python3
"""
Modèle des fonctions partielles de A = {0, ..., m-1} vers {0, 1}.

Opérations :
- f ∧ g : restriction de f à dom f ∩ dom g
- f ∨ g : g complétée par f hors de dom g (surcharge)
- f → g : g complétée par τ hors de dom f ∪ dom g, τ la fonction constante 1

Codage : chaque fonction est un vecteur de m chiffres (0 = indéfini,
1 = valeur 0, 2 = valeur 1) ; son indice vaut Σ chiffre_i · 3^i. L'indice 0
est la fonction vide, l'indice 3^m - 1 est τ.

Deux chemins indépendants :
- build_pfn_algebra : tables vectorisées sur la matrice des chiffres
- SetFormulaOracle : dictionnaires {point: valeur}, formule par formule,
  utilisé comme vérité de référence dans les tests
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Tuple

import numpy as np

from src.algebra.core import FiniteAlgebra
from src.common.errors import DomainError, ResourceError

logger = logging.getLogger(__name__)

UNDEFINED = 0
PartialFunction = Dict[int, int]


@dataclass(frozen=True)
class PartialFunctionCode:
    """Fonction partielle codée : arité, chiffres et indice."""

    arity: int
    digits: Tuple[int, ...]
    index: int

    @classmethod
    def from_index(cls, index: int, arity: int) -> "PartialFunctionCode":
        if not 0 <= index < 3 ** arity:
            raise DomainError(f"indice {index} hors de [0, {3 ** arity})")
        digits, rest = [], index
        for _ in range(arity):
            digits.append(rest % 3)
            rest //= 3
        return cls(arity, tuple(digits), index)

    @classmethod
    def from_digits(cls, digits) -> "PartialFunctionCode":
        digits = tuple(int(d) for d in digits)
        if any(d not in (0, 1, 2) for d in digits):
            raise DomainError(f"chiffres hors de {{0, 1, 2}}: {digits}")
        return cls(len(digits), digits, sum(d * 3 ** i for i, d in enumerate(digits)))

    @property
    def domain(self) -> frozenset:
        return frozenset(i for i, d in enumerate(self.digits) if d != UNDEFINED)

    def as_function(self) -> PartialFunction:
        return {i: d - 1 for i, d in enumerate(self.digits) if d != UNDEFINED}

    def __str__(self) -> str:
        if not self.domain:
            return "∅"
        return "{" + ", ".join(f"{p}↦{v}" for p, v in sorted(self.as_function().items())) + "}"


def digit_matrix(m: int) -> np.ndarray:
    """(3^m, m) : ligne i = chiffres de l'indice i."""
    ar = np.arange(3 ** m)[:, None]
    return (ar // (3 ** np.arange(m))[None, :]) % 3


def pfn_tau(m: int) -> int:
    return 3 ** m - 1


def build_pfn_algebra(m: int, max_elements: int = 81) -> FiniteAlgebra:
    """
    Construit P(m) avec restriction, surcharge et implication.

    Args:
        m (int): taille de A (m ≥ 1)
        max_elements (int): budget sur le nombre d'éléments 3^m

    Returns:
        FiniteAlgebra: 3^m éléments, zero = 0 (fonction vide), top_t = 3^m - 1

    Raises:
        DomainError: m < 1
        ResourceError: 3^m dépasse max_elements

    Example:
        alg = build_pfn_algebra(2)
        alg.size, alg.top_t     # (9, 8)
        str(PartialFunctionCode.from_index(7, 2))   # "{0↦0, 1↦1}"
    """
    if m < 1:
        raise DomainError(f"arité {m} < 1")
    size = 3 ** m
    if size > max_elements:
        raise ResourceError(f"P({m}) a {size} éléments, budget {max_elements}")
    D = digit_matrix(m)
    F, G = D[:, None, :], D[None, :, :]
    weights = 3 ** np.arange(m)

    def encode(digits: np.ndarray) -> np.ndarray:
        return (digits * weights).sum(axis=-1)

    meet = encode(np.where(G != UNDEFINED, F, UNDEFINED))
    join = encode(np.where(G != UNDEFINED, G, F))
    imp = encode(np.where(G != UNDEFINED, G, np.where(F == UNDEFINED, 2, UNDEFINED)))
    logger.debug("P(%d): %d éléments", m, size)
    return FiniteAlgebra(size, meet, join, imp, zero=0, top_t=pfn_tau(m), name=f"pfn{m}")


def pfn_mutants(m: int = 1, max_elements: int = 81) -> Iterator[Tuple[str, FiniteAlgebra]]:
    """Toutes les mutations d'une seule case de meet, join ou imp de P(m)."""
    base = build_pfn_algebra(m, max_elements)
    n = base.size
    for label in ("meet", "join", "imp"):
        table = getattr(base, label)
        for x, y in product(range(n), repeat=2):
            for value in range(n):
                if value == table[x, y]:
                    continue
                mutated = table.copy()
                mutated[x, y] = value
                alg = FiniteAlgebra(
                    n,
                    mutated if label == "meet" else base.meet,
                    mutated if label == "join" else base.join,
                    mutated if label == "imp" else base.imp,
                    zero=base.zero,
                    top_t=base.top_t,
                    name=f"{base.name}-{label}[{x},{y}]={value}",
                )
                yield alg.name, alg


class SetFormulaOracle:
    """
    Évaluation directe des formules ensemblistes sur des dictionnaires.

    Example:
        >>> o = SetFormulaOracle(1)
        >>> o.imp({}, {})
        {0: 1}
    """

    def __init__(self, m: int):
        if m < 1:
            raise DomainError(f"arité {m} < 1")
        self.m = m
        self.points = range(m)

    @property
    def tau(self) -> PartialFunction:
        return {p: 1 for p in self.points}

    def decode(self, index: int) -> PartialFunction:
        out, rest = {}, index
        for p in self.points:
            digit = rest % 3
            rest //= 3
            if digit:
                out[p] = digit - 1
        return out

    def encode(self, f: PartialFunction) -> int:
        return sum((v + 1) * 3 ** p for p, v in f.items())

    def functions(self) -> List[PartialFunction]:
        return [self.decode(i) for i in range(3 ** self.m)]

    def restrict(self, f: PartialFunction, domain) -> PartialFunction:
        return {p: v for p, v in f.items() if p in domain}

    def meet(self, f: PartialFunction, g: PartialFunction) -> PartialFunction:
        return self.restrict(f, set(f) & set(g))

    def join(self, f: PartialFunction, g: PartialFunction) -> PartialFunction:
        out = self.restrict(f, set(f) - set(g))
        out.update(g)
        return out

    def imp(self, f: PartialFunction, g: PartialFunction) -> PartialFunction:
        out = self.restrict(self.tau, set(self.points) - (set(f) | set(g)))
        out.update(g)
        return out

    def table(self, op: str) -> np.ndarray:
        fn = getattr(self, op)
        fs = self.functions()
        return np.array([[self.encode(fn(f, g)) for g in fs] for f in fs], dtype=np.int64)

    def nh_reductions(self, f: PartialFunction, g: PartialFunction, h: PartialFunction) -> Dict[str, PartialFunction]:
        """
        Forme réduite commune aux deux membres de chaque axiome NH.

        nh_local_reduction : g ∪ τ|A−(dom f ∪ dom g)
        nh_reflexive       : f ∪ τ|A−dom f
        nh_sandwich        : f|dom f ∩ dom g
        nh_absorbs         : g
        nh_meet_split      : τ|(A−dom f) ∪ (dom g ∩ dom h)
        """
        points = set(self.points)
        return {
            "nh_local_reduction": self.imp(f, g),
            "nh_reflexive": self.join(self.restrict(self.tau, points - set(f)), f),
            "nh_sandwich": self.restrict(f, set(f) & set(g)),
            "nh_absorbs": dict(g),
            "nh_meet_split": self.restrict(self.tau, (points - set(f)) | (set(g) & set(h))),
        }
