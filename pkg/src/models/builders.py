#!/usr/bin/env python3
"""
Constructeurs d'instances pour le corpus de vérification.

- bandes rectangulaires (gauche / droite)
- chaînes, algèbres de Boole, treillis donnés par leur ordre
- produits directs, fermetures de sous-algèbres
- ajout d'un plus petit et d'un plus grand élément (somme ordinale)
- énumération exhaustive des petites tables bornées (style Mace4)
"""

import logging
from itertools import product
from typing import Iterable, Iterator, Optional, Tuple

import numpy as np

from src.algebra.core import FiniteAlgebra, induced_subalgebra, is_skew_lattice
from src.common.errors import DomainError, ResourceError, StructuralError

logger = logging.getLogger(__name__)

HANDS = ("left", "right")


def check_size(size: int, max_elements: Optional[int], what: str) -> None:
    if max_elements is not None and size > max_elements:
        raise ResourceError(f"{what}: {size} éléments, budget {max_elements}")


def rectangular_band(n: int, hand: str = "left") -> FiniteAlgebra:
    """
    Bande rectangulaire à n éléments.

    left : x∧y = x, x∨y = y ; right : l'inverse. Une seule D-classe.
    """
    if n < 1:
        raise DomainError(f"taille {n} < 1")
    if hand not in HANDS:
        raise DomainError(f"latéralité inconnue: {hand}")
    ar = np.arange(n)
    rows = np.broadcast_to(ar[:, None], (n, n))
    cols = np.broadcast_to(ar[None, :], (n, n))
    meet, join = (rows, cols) if hand == "left" else (cols, rows)
    zero = 0 if n == 1 else None
    return FiniteAlgebra(n, meet, join, zero=zero, top_t=0, name=f"rect-{hand}-{n}")


def lattice_from_leq(leq, name: str = "") -> FiniteAlgebra:
    """
    Treillis fini à partir de sa matrice d'ordre (leq[x, y] : x ≤ y).

    Raises:
        StructuralError: la relation n'est pas un ordre de treillis
    """
    leq = np.asarray(leq, dtype=bool)
    n = len(leq)
    if leq.shape != (n, n) or not leq[np.arange(n), np.arange(n)].all():
        raise StructuralError("matrice d'ordre carrée et réflexive attendue")

    def extreme(bounds: np.ndarray, order: np.ndarray) -> int:
        # plus petit élément de `bounds` pour `order`
        cands = np.flatnonzero(bounds)
        for c in cands:
            if order[c, cands].all():
                return int(c)
        raise StructuralError("paire sans borne : pas un treillis")

    meet = np.empty((n, n), dtype=np.int64)
    join = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            join[x, y] = extreme(leq[x] & leq[y], leq)
            meet[x, y] = extreme(leq[:, x] & leq[:, y], leq.T)
    zero = int(np.flatnonzero(leq.all(axis=1))[0])
    top = int(np.flatnonzero(leq.all(axis=0))[0])
    return FiniteAlgebra(n, meet, join, zero=zero, top_t=top, name=name or f"lattice{n}")


def chain(n: int) -> FiniteAlgebra:
    """Chaîne 0 < 1 < ... < n-1."""
    if n < 1:
        raise DomainError(f"taille {n} < 1")
    ar = np.arange(n)
    return FiniteAlgebra(
        n,
        np.minimum(ar[:, None], ar[None, :]),
        np.maximum(ar[:, None], ar[None, :]),
        zero=0,
        top_t=n - 1,
        name=f"chain{n}",
    )


def boolean_lattice(k: int) -> FiniteAlgebra:
    """Parties d'un ensemble à k éléments, codées en masques de bits."""
    if k < 0:
        raise DomainError(f"rang {k} < 0")
    ar = np.arange(2 ** k)
    return FiniteAlgebra(
        2 ** k,
        ar[:, None] & ar[None, :],
        ar[:, None] | ar[None, :],
        zero=0,
        top_t=2 ** k - 1,
        name=f"bool{k}",
    )


def direct_product(a: FiniteAlgebra, b: FiniteAlgebra, max_elements: Optional[int] = None) -> FiniteAlgebra:
    """
    Produit direct ; le couple (i, j) a l'indice i * |b| + j.

    imp, zero et top_t ne sont propagés que s'ils existent des deux côtés.
    """
    na, nb = a.size, b.size
    check_size(na * nb, max_elements, f"{a.name}*{b.name}")
    left = np.repeat(np.arange(na), nb)
    right = np.tile(np.arange(nb), na)

    def combine(ta: np.ndarray, tb: np.ndarray) -> np.ndarray:
        return ta[left[:, None], left[None, :]] * nb + tb[right[:, None], right[None, :]]

    imp = combine(a.imp, b.imp) if a.imp is not None and b.imp is not None else None
    zero = a.zero * nb + b.zero if a.zero is not None and b.zero is not None else None
    top = a.top_t * nb + b.top_t if a.top_t is not None and b.top_t is not None else None
    return FiniteAlgebra(
        na * nb,
        combine(a.meet, b.meet),
        combine(a.join, b.join),
        imp,
        zero=zero,
        top_t=top,
        name=f"{a.name}*{b.name}",
    )


def subalgebra_closure(
    alg: FiniteAlgebra,
    generators: Iterable[int],
    include_imp: bool = False,
    name: Optional[str] = None,
) -> Tuple[FiniteAlgebra, Tuple[int, ...]]:
    """
    Plus petit sous-ensemble contenant les générateurs et clos pour ∧, ∨
    (et → si include_imp et si l'algèbre porte une table →).

    Returns:
        (FiniteAlgebra, embedding): sous-algèbre réindexée et indices d'origine

    Raises:
        DomainError: aucun générateur
        StructuralError: générateur hors du support
    """
    gens = sorted({int(g) for g in generators})
    if not gens:
        raise DomainError("au moins un générateur est requis")
    if gens[0] < 0 or gens[-1] >= alg.size:
        raise StructuralError(f"générateur hors de [0, {alg.size})")
    ops = [alg.meet, alg.join]
    if include_imp and alg.imp is not None:
        ops.append(alg.imp)
    inside = np.zeros(alg.size, dtype=bool)
    inside[gens] = True
    while True:
        idx = np.flatnonzero(inside)
        grown = inside.copy()
        for table in ops:
            grown[table[np.ix_(idx, idx)].ravel()] = True
        if (grown == inside).all():
            break
        inside = grown
    label = name or f"{alg.name}-sub[{','.join(map(str, gens))}]"
    return induced_subalgebra(alg, np.flatnonzero(inside), keep_imp=include_imp, name=label)


def adjoin_bounds(alg: FiniteAlgebra, name: Optional[str] = None) -> FiniteAlgebra:
    """
    Somme ordinale ⊥ ⊕ S ⊕ ⊤ : ⊥ = 0, les éléments de S décalés de 1, ⊤ = n+1.
    """
    n = alg.size + 2
    ar = np.arange(n)
    meet = np.empty((n, n), dtype=np.int64)
    join = np.empty((n, n), dtype=np.int64)
    meet[1:-1, 1:-1] = alg.meet + 1
    join[1:-1, 1:-1] = alg.join + 1
    meet[-1, :], meet[:, -1] = ar, ar
    meet[0, :], meet[:, 0] = 0, 0
    join[0, :], join[:, 0] = ar, ar
    join[-1, :], join[:, -1] = n - 1, n - 1
    return FiniteAlgebra(n, meet, join, zero=0, top_t=n - 1, name=name or f"bounded({alg.name})")


def bounded_extensions(size: int) -> Iterator[FiniteAlgebra]:
    """
    Toutes les tables de skew lattice à `size` éléments (2 ≤ size ≤ 4) où 0
    est un zéro et size-1 un sommet bilatère ; seules les cases entre éléments
    intermédiaires sont libres.

    Raises:
        DomainError: taille hors de [2, 4] (explosion combinatoire au-delà)
    """
    if not 2 <= size <= 4:
        raise DomainError(f"taille {size} hors de [2, 4]")
    top = size - 1
    inner = range(1, top)
    free = [(x, y) for x in inner for y in inner if x != y]
    ar = np.arange(size)
    base_meet = np.empty((size, size), dtype=np.int64)
    base_join = np.empty((size, size), dtype=np.int64)
    base_meet[:, :] = np.where(ar[:, None] == ar[None, :], ar[:, None], 0)
    base_join[:, :] = np.where(ar[:, None] == ar[None, :], ar[:, None], top)
    base_meet[top, :], base_meet[:, top] = ar, ar
    base_meet[0, :], base_meet[:, 0] = 0, 0
    base_join[0, :], base_join[:, 0] = ar, ar
    base_join[top, :], base_join[:, top] = top, top
    count = 0
    for meet_vals in product(range(size), repeat=len(free)):
        for join_vals in product(range(size), repeat=len(free)):
            meet, join = base_meet.copy(), base_join.copy()
            for (x, y), mv, jv in zip(free, meet_vals, join_vals):
                meet[x, y], join[x, y] = mv, jv
            alg = FiniteAlgebra(size, meet, join, zero=0, top_t=top, name=f"bext{size}-{count}")
            if is_skew_lattice(alg):
                count += 1
                yield alg
    logger.debug("bounded_extensions(%d): %d table(s)", size, count)
