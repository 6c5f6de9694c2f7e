#!/usr/bin/env python3
"""
Noyau : représentation par tables des skew lattices finis.

Les éléments sont les indices denses 0..n-1 ; toute la sémantique est portée
par les tables d'opérations (numpy, int64, en lecture seule). La ligne x,
colonne y d'une table contient op(x, y).

Ce module fournit :
- FiniteAlgebra : support, tables ∧/∨/→, zéro et t distingué optionnels
- validate_skew_lattice : idempotence, associativité et les quatre absorptions
- compute_orders : ordre naturel ≤ et préordre naturel ≼
- d_partition : relation de Green D et image treillis maximale S/D
- down_set : u↓ avec le rapport "est-ce un treillis"
- vérifications annexes (régularité, lemme du sandwich sur ≼) et recherche
  d'isomorphisme entre treillis finis

Toutes les vérifications sont exhaustives et vectorisées ; la première
violation en ordre lexicographique sert de témoin.
"""

import hashlib
import logging
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.common.errors import DomainError, InconsistencyError, StructuralError

logger = logging.getLogger(__name__)

Witness = Tuple[int, ...]


def _as_table(label: str, table, size: int) -> np.ndarray:
    arr = np.asarray(table)
    if arr.shape != (size, size):
        raise StructuralError(f"table {label}: forme {arr.shape}, attendu ({size}, {size})")
    if arr.dtype == bool or not np.issubdtype(arr.dtype, np.integer):
        raise StructuralError(f"table {label}: entrées entières attendues (dtype {arr.dtype})")
    bad = np.argwhere((arr < 0) | (arr >= size))
    if len(bad):
        i, j = (int(v) for v in bad[0])
        raise StructuralError(f"table {label}: entrée ({i}, {j}) = {int(arr[i, j])} hors de [0, {size})")
    out = np.array(arr, dtype=np.int64, copy=True, order="C")
    out.flags.writeable = False
    return out


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """
    Algèbre finie donnée par ses tables.

    Invariants structurels vérifiés à la construction : tables carrées n×n,
    entrées dans [0, n), indices zero/top_t dans [0, n). Les invariants
    algébriques (zéro absorbant, t dans la D-classe du haut) sont rapportés
    par validate_skew_lattice.
    """

    size: int
    meet: np.ndarray
    join: np.ndarray
    imp: Optional[np.ndarray] = None
    zero: Optional[int] = None
    top_t: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        if isinstance(self.size, bool) or not isinstance(self.size, (int, np.integer)) or self.size < 1:
            raise StructuralError(f"taille invalide: {self.size!r}")
        n = int(self.size)
        object.__setattr__(self, "size", n)
        object.__setattr__(self, "meet", _as_table("meet", self.meet, n))
        object.__setattr__(self, "join", _as_table("join", self.join, n))
        if self.imp is not None:
            object.__setattr__(self, "imp", _as_table("imp", self.imp, n))
        for label in ("zero", "top_t"):
            value = getattr(self, label)
            if value is None:
                continue
            if not 0 <= int(value) < n:
                raise StructuralError(f"{label} = {value} hors de [0, {n})")
            object.__setattr__(self, label, int(value))

    def table_hash(self) -> str:
        """Empreinte canonique : taille puis meet, join, imp en ordre ligne (sentinelle si imp absent)."""
        h = hashlib.sha256()
        h.update(f"skl:{self.size};".encode())
        h.update(self.meet.tobytes())
        h.update(self.join.tobytes())
        h.update(self.imp.tobytes() if self.imp is not None else b"<no-imp>")
        return h.hexdigest()

    @cached_property
    def _identity(self) -> Tuple[str, Optional[int], Optional[int]]:
        return (self.table_hash(), self.zero, self.top_t)

    def __hash__(self) -> int:
        return hash(self._identity)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self._identity == other._identity

    def __repr__(self) -> str:
        label = self.name or "<anonyme>"
        extra = "" if self.imp is None else ", imp"
        return f"FiniteAlgebra({label}, size={self.size}{extra}, zero={self.zero}, top_t={self.top_t})"

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.meet, self.meet.T) and np.array_equal(self.join, self.join.T))

    def mirror(self, name: Optional[str] = None) -> "FiniteAlgebra":
        """Algèbre miroir (arguments échangés) ; la table d'implication est abandonnée."""
        return FiniteAlgebra(
            size=self.size,
            meet=self.meet.T,
            join=self.join.T,
            imp=None,
            zero=self.zero,
            top_t=self.top_t,
            name=name if name is not None else f"{self.name}-mirror",
        )

    def with_implication(self, imp, top_t: Optional[int] = None, name: Optional[str] = None) -> "FiniteAlgebra":
        return replace(
            self,
            imp=imp,
            top_t=self.top_t if top_t is None else top_t,
            name=self.name if name is None else name,
        )

    def renamed(self, name: str) -> "FiniteAlgebra":
        return replace(self, name=name)


@dataclass(frozen=True)
class CheckReport:
    """Résultat d'une loi : témoin présent si et seulement si la loi échoue."""

    name: str
    passed: bool
    witness: Optional[Witness] = None

    def __post_init__(self):
        if self.passed and self.witness is not None:
            raise ValueError(f"{self.name}: témoin fourni pour une loi satisfaite")
        if not self.passed and self.witness is None:
            raise ValueError(f"{self.name}: échec sans témoin")

    def __str__(self) -> str:
        if self.passed:
            return f"[PASS] {self.name}"
        return f"[FAIL] {self.name} witness={self.witness}"


def first_violation(ok) -> Optional[Witness]:
    """Premier indice (ordre ligne) où le masque vaut False, ou None."""
    bad = np.argwhere(~np.asarray(ok, dtype=bool))
    if len(bad) == 0:
        return None
    return tuple(int(i) for i in bad[0])


def law_report(name: str, ok, labels: Optional[Sequence[int]] = None) -> CheckReport:
    """
    Construit un CheckReport à partir d'un masque booléen de la loi.

    Args:
        name (str): identifiant de la loi
        ok: masque (une dimension par variable liée)
        labels: renumérotation des indices du témoin (sous-ensemble du support)
    """
    witness = first_violation(ok)
    if witness is not None and labels is not None:
        witness = tuple(int(labels[i]) for i in witness)
    return CheckReport(name, witness is None, witness)


def combine(name: str, reports: Iterable[CheckReport]) -> CheckReport:
    """Conjonction : échoue avec le témoin du premier rapport en échec."""
    for report in reports:
        if not report.passed:
            return CheckReport(name, False, report.witness)
    return CheckReport(name, True)


def failed(reports: Iterable[CheckReport]) -> List[CheckReport]:
    return [r for r in reports if not r.passed]


def per_element_law(name: str, n: int, law: Callable[[int], np.ndarray]) -> CheckReport:
    """Loi à trois variables ou plus évaluée tranche par tranche sur la première variable."""
    for x in range(n):
        witness = first_violation(law(x))
        if witness is not None:
            return CheckReport(name, False, (x, *witness))
    return CheckReport(name, True)


def _grids(n: int):
    ar = np.arange(n)
    return ar, ar[:, None], ar[None, :]


def _cubes(n: int):
    ar = np.arange(n)
    return ar[:, None, None], ar[None, :, None], ar[None, None, :]


def validate_skew_lattice(alg: FiniteAlgebra) -> List[CheckReport]:
    """
    Vérifie exhaustivement les axiomes de skew lattice.

    Un rapport par loi : idempotence de ∧ et ∨, associativité de ∧ et ∨
    (tous les triplets), x∧(x∨y)=x, x∨(x∧y)=x, (x∧y)∨y=y, (x∨y)∧y=y.
    Si zero ou top_t sont présents, leurs invariants sont rapportés aussi.

    Returns:
        List[CheckReport]: tous les rapports (pas d'arrêt au premier échec)

    Example:
        >>> all(r.passed for r in validate_skew_lattice(build_pfn_algebra(1)))
        True
    """
    M, J = alg.meet, alg.join
    ar, x, y = _grids(alg.size)
    X, Y, Z = _cubes(alg.size)
    reports = [
        law_report("idempotent_meet", M[ar, ar] == ar),
        law_report("idempotent_join", J[ar, ar] == ar),
        law_report("associative_meet", M[M[X, Y], Z] == M[X, M[Y, Z]]),
        law_report("associative_join", J[J[X, Y], Z] == J[X, J[Y, Z]]),
        law_report("absorption_meet_join", M[x, J[x, y]] == x),
        law_report("absorption_join_meet", J[x, M[x, y]] == x),
        law_report("absorption_meet_then_join", J[M[x, y], y] == y),
        law_report("absorption_join_then_meet", M[J[x, y], y] == y),
    ]
    if alg.zero is not None:
        z = alg.zero
        reports.append(law_report("zero_absorbing", (M[ar, z] == z) & (M[z, ar] == z)))
    if alg.top_t is not None:
        t = alg.top_t
        reports.append(law_report("top_t_in_top_class", M[M[ar, t], ar] == ar))
    bad = failed(reports)
    if bad:
        logger.debug("%s: %d loi(s) en échec, première %s", alg.name, len(bad), bad[0])
    return reports


def is_skew_lattice(alg: FiniteAlgebra) -> bool:
    return not failed(validate_skew_lattice(alg))


@dataclass(frozen=True)
class OrderRelations:
    """Ordre naturel ≤ (leq) et préordre naturel ≼ (preceq), matrices booléennes."""

    leq: np.ndarray
    preceq: np.ndarray

    @property
    def d_relation(self) -> np.ndarray:
        return self.preceq & self.preceq.T

    def below(self, u: int) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.leq[:, u]))


@lru_cache(maxsize=256)
def compute_orders(alg: FiniteAlgebra) -> OrderRelations:
    """
    Calcule ≤ et ≼ en vérifiant les équivalences x∧y=x ⇔ x∨y=y.

    Raises:
        InconsistencyError: équivalence violée, ≤ non antisymétrique ou ≼ non
            transitif (l'entrée n'était pas un skew lattice)
    """
    M, J = alg.meet, alg.join
    n = alg.size
    ar, x, y = _grids(n)
    meet_left = M == x     # x∧y = x
    meet_right = M == y    # x∧y = y
    join_right = J == y    # x∨y = y
    join_left = J == x     # x∨y = x
    coherent = (meet_left == join_right) & (meet_right == join_left)
    witness = first_violation(coherent)
    if witness is not None:
        raise InconsistencyError(f"{alg.name}: équivalence x∧y=x ⇔ x∨y=y violée en {witness}")

    leq = meet_left & meet_right.T
    if not np.array_equal(leq, join_right & join_left.T):
        raise InconsistencyError(f"{alg.name}: les deux caractérisations de ≤ divergent")
    preceq = M[M, x] == x

    if not leq[ar, ar].all() or not preceq[ar, ar].all():
        raise InconsistencyError(f"{alg.name}: ≤ ou ≼ non réflexif")
    witness = first_violation(~(leq & leq.T) | (x == y))
    if witness is not None:
        raise InconsistencyError(f"{alg.name}: ≤ non antisymétrique en {witness}")
    witness = first_violation(~leq | preceq)
    if witness is not None:
        raise InconsistencyError(f"{alg.name}: ≤ non inclus dans ≼ en {witness}")
    composed = (preceq.astype(np.int64) @ preceq.astype(np.int64)) > 0
    witness = first_violation(~composed | preceq)
    if witness is not None:
        raise InconsistencyError(f"{alg.name}: ≼ non transitif en {witness}")
    return OrderRelations(_frozen(leq), _frozen(preceq))


def covers(orders: OrderRelations) -> np.ndarray:
    """Relation de couverture de ≤ : x ⋖ y si x < y sans élément strictement entre."""
    lt = orders.leq & ~np.eye(len(orders.leq), dtype=bool)
    between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
    return lt & ~between


@dataclass(frozen=True)
class DClassPartition:
    """Partition en D-classes et treillis quotient S/D (classes numérotées par plus petit élément)."""

    class_of: np.ndarray
    classes: Tuple[Tuple[int, ...], ...]
    quotient: FiniteAlgebra

    def same_class(self, x: int, y: int) -> bool:
        return bool(self.class_of[x] == self.class_of[y])

    def members_of(self, x: int) -> Tuple[int, ...]:
        return self.classes[int(self.class_of[x])]


def _absorbing(table: np.ndarray) -> Optional[int]:
    """Élément c tel que op(c, ·) = op(·, c) = c, ou None."""
    for c in range(len(table)):
        if (table[c, :] == c).all() and (table[:, c] == c).all():
            return c
    return None


@lru_cache(maxsize=256)
def d_partition(alg: FiniteAlgebra) -> DClassPartition:
    """
    Calcule les D-classes (x D y ⇔ x ≼ y et y ≼ x) et le quotient S/D.

    Vérifie que le quotient est bien défini et commutatif et que chaque classe
    est rectangulaire (x∧y = y∨x).

    Raises:
        InconsistencyError: l'une de ces propriétés échoue
    """
    M, J = alg.meet, alg.join
    n = alg.size
    D = compute_orders(alg).d_relation
    class_of = np.full(n, -1, dtype=np.int64)
    classes: List[Tuple[int, ...]] = []
    for x in range(n):
        if class_of[x] >= 0:
            continue
        members = np.flatnonzero(D[x])
        if (class_of[members] >= 0).any():
            raise InconsistencyError(f"{alg.name}: D n'est pas une équivalence en {x}")
        class_of[members] = len(classes)
        classes.append(tuple(int(m) for m in members))

    reps = np.array([c[0] for c in classes])
    q_meet = class_of[M[np.ix_(reps, reps)]]
    q_join = class_of[J[np.ix_(reps, reps)]]
    C = class_of
    for label, table, q in (("meet", M, q_meet), ("join", J, q_join)):
        witness = first_violation(C[table] == q[C[:, None], C[None, :]])
        if witness is not None:
            raise InconsistencyError(f"{alg.name}: quotient {label} mal défini en {witness}")
        if not np.array_equal(q, q.T):
            raise InconsistencyError(f"{alg.name}: quotient {label} non commutatif")
    same = C[:, None] == C[None, :]
    witness = first_violation(~same | (M == J.T))
    if witness is not None:
        raise InconsistencyError(f"{alg.name}: classe non rectangulaire en {witness}")

    k = len(classes)
    bottom_class = _absorbing(q_meet)
    top_class = _absorbing(q_join)
    quotient = FiniteAlgebra(
        size=k,
        meet=q_meet,
        join=q_join,
        zero=bottom_class,
        top_t=top_class,
        name=f"{alg.name}/D",
    )
    logger.debug("%s: %d D-classe(s)", alg.name, k)
    return DClassPartition(_frozen(class_of), tuple(classes), quotient)


@dataclass(frozen=True)
class DownSet:
    """u↓ = {x | x ≤ u} et le rapport "∧, ∨ restreints forment un treillis"."""

    u: int
    members: Tuple[int, ...]
    report: CheckReport


def down_set(alg: FiniteAlgebra, u: int) -> DownSet:
    """
    Calcule u↓ et vérifie que ∧ et ∨ y sont internes et commutatifs.

    Example:
        P(1), u = a↦1 (indice 2) -> members (0, 2), report passé
    """
    if not 0 <= u < alg.size:
        raise DomainError(f"élément {u} hors du support")
    members = compute_orders(alg).below(u)
    idx = np.array(members)
    sub_m = alg.meet[np.ix_(idx, idx)]
    sub_j = alg.join[np.ix_(idx, idx)]
    ok = (sub_m == sub_m.T) & (sub_j == sub_j.T) & np.isin(sub_m, idx) & np.isin(sub_j, idx)
    return DownSet(u, members, law_report(f"down_set_lattice[{u}]", ok, labels=members))


def bottom(alg: FiniteAlgebra) -> Optional[int]:
    """Le zéro déclaré, sinon l'élément absorbant pour ∧ s'il existe."""
    if alg.zero is not None:
        return alg.zero
    return _absorbing(alg.meet)


def two_sided_top(alg: FiniteAlgebra) -> Optional[int]:
    """Élément 1 avec 1∧x = x = x∧1 et 1∨x = 1 = x∨1, s'il existe."""
    ar = np.arange(alg.size)
    M, J = alg.meet, alg.join
    for o in range(alg.size):
        if (M[o, :] == ar).all() and (M[:, o] == ar).all() and (J[o, :] == o).all() and (J[:, o] == o).all():
            return o
    return None


def induced_subalgebra(
    alg: FiniteAlgebra,
    members: Iterable[int],
    keep_imp: bool = True,
    name: Optional[str] = None,
) -> Tuple[FiniteAlgebra, Tuple[int, ...]]:
    """
    Réindexe un sous-ensemble clos en algèbre autonome.

    La table → est conservée si keep_imp et si le sous-ensemble est clos pour →.
    zero et top_t sont conservés s'ils appartiennent au sous-ensemble.

    Returns:
        (FiniteAlgebra, embedding): embedding[i] = indice d'origine du i-ème élément

    Raises:
        StructuralError: sous-ensemble vide, hors support ou non clos pour ∧/∨
    """
    idx = np.array(sorted({int(m) for m in members}), dtype=np.int64)
    if len(idx) == 0:
        raise StructuralError("sous-ensemble vide")
    if idx[0] < 0 or idx[-1] >= alg.size:
        raise StructuralError("sous-ensemble hors du support")
    pos = np.full(alg.size, -1, dtype=np.int64)
    pos[idx] = np.arange(len(idx))
    grid = np.ix_(idx, idx)
    sub_m = pos[alg.meet[grid]]
    sub_j = pos[alg.join[grid]]
    if (sub_m < 0).any() or (sub_j < 0).any():
        raise StructuralError("sous-ensemble non clos pour ∧ et ∨")
    sub_i = None
    if keep_imp and alg.imp is not None:
        candidate = pos[alg.imp[grid]]
        if (candidate >= 0).all():
            sub_i = candidate
    embedding = tuple(int(i) for i in idx)

    def _mapped(value: Optional[int]) -> Optional[int]:
        return None if value is None or pos[value] < 0 else int(pos[value])

    sub = FiniteAlgebra(
        size=len(idx),
        meet=sub_m,
        join=sub_j,
        imp=sub_i,
        zero=_mapped(alg.zero),
        top_t=_mapped(alg.top_t),
        name=name if name is not None else f"{alg.name}|{len(idx)}",
    )
    return sub, embedding


def check_regularity(alg: FiniteAlgebra) -> List[CheckReport]:
    """x∧y∧x∧z∧x = x∧y∧z∧x et la forme duale pour ∨ ; témoins (x, y, z)."""
    M, J = alg.meet, alg.join
    ar = np.arange(alg.size)

    def meet_law(x: int) -> np.ndarray:
        xyx = M[M[x, ar], x]
        lhs = M[M[xyx[:, None], ar[None, :]], x]
        rhs = M[M[M[x, ar][:, None], ar[None, :]], x]
        return lhs == rhs

    def join_law(x: int) -> np.ndarray:
        xyx = J[J[x, ar], x]
        lhs = J[J[xyx[:, None], ar[None, :]], x]
        rhs = J[J[J[x, ar][:, None], ar[None, :]], x]
        return lhs == rhs

    return [
        per_element_law("regular_meet", alg.size, meet_law),
        per_element_law("regular_join", alg.size, join_law),
    ]


def check_preorder_sandwich(alg: FiniteAlgebra) -> List[CheckReport]:
    """
    x∧v∧y = x∧y dès que x, y ≼ v ; x∨u∨y = x∨y dès que u ≼ x, y.

    Témoins (x, y, v) et (x, y, u).
    """
    M, J = alg.meet, alg.join
    P = compute_orders(alg).preceq
    X, Y, V = _cubes(alg.size)
    meet_ok = ~(P[X, V] & P[Y, V]) | (M[M[X, V], Y] == M[X, Y])
    join_ok = ~(P[V, X] & P[V, Y]) | (J[J[X, V], Y] == J[X, Y])
    return [law_report("sandwich_meet", meet_ok), law_report("sandwich_join", join_ok)]


def _join_irreducibles(leq: np.ndarray, cov: np.ndarray) -> List[int]:
    return [int(j) for j in range(len(leq)) if cov[:, j].sum() == 1]


def lattice_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra) -> Optional[Dict[int, int]]:
    """
    Cherche un isomorphisme de treillis a -> b en appariant les sup-irréductibles.

    Chaque élément est le sup des sup-irréductibles sous lui ; une bijection
    des irréductibles qui respecte l'ordre s'étend donc en un unique candidat,
    vérifié ensuite sur les deux tables.

    Returns:
        dict ou None si les treillis ne sont pas isomorphes

    Raises:
        DomainError: l'une des entrées n'est pas commutative
    """
    if not a.is_commutative() or not b.is_commutative():
        raise DomainError("lattice_isomorphism attend deux treillis")
    if a.size != b.size:
        return None
    oa, ob = compute_orders(a), compute_orders(b)
    ca, cb = covers(oa), covers(ob)
    ja, jb = _join_irreducibles(oa.leq, ca), _join_irreducibles(ob.leq, cb)
    if len(ja) != len(jb):
        return None
    bot_a, bot_b = bottom(a), bottom(b)
    if bot_a is None or bot_b is None:
        return None

    def signature(leq: np.ndarray, j: int, irr: List[int]) -> Tuple[int, int]:
        return int(leq[irr, j].sum()), int(leq[j, :].sum())

    sig_b = {j: signature(ob.leq, j, jb) for j in jb}
    candidates = [[j2 for j2 in jb if sig_b[j2] == signature(oa.leq, j, ja)] for j in ja]

    def extend(assigned: List[int]) -> Optional[Dict[int, int]]:
        i = len(assigned)
        if i == len(ja):
            return _extend_from_irreducibles(a, b, oa, dict(zip(ja, assigned)), bot_a, bot_b)
        for cand in candidates[i]:
            if cand in assigned:
                continue
            # l'ordre entre irréductibles doit être préservé dans les deux sens
            if all(oa.leq[ja[k], ja[i]] == ob.leq[assigned[k], cand] and
                   oa.leq[ja[i], ja[k]] == ob.leq[cand, assigned[k]] for k in range(i)):
                found = extend(assigned + [cand])
                if found is not None:
                    return found
        return None

    return extend([])


def _extend_from_irreducibles(a, b, oa, irr_map, bot_a, bot_b) -> Optional[Dict[int, int]]:
    mapping: Dict[int, int] = {}
    for x in range(a.size):
        image = bot_b
        for j, j2 in irr_map.items():
            if oa.leq[j, x]:
                image = int(b.join[image, j2])
        mapping[x] = image
    mapping[bot_a] = bot_b
    if len(set(mapping.values())) != a.size:
        return None
    f = np.array([mapping[x] for x in range(a.size)])
    if np.array_equal(b.meet[f[:, None], f[None, :]], f[a.meet]) and np.array_equal(
        b.join[f[:, None], f[None, :]], f[a.join]
    ):
        return mapping
    return None
