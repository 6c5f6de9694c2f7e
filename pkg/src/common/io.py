#!/usr/bin/env python3
"""
Module utilitaire pour les entrées/sorties robustes.

Ce module regroupe :
- la création sécurisée de répertoires
- la lecture de texte avec repli d'encodage (UTF-8 puis Latin-1)
- le format texte "skl1" des fichiers d'algèbre (lecture positionnée,
  écriture canonique)
- l'écriture des rapports CSV avec pandas

Format "skl1" (une directive par ligne, '#' commente jusqu'à la fin de ligne) :

    skl1
    name pfn1
    size 3
    zero 0
    top 2
    meet
    0 0 0
    ...
    join
    ...
    imp
    ...

Les tables sont écrites ligne par ligne : la ligne x, colonne y contient op(x, y).
`size` doit précéder les tables ; `meet` et `join` sont obligatoires.
"""

import os
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.algebra.core import FiniteAlgebra
from src.common.errors import ParseError, StructuralError

FORMAT_HEADER = "skl1"
TABLE_KEYS = ("meet", "join", "imp")
SCALAR_KEYS = ("size", "zero", "top")

Token = Tuple[str, int]  # (texte, colonne 1-based)


def ensure_dir(path: str) -> None:
    """
    Crée un répertoire s'il n'existe pas déjà.

    Args:
        path (str): chemin du répertoire à créer (ignoré si vide)
    """
    if path:
        os.makedirs(path, exist_ok=True)


def read_text_safe(path: str) -> str:
    """
    Lecture de texte avec essai successif des encodages courants.

    Raises:
        OSError: fichier absent ou illisible
    """
    for enc in ("utf-8", "latin-1"):
        try:
            with open(path, encoding=enc) as fh:
                return fh.read()
        except UnicodeDecodeError:
            continue
    with open(path, encoding="utf-8", errors="replace") as fh:
        return fh.read()


def write_csv_safe(df: pd.DataFrame, path: str, index: bool = False) -> None:
    """
    Écriture d'un DataFrame en CSV UTF-8 (répertoire parent créé au besoin).

    Example:
        write_csv_safe(results_frame(results), "reports/theorems.csv")
    """
    ensure_dir(os.path.dirname(path))
    df.to_csv(path, index=index, encoding="utf-8")


def _tokenize(line: str) -> List[Token]:
    # Découpe sur les blancs en conservant la colonne de chaque mot
    tokens: List[Token] = []
    col = 0
    while col < len(line):
        if line[col].isspace():
            col += 1
            continue
        start = col
        while col < len(line) and not line[col].isspace():
            col += 1
        tokens.append((line[start:col], start + 1))
    return tokens


def _int_token(token: Token, lineno: int, source: str, what: str) -> int:
    text, col = token
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{what}: entier attendu, lu '{text}'", lineno, col, source) from None


def parse_algebra(text: str, source: str = "<string>") -> FiniteAlgebra:
    """
    Analyse un document "skl1" et construit la FiniteAlgebra correspondante.

    Args:
        text (str): contenu du fichier
        source (str): nom affiché dans les messages d'erreur

    Returns:
        FiniteAlgebra: algèbre structurellement valide (les axiomes ne sont pas vérifiés ici)

    Raises:
        ParseError: en-tête absent, directive inconnue ou dupliquée, ligne de table
            de mauvaise longueur, entrée hors de [0, size), table obligatoire manquante
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            lines.append((lineno, body))

    if not lines:
        raise ParseError(f"en-tête '{FORMAT_HEADER}' absent (document vide)", 1, 1, source)
    lineno, body = lines[0]
    header = _tokenize(body)
    if [t for t, _ in header] != [FORMAT_HEADER]:
        raise ParseError(f"en-tête '{FORMAT_HEADER}' attendu", lineno, header[0][1], source)

    name: Optional[str] = None
    scalars: Dict[str, int] = {}
    tables: Dict[str, np.ndarray] = {}
    pos = 1
    while pos < len(lines):
        lineno, body = lines[pos]
        tokens = _tokenize(body)
        key, col = tokens[0]
        pos += 1

        if key == "name":
            if name is not None:
                raise ParseError("directive 'name' dupliquée", lineno, col, source)
            name = body.strip()[len("name"):].strip()
            continue

        if key in SCALAR_KEYS:
            if key in scalars:
                raise ParseError(f"directive '{key}' dupliquée", lineno, col, source)
            if len(tokens) != 2:
                raise ParseError(f"'{key}' attend exactement un entier", lineno, col, source)
            value = _int_token(tokens[1], lineno, source, key)
            if key == "size":
                if value < 1:
                    raise ParseError("size doit être strictement positif", lineno, tokens[1][1], source)
            elif "size" in scalars and not 0 <= value < scalars["size"]:
                raise ParseError(f"{key} hors de [0, {scalars['size']})", lineno, tokens[1][1], source)
            scalars[key] = value
            continue

        if key in TABLE_KEYS:
            if key in tables:
                raise ParseError(f"table '{key}' dupliquée", lineno, col, source)
            if "size" not in scalars:
                raise ParseError(f"'size' doit précéder la table '{key}'", lineno, col, source)
            if len(tokens) != 1:
                raise ParseError(f"la directive '{key}' est seule sur sa ligne", lineno, tokens[1][1], source)
            n = scalars["size"]
            rows = []
            for r in range(n):
                if pos >= len(lines):
                    last = lines[-1][0]
                    raise ParseError(f"table '{key}': {n - r} ligne(s) manquante(s)", last + 1, 1, source)
                row_no, row_body = lines[pos]
                pos += 1
                cells = _tokenize(row_body)
                if len(cells) != n:
                    raise ParseError(
                        f"table '{key}' ligne {r}: {n} entiers attendus, {len(cells)} lus",
                        row_no, cells[0][1], source,
                    )
                row = []
                for cell in cells:
                    value = _int_token(cell, row_no, source, key)
                    if not 0 <= value < n:
                        raise ParseError(f"table '{key}': entrée {value} hors de [0, {n})", row_no, cell[1], source)
                    row.append(value)
                rows.append(row)
            tables[key] = np.array(rows, dtype=np.int64)
            continue

        raise ParseError(f"directive inconnue '{key}'", lineno, col, source)

    end = lines[-1][0] + 1
    for required in ("size", "meet", "join"):
        if required not in scalars and required not in tables:
            raise ParseError(f"'{required}' manquant", end, 1, source)
    # zero/top lus avant size ne sont bornés qu'ici
    for key in ("zero", "top"):
        if key in scalars and not 0 <= scalars[key] < scalars["size"]:
            raise ParseError(f"{key} hors de [0, {scalars['size']})", end, 1, source)

    try:
        return FiniteAlgebra(
            size=scalars["size"],
            meet=tables["meet"],
            join=tables["join"],
            imp=tables.get("imp"),
            zero=scalars.get("zero"),
            top_t=scalars.get("top"),
            name=name or "",
        )
    except StructuralError as e:
        raise ParseError(str(e), end, 1, source) from e


def _rows(table: np.ndarray) -> List[str]:
    return [" ".join(str(int(v)) for v in row) for row in table]


def format_algebra(alg: FiniteAlgebra) -> str:
    """Écriture canonique : en-tête, name, size, zero, top, meet, join, imp."""
    out = [FORMAT_HEADER]
    if alg.name:
        out.append(f"name {alg.name}")
    out.append(f"size {alg.size}")
    if alg.zero is not None:
        out.append(f"zero {alg.zero}")
    if alg.top_t is not None:
        out.append(f"top {alg.top_t}")
    for key in TABLE_KEYS:
        table = getattr(alg, key)
        if table is not None:
            out.append(key)
            out.extend(_rows(table))
    return "\n".join(out) + "\n"


def read_algebra(path: str) -> FiniteAlgebra:
    """Lit un fichier "skl1" (OSError si illisible, ParseError si mal formé)."""
    return parse_algebra(read_text_safe(path), source=str(path))


def write_algebra(alg: FiniteAlgebra, path: str) -> None:
    ensure_dir(os.path.dirname(str(path)))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_algebra(alg))
