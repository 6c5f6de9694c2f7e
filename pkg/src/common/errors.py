#!/usr/bin/env python3
"""
Hiérarchie d'exceptions partagée par tous les modules du projet.

Les violations de lois ne sont jamais levées : elles sont rendues sous forme
de CheckReport / TheoremResult. Les exceptions ci-dessous signalent des entrées
mal formées, des hypothèses non satisfaites ou un budget dépassé, et la CLI
les traduit en codes de sortie stables.
"""


class SkewlabError(Exception):
    """Erreur de base du projet."""


class StructuralError(SkewlabError, ValueError):
    """Table mal formée (forme, entrée hors de [0, n), table manquante)."""


class ParseError(StructuralError):
    """Erreur de lecture d'un fichier d'algèbre, positionnée (ligne, colonne)."""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<string>"):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.source = source

    def __str__(self) -> str:
        return f"{self.source}:{self.line}:{self.column}: {self.message}"


class DomainError(SkewlabError, ValueError):
    """Les hypothèses d'une opération ne sont pas satisfaites."""


class InconsistencyError(SkewlabError):
    """Une propriété obligatoire d'un skew lattice validé est violée."""


class ResourceError(SkewlabError):
    """Budget configuré dépassé (taille du support, énumération)."""
