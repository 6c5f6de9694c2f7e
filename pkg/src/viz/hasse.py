#!/usr/bin/env python3
"""
Diagramme de Hasse de l'ordre naturel ≤, coloré par D-classe.

Les éléments sont placés par niveau : la hauteur d'un élément est celle de sa
D-classe dans le quotient S/D (longueur de la plus longue chaîne de classes
sous elle), de sorte que chaque D-classe rectangulaire apparaît sur une
même ligne. Les arêtes sont les couvertures de ≤.

Usage:
    python -m src.cli draw data/models/pfn2.skl --out reports/figures/pfn2.png
"""

import logging
import os
from collections import Counter
from typing import Dict, Optional

import matplotlib.pyplot as plt
import numpy as np

from src.algebra.core import FiniteAlgebra, compute_orders, covers, d_partition
from src.common.io import ensure_dir

logger = logging.getLogger(__name__)

plt.switch_backend("Agg")


def class_heights(alg: FiniteAlgebra) -> np.ndarray:
    """Hauteur de chaque D-classe dans S/D."""
    part = d_partition(alg)
    q_cov = covers(compute_orders(part.quotient))
    k = len(part.classes)
    height = np.zeros(k, dtype=np.int64)
    # les indices de classe ne suivent pas l'ordre : relaxation jusqu'au point fixe
    for _ in range(k):
        lower, upper = np.nonzero(q_cov)
        updated = height.copy()
        np.maximum.at(updated, upper, height[lower] + 1)
        if np.array_equal(updated, height):
            break
        height = updated
    return height


def hasse_layout(alg: FiniteAlgebra) -> Dict[int, tuple]:
    """Position (x, y) de chaque élément ; centrage par niveau, ordre des indices."""
    part = d_partition(alg)
    heights = class_heights(alg)[part.class_of]
    positions = {}
    for level in np.unique(heights):
        row = np.flatnonzero(heights == level)
        offsets = np.arange(len(row)) - (len(row) - 1) / 2.0
        for element, dx in zip(row, offsets):
            positions[int(element)] = (float(dx), float(level))
    return positions


def draw_hasse(alg: FiniteAlgebra, out_png: str, title: Optional[str] = None) -> str:
    """
    Trace le diagramme et l'enregistre en PNG.

    Args:
        alg (FiniteAlgebra): skew lattice validé
        out_png (str): fichier de sortie (répertoires créés au besoin)
        title (str): titre ; par défaut le nom de l'algèbre

    Returns:
        str: chemin du fichier écrit
    """
    ensure_dir(os.path.dirname(out_png))
    part = d_partition(alg)
    cov = covers(compute_orders(alg))
    pos = hasse_layout(alg)
    widest = max(Counter(y for _, y in pos.values()).values())
    width = max(6.0, 0.8 * widest)
    fig, ax = plt.subplots(1, 1, figsize=(width, 6))

    for lower, upper in zip(*np.nonzero(cov)):
        (x0, y0), (x1, y1) = pos[int(lower)], pos[int(upper)]
        ax.plot([x0, x1], [y0, y1], color="grey", linewidth=1, zorder=1)

    cmap = plt.get_cmap("tab20")
    for element, (x, y) in pos.items():
        cls = int(part.class_of[element])
        ax.scatter([x], [y], s=420, color=cmap(cls % 20), edgecolors="black", zorder=2)
        ax.annotate(str(element), (x, y), ha="center", va="center", fontsize=9, zorder=3)

    ax.set_title(title or alg.name or "skew lattice")
    ax.set_axis_off()
    plt.tight_layout()
    plt.savefig(out_png, dpi=150, bbox_inches="tight")
    plt.close(fig)
    logger.info("diagramme écrit: %s", out_png)
    return out_png
