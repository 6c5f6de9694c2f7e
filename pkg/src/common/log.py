#!/usr/bin/env python3
"""
Configuration du logging pour les scripts en ligne de commande.

Les modules de bibliothèque utilisent `logging.getLogger(__name__)`; seuls les
points d'entrée appellent `setup_logging`. Le format reprend le préfixe entre
crochets utilisé par les scripts du pipeline (`[run_pipeline] ...`).
"""

import logging
import os
import sys
from typing import Optional

LOG_FORMAT = "[%(name)s] %(levelname)s %(message)s"


def setup_logging(level: Optional[str] = None) -> None:
    """
    Installe un handler unique sur stderr.

    Args:
        level (str): niveau explicite; sinon SKEWLAB_LOG_LEVEL, sinon WARNING
    """
    level = (level or os.environ.get("SKEWLAB_LOG_LEVEL", "WARNING")).upper()
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(getattr(logging, level, logging.WARNING))
