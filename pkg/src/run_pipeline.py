#!/usr/bin/env python3
"""
Pipeline principal : génération des modèles de référence puis vérification.

Étapes :
1. MODEL : écrit data/models/pfn{1,2,3}.skl (algèbres de fonctions partielles)
2. VALIDATE : vérifie les axiomes de skew lattice sur chaque fichier
3. VERIFY : harnais de vérification sur le corpus par défaut, export CSV

Usage:
    python -m src.run_pipeline

Variables d'environnement:
    SKEWLAB_ARITIES: arités à générer (par défaut: "1 2 3")
    SKEWLAB_JOBS: nombre de workers joblib pour la vérification (par défaut: 1)
"""

import os
import shlex
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
MODELS_DIR = ROOT / "data" / "models"
REPORT_CSV = ROOT / "reports" / "theorems.csv"


def cli(*args: str) -> list:
    return [sys.executable, "-m", "src.cli", *args]


def main() -> None:
    arities = shlex.split(os.environ.get("SKEWLAB_ARITIES", "1 2 3"))
    jobs = os.environ.get("SKEWLAB_JOBS", "1").strip() or "1"
    MODELS_DIR.mkdir(parents=True, exist_ok=True)
    env = dict(os.environ, PYTHONPATH=str(ROOT))

    try:
        paths = []
        for m in arities:
            out = MODELS_DIR / f"pfn{m}.skl"
            cmd = cli("model", "pfn", "--m", m, "--out", str(out))
            print("[run_pipeline] MODEL:", " ".join(cmd), flush=True)
            subprocess.check_call(cmd, cwd=ROOT, env=env)
            paths.append(str(out))

        for path in paths:
            cmd = cli("validate", path)
            print("[run_pipeline] VALIDATE:", " ".join(cmd), flush=True)
            subprocess.check_call(cmd, cwd=ROOT, env=env)

        cmd = cli("verify", "--jobs", jobs, "--report-csv", str(REPORT_CSV))
        print("[run_pipeline] VERIFY:", " ".join(cmd), flush=True)
        subprocess.check_call(cmd, cwd=ROOT, env=env)

        print("[run_pipeline] Pipeline terminé.")
    except subprocess.CalledProcessError as e:
        print(f"[run_pipeline] Échec (code {e.returncode}): {' '.join(e.cmd)}", file=sys.stderr)
        sys.exit(e.returncode)
    except OSError as e:
        print(f"[run_pipeline] Erreur d'exécution: {e}", file=sys.stderr)
        sys.exit(3)


if __name__ == "__main__":
    main()
