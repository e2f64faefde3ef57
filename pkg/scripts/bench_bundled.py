#!/usr/bin/env python3
"""Run the bundled model suite with every learner and write bench.csv.

Thin driver over the command-line benchmark; keeps a stable artifact name
so result tables can be diffed across changes.
"""

import sys
from pathlib import Path

from rmclearn.cli import main

if __name__ == "__main__":
    out = Path(__file__).resolve().parent.parent / "bench.csv"
    sys.exit(main(["bench", "--csv", str(out), *sys.argv[1:]]))
