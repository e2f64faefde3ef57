#!/usr/bin/env python3
"""Prove every bundled model and export the learned invariants as GraphViz.

Writes one .dot file per SAFE model into invariants/ (or the directory given
as the first argument) and prints a one-line summary per model.
"""

import sys
from pathlib import Path

from rmclearn.cli import bundled_models_dir
from rmclearn.modelio import export_dot, parse_model
from rmclearn.teacher import Safe, Unsafe, check_invariant, run_prover


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("invariants")
    out_dir.mkdir(parents=True, exist_ok=True)
    for path in sorted(bundled_models_dir().glob("*.rmc")):
        problem = parse_model(path.read_text(encoding="utf-8"))
        verdict, stats = run_prover(problem)
        if isinstance(verdict, Safe):
            assert check_invariant(problem, verdict.invariant).ok
            target = out_dir / f"{path.stem}.dot"
            target.write_text(export_dot(verdict.invariant), encoding="utf-8")
            print(
                f"{path.stem}: SAFE, invariant "
                f"{verdict.invariant.n_states} states / "
                f"{len(verdict.invariant.transitions)} transitions -> {target}"
            )
        elif isinstance(verdict, Unsafe):
            print(f"{path.stem}: UNSAFE, witness "
                  f"{problem.alphabet.format_word(verdict.witness)}")
        else:
            print(f"{path.stem}: UNKNOWN ({verdict.reason})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
