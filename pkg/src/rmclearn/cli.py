"""Command-line driver: verification runs, pure learning runs, benchmarks."""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .automata import Alphabet, determinize, minimize, shortest_symmetric_difference
from .learner import ALGORITHMS, ExactTeacher, LearnerStats, run_learner
from .modelio import ModelSyntaxError, export_dot, parse_model, parse_regex_text
from .regex import RegexCompileError, compile_regex
from .teacher import Limits, RmcProblem, Safe, Unsafe, Verdict, run_prover

EXIT_SAFE = 0
EXIT_UNSAFE = 1
EXIT_UNKNOWN = 2
EXIT_INPUT_ERROR = 3


def bundled_models_dir() -> Path:
    return Path(__file__).parent / "models"


@dataclass(frozen=True)
class RunReport:
    """One prover run, ready for printing: everything but ms is deterministic."""

    learner: str
    verdict: Verdict
    stats: LearnerStats
    ms: float

    @property
    def kind(self) -> str:
        if isinstance(self.verdict, Safe):
            return "SAFE"
        if isinstance(self.verdict, Unsafe):
            return "UNSAFE"
        return "UNKNOWN"

    @property
    def exit_code(self) -> int:
        return {"SAFE": EXIT_SAFE, "UNSAFE": EXIT_UNSAFE, "UNKNOWN": EXIT_UNKNOWN}[self.kind]

    @property
    def invariant_size(self) -> tuple[int, int] | None:
        if isinstance(self.verdict, Safe):
            inv = self.verdict.invariant
            return inv.n_states, len(inv.transitions)
        return None


def prove(problem: RmcProblem, learner: str, limits: Limits) -> RunReport:
    started = time.perf_counter()
    verdict, stats = run_prover(problem, learner, limits)
    ms = (time.perf_counter() - started) * 1000.0
    return RunReport(learner, verdict, stats, ms)


def _fail(message: str) -> int:
    print(message, file=sys.stderr)
    return EXIT_INPUT_ERROR


def _load_model(path_text: str) -> RmcProblem | None:
    try:
        text = Path(path_text).read_text(encoding="utf-8")
    except OSError as e:
        print(f"{path_text}: {e}", file=sys.stderr)
        return None
    try:
        return parse_model(text)
    except (ModelSyntaxError, ValueError) as e:
        print(f"{path_text}: {e}", file=sys.stderr)
        return None


def cmd_check(args) -> int:
    problem = _load_model(args.model)
    if problem is None:
        return EXIT_INPUT_ERROR
    limits = Limits(timeout_s=args.timeout, max_states=args.max_states)
    report = prove(problem, args.learner, limits)
    print(report.kind)
    print(f"learner: {report.learner}")
    if isinstance(report.verdict, Safe):
        states, transitions = report.invariant_size
        print(f"invariant: {states} states, {transitions} transitions")
        if args.emit_invariant:
            Path(args.emit_invariant).write_text(
                export_dot(report.verdict.invariant), encoding="utf-8"
            )
            print(f"invariant written to {args.emit_invariant}")
    elif isinstance(report.verdict, Unsafe):
        print(f"witness: {problem.alphabet.format_word(report.verdict.witness)}")
    else:
        print(f"reason: {report.verdict.reason}")
    if args.stats:
        stats = report.stats
        print(f"membership queries: {stats.membership_queries}")
        print(f"equivalence queries: {stats.equivalence_queries}")
        print(f"iterations: {stats.iterations}")
        print(f"time: {report.ms:.0f} ms")
    return report.exit_code


def cmd_learn(args) -> int:
    symbols = tuple(args.alphabet.replace(",", " ").split())
    try:
        alphabet = Alphabet(symbols)
    except ValueError as e:
        return _fail(f"bad alphabet: {e}")
    try:
        regex = parse_regex_text(args.target, alphabet)
        target = minimize(determinize(compile_regex(regex, alphabet)))
    except (ModelSyntaxError, RegexCompileError, ValueError) as e:
        return _fail(f"bad target expression: {e}")
    teacher = ExactTeacher(target)
    run = run_learner(args.learner, teacher, max_iterations=10_000)
    assert run.hypothesis is not None and run.exhausted is None
    if shortest_symmetric_difference(run.hypothesis, target) is not None:
        raise RuntimeError("learned automaton does not match the target language")
    learned = minimize(determinize(run.hypothesis))
    print(f"learned DFA over {{{', '.join(symbols)}}}: {learned.n_states} states")
    print(f"initial: {learned.initial}")
    print("finals: " + (" ".join(str(f) for f in sorted(learned.finals)) or "-"))
    for s, a, t in sorted(learned.transitions):
        print(f"  {s} -{alphabet.symbols[a]}-> {t}")
    print(f"hypothesis states: {run.stats.final_states}")
    print(f"membership queries: {run.stats.membership_queries}")
    print(f"equivalence queries: {run.stats.equivalence_queries}")
    return EXIT_SAFE


def cmd_bench(args) -> int:
    directory = Path(args.dir)
    if not directory.is_dir():
        return _fail(f"{directory}: not a directory")
    learners = args.learners.split(",") if args.learners else list(ALGORITHMS)
    for learner in learners:
        if learner not in ALGORITHMS:
            return _fail(f"unknown learner {learner!r}")
    header = ["model", "learner", "verdict", "states", "transitions", "mem_q", "equ_q", "ms"]
    rows: list[list[str]] = []
    for path in sorted(directory.glob("*.rmc")):
        try:
            problem = parse_model(path.read_text(encoding="utf-8"))
        except (ModelSyntaxError, ValueError):
            for learner in learners:
                rows.append([path.stem, learner, "UNKNOWN", "-", "-", "-", "-", "-"])
            continue
        for learner in learners:
            try:
                report = prove(problem, learner, Limits(timeout_s=args.timeout))
            except Exception:
                rows.append([path.stem, learner, "UNKNOWN", "-", "-", "-", "-", "-"])
                continue
            size = report.invariant_size
            rows.append(
                [
                    path.stem,
                    learner,
                    report.kind,
                    str(size[0]) if size else "-",
                    str(size[1]) if size else "-",
                    str(report.stats.membership_queries),
                    str(report.stats.equivalence_queries),
                    f"{report.ms:.0f}",
                ]
            )
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i])
              for i in range(len(header))]
    print("  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip())
    for r in rows:
        print("  ".join(r[i].ljust(widths[i]) for i in range(len(header))).rstrip())
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(header)
    writer.writerows(rows)
    if args.csv:
        Path(args.csv).write_text(buffer.getvalue(), encoding="utf-8")
        print(f"csv written to {args.csv}")
    else:
        print()
        print(buffer.getvalue(), end="")
    return EXIT_SAFE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmclearn",
        description="Prove safety of parameterised protocols by learning a "
        "regular inductive invariant, or report a reachable bad configuration.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="verify a model file")
    check.add_argument("model", help="path to a .rmc model file")
    check.add_argument("--learner", choices=ALGORITHMS, default="rs")
    check.add_argument("--timeout", type=float, default=60.0,
                       help="wall-clock budget in seconds (0 disables)")
    check.add_argument("--max-states", type=int, default=10_000)
    check.add_argument("--emit-invariant", metavar="PATH.dot",
                       help="write the invariant as GraphViz text when SAFE")
    check.add_argument("--stats", action="store_true",
                       help="print query counts and timing")
    check.add_argument("--seedless-deterministic", action="store_true",
                       help="accepted for compatibility; runs never use "
                       "randomness, so output is always deterministic")

    learn = sub.add_parser("learn", help="learn a regular language from an "
                           "expression with an exact teacher")
    learn.add_argument("target", help="expression, e.g. '(T + N)* T'")
    learn.add_argument("alphabet", help="symbols, e.g. 'T N' or 'T,N'")
    learn.add_argument("--learner", choices=ALGORITHMS, default="rs")

    bench = sub.add_parser("bench", help="run a model directory with all learners")
    bench.add_argument("--dir", default=str(bundled_models_dir()),
                       help="model directory (default: bundled models)")
    bench.add_argument("--learners", default="",
                       help="comma-separated subset (default: all)")
    bench.add_argument("--timeout", type=float, default=60.0)
    bench.add_argument("--csv", metavar="PATH",
                       help="write CSV here instead of stdout")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check":
        return cmd_check(args)
    if args.command == "learn":
        return cmd_learn(args)
    return cmd_bench(args)


if __name__ == "__main__":
    sys.exit(main())
