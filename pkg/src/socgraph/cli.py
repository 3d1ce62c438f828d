"""Command line interface.

Exit codes: 0 success, 2 input or format error, 3 budget exceeded,
4 internal invariant violated.  JSON output is the stable machine
interface; TSV is for reading by eye.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, TextIO

from .correlations import parse_instrument
from .digraph import canonical_form, parse_graph
from .enumeration import (
    classify_graph,
    empty_summary,
    summary_line,
    survey,
    update_summary,
)
from .errors import (
    BudgetExceededError,
    GraphFormatError,
    InvariantError,
    TableFormatError,
)
from .games import (
    GameSpec,
    build_violation_strategy,
    eligible_cycle,
    game_report,
    play,
    random_strategy_scan,
)
from .model import (
    ModelTableView,
    build_model,
    predicted_fixed_point,
    verify_consistency,
)
from .process import DEFAULT_BUDGET, parse_experiment

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="socgraph",
        description=(
            "Classify directed graphs as causal structures, verify their "
            "deterministic selection processes, and evaluate guessing games."
        ),
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_format(sp: argparse.ArgumentParser) -> None:
        sp.add_argument(
            "--format", choices=("json", "tsv"), default="json",
            help="output format (default json)",
        )

    sp = sub.add_parser("analyze", help="classify one graph")
    sp.add_argument("graph", help="graph file, or - for stdin")
    sp.add_argument("--verify", action="store_true",
                    help="also verify the selection process")
    sp.add_argument("--games", action="store_true",
                    help="also play the cycle game when one applies")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    add_format(sp)

    sp = sub.add_parser("survey", help="classify every graph class of size n")
    sp.add_argument("n", type=int)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--games", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--allow-self-loops", action="store_true")
    sp.add_argument("--include-six", action="store_true",
                    help="required for n = 6 (a documented long run)")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--output", help="write records here instead of stdout")
    sp.add_argument("--resume",
                    help="skip canonical forms already present in this record file")
    add_format(sp)

    sp = sub.add_parser("verify", help="verify one graph's selection process")
    sp.add_argument("graph")
    sp.add_argument("--force", action="store_true",
                    help="verify even when the graph is not admissible")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    add_format(sp)

    sp = sub.add_parser("game", help="play the guessing game on a graph cycle")
    sp.add_argument("graph")
    sp.add_argument("--parties", required=True,
                    help="comma-separated guess set, e.g. 0,1,2")
    sp.add_argument("--instrument",
                    help="instrument file overriding the built-in strategy")
    sp.add_argument("--scan", type=int, default=0,
                    help="additionally scan this many random strategies")
    sp.add_argument("--seed", type=int, default=0)
    add_format(sp)

    sp = sub.add_parser("fixed-point",
                        help="predicted fixed point of an experiment")
    sp.add_argument("graph")
    sp.add_argument("mu", help="experiment file: one line of outputs per party")
    add_format(sp)

    return p


def _emit(obj: dict[str, Any], fmt: str, tsv: str, out: TextIO) -> None:
    if fmt == "json":
        out.write(json.dumps(obj, separators=(",", ":")) + "\n")
    else:
        out.write(tsv + "\n")


def _cmd_analyze(args: argparse.Namespace) -> int:
    g = parse_graph(_read(args.graph))
    rec = classify_graph(
        g, verify=args.verify, games=args.games, budget=args.budget
    )
    line = rec.json_line() if args.format == "json" else rec.tsv_line()
    sys.stdout.write(line + "\n")
    return EXIT_OK


def _load_resume_canons(path: str, summary: dict[str, int]) -> set[str]:
    canons: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            try:
                d = json.loads(line)
            except json.JSONDecodeError:
                raise GraphFormatError(
                    f"resume file holds a non-JSON line: {line[:60]!r}"
                ) from None
            canons.add(d["canon"])
            summary["classes"] += 1
            summary["soc"] += bool(d.get("soc"))
            summary["chordless"] += bool(d.get("chordless_soc"))
            summary["noncausal"] += d.get("noncausal_cycle") is not None
            verdict = d.get("verdict")
            if verdict in ("consistent", "counterexample", "budget_exceeded"):
                summary[verdict] += 1
    return canons


def _cmd_survey(args: argparse.Namespace) -> int:
    if args.n >= 6 and not args.include_six:
        raise ValueError("surveys of six or more nodes require --include-six")
    summary = empty_summary()
    skip: set[str] = set()
    if args.resume:
        skip = _load_resume_canons(args.resume, summary)
    records = survey(
        args.n,
        verify=args.verify,
        games=args.games,
        jobs=args.jobs,
        allow_self_loops=args.allow_self_loops,
        budget=args.budget,
        skip_canons=skip,
    )
    out = sys.stdout
    close = False
    if args.output:
        out = open(args.output, "w", encoding="utf-8")
        close = True
    try:
        for rec in records:
            line = rec.json_line() if args.format == "json" else rec.tsv_line()
            out.write(line + "\n")
            update_summary(summary, rec)
    finally:
        if close:
            out.close()
    sys.stderr.write(summary_line(summary, args.verify) + "\n")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    g = parse_graph(_read(args.graph))
    res = verify_consistency(g, force=args.force, budget=args.budget)
    obj: dict[str, Any] = {
        "canon": canonical_form(g),
        "n": g.n,
        "soc": res.soc,
        "status": res.status,
    }
    tsv_fields = [obj["canon"], res.status]
    if res.status == "counterexample":
        obj["experiment_index"] = res.experiment_index
        obj["reason"] = res.reason
        obj["counterexample"] = res.counterexample_json(g)
        tsv_fields.append(res.reason or "")
    _emit(obj, args.format, "\t".join(tsv_fields), sys.stdout)
    return EXIT_OK


def _cmd_game(args: argparse.Namespace) -> int:
    g = parse_graph(_read(args.graph))
    try:
        parties = tuple(int(t) for t in args.parties.split(","))
    except ValueError:
        raise ValueError(f"bad guess set {args.parties!r}") from None
    spec = GameSpec(g.n, parties)
    c = eligible_cycle(g, spec.parties)
    if c is None:
        raise ValueError(
            "no cycle on those parties has its common parents on the cycle"
        )
    w = ModelTableView(build_model(g))
    if args.instrument:
        inst = parse_instrument(
            _read(args.instrument),
            input_sizes=w.alphabet.inputs,
            output_sizes=w.alphabet.outputs,
            setting_size=spec.setting_size,
        )
        strat = build_violation_strategy(g, c, spec)
        win = play(w, inst, spec)
        report = game_report(g, spec, strat, win)
        report["strategy"] = None  # played from the file, not the built-in
    else:
        strat = build_violation_strategy(g, c, spec)
        win = play(w, strat)
        report = game_report(g, spec, strat, win)
    if args.scan:
        best = random_strategy_scan(w, spec, args.scan, args.seed)
        report["scan_best"] = {"num": best.numerator, "den": best.denominator}
    bound = spec.bound()
    tsv = (
        f"win\t{win.numerator}/{win.denominator}\t"
        f"bound\t{bound.numerator}/{bound.denominator}\t"
        f"{'violated' if report['violated'] else 'within-bound'}"
    )
    _emit(report, args.format, tsv, sys.stdout)
    return EXIT_OK


def _cmd_fixed_point(args: argparse.Namespace) -> int:
    g = parse_graph(_read(args.graph))
    m = build_model(g)
    mu = parse_experiment(_read(args.mu), m.alphabet)
    point = predicted_fixed_point(m, mu)
    obj = {"predicted_point": list(point)}
    _emit(obj, args.format, " ".join(str(b) for b in point), sys.stdout)
    return EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "survey": _cmd_survey,
    "verify": _cmd_verify,
    "game": _cmd_game,
    "fixed-point": _cmd_fixed_point,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except (GraphFormatError, TableFormatError, FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except BudgetExceededError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except InvariantError as exc:
        sys.stderr.write(f"invariant violated: {exc}\n")
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
