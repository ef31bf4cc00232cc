"""Batch command-line front end.

Exit status: 0 when the property holds or an artifact was produced, 1 when
it fails or the search is exhausted, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from hyperlogic import constructions as C
from hyperlogic.fo import encode_word, eval_fo, fo_to_hyperltl, simplify_qf
from hyperlogic.formats import (
    FormatError,
    format_kripke,
    format_traces,
    parse_arith,
    parse_kripke,
    parse_tiles,
    parse_traces,
    parse_word,
)
from hyperlogic.hyperctl import PathBounds, build_game, check_bounded, solve_game
from hyperlogic.hyperltl import SearchBudget, check, sat_enum
from hyperlogic.models import StretchSpec
from hyperlogic.parser import (
    ParseError,
    parse_fo,
    parse_formula,
    parse_hyperctl,
    parse_hyperltl,
)
from hyperlogic.prenex import classify, to_prenex
from hyperlogic.syntax import FormulaError


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _verdict(value: bool, suffix: str = "") -> int:
    print(f"RESULT: {'true' if value else 'false'}{suffix}")
    return 0 if value else 1


# --------------------------------------------------------------------------
# commands


def cmd_check_trace(a) -> int:
    phi = parse_hyperltl(_read(a.formula))
    return _verdict(check(phi, parse_traces(_read(a.traces))))


def cmd_check_sys(a) -> int:
    phi = parse_hyperctl(_read(a.formula))
    K = parse_kripke(_read(a.system))
    bounds = PathBounds(a.stem_bound, a.loop_bound)
    if a.game or a.dump_game:
        game = build_game(phi, K, bounds)
        if a.dump_game:
            Path(a.dump_game).write_text(game.dump(), encoding="utf-8")
        value = solve_game(game).verifier_wins
    else:
        value = check_bounded(phi, K, bounds)
    return _verdict(value, f" (bounded semantics at S={bounds.S},L={bounds.L})")


def cmd_sat_enum(a) -> int:
    phi = parse_hyperltl(_read(a.formula))
    budget = SearchBudget(a.budget_traces, a.budget_stem, a.budget_loop, a.time_limit)
    res = sat_enum(phi, budget, jobs=a.jobs)
    detail = f" (examined {res.examined} sets{', time limit hit' if res.timed_out else ''})"
    print(f"RESULT: {res.status}{detail}")
    if res.found:
        text = format_traces(res.model)
        if a.output:
            _emit(text, a.output)
        else:
            sys.stdout.write(text)
        return 0
    return 1


def cmd_classify(a) -> int:
    phi = parse_hyperltl(_read(a.formula))
    print(f"RESULT: {classify(phi)}")
    return 0


def cmd_pnf(a) -> int:
    phi = parse_formula(_read(a.formula))
    _emit(str(to_prenex(phi)), a.output)
    return 0


def cmd_gen(a) -> int:
    kind = a.kind
    if kind == "tiling":
        out = str(C.gen_tiling(parse_tiles(_read(_need(a.tiles, "--tiles")))))
    elif kind == "tiling-diagonal":
        out = str(C.gen_tiling_diagonal(parse_tiles(_read(_need(a.tiles, "--tiles")))))
    elif kind == "phiset":
        out = str(C.gen_phiset())
    elif kind == "phiop":
        out = str(C.gen_phiop())
    elif kind == "phib":
        out = str(C.gen_phib(a.props))
    elif kind == "finmodel":
        out = str(C.gen_finite_model_selector(a.props))
    elif kind == "kset":
        sets = [[int(x) for x in s.replace(",", " ").split()] for s in a.set]
        out = format_kripke(C.gen_kset_truncation(a.depth, sets))
    elif kind == "combine-split":
        left = parse_hyperltl(_read(_need(a.left, "--left")))
        right = parse_hyperltl(_read(_need(a.right, "--right")))
        out = str(C.combine_split(left, right))
    elif kind == "arith":
        out = str(C.arith_to_hyperctl(parse_arith(_read(_need(a.input, "--input")))))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(kind)
    _emit(out, a.output)
    return 0


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required here")
    return value


def cmd_fo(a) -> int:
    kind = a.kind
    if kind == "eval":
        w = parse_word(_read(_need(a.word, "--word")))
        return _verdict(eval_fo(w, parse_fo(_read(_need(a.formula, "--formula")))))
    if kind == "encode":
        w = parse_word(_read(_need(a.word, "--word")))
        if (a.stretch is None) == (a.table is None):
            raise UsageError("give exactly one of --stretch or --table")
        spec = (StretchSpec(uniform=a.stretch) if a.stretch is not None
                else StretchSpec(table=tuple(int(x) for x in a.table.split(","))))
        _emit(format_traces(encode_word(w, spec)), a.output)
        return 0
    if kind == "translate":
        phi = parse_fo(_read(_need(a.formula, "--formula")))
        _emit(str(fo_to_hyperltl(phi)), a.output)
        return 0
    if kind == "simpl":
        psi = parse_formula(_read(_need(a.formula, "--formula")))
        _emit(str(simplify_qf(psi, a.props)), a.output)
        return 0
    raise UsageError(kind)  # pragma: no cover


# --------------------------------------------------------------------------
# argument parsing


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperlogic", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-trace", help="HyperLTL sentence on a finite lasso trace set")
    s.add_argument("--formula", required=True)
    s.add_argument("--traces", required=True)
    s.set_defaults(run=cmd_check_trace)

    s = sub.add_parser("check-sys", help="HyperCTL* sentence on a Kripke structure (bounded paths)")
    s.add_argument("--formula", required=True)
    s.add_argument("--system", required=True)
    s.add_argument("--stem-bound", type=_positive, required=True)
    s.add_argument("--loop-bound", type=_positive, required=True)
    s.add_argument("--game", action="store_true", help="decide via the model-checking game")
    s.add_argument("--dump-game", metavar="PATH")
    s.set_defaults(run=cmd_check_sys)

    s = sub.add_parser("sat-enum", help="bounded search for a finite lasso model")
    s.add_argument("--formula", required=True)
    s.add_argument("--budget-traces", type=_positive, required=True)
    s.add_argument("--budget-stem", type=_positive, required=True)
    s.add_argument("--budget-loop", type=_positive, required=True)
    s.add_argument("--time-limit", type=float)
    s.add_argument("--jobs", type=_positive, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_sat_enum)

    s = sub.add_parser("classify", help="quantifier alternation class of a prenex sentence")
    s.add_argument("--formula", required=True)
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("pnf", help="prenex form of a Boolean combination of sentences")
    s.add_argument("--formula", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_pnf)

    s = sub.add_parser("gen", help="emit a construction")
    s.add_argument("kind", choices=["tiling", "tiling-diagonal", "phiset", "phiop", "phib",
                                    "finmodel", "kset", "combine-split", "arith"])
    s.add_argument("--tiles")
    s.add_argument("--props", nargs="*", default=[])
    s.add_argument("--depth", type=_positive, default=1)
    s.add_argument("--set", action="append", default=[], help="naturals, e.g. '0 2' (repeatable)")
    s.add_argument("--left")
    s.add_argument("--right")
    s.add_argument("--input")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_gen)

    s = sub.add_parser("fo", help="first-order logic over finite words")
    s.add_argument("kind", choices=["eval", "encode", "translate", "simpl"])
    s.add_argument("--formula")
    s.add_argument("--word")
    s.add_argument("--stretch", type=_positive)
    s.add_argument("--table")
    s.add_argument("--props", nargs="*", default=[])
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_fo)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (OSError, ParseError, FormulaError, FormatError, UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
