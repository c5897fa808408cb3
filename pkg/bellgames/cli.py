"""
Command line front end.

    bellgames table game1 --format csv
    bellgames classical game3
    bellgames quantum game1 --builtin
    bellgames optimize game1 --dim 2 --seed 1 --emit-strategy best.txt
    bellgames optimize --bell chsh --dim 2
    bellgames bell cereceda1 --profile 0011
    bellgames show collins3
    bellgames history runs.sqlite

Results go to stdout, logs to stderr. Exit codes: 0 success, 1 validation or parse error,
2 capacity error, 3 internal integrity error.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import os
import sys
import time
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from . import __version__
from .bell import (
    BellFunctional,
    classical_bound_bruteforce,
    evaluate,
    evaluate_exact,
    functional_from_game,
    is_violated,
)
from .catalog import (
    QUANTUM_VALUES,
    builtin_functional,
    builtin_functional_names,
    builtin_game,
    builtin_game_names,
    builtin_strategy,
    builtin_strategy_names,
    strategy_for,
)
from .equilibria import DEFAULT_ENUMERATION_CAP, classical_optimum, conflict_report, equilibrium_flags
from .errors import BellGamesError, IntegrityError, NotFoundError, ValidationError
from .fileformats import (
    load_functional,
    load_game,
    load_strategy,
    read_functional,
    read_game,
    read_strategy,
    read_text_file,
    save_text,
    write_functional,
    write_game,
    write_strategy,
)
from .game import Behavior, GameSpec, deterministic_behavior, expected_payoffs, parse_profile_dims
from .quantum import QuantumStrategy, behavior_for_dims, behavior_from_quantum
from .report import RunReport, dumps, inputs_digest
from .seesaw import DEFAULT_SEED, SeesawConfig, seesaw
from .utils import AttrDict

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
FORMATS = ("text", "csv", "json")
KINDS = ("game", "bell", "strategy")
# a see-saw value above the reference value by more than this is reported
_REFERENCE_SLACK = 1e-6


@dataclasses.dataclass
class CommandOutput:
    """
    What a command hands back to :py:func:`main`: the results, their text and csv renderings,
    and the canonical text of every input (digested into the run report).
    """

    results: AttrDict
    text: str
    csv_rows: List[List[str]]
    inputs: List[str]
    seed: Optional[int] = None


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are validation errors (exit code 1), not argparse's exit code 2
        raise ValidationError(f"{self.prog}: {message}")


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def format_float(value: float) -> str:
    return f"{value:.8f}"


def format_number(value) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    return format_float(float(value))


def _aligned(rows: List[List[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows)


def _key_value_rows(pairs: List[List[str]]) -> List[List[str]]:
    return [["quantity", "value"]] + pairs


def resolve_game(ref: str) -> GameSpec:
    if ref in builtin_game_names():
        return builtin_game(ref)
    if os.path.isfile(ref):
        return load_game(ref)
    raise NotFoundError(f"{ref!r} is neither a builtin game ({', '.join(builtin_game_names())}) nor a file")


def resolve_functional(ref: str) -> BellFunctional:
    if ref in builtin_functional_names():
        return builtin_functional(ref)
    if os.path.isfile(ref):
        return load_functional(ref)
    raise NotFoundError(
        f"{ref!r} is neither a builtin functional ({', '.join(builtin_functional_names())}) nor a file",
    )


def _resolve_strategy(args: argparse.Namespace, name: str) -> QuantumStrategy:
    if getattr(args, "strategy", None):
        return load_strategy(args.strategy)
    if getattr(args, "builtin", False):
        return strategy_for(name)
    raise ValidationError("a strategy source is needed: --builtin or --strategy <path>")


def cmd_table(args: argparse.Namespace) -> CommandOutput:
    game = resolve_game(args.game)
    flagged = equilibrium_flags(game, cap=args.cap)
    header = ["profile", "payA", "payB", "total", "equilibrium"]
    rows = [
        [str(profile), format_rational(pay.pay_a), format_rational(pay.pay_b), format_rational(pay.total)]
        + ["YES" if flag else "no"]
        for profile, pay, flag in flagged
    ]
    results = AttrDict(
        game=game.name,
        rows=[
            AttrDict(profile=str(p), pay_a=pay.pay_a, pay_b=pay.pay_b, total=pay.total, equilibrium=flag)
            for p, pay, flag in flagged
        ],
    )
    equilibria = sum(1 for _, _, flag in flagged if flag)
    text = f"{_aligned([header] + rows)}\n\n{len(rows)} profiles, {equilibria} pure equilibria"
    return CommandOutput(results, text, [header] + rows, [write_game(game)])


def cmd_classical(args: argparse.Namespace) -> CommandOutput:
    game = resolve_game(args.game)
    bound, maximizers = classical_optimum(game, cap=args.cap)
    report = conflict_report(game, cap=args.cap)
    results = AttrDict(
        game=game.name,
        bound=bound,
        maximizers=[str(p) for p in maximizers],
        equilibria=[
            AttrDict(profile=str(p), pay_a=pay.pay_a, pay_b=pay.pay_b) for p, pay in report.equilibria
        ],
        conflicting=report.is_conflicting,
        alice_preferred=sorted(str(p) for p in report.alice_preferred),
        bob_preferred=sorted(str(p) for p in report.bob_preferred),
    )
    equilibria = " ".join(
        f"{p}({format_rational(pay.pay_a)},{format_rational(pay.pay_b)})" for p, pay in report.equilibria
    )
    pairs = [
        ["game", game.name],
        ["classical optimum", format_rational(bound)],
        ["maximizers", " ".join(results.maximizers)],
        ["pure equilibria", equilibria or "none"],
        ["conflicting interests", "yes" if report.is_conflicting else "no"],
        ["Alice prefers", " ".join(results.alice_preferred) or "-"],
        ["Bob prefers", " ".join(results.bob_preferred) or "-"],
    ]
    text = "\n".join(f"{key}: {value}" for key, value in pairs)
    return CommandOutput(results, text, _key_value_rows(pairs), [write_game(game)])


def _functional_values(dims, behavior: Behavior) -> AttrDict:
    values = AttrDict()
    for name in builtin_functional_names():
        functional = builtin_functional(name)
        if functional.dims == tuple(dims):
            values[name] = evaluate(functional, behavior)
    return values


def cmd_quantum(args: argparse.Namespace) -> CommandOutput:
    game = resolve_game(args.game)
    strategy = _resolve_strategy(args, game.name)
    behavior = behavior_from_quantum(game, strategy)
    payoffs = expected_payoffs(game, behavior)
    functionals = _functional_values(game.dims, behavior)
    results = AttrDict(
        game=game.name,
        behavior=behavior.probs,
        pay_a=payoffs.pay_a,
        pay_b=payoffs.pay_b,
        total=payoffs.total,
        fairness_gap=payoffs.fairness_gap,
        signaling_gap=behavior.signaling_gap(),
        functionals=functionals,
    )
    header = ["x", "y", "a", "b", "P(a,b|x,y)"]
    rows = [
        [str(x + 1), str(y + 1), str(a), str(b), format_float(behavior.probs[x, y, a, b])]
        for x, y, a, b in _indices(game.dims)
    ]
    pairs = [
        ["payA", format_float(payoffs.pay_a)],
        ["payB", format_float(payoffs.pay_b)],
        ["total", format_float(payoffs.total)],
        ["fairness gap", format_float(payoffs.fairness_gap)],
    ] + [[name, format_float(value)] for name, value in functionals.items()]
    text = _aligned([header] + rows) + "\n\n" + "\n".join(f"{key}: {value}" for key, value in pairs)
    csv_pairs = [[f"P({a},{b}|{x},{y})", value] for x, y, a, b, value in rows] + pairs
    return CommandOutput(results, text, _key_value_rows(csv_pairs), [write_game(game), write_strategy(strategy)])


def _indices(dims):
    nx, ny, na, nb = dims
    return [(x, y, a, b) for x in range(nx) for y in range(ny) for a in range(na) for b in range(nb)]


def cmd_optimize(args: argparse.Namespace) -> CommandOutput:
    if (args.game is None) == (args.bell is None):
        raise ValidationError("optimize needs exactly one target: a game or --bell <functional>")
    game = None
    if args.game is not None:
        game = resolve_game(args.game)
        functional = functional_from_game(game)
        target = game.name
        canonical = write_game(game)
    else:
        functional = resolve_functional(args.bell)
        target = functional.name
        canonical = write_functional(functional)
    _, _, na, nb = functional.dims
    dim = args.dim if args.dim is not None else max(na, nb, 2)
    config = SeesawConfig(
        dim=dim,
        restarts=args.restarts,
        max_iters=args.max_iters,
        tol=args.tol,
        seed=args.seed,
        jobs=args.jobs,
    )
    result = seesaw(functional, config)

    reference = QUANTUM_VALUES.get(target)
    if reference is not None and result.best_value > reference + _REFERENCE_SLACK:
        logger.warning("see-saw value %.10f of %s exceeds the reference value %.10f", result.best_value, target, reference)

    results = AttrDict(
        target=target,
        dim=dim,
        best_value=result.best_value,
        best_restart=result.best_restart,
        restart_values=list(result.restart_values),
        iterations=len(result.trace) - 1,
        trace_start=result.trace[0],
        converged=result.converged,
    )
    pairs = [
        ["target", target],
        ["dim", str(dim)],
        ["seed", str(config.seed)],
        ["best value", format_float(result.best_value)],
        ["best restart", str(result.best_restart)],
        ["iterations", str(results.iterations)],
        ["trace", f"{format_float(result.trace[0])} -> {format_float(result.trace[-1])}"],
        ["converged", "yes" if result.converged else "no"],
        ["restart values", " ".join(format_float(v) for v in result.restart_values)],
    ]
    if game is not None:
        payoffs = expected_payoffs(game, behavior_from_quantum(game, result.best_strategy))
        results.pay_a, results.pay_b = payoffs.pay_a, payoffs.pay_b
        pairs += [["payA", format_float(payoffs.pay_a)], ["payB", format_float(payoffs.pay_b)]]
    if args.emit_strategy:
        save_text(args.emit_strategy, write_strategy(result.best_strategy))
        results.strategy_path = args.emit_strategy
    text = "\n".join(f"{key}: {value}" for key, value in pairs)
    return CommandOutput(
        results,
        text,
        _key_value_rows(pairs),
        [canonical, repr(config)],
        seed=config.seed,
    )


def cmd_bell(args: argparse.Namespace) -> CommandOutput:
    functional = resolve_functional(args.functional)
    bound = classical_bound_bruteforce(functional, cap=args.cap)
    inputs = [write_functional(functional)]
    results = AttrDict(functional=functional.name, classical_bound=bound)
    pairs = [["functional", functional.name], ["classical bound", format_rational(bound)]]

    behavior = None
    if args.profile is not None:
        profile = parse_profile_dims(functional.dims, args.profile, f"functional {functional.name}")
        behavior = deterministic_behavior(functional.dims, profile)
        inputs.append(str(profile))
        results.source = f"profile {profile}"
    elif args.builtin or args.strategy:
        strategy = _resolve_strategy(args, functional.name)
        behavior = behavior_for_dims(functional.dims, strategy)
        inputs.append(write_strategy(strategy))
        results.source = args.strategy or f"builtin {functional.name}"

    if behavior is not None:
        value = evaluate_exact(functional, behavior) if behavior.exact is not None else evaluate(functional, behavior)
        violated = is_violated(functional, behavior, bound)
        results.value = value
        results.violated = violated
        pairs += [["value", format_number(value)], ["violation", "VIOLATED" if violated else "not violated"]]
    text = "\n".join(f"{key}: {value}" for key, value in pairs)
    return CommandOutput(results, text, _key_value_rows(pairs), inputs)


def _sniff_kind(text: str) -> str:
    for line in text.splitlines():
        content = line.split("#", 1)[0].split()
        if content:
            return {"game": "game", "bell": "bell", "dims": "strategy"}.get(content[0], "game")
    return "game"


def cmd_show(args: argparse.Namespace) -> CommandOutput:
    ref, kind = args.ref, args.kind
    if os.path.isfile(ref):
        source = read_text_file(ref)
        kind = kind or _sniff_kind(source)
        readers = {"game": read_game, "bell": read_functional, "strategy": read_strategy}
        obj = readers[kind](source, ref)
    else:
        if kind is None:
            if ref in builtin_game_names():
                kind = "game"
            elif ref in builtin_functional_names():
                kind = "bell"
            elif ref in builtin_strategy_names():
                kind = "strategy"
            else:
                raise NotFoundError(f"{ref!r} is neither a builtin nor a file")
        loaders = {"game": builtin_game, "bell": builtin_functional, "strategy": builtin_strategy}
        obj = loaders[kind](ref)
    writers = {"game": write_game, "bell": write_functional, "strategy": write_strategy}
    text = writers[kind](obj)
    results = AttrDict(kind=kind, text=text)
    return CommandOutput(results, text.rstrip("\n"), [[line] for line in text.splitlines()], [text])


def cmd_history(args: argparse.Namespace) -> CommandOutput:
    # imported here so commands that never touch the history do not load sqlalchemy
    from .sqlsorcery import SqlalchemyRepository, open_history, sql_session

    if not os.path.isfile(args.db):
        raise NotFoundError(f"no run history at {args.db}")
    engine = open_history(args.db)
    with sql_session(engine) as session:
        repository = SqlalchemyRepository(session)
        if args.show is not None:
            record = repository.get(args.show)
            results = AttrDict(pk=record.pk, command=record.command, results=record.results)
            text = dumps(record.results, indent=2, sort_keys=True)
            return CommandOutput(results, text, [[text]], [args.db])
        records = repository.all(command=args.command_prefix, limit=args.limit)
        header = ["id", "created", "seconds", "digest", "command"]
        rows = [
            [str(r.pk), r.created.isoformat(timespec="seconds"), f"{r.duration:.3f}", r.inputs_digest[:12], r.command]
            for r in records
        ]
    results = AttrDict(
        runs=[AttrDict(id=int(row[0]), created=row[1], digest=row[3], command=row[4]) for row in rows],
    )
    text = _aligned([header] + rows) if rows else "no runs recorded"
    return CommandOutput(results, text, [header] + rows, [args.db])


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text", help="output format")
    common.add_argument("--record", metavar="DB", help="append the run report to this SQLite run history")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = _ArgumentParser(prog="bellgames", description="Bayesian games, Bell functionals and quantum strategies")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def add(name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    sub = add("table", cmd_table, "payoffs and equilibrium flags of every pure profile")
    sub.add_argument("game", help="builtin game name or game file")
    sub.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP, help="enumeration cap")

    sub = add("classical", cmd_classical, "classical optimum and conflicting-interest report")
    sub.add_argument("game")
    sub.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)

    sub = add("quantum", cmd_quantum, "behavior and payoffs of a quantum strategy")
    sub.add_argument("game")
    source = sub.add_mutually_exclusive_group(required=True)
    source.add_argument("--builtin", action="store_true", help="the builtin strategy of the game")
    source.add_argument("--strategy", metavar="PATH", help="strategy file")

    sub = add("optimize", cmd_optimize, "see-saw maximization over quantum strategies")
    sub.add_argument("game", nargs="?", help="maximize the total payoff of this game")
    sub.add_argument("--bell", metavar="FUNCTIONAL", help="maximize this functional instead")
    sub.add_argument("--dim", type=int, help="local dimension (default: the largest outcome count)")
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--restarts", type=int, default=SeesawConfig.restarts)
    sub.add_argument("--max-iters", type=int, default=SeesawConfig.max_iters)
    sub.add_argument("--tol", type=float, default=SeesawConfig.tol)
    sub.add_argument("--jobs", type=int, default=SeesawConfig.jobs, help="worker processes for the restarts")
    sub.add_argument("--emit-strategy", metavar="PATH", help="write the best strategy to this file")

    sub = add("bell", cmd_bell, "evaluate a Bell functional and its classical bound")
    sub.add_argument("functional", help="builtin functional name or functional file")
    sub.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    source = sub.add_mutually_exclusive_group()
    source.add_argument("--profile", help="deterministic behavior of this profile")
    source.add_argument("--builtin", action="store_true", help="the builtin strategy of the functional")
    source.add_argument("--strategy", metavar="PATH", help="strategy file")

    sub = add("show", cmd_show, "print a builtin or file in its canonical file format")
    sub.add_argument("ref")
    sub.add_argument("--kind", choices=KINDS)

    sub = add("history", cmd_history, "list runs stored with --record")
    sub.add_argument("db")
    sub.add_argument("--limit", type=int)
    sub.add_argument("--command", dest="command_prefix", metavar="PREFIX", help="only runs whose command starts so")
    sub.add_argument("--show", type=int, metavar="ID", help="print the results of one run")

    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


def _emit(output: CommandOutput, report: RunReport, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(report.to_json() + "\n")
    elif fmt == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerows(output.csv_rows)
    else:
        sys.stdout.write(output.text + "\n")


def _record(db_path: str, report: RunReport) -> None:
    from .sqlsorcery import SqlalchemyRepository, open_history, sql_session

    engine = open_history(db_path)
    with sql_session(engine) as session:
        record = SqlalchemyRepository(session).add_report(report)
        logger.info("recorded run %d in %s", record.pk, db_path)


def run(argv: Sequence[str]) -> RunReport:
    """
    Parse ``argv``, run the command and print its output. Errors propagate.
    """
    args = build_parser().parse_args(list(argv))
    _configure_logging(args.verbose)
    start = time.perf_counter()
    output: CommandOutput = args.handler(args)
    report = RunReport(
        command=" ".join(["bellgames", *argv]),
        inputs_digest=inputs_digest(*output.inputs),
        results=output.results,
        duration=time.perf_counter() - start,
        version=__version__,
        seed=output.seed,
    )
    _emit(output, report, args.format)
    if args.record and args.command != "history":
        _record(args.record, report)
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        run(argv)
    except BellGamesError as error:
        print(f"bellgames: error: {error}", file=sys.stderr)
        return error.exit_code
    except Exception:  # noqa
        logger.exception("internal error")
        return IntegrityError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
