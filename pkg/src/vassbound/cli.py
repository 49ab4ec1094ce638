"""Command-line front end.

Subcommands: analyze (full report), classify (per-component category lines),
inc (short-cycle effects), simulate (oracle CSV), check (re-verify a stored
report against an input).  Output is byte-deterministic for identical input
and configuration.

Exit codes: 0 success; 2 parse or validation error; 3 oracle budget exceeded
on every requested n; 4 recheck failure; 1 internal invariant violation.
Every error path prints a single diagnostic line 'error[CODE]: message'.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

from . import __version__
from .analyzer import AnalysisError, analyze
from .core import Vass, VassError, scc_decompose
from .geometry import classify
from .increments import compute_inc
from .oracle import (
    BUDGET,
    DEFAULT_MAX_CONFIGS,
    DEFAULT_MAX_EXPANSIONS,
    Budget,
    OracleResult,
    parse_range,
    simulate,
    write_csv,
)
from .parser import ParseError, load
from .report import (
    AnalysisReport,
    FingerprintMismatch,
    load_report,
    recheck,
    render_json,
    render_text,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_RECHECK = 4


class CliFailure(Exception):
    def __init__(self, exit_code: int, code: str, message: str) -> None:
        super().__init__(message)
        self.exit_code = exit_code
        self.code = code


def _fail(exit_code: int, code: str, message: str) -> CliFailure:
    return CliFailure(exit_code, code, message)


def _load_input(path: str) -> Vass:
    try:
        return load(path)
    except FileNotFoundError:
        raise _fail(EXIT_INPUT, "input", f"cannot read {path!r}") from None
    except ParseError as exc:
        raise _fail(EXIT_INPUT, exc.rule, str(exc)) from None
    except VassError as exc:
        raise _fail(EXIT_INPUT, exc.code, str(exc)) from None


def _write(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _default_budget(args: argparse.Namespace) -> Budget:
    expansions = args.budget_steps
    if expansions is None:
        env = os.environ.get("VASS_BUDGET_STEPS")
        if env is not None:
            try:
                expansions = int(env)
            except ValueError:
                raise _fail(
                    EXIT_INPUT, "budget", f"VASS_BUDGET_STEPS={env!r} is not an integer"
                ) from None
        else:
            expansions = DEFAULT_MAX_EXPANSIONS
    configs = args.budget_configs if args.budget_configs is not None else DEFAULT_MAX_CONFIGS
    if configs <= 0 or expansions <= 0:
        raise _fail(EXIT_INPUT, "budget", "budgets must be positive")
    return Budget(max_configs=configs, max_expansions=expansions)


def _format_vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def cmd_analyze(args: argparse.Namespace) -> int:
    vass = _load_input(args.input)
    result = analyze(vass)
    oracle_result: Optional[OracleResult] = None
    if args.oracle:
        try:
            ns = parse_range(args.oracle)
        except ValueError as exc:
            raise _fail(EXIT_INPUT, "range", str(exc)) from None
        oracle_result = simulate(vass, ns, _default_budget(args))
    report = AnalysisReport(vass, result, oracle_result)
    if args.recheck:
        stored = load_report(render_json(report))
        ok, failures = recheck(stored, vass)
        if not ok:
            raise _fail(
                EXIT_INTERNAL,
                "recheck",
                "self-check of a freshly produced report failed: " + "; ".join(failures),
            )
    text = render_json(report) if args.json else render_text(report)
    _write(text, args.output)
    if args.plot:
        from . import plots

        try:
            plots.plot_geometry(vass, result, args.plot)
        except plots.PlotError as exc:
            print(f"warning: skipping plot: {exc}", file=sys.stderr)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    vass = _load_input(args.input)
    lines = []
    for comp in scc_decompose(vass):
        cat = classify(compute_inc(comp.vass))
        label = "SCC {" + ",".join(comp.states) + "}: " + cat.tag
        normal = cat.evidence_normal()
        if normal is not None:
            label += f" normal={_format_vec(normal)}"
        lines.append(label)
    _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_inc(args: argparse.Namespace) -> int:
    vass = _load_input(args.input)
    inc = compute_inc(vass, want_witnesses=args.witnesses)
    lines = []
    for e in inc.sorted_effects():
        line = _format_vec(e)
        if args.witnesses:
            line += f" via {inc.witnesses[e]}"
        lines.append(line)
    _write("\n".join(lines) + ("\n" if lines else ""), args.output)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    vass = _load_input(args.input)
    try:
        ns = parse_range(args.n)
    except ValueError as exc:
        raise _fail(EXIT_INPUT, "range", str(exc)) from None
    result = simulate(vass, ns, _default_budget(args), sweep=args.sweep)
    import io

    buf = io.StringIO()
    write_csv(result, buf)
    _write(buf.getvalue(), args.output)
    if args.plot:
        from . import plots

        plots.plot_growth(result, args.plot, title=os.path.basename(args.input))
    if all(e.status == BUDGET for e in result.entries):
        raise _fail(EXIT_BUDGET, "budget", "oracle budget exceeded on every requested n")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    vass = _load_input(args.input)
    try:
        with open(args.report, "r", encoding="utf-8") as fh:
            stored = load_report(fh.read())
    except FileNotFoundError:
        raise _fail(EXIT_INPUT, "input", f"cannot read {args.report!r}") from None
    except ValueError as exc:
        raise _fail(EXIT_INPUT, "report", str(exc)) from None
    try:
        ok, failures = recheck(stored, vass)
    except FingerprintMismatch as exc:
        raise _fail(EXIT_RECHECK, "fingerprint", str(exc)) from None
    if not ok:
        for f in failures:
            print(f"recheck: {f}", file=sys.stderr)
        raise _fail(EXIT_RECHECK, "recheck", f"{len(failures)} certificate check(s) failed")
    print(f"report verifies against {args.input} ({len(stored.sccs)} SCC section(s))")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vassbound",
        description="Termination-complexity analysis for vector addition systems with states.",
    )
    parser.add_argument("--version", action="version", version=f"vassbound {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full analysis report with certificates")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.add_argument("--json", action="store_true", help="emit the JSON mirror")
    p.add_argument("--recheck", action="store_true", help="re-verify the report before emitting")
    p.add_argument("--oracle", metavar="RANGE", help="embed oracle samples (start:end or start:end:step)")
    p.add_argument("--plot", metavar="FILE", help="render effect geometry (dimension 2) to FILE")
    p.add_argument("--budget-configs", type=int, default=None)
    p.add_argument("--budget-steps", type=int, default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="per-SCC category (A-D) lines")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("inc", help="short-cycle effect vectors, sorted")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--witnesses", action="store_true", help="append one realizing cycle per effect")
    p.set_defaults(func=cmd_inc)

    p = sub.add_parser("simulate", help="exact oracle values as CSV")
    p.add_argument("input")
    p.add_argument("--n", required=True, metavar="RANGE", help="start:end (doubling) or start:end:step")
    p.add_argument("-o", "--output")
    p.add_argument("--plot", metavar="FILE", help="render the growth curve to FILE")
    p.add_argument("--budget-configs", type=int, default=None)
    p.add_argument("--budget-steps", type=int, default=None)
    p.add_argument("--sweep", action="store_true", default=None,
                   help="force the full start sweep regardless of size")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", help="re-verify a stored report against an input")
    p.add_argument("report")
    p.add_argument("input")
    p.set_defaults(func=cmd_check)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliFailure as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except AnalysisError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - last-resort diagnostics
        print(f"error[internal]: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
