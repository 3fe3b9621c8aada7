"""Command line: ``lpproof translate|check|e2e``.

The report goes to stdout as ``key=value`` lines, warnings to stderr.

Exit codes::

    0  success
    1  kernel check failed
    2  reduction budget exhausted
    3  sorry steps present without --allow-sorry
    4  trace or script does not parse
    5  translation failed (corrupted trace) or internal error
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .dk import DkSyntaxError, parse_dk, print_dk
from .drv import TraceParseError, parse_trace
from .kernel import check_document
from .translate import TranslationError, Translator

EXIT_OK, EXIT_CHECK, EXIT_BUDGET, EXIT_SORRY, EXIT_PARSE, EXIT_INTERNAL = range(6)
DEFAULT_BUDGET = 10 ** 7


@dataclass
class RunReport:
    command: str
    steps_translated: int = 0
    sorry_count: int = 0
    sorry_steps: list = field(default_factory=list)
    entries_checked: int = 0
    rules_checked: int = 0
    reductions: int = 0
    failed_entry: Optional[str] = None
    error: Optional[str] = None
    times: dict = field(default_factory=dict)
    exit_status: int = EXIT_OK

    def lines(self):
        yield f"command={self.command}"
        yield f"steps_translated={self.steps_translated}"
        yield f"sorry_count={self.sorry_count}"
        yield f"sorry_steps={','.join(self.sorry_steps)}"
        yield f"entries_checked={self.entries_checked}"
        yield f"rules_checked={self.rules_checked}"
        yield f"reductions={self.reductions}"
        if self.failed_entry is not None:
            yield f"failed_entry={self.failed_entry}"
        for phase, secs in self.times.items():
            yield f"time_{phase}={secs:.6f}"
        yield f"exit_status={self.exit_status}"


def exit_status(parsed: bool, translated: bool, sorry: int, allow_sorry: bool,
                checked: Optional[bool], budget_ok: bool) -> int:
    """The documented exit-code table as a function of the run's outcome."""
    if not parsed:
        return EXIT_PARSE
    if not translated:
        return EXIT_INTERNAL
    if not budget_ok:
        return EXIT_BUDGET
    if checked is False:
        return EXIT_CHECK
    if sorry and not allow_sorry:
        return EXIT_SORRY
    return EXIT_OK


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("LAMPI_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            print(f"warning: ignoring non-integer LAMPI_BUDGET={env!r}", file=sys.stderr)
    return DEFAULT_BUDGET


def _translate(args, report: RunReport):
    """Returns the script text, or None after filling in the failure."""
    t0 = time.perf_counter()
    try:
        doc = parse_trace(Path(args.input).read_text(encoding="utf-8"))
    except TraceParseError as err:
        report.error = f"parse error: {err}"
        report.exit_status = EXIT_PARSE
        return None
    except OSError as err:
        report.error = str(err)
        report.exit_status = EXIT_PARSE
        return None
    report.times["parse"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    try:
        script = Translator().translate(doc)
    except TranslationError as err:
        report.error = f"translation error: {err}"
        report.exit_status = EXIT_INTERNAL
        return None
    report.times["translate"] = time.perf_counter() - t0
    report.steps_translated = script.steps_translated
    report.sorry_steps = list(script.sorry_ids)
    report.sorry_count = len(report.sorry_steps)
    for sid, rule in script.warnings:
        print(f"warning: sorry: step {sid} rule {rule} is asserted without proof", file=sys.stderr)
    for note in script.notes:
        print(f"note: {note}", file=sys.stderr)
    return print_dk(script.items(banners=not args.no_prelude_banner))


def _check(text: str, args, report: RunReport) -> None:
    t0 = time.perf_counter()
    try:
        items = parse_dk(text)
    except DkSyntaxError as err:
        report.error = f"script parse error: {err}"
        report.exit_status = EXIT_PARSE
        return
    res = check_document(items, budget=_budget(args))
    report.times["check"] = time.perf_counter() - t0
    report.entries_checked = sum(1 for s in res.statuses if s.ok and not s.name.startswith("rule "))
    report.rules_checked = sum(1 for s in res.statuses if s.ok and s.name.startswith("rule "))
    report.reductions = res.reductions
    if res.failures:
        bad = res.failures[0]
        report.failed_entry = bad.name
        report.error = f"entry {bad.name}: {bad.message}"
    report.exit_status = exit_status(True, True, report.sorry_count, args.allow_sorry,
                                     res.ok, not res.budget_exhausted)


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def run(argv=None) -> tuple:
    """Run the command line; returns ``(exit status, report)``."""
    args = build_parser().parse_args(argv)
    report = RunReport(args.command)
    start = time.perf_counter()
    if args.command == "check":
        try:
            text = Path(args.input).read_text(encoding="utf-8")
        except OSError as err:
            report.error = str(err)
            report.exit_status = EXIT_PARSE
        else:
            _check(text, args, report)
    else:
        text = _translate(args, report)
        if text is not None:
            out = args.output if args.command == "translate" else args.emit
            if out:
                _write(out, text)
            elif args.command == "translate":
                sys.stdout.write(text)
            if args.command == "e2e":
                _check(text, args, report)
            else:
                report.exit_status = exit_status(True, True, report.sorry_count,
                                                 args.allow_sorry, None, True)
    report.times["total"] = time.perf_counter() - start
    if report.error:
        print(f"error: {report.error}", file=sys.stderr)
    # keep stdout clean when the script itself is written there
    stream = sys.stderr if args.command == "translate" and not args.output else sys.stdout
    for line in report.lines():
        print(line, file=stream)
    if args.report_json:
        _write(args.report_json, json.dumps(asdict(report), indent=2, sort_keys=True) + "\n")
    return report.exit_status, report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors must not collide with the budget exit code
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lpproof",
                description="Translate refutation traces into Dedukti scripts and check them.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--budget", type=int, default=None,
                        help="reduction budget (default: $LAMPI_BUDGET or 10^7)")
        sp.add_argument("--report-json", metavar="PATH", help="also write the report as JSON")
        sp.add_argument("--allow-sorry", action="store_true",
                        help="succeed even if some steps were asserted without proof")
        sp.add_argument("--no-prelude-banner", action="store_true",
                        help="omit the section banner comments")

    t = sub.add_parser("translate", help="translate a .drv trace into a .dk script")
    t.add_argument("input")
    t.add_argument("--output", "-o", help="write the script here instead of stdout")
    common(t)
    c = sub.add_parser("check", help="check a .dk script with the embedded kernel")
    c.add_argument("input")
    common(c)
    e = sub.add_parser("e2e", help="translate and check in memory")
    e.add_argument("input")
    e.add_argument("--emit", metavar="PATH", help="also write the intermediate script")
    common(e)
    return p


def main(argv=None) -> int:
    try:
        status, _ = run(argv)
    except SystemExit as stop:  # usage errors and --help
        return stop.code if isinstance(stop.code, int) else EXIT_PARSE
    except Exception as err:  # noqa: BLE001 - last-resort exit code
        print(f"error: internal: {err!r}", file=sys.stderr)
        return EXIT_INTERNAL
    return status


if __name__ == "__main__":
    sys.exit(main())
