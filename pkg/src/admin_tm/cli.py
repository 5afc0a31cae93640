"""Command-line front end: profile in, enumerated threat model out.

Commands mirror the methodology: start from the built-in process
template, cut it down via the profile's structural answers, apply any
overlay edits, expand wildcard arrows, then enumerate attacks and render
reports.  Exit codes: 0 success, 1 input validation failure, 2
parse/schema error, 3 internal error.  Diagnostics go to the error
stream; result data goes to the output stream or `-o` paths only.
Output is plain text throughout, so NO_COLOR needs no special handling.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Any

from .engine import threat_model
from .errors import AdminTmError, DocumentError
from .io_schema import (
    DocumentKind,
    GraphOverlay,
    overlay_document,
    parse,
    profile_document,
    result_document,
    serialize,
)
from .profile import (
    DEFAULT_PROFILE_NAME,
    FLAG_DEFAULTS,
    AnswerKind,
    ProfileQuestion,
    build_profile,
    question_set,
)
from .report import GroupBy, ReportFormat, ReportOptions, compare, render
from .taxonomy import TAXONOMY_VERSION

#: Written by `init`: a neutral, fully answered profile to edit.
_TEMPLATE_ANSWERS: dict[str, Any] = {
    "name": "my-software",
    "data_visibility": "private",
    "data_source_trust": "partially_trusted",
    "repository_integrity_assured": False,
    "model_openness": "proprietary",
    "model_query_access": "restricted",
    "deployment_exposure": "restricted_clients",
    "input_modalities": ["tabular"],
    "captures_physical_environment": False,
    "transport_security": "trusted_provider",
    "dev_pipeline_compromise_conceivable": True,
    "uses_feature_engineering": True,
    "uses_labelling": True,
    "monitors_model_in_deployment": True,
    "has_decision_making_stage": True,
}


class _CliError(Exception):
    """Usage-level failure: message for the error stream, exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _CliError(self.format_usage() + f"error: {message}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="admin-tm", description="Threat modelling for AI based software.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p_init = sub.add_parser("init", help="write a template profile and an empty overlay")
    p_init.add_argument("-p", "--profile", required=True, metavar="PATH")
    p_init.add_argument("-g", "--overlay", required=True, metavar="PATH")

    sub.add_parser("questions", help="print the profile questionnaire")

    p_validate = sub.add_parser("validate", help="check profile/overlay documents")
    p_validate.add_argument("-p", "--profile", metavar="PATH")
    p_validate.add_argument("-g", "--overlay", metavar="PATH")

    p_enum = sub.add_parser("enumerate", help="run the full pipeline, write a result document")
    p_enum.add_argument("-p", "--profile", required=True, metavar="PATH")
    p_enum.add_argument("-g", "--overlay", metavar="PATH")
    p_enum.add_argument("-o", "--output", metavar="PATH")
    p_enum.add_argument("--reproducible", action="store_true",
                        help="omit the created_at timestamp for byte-stable output")

    p_report = sub.add_parser("report", help="render a result document")
    p_report.add_argument("-i", "--input", required=True, metavar="PATH")
    p_report.add_argument("-f", "--format", choices=[f.value for f in ReportFormat],
                          default=ReportFormat.MARKDOWN.value)
    p_report.add_argument("--group-by", choices=[g.value for g in GroupBy],
                          default=GroupBy.CATEGORY.value)
    p_report.add_argument("--no-not-applicable", action="store_true",
                          help="drop not-applicable findings from markdown output")
    p_report.add_argument("-o", "--output", metavar="PATH")

    p_compare = sub.add_parser("compare", help="render results side by side")
    p_compare.add_argument("-i", "--input", action="append", required=True, metavar="PATH",
                           help="result document; repeat for each column")
    p_compare.add_argument("-o", "--output", metavar="PATH")

    p_wizard = sub.add_parser("wizard", help="answer the questionnaire interactively")
    p_wizard.add_argument("-p", "--profile", metavar="PATH",
                          help="also write the answered profile document here")
    p_wizard.add_argument("-g", "--overlay", metavar="PATH")
    p_wizard.add_argument("-o", "--output", metavar="PATH",
                          help="also write the result document here")
    p_wizard.add_argument("-f", "--format", choices=[f.value for f in ReportFormat],
                          default=ReportFormat.MARKDOWN.value)
    p_wizard.add_argument("--reproducible", action="store_true")

    return parser


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _emit(text: str, path: str | None, stdout: IO[str]) -> None:
    if path is None:
        stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _load_overlay_edits(path: str | None):
    if path is None:
        return ()
    return parse(_read(path), DocumentKind.GRAPH_OVERLAY).body.edits


def _cmd_init(args: argparse.Namespace, stdout: IO[str], stderr: IO[str]) -> int:
    for path in (args.profile, args.overlay):
        if Path(path).exists():
            raise _CliError(f"refusing to overwrite existing file {path}")
    Path(args.profile).write_text(
        serialize(profile_document(build_profile(_TEMPLATE_ANSWERS))), encoding="utf-8"
    )
    Path(args.overlay).write_text(serialize(overlay_document(GraphOverlay())), encoding="utf-8")
    stderr.write(f"wrote {args.profile} and {args.overlay}\n")
    return 0


def _hint(question: ProfileQuestion) -> str:
    options = ", ".join(question.options)
    if question.answer_kind is AnswerKind.FLAG:
        hint = "yes/no"
        if question.key in FLAG_DEFAULTS:
            hint += f", default {'yes' if FLAG_DEFAULTS[question.key] else 'no'}"
        return hint
    if question.answer_kind is AnswerKind.MULTI_CHOICE:
        return f"comma-separated, any of: {options}"
    return f"one of: {options}"


def _cmd_questions(args: argparse.Namespace, stdout: IO[str], stderr: IO[str]) -> int:
    for number, question in enumerate(question_set(), start=1):
        stdout.write(f"{number:2d}. {question.key}  ({_hint(question)})\n")
        stdout.write(f"    {question.prompt}\n")
    return 0


def _cmd_validate(args: argparse.Namespace, stdout: IO[str], stderr: IO[str]) -> int:
    if args.profile is None and args.overlay is None:
        raise _CliError("nothing to validate: pass -p and/or -g")
    if args.profile is not None:
        parse(_read(args.profile), DocumentKind.PROFILE)
        stdout.write(f"{args.profile}: ok (profile)\n")
    if args.overlay is not None:
        parse(_read(args.overlay), DocumentKind.GRAPH_OVERLAY)
        stdout.write(f"{args.overlay}: ok (graph_overlay)\n")
    return 0


def _cmd_enumerate(args: argparse.Namespace, stdout: IO[str], stderr: IO[str]) -> int:
    profile = parse(_read(args.profile), DocumentKind.PROFILE).body
    edits = _load_overlay_edits(args.overlay)
    created_at = None if args.reproducible else _now()
    result = threat_model(profile, edits, created_at=created_at)
    _emit(serialize(result_document(result)), args.output, stdout)
    return 0


def _cmd_report(args: argparse.Namespace, stdout: IO[str], stderr: IO[str]) -> int:
    doc = parse(_read(args.input), DocumentKind.RESULT)
    if doc.stale:
        stderr.write(
            f"warning: result was built against taxonomy {doc.body.taxonomy_version}, "
            f"current is {TAXONOMY_VERSION}\n"
        )
    options = ReportOptions(
        format=ReportFormat(args.format),
        include_not_applicable=not args.no_not_applicable,
        group_by=GroupBy(args.group_by),
    )
    _emit(render(doc.body, options), args.output, stdout)
    return 0


def _cmd_compare(args: argparse.Namespace, stdout: IO[str], stderr: IO[str]) -> int:
    results = [parse(_read(path), DocumentKind.RESULT).body for path in args.input]
    _emit(compare(results), args.output, stdout)
    return 0


def _ask(stdin: IO[str], stderr: IO[str], prompt: str) -> str:
    stderr.write(prompt)
    stderr.flush()
    line = stdin.readline()
    if line == "":
        raise _CliError("wizard aborted: end of input")
    return line.strip()


def _ask_question(question: ProfileQuestion, number: int, total: int,
                  stdin: IO[str], stderr: IO[str]) -> Any:
    while True:
        stderr.write(f"[{number}/{total}] {question.prompt}\n")
        answer = _ask(stdin, stderr, f"    ({_hint(question)}) > ")
        if question.answer_kind is AnswerKind.FLAG:
            if answer == "" and question.key in FLAG_DEFAULTS:
                return FLAG_DEFAULTS[question.key]
            if answer in ("yes", "no"):
                return answer
        elif question.answer_kind is AnswerKind.MULTI_CHOICE:
            chosen = [token.strip() for token in answer.split(",") if token.strip()]
            if chosen and all(token in question.options for token in chosen):
                return chosen
        elif answer in question.options:
            return answer
        stderr.write("    invalid answer, try again\n")


def _cmd_wizard(args: argparse.Namespace, stdin: IO[str],
                stdout: IO[str], stderr: IO[str]) -> int:
    questions = question_set()
    total = len(questions)
    name = _ask(stdin, stderr, "name of the software > ")
    answers: dict[str, Any] = {"name": name or DEFAULT_PROFILE_NAME}
    for number, question in enumerate(questions, start=1):
        answers[question.key] = _ask_question(question, number, total, stdin, stderr)

    stderr.write("\nyour answers:\n")
    for key, value in answers.items():
        shown = ", ".join(value) if isinstance(value, list) else value
        stderr.write(f"  {key}: {shown}\n")
    confirmation = _ask(stdin, stderr, "proceed with enumeration? (yes/no) > ")
    if confirmation != "yes":
        raise _CliError("aborted: answers not confirmed")

    profile = build_profile(answers)
    edits = _load_overlay_edits(args.overlay)
    created_at = None if args.reproducible else _now()
    result = threat_model(profile, edits, created_at=created_at)
    if args.profile is not None:
        Path(args.profile).write_text(serialize(profile_document(profile)), encoding="utf-8")
    if args.output is not None:
        Path(args.output).write_text(serialize(result_document(result)), encoding="utf-8")
    stdout.write(render(result, ReportOptions(format=ReportFormat(args.format))))
    return 0


def run(argv: list[str], stdin: IO[str] | None = None,
        stdout: IO[str] | None = None, stderr: IO[str] | None = None) -> int:
    """Execute one command; returns the exit code instead of exiting."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        try:
            args = _build_parser().parse_args(argv)
        except SystemExit as exc:  # -h/--help prints and exits 0
            return int(exc.code or 0)
        if args.command == "init":
            return _cmd_init(args, stdout, stderr)
        if args.command == "questions":
            return _cmd_questions(args, stdout, stderr)
        if args.command == "validate":
            return _cmd_validate(args, stdout, stderr)
        if args.command == "enumerate":
            return _cmd_enumerate(args, stdout, stderr)
        if args.command == "report":
            return _cmd_report(args, stdout, stderr)
        if args.command == "compare":
            return _cmd_compare(args, stdout, stderr)
        return _cmd_wizard(args, stdin, stdout, stderr)
    except _CliError as exc:
        stderr.write(f"{exc}\n")
        return 1
    except DocumentError as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except (AdminTmError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        stderr.write(f"internal error: {exc}\n")
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))
