"""
Shared plumbing of the hereditary management commands
"""

import logging
import sys
from typing import Any

from django.core.management.base import BaseCommand, CommandError, CommandParser

from ..exceptions import EXIT_OK, EXIT_USAGE, HereditaryError, command_error_from
from ..scripts.pipelines import load_run_config
from ..scripts.report_writer import render_report, write_tables, write_text

logger = logging.getLogger(__name__)


class UsageParser(CommandParser):
    """
    Argument errors exit with the usage code 3 instead of argparse's 2
    """

    def __init__(self, **kwargs):
        # "--kernel" must never stand in for "--kernel-spec"
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(**kwargs)

    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")
        raise CommandError(f"Error: {message}", returncode=EXIT_USAGE)


def add_spec_arguments(parser, *aliases: str):
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--spec", *aliases, dest="spec", help='kernel spec, e.g. "pow1mt(0.5)"')
    source.add_argument("--spec-file", help="file holding a kernel spec")
    return source


def add_common_arguments(parser) -> None:
    parser.add_argument("--config", help="YAML file overriding settings.HEREDITARY")
    parser.add_argument("-N", "--truncation", type=int, help="truncation degree N")
    parser.add_argument("--tol", type=float, help="model tolerance")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--csv-dir", help="directory for CSV sidecars of trend tables")
    parser.add_argument("--seed", type=int, help="seed of random probe vectors")


class HereditaryCommand(BaseCommand):
    """
    One command per top-level word; `actions` maps each sub-action to a handler
    method returning (payload, verdicts, tables).
    """

    name = ""
    actions: dict[str, str] = {}

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # same parser, usage errors mapped to exit code 3
        parser.__class__ = UsageParser
        parser.allow_abbrev = False
        return parser

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="action", required=True, parser_class=UsageParser)
        for action, help_text in self.actions.items():
            subparser = subparsers.add_parser(action, help=help_text)
            add_common_arguments(subparser)
            getattr(self, f"add_{action}_arguments")(subparser)

    def config_from(self, options: dict) -> dict:
        overrides = {
            "truncation": options.get("truncation"),
            "model_tol": options.get("tol"),
            "seed": options.get("seed"),
            "out": options.get("out"),
            "csv_dir": options.get("csv_dir"),
        }
        return load_run_config(overrides, options.get("config"))

    def handle(self, *args: Any, **options: Any) -> None:
        action = options["action"]
        context = f"{self.name} {action}"
        try:
            config = self.config_from(options)
            payload, verdicts, tables = getattr(self, f"handle_{action}")(config, options)
            if tables and config.get("csv_dir"):
                payload["csv"] = write_tables(tables, config["csv_dir"], f"{self.name}_{action}")
            text, exit_code = render_report(context, payload, config, verdicts)
        except HereditaryError as exc:
            raise command_error_from(exc, context) from exc

        if config.get("out"):
            write_text(text, config["out"])
        else:
            self.stdout.write(text, ending="")
        if exit_code != EXIT_OK:
            raise CommandError(f"{context}: finished with exit code {exit_code}", returncode=exit_code)
