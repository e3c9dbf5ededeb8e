"""Command line interface for expectlogic with subcommands."""

import argparse
import logging
import sys
import textwrap
from pathlib import Path

from pydantic import ValidationError

from expectlogic import __version__, config, setup_logging
from expectlogic.commands import (
    check_cmd,
    entail_cmd,
    expect_cmd,
    parse_cmd,
    prove_check_cmd,
    sat_cmd,
    translate_cmd,
    valid_cmd,
)
from expectlogic.decide import SEMANTICS
from expectlogic.errors import ExpectLogicError
from expectlogic.parser import LANGUAGES
from expectlogic.proofs import SYSTEMS
from expectlogic.translate import TRANSLATABLE

logger = logging.getLogger(__name__)


def process_common_options(args, raw_args):
    # set up logging
    loglevel = logging.INFO + (args.quieter - args.verboser) * 10
    logfile = args.logfile
    if logfile is None:
        setup_logging(loglevel)
    else:
        if not logfile.parents[0].exists():
            logfile.parents[0].mkdir(exist_ok=True, parents=True)
        setup_logging(loglevel, logfile)

    logger.info("Executing cmd: expectlogic %s", " ".join(raw_args))
    logger.debug("Processing common options.")

    # budgets
    try:
        config.load_config(
            atom_cap=args.atom_cap,
            max_props=args.max_props,
            max_terms=args.max_terms,
            max_branches=args.max_branches,
            max_taut_vars=args.max_taut_vars,
        )
    except ValidationError as exc:
        msg = f"Invalid budget flags:\n{exc}"
        logger.error(msg)
        raise ExpectLogicError(msg) from exc


class DecentFormatter(argparse.HelpFormatter):
    """
    An argparse formatter that preserves newlines & keeps indentation.
    """

    def _fill_text(self, text, width, indent):
        """
        Reformat text while keeping newlines for lines shorter than width.
        """
        lines = []
        for line in textwrap.indent(textwrap.dedent(text), indent).splitlines():
            lines.append(textwrap.fill(line, width, subsequent_indent=indent))
        return "\n".join(lines)

    def _split_lines(self, text, width):
        """
        Conserve indentation in help/description lines when splitting long lines.
        """
        lines = []
        for line in textwrap.dedent(text).splitlines():
            if not line.strip():
                continue
            indent = " " * (len(line) - len(line.lstrip()))
            lines.extend(
                textwrap.fill(line, width, subsequent_indent=indent).splitlines()
            )
        return lines


def root_cmd(args):
    if args.version:
        print(f"expectlogic {__version__}")
    return 0


def create_root_parser():
    parser = argparse.ArgumentParser(
        prog="expectlogic",
        description=(
            "Reason about expectation: evaluate expectations, model-check and "
            "decide expectation formulas under probability, lower probability, "
            "belief and possibility, translate them to likelihood formulas and "
            "check derivations."
        ),
        allow_abbrev=False,
        formatter_class=DecentFormatter,
    )
    parser.add_argument(
        "-V",
        "--version",
        help="The version of expectlogic command line interface.",
        action="store_true",
    )
    parser.set_defaults(func=root_cmd)
    return parser


def create_common_options_parser():
    parser = argparse.ArgumentParser(
        prog="expectlogic",
        allow_abbrev=False,
        add_help=False,
        formatter_class=DecentFormatter,
    )
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "-v",
        "--verbose",
        action="count",
        dest="verboser",
        default=0,
        help="More verbose output. Repeat to increase verbosity (-vv or -vvv).",
    )
    group.add_argument(
        "-q",
        "--quiet",
        action="count",
        default=0,
        dest="quieter",
        help="Less verbose output. Repeat to reduce verbosity (-qq or -qqq).",
    )
    parser.add_argument(
        "-l",
        "--logfile",
        help=(
            "Activate logging to a file at given path. "
            "The path will be created if it is not existing."
        ),
        type=Path,
    )
    parser.add_argument(
        "--format",
        help='Output format on stdout. (default: "text")',
        choices=("text", "json"),
        default="text",
    )
    budgets = parser.add_argument_group("Budgets")
    budgets.add_argument(
        "--atom-cap",
        help="Maximum number of propositions in a gamble analysis (2**N atoms).",
        type=int,
    )
    budgets.add_argument(
        "--max-props",
        help="Maximum number of propositions per decision query.",
        type=int,
    )
    budgets.add_argument(
        "--max-terms",
        help="Maximum number of distinct expectation terms per decision query.",
        type=int,
    )
    budgets.add_argument(
        "--max-branches",
        help="Maximum number of Boolean branches (and possibility guesses).",
        type=int,
    )
    budgets.add_argument(
        "--max-taut-vars",
        help="Maximum number of variables in a Taut truth table.",
        type=int,
    )
    return parser


def _add_semantics(parser, choices=SEMANTICS):
    parser.add_argument(
        "-s",
        "--semantics",
        help='Class of structures. (default: "prob")',
        choices=choices,
        default="prob",
    )


def add_parse_subparser(subparsers, options):
    parser = subparsers.add_parser(
        "parse",
        description="Parse a formula and print it in canonical form.",
        help="Parse and pretty-print a formula.",
        **options,
    )
    parser.add_argument(
        "--lang",
        help='Language of the formula. (default: "auto")',
        choices=("auto", *LANGUAGES),
        default="auto",
    )
    parser.add_argument("FORMULA", help="Formula text.")
    parser.set_defaults(func=parse_cmd)


def add_expect_subparser(subparsers, options):
    parser = subparsers.add_parser(
        "expect",
        description=(
            "Expectation of a propositional gamble in a structure. Credal "
            "structures need --mode lower or --mode upper."
        ),
        help="Compute the expectation of a gamble.",
        **options,
    )
    parser.add_argument(
        "--structure",
        help="Structure document (JSON).",
        type=Path,
        required=True,
        metavar="FILE",
    )
    parser.add_argument("--gamble", help="Gamble text.", required=True)
    parser.add_argument(
        "--mode",
        help='point, lower or upper expectation. (default: "point")',
        choices=("point", "lower", "upper"),
        default="point",
    )
    parser.set_defaults(func=expect_cmd)


def add_check_subparser(subparsers, options):
    parser = subparsers.add_parser(
        "check",
        description=(
            "Model-check a formula against a structure. Prints the verdict and "
            "the value of every basic inequality."
        ),
        help="Model-check a formula.",
        **options,
    )
    parser.add_argument(
        "--structure",
        help="Structure document (JSON).",
        type=Path,
        required=True,
        metavar="FILE",
    )
    parser.add_argument("--formula", help="Formula text.", required=True)
    parser.add_argument(
        "--lang",
        help='Language of the formula. (default: "auto")',
        choices=("auto", "expectation", "likelihood", "gamble-ineq"),
        default="auto",
    )
    parser.add_argument(
        "--upper",
        help="Read e(...) as upper expectation.",
        action="store_true",
    )
    parser.set_defaults(func=check_cmd)


def add_sat_subparser(subparsers, options):
    parser = subparsers.add_parser(
        "sat",
        description=(
            "Decide satisfiability. A SAT verdict comes with a certificate "
            "structure. Gamble-inequality formulas are decided over plain "
            "structures and ignore --semantics."
        ),
        help="Decide satisfiability of a formula.",
        **options,
    )
    _add_semantics(parser)
    parser.add_argument("FORMULA", help="Formula text.")
    parser.set_defaults(func=sat_cmd)


def add_valid_subparser(subparsers, options):
    parser = subparsers.add_parser(
        "valid",
        description="Decide validity. An invalid formula comes with a countermodel.",
        help="Decide validity of a formula.",
        **options,
    )
    _add_semantics(parser)
    parser.add_argument("FORMULA", help="Formula text.")
    parser.set_defaults(func=valid_cmd)


def add_entail_subparser(subparsers, options):
    parser = subparsers.add_parser(
        "entail",
        description=(
            "Decide whether the assumptions entail FORMULA, or, with --gamble, "
            "compute the natural-extension lower bound of the gamble under "
            "lower expectation."
        ),
        help="Entailment and natural-extension bounds.",
        **options,
    )
    _add_semantics(parser)
    parser.add_argument(
        "-a",
        "--assume",
        help="Assumption formula. Repeat for several assumptions.",
        action="append",
        default=[],
    )
    parser.add_argument("--gamble", help="Gamble whose lower bound is inferred.")
    parser.add_argument(
        "--no-cross-check",
        help="Skip confirming the bound with two validity queries.",
        action="store_true",
    )
    parser.add_argument("FORMULA", nargs="?", help="Conclusion formula text.")
    parser.set_defaults(func=entail_cmd)


def add_translate_subparser(subparsers, options):
    parser = subparsers.add_parser(
        "translate",
        description=(
            "Translate an expectation formula into an equivalent likelihood "
            "formula. There is no translation for lower probability."
        ),
        help="Translate expectation to likelihood formulas.",
        **options,
    )
    _add_semantics(parser, TRANSLATABLE)
    parser.add_argument("FORMULA", help="Expectation formula text.")
    parser.set_defaults(func=translate_cmd)


def add_prove_check_subparser(subparsers, options):
    parser = subparsers.add_parser(
        "prove-check",
        description=(
            "Check a derivation line by line. The proof file is a JSON list of "
            '{"formula": ..., "by": ...} objects.'
        ),
        help="Check a derivation in one of the axiom systems.",
        **options,
    )
    parser.add_argument(
        "--system",
        help='Axiom system. (default: "axprob")',
        choices=tuple(SYSTEMS),
        default="axprob",
    )
    parser.add_argument(
        "--verify",
        help="Also decide the semantic validity of the conclusion.",
        action="store_true",
    )
    parser.add_argument("PROOF", type=Path, help="Proof file (JSON).")
    parser.set_defaults(func=prove_check_cmd)


def main_cli(raw_args=None):
    """Setup CLI app and run commands based on args. Returns the exit code."""
    # Create root parser for cli app
    parser = create_root_parser()

    subparsers = parser.add_subparsers(
        title="Subcommands",
        dest="subcommand",
        description="Get help for commands with expectlogic COMMAND --help",
    )
    # Create parser to share some options between subparsers. We cannot use the
    # root parser for this because it includes the sub-commands and their help.
    common_options_parser = create_common_options_parser()

    # Create the subparsers with some common options
    common_options = {
        "parents": [common_options_parser],
        "formatter_class": DecentFormatter,
    }
    add_parse_subparser(subparsers, common_options)
    add_expect_subparser(subparsers, common_options)
    add_check_subparser(subparsers, common_options)
    add_sat_subparser(subparsers, common_options)
    add_valid_subparser(subparsers, common_options)
    add_entail_subparser(subparsers, common_options)
    add_translate_subparser(subparsers, common_options)
    add_prove_check_subparser(subparsers, common_options)

    if not raw_args:
        parser.print_help()
        return 0

    # Parse the command-line arguments
    #   pars_args will call sys.exit(2) if invalid commands are given.
    args = parser.parse_args(raw_args)
    if hasattr(args, "format"):
        process_common_options(args, raw_args)
    return args.func(args)


def run_cli_app(raw_args=None):
    """Entry point for running the cli app."""
    if raw_args is None:
        raw_args = sys.argv[1:]
    try:
        code = main_cli(raw_args)
    except ExpectLogicError:
        logger.exception("Terminating with expectlogic error.")
        sys.exit(2)
    except Exception:
        logger.exception("Unexpected error.")
        sys.exit(3)
    if code:
        sys.exit(code)


if __name__ == "__main__":
    run_cli_app(sys.argv[1:])
