"""Subcommand handlers of the command line app.

Each handler receives the parsed argparse namespace, prints its result on
stdout (text or JSON) and returns the exit code: 0 for SAT / valid / true /
accepted, 1 for UNSAT / countermodel / false / rejected.
"""

import json
import logging
from pathlib import Path

from expectlogic.decide import entails, infer_lower_bound, satisfiable, valid
from expectlogic.errors import ExpectLogicError
from expectlogic.expectation import expect
from expectlogic.formulas import format_formula, formula_size, propositions
from expectlogic.gambles import gamble_formula_check
from expectlogic.modelcheck import check, upper_expectation_formula
from expectlogic.models import dump_structure, load_structure, structure_to_dict
from expectlogic.parser import language_of, parse
from expectlogic.proofs import SYSTEMS, check_proof, load_derivation, verify_conclusion
from expectlogic.translate import translate
from expectlogic.utils import format_rational

logger = logging.getLogger(__name__)


def _read_file(path: Path) -> str:
    if not path.is_file():
        msg = "File not found: %s"
        logger.error(msg, path)
        raise ExpectLogicError(msg % path)
    return path.read_text(encoding="utf-8")


def _emit(args, lines: list[str], payload: dict):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _certificate_lines(label: str, structure) -> list[str]:
    if structure is None:
        return []
    return [f"{label}:", dump_structure(structure)]


def _certificate_dict(structure):
    return None if structure is None else structure_to_dict(structure)


def parse_cmd(args):
    formula = parse(args.FORMULA, args.lang)
    text = format_formula(formula)
    lang = args.lang if args.lang in ("prop", "gamble") else language_of(formula)
    payload = {
        "formula": text,
        "language": lang,
        "propositions": list(propositions(formula)),
        "size": formula_size(formula),
    }
    _emit(args, [text], payload)
    return 0


def expect_cmd(args):
    structure = load_structure(_read_file(args.structure))
    gamble = parse(args.gamble, "gamble")
    value = expect(structure, gamble, args.mode)
    payload = {
        "gamble": format_formula(gamble),
        "mode": args.mode,
        "kind": structure.kind,
        "value": format_rational(value),
    }
    _emit(args, [format_rational(value)], payload)
    return 0


def check_cmd(args):
    structure = load_structure(_read_file(args.structure))
    formula = parse(args.formula, args.lang)
    if args.upper:
        formula = upper_expectation_formula(formula)
    result = check(structure, formula)
    verdict = "true" if result.verdict else "false"
    payload = {
        "verdict": result.verdict,
        "trace": [
            {"literal": format_formula(literal), "lhs": format_rational(value)}
            for literal, value in result.trace
        ],
    }
    _emit(args, [verdict, *result.trace_lines()], payload)
    return 0 if result.verdict else 1


def _is_gamble_formula(formula) -> bool:
    return language_of(formula) == "gamble-ineq"


def sat_cmd(args):
    formula = parse(args.FORMULA)
    if _is_gamble_formula(formula):
        result = gamble_formula_check(formula)
        sat, certificate, stats = result.satisfiable, result.model, {}
    else:
        verdict = satisfiable(formula, args.semantics)
        sat, certificate = verdict.satisfiable, verdict.certificate
        stats = {"branches": verdict.branches, "lp_solves": verdict.lp_solves}
    lines = ["SAT" if sat else "UNSAT", *_certificate_lines("certificate", certificate)]
    payload = {
        "verdict": "SAT" if sat else "UNSAT",
        "semantics": "g" if _is_gamble_formula(formula) else args.semantics,
        "certificate": _certificate_dict(certificate),
        **stats,
    }
    _emit(args, lines, payload)
    return 0 if sat else 1


def _validity_output(args, semantics: str, is_valid: bool, countermodel, stats: dict):
    lines = ["VALID" if is_valid else "INVALID", *_certificate_lines("countermodel", countermodel)]
    payload = {
        "verdict": "VALID" if is_valid else "INVALID",
        "semantics": semantics,
        "countermodel": _certificate_dict(countermodel),
        **stats,
    }
    _emit(args, lines, payload)
    return 0 if is_valid else 1


def valid_cmd(args):
    formula = parse(args.FORMULA)
    if _is_gamble_formula(formula):
        result = gamble_formula_check(formula)
        return _validity_output(args, "g", result.valid, result.countermodel, {})
    verdict = valid(formula, args.semantics)
    stats = {"branches": verdict.branches, "lp_solves": verdict.lp_solves}
    return _validity_output(args, args.semantics, verdict.valid, verdict.countermodel, stats)


def entail_cmd(args):
    assumptions = [parse(text) for text in args.assume]
    if args.gamble is not None:
        gamble = parse(args.gamble, "gamble")
        bound = infer_lower_bound(assumptions, gamble, cross_check=not args.no_cross_check)
        payload = {"gamble": format_formula(gamble), "lower_bound": format_rational(bound)}
        _emit(args, [format_rational(bound)], payload)
        return 0
    if args.FORMULA is None:
        msg = "entail needs a conclusion FORMULA or --gamble."
        logger.error(msg)
        raise ExpectLogicError(msg)
    verdict = entails(assumptions, parse(args.FORMULA), args.semantics)
    stats = {"branches": verdict.branches, "lp_solves": verdict.lp_solves}
    return _validity_output(args, args.semantics, verdict.valid, verdict.countermodel, stats)


def translate_cmd(args):
    report = translate(parse(args.FORMULA, "expectation"), args.semantics)
    payload = {
        "formula": report.text,
        "semantics": report.semantics,
        "blowup": format_rational(report.blowup),
    }
    _emit(args, [report.text], payload)
    return 0


def prove_check_cmd(args):
    derivation = load_derivation(_read_file(args.PROOF), args.system)
    result = check_proof(derivation)
    name = SYSTEMS[args.system][0]
    payload = {"system": name, "accepted": result.accepted, "lines": len(derivation.lines)}
    if result.accepted:
        lines = [f"ACCEPTED ({name}, {len(derivation.lines)} lines)", *result.tree_text()]
        payload["unused"] = list(result.unused)
        if args.verify:
            semantic = verify_conclusion(result)
            lines.append(f"conclusion valid: {str(semantic).lower()}")
            payload["conclusion_valid"] = semantic
    else:
        rejection = result.rejection
        lines = [f"REJECTED ({name}) {rejection}"]
        if rejection.detail is not None:
            lines.append(f"detail: {rejection.detail}")
        payload["rejection"] = {
            "line": rejection.line,
            "reason": rejection.reason,
            "message": rejection.message,
            "detail": _jsonable(rejection.detail),
        }
    _emit(args, lines, payload)
    return 0 if result.accepted else 1


def _jsonable(detail):
    if detail is None or isinstance(detail, (str, int, bool)):
        return detail
    if isinstance(detail, dict):
        return {str(key): _jsonable(value) for key, value in detail.items()}
    if hasattr(detail, "worlds"):
        return structure_to_dict(detail)
    return str(detail)
