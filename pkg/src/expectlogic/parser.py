"""Concrete grammar and parser for formulas of all languages.

The grammar is written in lark's EBNF and parsed with the Earley parser. The
Boolean layer is generated once per inequality language so that a parse
never mixes expectation, likelihood and gamble literals. The published EBNF
is in docs/grammar.md.
"""

import logging
from fractions import Fraction
from functools import lru_cache

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from expectlogic.errors import FormulaSyntaxError
from expectlogic.formulas import (
    FALSE,
    TRUE,
    And,
    ExpectationInequality,
    Formula,
    Gamble,
    GambleInequality,
    Implies,
    LikelihoodInequality,
    Not,
    Or,
    Prop,
    indicator,
    literals,
    map_literals,
    negate_terms,
)
from expectlogic.gambles import gamble_join_all

logger = logging.getLogger(__name__)

LANGUAGES = ("prop", "gamble", "expectation", "likelihood", "gamble-ineq")

# tried in this order for lang="auto"
AUTO_ORDER = ("expectation", "likelihood", "gamble-ineq")

START_RULES = {
    "prop": "prop",
    "gamble": "gamble",
    "expectation": "e_formula",
    "likelihood": "l_formula",
    "gamble-ineq": "g_formula",
}

_BOOLEAN_LAYER = r"""
?{p}_formula: {p}_or | {p}_or "->" {p}_formula -> implies
?{p}_or: {p}_and | {p}_or "|" {p}_and -> or_
?{p}_and: {p}_not | {p}_and "&" {p}_not -> and_
?{p}_not: {p}_atom | "!" "(" {p}_formula ")" -> not_
?{p}_atom: {p}_comparison | "(" {p}_formula ")"
"""

_BASE_GRAMMAR = r"""
// propositional formulas
?prop: prop_or | prop_or "->" prop -> implies
?prop_or: prop_and | prop_or "|" prop_and -> or_
?prop_and: prop_not | prop_and "&" prop_not -> and_
?prop_not: prop_atom | "!" prop_not -> not_
?prop_atom: NAME -> var
    | "true" -> true
    | "false" -> false
    | "(" prop ")"

// gambles
?gamble: "0" -> zero_gamble
    | gsum
gsum: [SIGN] gterm (SIGN gterm)*
gterm: [COEF] gitem
?gitem: prop
    | JOIN "(" gamble ("," gamble)* ")" -> join

// inequality literals
e_comparison: esum REL esum
esum: [SIGN] eitem (SIGN eitem)*
eitem: [COEF] "e" "(" gamble ")" -> eterm
    | COEF -> const

l_comparison: lsum REL lsum
lsum: [SIGN] litem (SIGN litem)*
litem: [COEF] "l" "(" prop ")" -> lterm
    | COEF -> const

g_comparison: gamble REL gamble

NAME: /(?!(?:true|false|e|l|max|min)(?![A-Za-z0-9_]))[A-Za-z_][A-Za-z0-9_]*/
COEF: /\d+(\/\d+)?/
SIGN: "+" | "-"
REL: ">=" | "<=" | ">" | "<" | "="
JOIN: "max" | "min"

%import common.WS
%ignore WS
"""

GRAMMAR = _BASE_GRAMMAR + "".join(_BOOLEAN_LAYER.format(p=p) for p in ("e", "l", "g"))


@lru_cache(maxsize=None)
def _parser(start: str) -> Lark:
    return Lark(GRAMMAR, start=start, parser="earley", lexer="dynamic", ambiguity="resolve")


def expand_relation(relation: str, terms: tuple, bound: Fraction, make) -> Formula:
    """Expand <=, <, >, = into the >= / negation core."""
    if relation == ">=":
        return make(terms, bound)
    if relation == "<=":
        return make(negate_terms(terms), -bound)
    if relation == "<":
        return Not(make(terms, bound))
    if relation == ">":
        return Not(make(negate_terms(terms), -bound))
    return And(make(terms, bound), make(negate_terms(terms), -bound))


def expand_gamble_relation(relation: str, left: Gamble, right: Gamble) -> Formula:
    if relation == ">=":
        return GambleInequality(left, right)
    if relation == "<=":
        return GambleInequality(right, left)
    if relation == ">":
        return Not(GambleInequality(right, left))
    if relation == "<":
        return Not(GambleInequality(left, right))
    return And(GambleInequality(left, right), GambleInequality(right, left))


def _signed(sign, value):
    return -value if sign is not None and str(sign) == "-" else value


@v_args(inline=True)
class FormulaBuilder(Transformer):
    """Turns the lark parse tree into formula objects."""

    def COEF(self, token):  # noqa: N802
        num, _, den = str(token).partition("/")
        if den and int(den) == 0:
            msg = f'Rational with zero denominator "{token}" at line {token.line}, column {token.column}.'
            raise FormulaSyntaxError(msg, token.line, token.column, token.start_pos)
        return Fraction(int(num), int(den or 1))

    # propositional level
    def var(self, name):
        return Prop(str(name))

    def true(self):
        return TRUE

    def false(self):
        return FALSE

    def not_(self, arg):
        return Not(arg)

    def and_(self, left, right):
        return And(left, right)

    def or_(self, left, right):
        return Or(left, right)

    def implies(self, left, right):
        return Implies(left, right)

    # gambles
    def zero_gamble(self):
        return Gamble(())

    def join(self, kind, *gambles):
        return gamble_join_all(list(gambles), str(kind))

    def gterm(self, coef, item):
        coef = Fraction(1) if coef is None else coef
        if isinstance(item, Gamble):
            return tuple((coef * c, formula) for c, formula in item.terms)
        return ((coef, item),)

    def gsum(self, sign, first, *rest):
        terms = list(negate_terms(first) if _signed(sign, 1) < 0 else first)
        for op, group in zip(rest[::2], rest[1::2]):
            terms.extend(negate_terms(group) if str(op) == "-" else group)
        return Gamble(tuple(terms))

    # inequality sums: lists of (coef, argument) plus a constant
    def eterm(self, coef, gamble):
        return (Fraction(1) if coef is None else coef, gamble)

    def lterm(self, coef, formula):
        return (Fraction(1) if coef is None else coef, formula)

    def const(self, value):
        return value

    def _sum(self, sign, first, *rest):
        terms, constant = [], Fraction(0)
        items = [(sign, first), *zip(rest[::2], rest[1::2])]
        for op, item in items:
            if isinstance(item, tuple):
                coef, arg = item
                terms.append((_signed(op, coef), arg))
            else:
                constant += _signed(op, item)
        return terms, constant

    esum = _sum
    lsum = _sum

    def _comparison(self, lhs, rel, rhs, make):
        (lterms, lconst), (rterms, rconst) = lhs, rhs
        terms = tuple(lterms) + negate_terms(rterms)
        if not terms:
            msg = (
                f"Comparison without any e/l term at line {rel.line}, "
                f"column {rel.column}."
            )
            raise FormulaSyntaxError(msg, rel.line, rel.column, rel.start_pos)
        return expand_relation(str(rel), terms, rconst - lconst, make)

    def e_comparison(self, lhs, rel, rhs):
        return self._comparison(lhs, rel, rhs, ExpectationInequality)

    def l_comparison(self, lhs, rel, rhs):
        return self._comparison(lhs, rel, rhs, LikelihoodInequality)

    def g_comparison(self, left, rel, right):
        return expand_gamble_relation(str(rel), left, right)


def _line_column(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _parse_one(text: str, lang: str):
    try:
        tree = _parser(START_RULES[lang]).parse(text)
        return FormulaBuilder().transform(tree)
    except UnexpectedInput as exc:
        offset = exc.pos_in_stream
        if offset is None or offset < 0:
            offset = len(text)
        line, column = _line_column(text, offset)
        msg = f"Syntax error in {lang} formula at line {line}, column {column} (offset {offset})."
        raise FormulaSyntaxError(msg, line, column, offset) from None
    except VisitError as exc:
        raise exc.orig_exc from None


def parse(text: str, lang: str = "auto") -> Formula | Gamble:
    """Parse formula text of the given language.

    lang is one of prop, gamble, expectation, likelihood, gamble-ineq or auto.
    With auto the inequality languages are tried in turn and the error of the
    attempt that got furthest is raised.
    """
    if lang != "auto":
        if lang not in START_RULES:
            msg = f'Unknown language "{lang}", expected one of {", ".join(LANGUAGES)} or auto.'
            raise ValueError(msg)
        return _parse_one(text, lang)
    errors = []
    for candidate in AUTO_ORDER:
        try:
            result = _parse_one(text, candidate)
        except FormulaSyntaxError as exc:
            errors.append(exc)
        else:
            logger.debug("-> Parsed as %s formula.", candidate)
            return result
    raise max(errors, key=lambda exc: exc.offset)


def language_of(formula: Formula) -> str:
    """Language of an inequality formula: expectation, likelihood or gamble-ineq."""
    kinds = set()
    for literal in literals(formula):
        if isinstance(literal, ExpectationInequality):
            kinds.add("expectation")
        elif isinstance(literal, LikelihoodInequality):
            kinds.add("likelihood")
        elif isinstance(literal, GambleInequality):
            kinds.add("gamble-ineq")
        else:
            kinds.add("prop")
    if len(kinds) != 1:
        msg = f"Formula mixes languages: {sorted(kinds) or ['none']}"
        raise ValueError(msg)
    return kinds.pop()


def likelihood_to_expectation(formula: Formula) -> Formula:
    """Replace every l(phi) by e(1 phi)."""

    def rewrite(literal):
        if isinstance(literal, LikelihoodInequality):
            return ExpectationInequality(
                tuple((coef, indicator(phi)) for coef, phi in literal.terms), literal.bound
            )
        return literal

    return map_literals(formula, rewrite)
