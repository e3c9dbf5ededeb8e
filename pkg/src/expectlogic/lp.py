"""Exact rational linear programming.

Dense tableau simplex over fractions.Fraction with Bland's anti-cycling rule
and a two-phase start. Strict inequalities are decided by maximising a shared
slack epsilon: the system is feasible iff the optimum epsilon is positive.
Every returned witness is substituted back into the system before it is
handed out.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from expectlogic.errors import LPError
from expectlogic.utils import format_rational

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


class Relation(str, Enum):
    GE = ">="
    GT = ">"
    EQ = "="


# "<=" and "<" are stored with negated coefficients
_NEGATED = {"<=": Relation.GE, "<": Relation.GT}


@dataclass(frozen=True)
class Constraint:
    coefs: tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction
    label: str = ""

    def lhs_value(self, values: list[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.coefs, values)), ZERO)

    def satisfied_by(self, values: list[Fraction]) -> bool:
        lhs = self.lhs_value(values)
        if self.relation is Relation.GE:
            return lhs >= self.rhs
        if self.relation is Relation.GT:
            return lhs > self.rhs
        return lhs == self.rhs


@dataclass
class LinearSystem:
    """Named variables, linear constraints and an optional objective.

    Variables are free unless listed in ``nonnegative``.
    """

    variables: list[str] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    nonnegative: set[str] = field(default_factory=set)
    objective: tuple[Fraction, ...] | None = None
    maximize: bool = False

    def add_variable(self, name: str, *, nonnegative: bool = False) -> str:
        if name in self.variables:
            msg = f'Variable "{name}" defined twice.'
            raise LPError(msg)
        if self.constraints or self.objective is not None:
            msg = "Variables must be declared before constraints."
            raise LPError(msg)
        self.variables.append(name)
        if nonnegative:
            self.nonnegative.add(name)
        return name

    def _vector(self, coefs: Mapping[str, Fraction | int]) -> tuple[Fraction, ...]:
        unknown = set(coefs) - set(self.variables)
        if unknown:
            msg = f"Unknown LP variables: {sorted(unknown)}"
            raise LPError(msg)
        return tuple(Fraction(coefs.get(name, 0)) for name in self.variables)

    def add(
        self,
        coefs: Mapping[str, Fraction | int],
        relation: str | Relation,
        rhs: Fraction | int,
        label: str = "",
    ) -> Constraint:
        """Add a constraint; relation is one of >=, >, =, <=, <."""
        vector = self._vector(coefs)
        rhs = Fraction(rhs)
        relation = relation.value if isinstance(relation, Relation) else relation
        if relation in _NEGATED:
            vector = tuple(-c for c in vector)
            rhs = -rhs
            rel = _NEGATED[relation]
        else:
            rel = Relation(relation)
        constraint = Constraint(vector, rel, rhs, label or f"c{len(self.constraints) + 1}")
        self.constraints.append(constraint)
        return constraint

    def set_objective(self, coefs: Mapping[str, Fraction | int], *, maximize: bool = False):
        self.objective = self._vector(coefs)
        self.maximize = maximize

    @property
    def has_strict(self) -> bool:
        return any(c.relation is Relation.GT for c in self.constraints)

    def violations(self, witness: Mapping[str, Fraction]) -> list[Constraint]:
        values = [witness[name] for name in self.variables]
        bad = [c for c in self.constraints if not c.satisfied_by(values)]
        bad.extend(
            Constraint((), Relation.GE, ZERO, f"{name} >= 0")
            for name in sorted(self.nonnegative)
            if witness[name] < 0
        )
        return bad


def _term_text(coefs, names) -> str:
    parts = []
    for coef, name in zip(coefs, names):
        if coef == 0:
            continue
        if not parts:
            parts.append(f"{format_rational(coef)} {name}")
        elif coef < 0:
            parts.append(f" - {format_rational(-coef)} {name}")
        else:
            parts.append(f" + {format_rational(coef)} {name}")
    return "".join(parts) or "0"


def format_system(system: LinearSystem) -> str:
    """Debug dump of a system, one constraint per line."""
    lines = [
        "variables: "
        + ", ".join(
            f"{name} ({'>= 0' if name in system.nonnegative else 'free'})"
            for name in system.variables
        )
    ]
    for constraint in system.constraints:
        lhs = _term_text(constraint.coefs, system.variables)
        lines.append(
            f"{constraint.label}: {lhs} {constraint.relation.value} "
            f"{format_rational(constraint.rhs)}"
        )
    if system.objective is not None:
        direction = "maximize" if system.maximize else "minimize"
        lines.append(f"{direction}: {_term_text(system.objective, system.variables)}")
    return "\n".join(lines)


# ===== tableau =====


class _Tableau:
    """Rows in canonical form for the current basis plus a reduced-cost row."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.obj: list[Fraction] = []
        self.obj_value = ZERO
        self.pivots = 0

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def set_cost(self, cost: list[Fraction]):
        self.obj = list(cost)
        self.obj_value = ZERO
        for row, rhs, col in zip(self.rows, self.rhs, self.basis):
            factor = self.obj[col]
            if factor:
                self.obj = [o - factor * a for o, a in zip(self.obj, row)]
                self.obj_value += factor * rhs

    def pivot(self, r: int, c: int):
        self.pivots += 1
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            row = [a / piv for a in row]
            self.rows[r] = row
            self.rhs[r] /= piv
        for i, other in enumerate(self.rows):
            if i != r and other[c]:
                factor = other[c]
                self.rows[i] = [a - factor * b for a, b in zip(other, row)]
                self.rhs[i] -= factor * self.rhs[r]
        factor = self.obj[c]
        if factor:
            self.obj = [a - factor * b for a, b in zip(self.obj, row)]
            self.obj_value += factor * self.rhs[r]
        self.basis[r] = c

    def minimize(self, allowed: list[bool]) -> str:
        """Primal simplex with Bland's rule; returns "optimal" or "unbounded"."""
        while True:
            entering = next(
                (j for j in range(self.ncols) if allowed[j] and self.obj[j] < 0), None
            )
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)

    def column_values(self) -> list[Fraction]:
        values = [ZERO] * self.ncols
        for rhs, col in zip(self.rhs, self.basis):
            values[col] = rhs
        return values


@dataclass
class _Standardized:
    tableau: _Tableau
    # variable name -> list of (column, sign)
    columns: dict[str, list[tuple[int, int]]]
    epsilon_col: int | None
    n_structural: int
    artificial_start: int


def _standardize(system: LinearSystem, *, with_epsilon: bool) -> _Standardized:
    columns: dict[str, list[tuple[int, int]]] = {}
    ncol = 0
    for name in system.variables:
        if name in system.nonnegative:
            columns[name] = [(ncol, 1)]
            ncol += 1
        else:
            columns[name] = [(ncol, 1), (ncol + 1, -1)]
            ncol += 2
    epsilon_col = None
    if with_epsilon:
        epsilon_col = ncol
        ncol += 1

    # constraint rows before slacks: (coefficients over structural cols, rel, rhs)
    raw_rows = []
    for constraint in system.constraints:
        coefs = [ZERO] * ncol
        for name, coef in zip(system.variables, constraint.coefs):
            for col, sign in columns[name]:
                coefs[col] += sign * coef
        if constraint.relation is Relation.GT:
            if epsilon_col is None:
                msg = "Strict constraint in a system solved without epsilon."
                raise LPError(msg)
            coefs[epsilon_col] = -ONE
        raw_rows.append((coefs, constraint.relation, constraint.rhs))
    if epsilon_col is not None:
        # epsilon <= 1 keeps the epsilon maximisation bounded
        coefs = [ZERO] * ncol
        coefs[epsilon_col] = -ONE
        raw_rows.append((coefs, Relation.GE, -ONE))

    n_slack = sum(1 for _, rel, _ in raw_rows if rel is not Relation.EQ)
    n_structural = ncol
    artificial_start = ncol + n_slack
    total = artificial_start + len(raw_rows)

    rows, rhs, basis = [], [], []
    slack = ncol
    for index, (coefs, rel, b) in enumerate(raw_rows):
        row = coefs + [ZERO] * (total - ncol)
        if rel is not Relation.EQ:
            row[slack] = -ONE
            slack += 1
        if b < 0:
            row = [-a for a in row]
            b = -b
        row[artificial_start + index] = ONE
        rows.append(row)
        rhs.append(b)
        basis.append(artificial_start + index)
    return _Standardized(
        _Tableau(rows, rhs, basis), columns, epsilon_col, n_structural, artificial_start
    )


def _phase_one(std: _Standardized) -> bool:
    """Drive the artificials to zero; False if the system is infeasible."""
    tab = std.tableau
    if not tab.rows:
        return True
    cost = [ZERO] * tab.ncols
    for col in range(std.artificial_start, tab.ncols):
        cost[col] = ONE
    tab.set_cost(cost)
    tab.minimize([True] * tab.ncols)
    if tab.obj_value > 0:
        return False
    # pivot remaining (zero-valued) artificials out, drop redundant rows
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= std.artificial_start:
            col = next(
                (j for j in range(std.artificial_start) if tab.rows[r][j] != 0), None
            )
            if col is None:
                del tab.rows[r], tab.rhs[r], tab.basis[r]
                continue
            tab.pivot(r, col)
        r += 1
    return True


def _solution(system: LinearSystem, std: _Standardized) -> dict[str, Fraction]:
    values = std.tableau.column_values() if std.tableau.rows else []

    def col(j):
        return values[j] if j < len(values) else ZERO

    return {
        name: sum((sign * col(j) for j, sign in std.columns[name]), ZERO)
        for name in system.variables
    }


def _verified(system: LinearSystem, witness: dict[str, Fraction]) -> dict[str, Fraction]:
    bad = system.violations(witness)
    if bad:
        msg = f"LP witness violates constraints: {[c.label for c in bad]}"
        logger.error("%s\n%s", msg, format_system(system))
        raise LPError(msg)
    return witness


def lp_feasible(system: LinearSystem) -> dict[str, Fraction] | None:
    """Exact witness satisfying every constraint, or None if infeasible."""
    strict = system.has_strict
    std = _standardize(system, with_epsilon=strict)
    if not _phase_one(std):
        logger.debug("-> LP infeasible in phase one (%s pivots)", std.tableau.pivots)
        return None
    if strict:
        tab = std.tableau
        cost = [ZERO] * tab.ncols
        cost[std.epsilon_col] = -ONE
        tab.set_cost(cost)
        allowed = [j < std.artificial_start for j in range(tab.ncols)]
        tab.minimize(allowed)
        epsilon = tab.column_values()[std.epsilon_col]
        if epsilon <= 0:
            logger.debug("-> LP strict part infeasible (epsilon = %s)", epsilon)
            return None
    return _verified(system, _solution(system, std))


@dataclass(frozen=True)
class OptimizeResult:
    status: str  # "optimal", "unbounded" or "infeasible"
    optimum: Fraction | None = None
    witness: dict[str, Fraction] | None = None


def lp_optimize(system: LinearSystem) -> OptimizeResult:
    """Exact optimum of the objective over the non-strict system."""
    if system.objective is None:
        msg = "lp_optimize needs an objective."
        raise LPError(msg)
    if system.has_strict:
        msg = "lp_optimize accepts non-strict constraints only."
        raise LPError(msg)
    std = _standardize(system, with_epsilon=False)
    if not _phase_one(std):
        return OptimizeResult("infeasible")
    tab = std.tableau
    sign = -1 if system.maximize else 1
    cost = [ZERO] * (tab.ncols if tab.rows else std.artificial_start)
    for name, coef in zip(system.variables, system.objective):
        for j, col_sign in std.columns[name]:
            cost[j] += sign * col_sign * coef
    if not tab.rows:
        # no constraints left: every column is >= 0, so x = 0 is optimal
        # unless some cost is negative
        if any(c < 0 for c in cost):
            return OptimizeResult("unbounded")
        witness = {name: ZERO for name in system.variables}
        return OptimizeResult("optimal", ZERO, witness)
    tab.set_cost(cost)
    allowed = [j < std.artificial_start for j in range(tab.ncols)]
    if tab.minimize(allowed) == "unbounded":
        return OptimizeResult("unbounded")
    witness = _verified(system, _solution(system, std))
    optimum = sum(
        (c * witness[name] for name, c in zip(system.variables, system.objective)), ZERO
    )
    logger.debug("-> LP optimum %s after %s pivots", optimum, tab.pivots)
    return OptimizeResult("optimal", optimum, witness)

