"""Config module to share the runtime budgets across all modules in expectlogic.

There is no configuration file. The command line flags and library callers
change the budgets through load_config.
"""

import logging

from pydantic import BaseModel, conint

logger = logging.getLogger(__name__)


class Budgets(BaseModel):
    """Limits that keep the exponential parts of the procedures at desk scale."""

    # propositions per gamble analysis (2**atom_cap atoms)
    atom_cap: conint(ge=0, le=24) = 16
    # propositions per decision-procedure query
    max_props: conint(ge=0, le=8) = 3
    # distinct expectation terms per decision-procedure query
    max_terms: conint(ge=1) = 4
    # Boolean branches plus possibility guess nodes
    max_branches: conint(ge=1) = 10_000
    # variables of the truth-table check for Taut
    max_taut_vars: conint(ge=1, le=24) = 20

    class Config:
        validate_assignment = True


# This parameter will be updated by load_config.
BUDGETS = Budgets()


def load_config(budgets: Budgets | None = None, **overrides):
    """Replace the global budgets.

    Without arguments the defaults are restored. Keyword overrides are applied
    on top of the given (or default) budgets and validated.
    """
    base = Budgets() if budgets is None else budgets
    values = base.dict()
    values.update({key: val for key, val in overrides.items() if val is not None})
    new_budgets = Budgets(**values)
    if budgets is None and not overrides:
        logger.debug("Initializing default budgets.")
    else:
        logger.debug("Budgets set to: %s", new_budgets.dict())
    globals()["BUDGETS"] = new_budgets
    return new_budgets
