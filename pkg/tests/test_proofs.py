import logging

import pytest
from expectlogic.errors import BudgetExceededError, ProofFormatError
from expectlogic.parser import parse
from expectlogic.proofs import (
    SYSTEMS,
    check_proof,
    is_axiom_instance,
    is_linear_valid,
    is_tautology,
    load_derivation,
    verify_conclusion,
)


@pytest.fixture(scope="module")
def proofdir(datadir):
    return datadir / "proofs"


def load(path, system):
    return load_derivation(path.read_text(encoding="utf-8"), system)


ACCEPTED = [
    ("additivity.json", "axprob"),
    ("complement.json", "axprob"),
    ("scaling.json", "axprob"),
    ("superadditivity.json", "axlp"),
    ("affine.json", "axlp"),
    ("affine.json", "axbel"),
    ("affine.json", "axposs"),
    ("inclusion_exclusion.json", "axbel"),
    ("comonotonic.json", "axbel"),
    ("comonotonic.json", "axposs"),
    ("maxitivity.json", "axposs"),
    ("disjoint_sum.json", "axg"),
    ("gamble_taut.json", "axg"),
]

REJECTED = [
    ("additivity.json", "axlp", 1, "not-in-system"),
    ("rejected/chain_not_nested.json", "axbel", 1, "chain-side-condition"),
    ("rejected/negative_scale.json", "axlp", 1, "coefficient-sign"),
    ("rejected/mp_mismatch.json", "axprob", 3, "mp-mismatch"),
    ("rejected/mp_forward.json", "axprob", 2, "mp-reference"),
    ("rejected/not_tautology.json", "axprob", 1, "not-tautology"),
    ("rejected/not_linear.json", "axlp", 1, "not-linear-valid"),
    ("rejected/gamble_side.json", "axprob", 1, "gamble-side-condition"),
    ("rejected/wrong_order.json", "axprob", 1, "schema-mismatch"),
    ("rejected/wrong_meet.json", "axbel", 1, "join-mismatch"),
    ("rejected/syntax.json", "axprob", 2, "syntax"),
    ("rejected/overlapping.json", "axg", 1, "disjointness-side-condition"),
    ("rejected/reversed_implication.json", "axg", 1, "implication-side-condition"),
    ("rejected/binding.json", "axprob", 1, "binding-mismatch"),
]


@pytest.mark.parametrize(("name", "system"), ACCEPTED)
def test_accepted(proofdir, name, system):
    result = check_proof(load(proofdir / name, system))
    assert result.accepted, result.rejection
    assert result.rejection is None
    assert result.conclusion == result.formulas[-1]


def test_every_axiom_is_exercised(proofdir):
    used = {}
    for name, system in ACCEPTED:
        derivation = load(proofdir / name, system)
        rules = {line.by.split()[0] for line in derivation.lines}
        used.setdefault(system, set()).update(rules)
    for system, (_, members) in SYSTEMS.items():
        assert used[system] == members, system


@pytest.mark.slow
@pytest.mark.parametrize(("name", "system"), ACCEPTED)
def test_accepted_conclusions_are_valid(proofdir, name, system):
    result = check_proof(load(proofdir / name, system))
    assert verify_conclusion(result)


@pytest.mark.parametrize(("name", "system", "line", "reason"), REJECTED)
def test_rejected(proofdir, name, system, line, reason):
    result = check_proof(load(proofdir / name, system))
    assert not result.accepted
    assert result.conclusion is None
    assert result.rejection.line == line
    assert result.rejection.reason == reason
    assert not verify_conclusion(result)


def test_rejection_details(proofdir):
    result = check_proof(load(proofdir / "additivity.json", "axlp"))
    assert str(result.rejection) == "line 1: E1 not in AX^lp"

    result = check_proof(load(proofdir / "rejected/chain_not_nested.json", "axbel"))
    assert result.rejection.detail == {"p": True, "q": False}

    result = check_proof(load(proofdir / "rejected/not_tautology.json", "axprob"))
    assert result.rejection.detail == {"1 e(1 p) >= 0": True, "1 e(1 q) >= 0": False}

    result = check_proof(load(proofdir / "rejected/not_linear.json", "axlp"))
    witness = result.rejection.detail
    assert set(witness) == {"e(1 p)", "e(1 q)"}

    result = check_proof(load(proofdir / "rejected/binding.json", "axprob"))
    assert result.rejection.detail == {"a": "2"}


def test_tree_and_unused_lines(proofdir, caplog):
    result = check_proof(load(proofdir / "additivity.json", "axprob"))
    assert result.unused == ()
    tree = result.tree_text()
    assert tree[0].startswith("3. 1 e(1 p + 1 q) - 1 e(1 p) - 1 e(1 q) >= 0  [MP 1 2]")
    assert len(tree) == 3

    document = (
        '[{"formula": "e(true) = 1", "by": "E4"},'
        ' {"formula": "e(false) = 0", "by": "E3"}]'
    )
    with caplog.at_level(logging.WARNING):
        result = check_proof(load_derivation(document, "axprob"))
    assert result.accepted
    assert result.unused == (1,)
    assert "Lines not used for the conclusion: 1" in caplog.text


def test_malformed_documents():
    with pytest.raises(ProofFormatError, match="not valid JSON"):
        load_derivation("[{", "axprob")
    with pytest.raises(ProofFormatError, match="unknown justification"):
        load_derivation('[{"formula": "e(true) = 1", "by": "E12"}]', "axprob")
    with pytest.raises(ProofFormatError, match="unknown system"):
        load_derivation("[]", "axfoo")
    with pytest.raises(ProofFormatError, match="extra fields not permitted"):
        load_derivation('[{"formula": "e(true) = 1", "by": "E4", "note": "x"}]', "axprob")
    derivation = load_derivation(
        '[{"formula": "e(true) = 1", "by": "Taut", "bindings": {"a": "1"}}]', "axprob"
    )
    with pytest.raises(ProofFormatError, match="takes no bindings"):
        check_proof(derivation)


@pytest.mark.parametrize(
    ("text", "axiom", "system", "ok"),
    [
        ("e(2 p) = 2 e(p)", "E2", "axprob", True),
        ("e(-1 p + 0 true) = -1 e(p)", "E7", "axlp", False),
        ("e(true) = 1", "E4", "axprob", True),
        ("e(true) = 1", "E4", "axlp", False),
        ("e(2 p + 1 true) = 2 e(p) + 1", "E7", None, True),
        ("e(2 p + 1 true) = 2 e(p) + 2", "E7", None, False),
        ("2 e(1 p + 1 q) - 2 e(p) - 2 e(q) >= 0", "E6", "axlp", True),
        ("e(p) + e(q) - e(1 p + 1 q) <= 0", "E6", "axlp", False),
        ("e(max(p, q)) - e(p) - e(q) + e(min(p, q)) >= 0", "E9", "axbel", True),
        ("e(p|q) = e(p) + e(q) - e(p&q)", "E9", "axbel", False),
        ("e(1 p + 1 p&q + 1 p&q&r) = e(p) + e(p&q) + e(p&q&r)", "E10", "axposs", True),
        ("e(1 p - 1 p&q) = e(p) - e(p&q)", "E10", "axbel", False),
    ],
)
def test_is_axiom_instance(text, axiom, system, ok):
    match = is_axiom_instance(parse(text), axiom, system)
    assert match.ok is ok, match.message


def test_axiom_instance_reasons():
    match = is_axiom_instance(parse("e(-1 p + 0 true) = -1 e(p)"), "E7")
    assert match.reason == "coefficient-sign"
    assert "must be >= 0" in match.message
    match = is_axiom_instance(parse("e(1 p - 1 p&q) = e(p) - e(p&q)"), "E10")
    assert match.reason == "coefficient-sign"
    match = is_axiom_instance(parse("e(true) = 1"), "E1", "axlp")
    assert match.reason == "not-in-system"
    match = is_axiom_instance(parse("e(2 p) = 2 e(p)"), "E2", bindings={"a": "2", "phi": "p"})
    assert match.ok
    assert match.bound["a"] == 2
    with pytest.raises(ProofFormatError, match="no metavariable"):
        is_axiom_instance(parse("e(2 p) = 2 e(p)"), "E2", bindings={"gamma": "p"})
    with pytest.raises(ProofFormatError, match="cannot be read"):
        is_axiom_instance(parse("e(2 p) = 2 e(p)"), "E2", bindings={"a": "two"})
    with pytest.raises(ProofFormatError, match="Unknown axiom"):
        is_axiom_instance(parse("e(true) = 1"), "E12")


def test_e5_with_side_binding():
    formula = parse("e(p + q) - e(p|q) >= 0")
    assert is_axiom_instance(formula, "E5").ok
    side = "(p&q >= 0) -> (p + q >= p|q)"
    assert is_axiom_instance(formula, "E5", bindings={"side": side}).ok
    match = is_axiom_instance(parse("e(q) - e(p) >= 0"), "E5", bindings={"side": "q >= p"})
    assert match.reason == "gamble-side-condition"


def test_tautology_and_linear_validity(temp_config):
    assert is_tautology(parse("e(p) >= 0 | !(e(p) >= 0)")) == (True, None)
    assert is_linear_valid(parse("e(p) >= 1 -> e(p) > 0")) == (True, None)
    assert is_linear_valid(parse("(e(p) = e(q)) -> (2 e(p) - e(q) - e(q) = 0)"))[0]
    temp_config.load_config(max_taut_vars=1)
    with pytest.raises(BudgetExceededError, match="--max-taut-vars"):
        is_tautology(parse("e(p) >= 0 | e(q) >= 0"))
