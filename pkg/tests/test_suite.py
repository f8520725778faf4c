import pytest

from compcalc.errors import FormatError
from compcalc.ring import QQ, IntegersMod
from compcalc.suite import (
    AXIOM_IDS,
    CHECKS,
    IDENTITY_IDS,
    ModelSpec,
    all_passed,
    default_model_specs,
    default_rings,
    parse_model_token,
    run_suite,
    summary_table,
)


def test_identity_registry_covers_the_battery():
    expected = {
        "relation-b",
        "relation-a",
        "relation-g",
        "unit-axioms",
        "cup-unit-forms",
        "cup-compose",
        "cup-total-derivation",
        "getzler",
        "gerstenhaber",
        "cup-braces",
        "jacobi",
        "square-zero-even",
        "cube-zero-odd",
        "antisymmetry",
        "coboundary-cup-form",
        "coboundary-square",
        "coboundary-square-zero",
        "dev-total-cup",
        "aux-compose",
        "aux-interior",
        "aux-boundary",
        "dev-braces-cup",
        "dev-braces-commutator",
        "bilinearity",
        "represent-morphism",
    }
    assert set(IDENTITY_IDS) == expected
    assert len(IDENTITY_IDS) == len(CHECKS) == 25


def test_small_run_all_pass():
    reports = run_suite(seed=7, trials=18, max_degree=3)
    assert all_passed(reports)
    # cells cover the grid: 23 both-model identities x 9 cells
    # + coboundary-square-zero (endo only) x 6 + represent (free only) x 3
    assert len(reports) == 23 * 9 + 6 + 3
    assert all(r.counterexample is None for r in reports)


def test_trial_distribution_per_identity():
    reports = run_suite(only=["getzler"], seed=1, trials=20, max_degree=3)
    assert sum(r.trials for r in reports) == 20
    assert len(reports) == 9


def test_per_cell_mode():
    reports = run_suite(only=["getzler"], seed=1, trials=5, max_degree=3, per_cell=True)
    assert all(r.trials == 5 for r in reports)


def test_model_and_ring_filters():
    reports = run_suite(
        [ModelSpec(kind="endo", d=1)],
        [IntegersMod(5)],
        only=["jacobi"],
        seed=3,
        trials=10,
        max_degree=3,
    )
    assert len(reports) == 1
    assert reports[0].model == "endo:1" and reports[0].ring == "zmod:5"
    assert reports[0].passed


def test_unknown_identity_rejected():
    with pytest.raises(FormatError):
        run_suite(only=["not-an-identity"], seed=0, trials=1)


def test_reports_deterministic_and_sorted():
    a = run_suite(seed=42, trials=9, max_degree=3)
    b = run_suite(seed=42, trials=9, max_degree=3)
    assert [r.to_json_line() for r in a] == [r.to_json_line() for r in b]
    keys = [(r.identity, r.model, r.ring) for r in a]
    assert keys == sorted(keys)


def test_different_seeds_differ():
    a = run_suite(only=["relation-b"], seed=1, trials=5, max_degree=3)
    b = run_suite(only=["relation-b"], seed=2, trials=5, max_degree=3)
    assert [r.seed for r in a] != [r.seed for r in b]


def test_sign_bug_breaks_axioms_with_counterexample():
    reports = run_suite(
        [ModelSpec(kind="endo", d=2)],
        [QQ],
        only=["relation-b"],
        seed=5,
        trials=40,
        per_cell=True,
        sign_bug=True,
    )
    assert not all_passed(reports)
    failing = [r for r in reports if not r.passed]
    cx = failing[0].counterexample
    assert cx is not None
    assert {"case", "inputs", "lhs", "rhs", "trial"} <= set(cx)
    assert cx["lhs"] != cx["rhs"]


def test_sign_bug_does_not_affect_free_model():
    reports = run_suite(
        [ModelSpec(kind="free", signature=default_model_specs()[2].signature)],
        [QQ],
        only=AXIOM_IDS,
        seed=5,
        trials=10,
        per_cell=True,
        sign_bug=True,
    )
    assert all_passed(reports)


def test_parse_model_token():
    assert parse_model_token("endo:3").key == "endo:3"
    assert parse_model_token("free").key == "free:u/1,m/2,w/3"
    with pytest.raises(FormatError):
        parse_model_token("endo:x")
    with pytest.raises(FormatError):
        parse_model_token("matrix:2")


def test_summary_table_mentions_failures():
    reports = run_suite(
        [ModelSpec(kind="endo", d=1)],
        [QQ],
        only=["relation-b"],
        seed=5,
        trials=30,
        per_cell=True,
        sign_bug=True,
    )
    text = summary_table(reports)
    assert "FAIL" in text and "counterexample" in text


def test_default_rings_and_models():
    assert [r.token for r in default_rings()] == ["q", "zmod:2", "zmod:3"]
    assert [m.key for m in default_model_specs()] == ["endo:1", "endo:2", "free:u/1,m/2,w/3"]
