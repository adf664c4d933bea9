import itertools
import json
from dataclasses import replace
from fractions import Fraction

import pytest

from src.core.combinatorics.allocations import possible_allocations_alg
from src.core.errors import TooLargeError
from src.core.events import event_broker
from src.core.models import Allocation, Outcome
from src.services.auction import run_auction
from src.services.fuzzing import FuzzSpec, fuzz_instances
from src.services.soundness import (
    Goal,
    audit_outcome,
    check_equivalence,
    check_individual_rationality,
    check_scale_invariance,
    check_second_price,
    check_totality,
    check_truthfulness_single_good,
    check_uniqueness,
    check_well_defined,
    mutant_auction,
    run_suite,
)


@pytest.fixture(scope="module")
def corpus():
    return fuzz_instances(FuzzSpec(max_goods=3, max_bidders=3, bid_grid=range(6), instance_count=60, rng_seed=11))


def first_price(instance, seed=None, solver=None):
    """Winners pay their own bid: not truthful."""
    outcome = run_auction(instance, seed, solver)
    prices = {n: instance.bid_table.get((n, outcome.chosen.bundle_of(n)), Fraction(0)) for n in instance.bidders}
    return replace(outcome, payments=prices)


def crashing(instance, seed=None, solver=None):
    raise RuntimeError("engine fell over")


def too_large(instance, seed=None, solver=None):
    raise TooLargeError("test input", 99, 12)


# -------------------------------------------------------------------------
# Correct engine: every goal passes
# -------------------------------------------------------------------------
def test_totality(corpus):
    report = check_totality(corpus, 0)
    assert report.passed
    assert report.instances_checked == len(corpus)
    assert report.goal is Goal.TOTALITY


def test_well_defined(corpus):
    assert check_well_defined(corpus, 0).passed


def test_individual_rationality(corpus):
    report = check_individual_rationality(corpus, 0)
    assert report.passed
    assert report.goal is Goal.WELL_DEFINEDNESS
    assert report.name == "individual_rationality"


def test_uniqueness(corpus):
    report = check_uniqueness(corpus, 42, compare_seed=43)
    assert report.passed


def test_scale_invariance(corpus):
    report = check_scale_invariance(corpus, 0)
    assert report.passed
    assert report.details["factor"] == "3/2"


def test_second_price_profiles():
    report = check_second_price(3, range(5), 0)
    assert report.passed
    assert report.instances_checked == 5 + 25 + 125


def test_equivalence_small_shapes():
    report = check_equivalence(2, 2, tables_per_shape=20)
    assert report.passed
    assert report.details["shapes"]["1x1"] == {"partitions": 1, "allocations": 2}
    assert report.details["shapes"]["2x2"] == {"partitions": 2, "allocations": 9}


def test_truthfulness():
    report = check_truthfulness_single_good(2, range(4), [0, 1])
    assert report.passed
    assert report.instances_checked == 2 * 16 * 2 * 4


def test_audit_accepts_real_outcomes(example_one, single_good):
    assert audit_outcome(example_one, run_auction(example_one, 42)) == []
    assert audit_outcome(single_good, run_auction(single_good, 0)) == []


# -------------------------------------------------------------------------
# Broken engines and outcomes are caught
# -------------------------------------------------------------------------
def test_audit_reports_overlap(example_one):
    outcome = run_auction(example_one, 0)
    broken = replace(outcome, chosen=Allocation.of([(["A"], 2), (["A", "B"], 3)]))
    problems = audit_outcome(example_one, broken)
    assert any("good A is allocated more than once" in p for p in problems)


def test_audit_reports_unknown_bidder_and_missing_payment(example_one):
    outcome = run_auction(example_one, 0)
    broken = replace(outcome, chosen=Allocation.of([(["A"], 7)]), payments={1: Fraction(0)})
    problems = audit_outcome(example_one, broken)
    assert any("unknown bidder 7" in p for p in problems)
    assert any("no payment for bidder(s) 2, 3" in p for p in problems)


def test_audit_reports_wrong_payment(single_good):
    outcome = run_auction(single_good, 0)
    overcharged = replace(outcome, payments={1: Fraction(0), 2: Fraction(5), 3: Fraction(0)})
    problems = audit_outcome(single_good, overcharged)
    assert any("second-price rule says 3" in p for p in problems)


def test_audit_reports_unsold_good(single_good):
    unsold = Outcome(chosen=Allocation(), payments={1: Fraction(0), 2: Fraction(0), 3: Fraction(0)},
                     max_value=Fraction(0), alphas={1: Fraction(0), 2: Fraction(0), 3: Fraction(0)},
                     tie_break_applied=False)
    assert any("unsold" in p for p in audit_outcome(single_good, unsold))


def test_mutant_fails_well_definedness(corpus):
    report = check_well_defined(corpus, 0, runner=mutant_auction)
    assert not report.passed
    assert any("negative payment" in f.diagnostic for f in report.failures)
    assert report.failures[0].instance is not None


def test_mutant_still_total(corpus):
    assert check_totality(corpus, 0, runner=mutant_auction).passed


def test_crashing_engine_fails_totality(corpus):
    report = check_totality(corpus[:5], 0, runner=crashing)
    assert len(report.failures) == 5
    assert "RuntimeError" in report.failures[0].diagnostic


def test_size_guard_is_a_note_not_a_failure(corpus):
    report = check_totality(corpus[:3], 0, runner=too_large)
    assert report.passed
    assert len(report.notes) == 3


def test_drifting_engine_fails_uniqueness(corpus):
    calls = itertools.count()

    def drifting(instance, seed=None, solver=None):
        outcome = run_auction(instance, seed, solver)
        return replace(outcome, max_value=outcome.max_value + next(calls))

    assert not check_uniqueness(corpus[:5], 0, runner=drifting).passed


def test_first_price_is_not_truthful():
    assert not check_truthfulness_single_good(2, range(4), [0], runner=first_price).passed


def test_broken_allocation_list_fails_equivalence():
    def missing_last(goods, bidders):
        return possible_allocations_alg(goods, bidders)[:-1]

    report = check_equivalence(2, 2, tables_per_shape=0, allocations_alg=missing_last)
    assert not report.passed
    assert report.failures[0].instance is None


def test_equivalence_size_guard():
    with pytest.raises(TooLargeError):
        check_equivalence(5, 2)


# -------------------------------------------------------------------------
# Reports and the suite
# -------------------------------------------------------------------------
def test_report_json(corpus):
    report = check_well_defined(corpus[:5], 0, runner=mutant_auction)
    data = report.to_dict()
    assert set(data) == {"goal", "name", "checked", "passed", "failures", "details", "notes"}
    assert data["goal"] == "well_definedness"
    assert data["passed"] is False
    assert data["failures"][0]["instance"]["goods"]
    json.dumps(data)


def test_events_are_published(corpus):
    completed = []

    def on_completed(sender, report, **kwargs):
        completed.append(report.name)

    with event_broker.CHECK_COMPLETED.connected_to(on_completed):
        check_totality(corpus[:2], 0)
    assert completed == ["totality"]


def test_run_suite_passes():
    reports = run_suite(max_goods=2, max_bidders=2, instances=30, seed=0, tables_per_shape=10)
    assert [r.name for r in reports] == [
        "totality",
        "well_definedness",
        "individual_rationality",
        "second_price",
        "uniqueness",
        "scale_invariance",
        "equivalence",
        "truthfulness",
    ]
    assert all(r.passed for r in reports)


def test_run_suite_with_mutant_fails():
    reports = run_suite(max_goods=1, max_bidders=2, instances=10, seed=0, runner=mutant_auction, tables_per_shape=5)
    assert not all(r.passed for r in reports)


# -------------------------------------------------------------------------
# Desk-scale acceptance runs
# -------------------------------------------------------------------------
@pytest.mark.slow
def test_example_one_golden(example_one):
    for solver in ("oracle", "dp"):
        outcome = run_auction(example_one, 0, solver)
        assert outcome.max_value == 4
        assert outcome.alphas == {1: 4, 2: 2, 3: 2}
        assert outcome.payments == {1: 0, 2: 0, 3: 0}
        assert outcome.winner_count == 2


@pytest.mark.slow
def test_second_price_up_to_four_bidders():
    assert check_second_price(4, range(5), 0).passed


@pytest.mark.slow
def test_equivalence_up_to_four_by_four():
    report = check_equivalence(4, 4, tables_per_shape=200)
    assert report.passed
    assert report.details["shapes"]["4x4"]["partitions"] == 15


@pytest.mark.slow
def test_soundness_goals_on_a_thousand_instances():
    instances = fuzz_instances(FuzzSpec(max_goods=4, max_bidders=4, bid_grid=range(6), instance_count=1000))
    assert check_totality(instances, 0).passed
    assert check_well_defined(instances, 0).passed
    assert check_uniqueness(instances, 0).passed
    assert check_individual_rationality(instances, 0).passed
    assert check_scale_invariance(instances, 0).passed


@pytest.mark.slow
def test_truthfulness_three_bidders_three_seeds():
    assert check_truthfulness_single_good(3, range(5), [0, 1, 42]).passed
