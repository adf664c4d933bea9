"""
Soundness suite: executable checks that the auction is a well-defined function.

Each check runs the engine over a finite set of instances and records every
counterexample instead of raising. Passing means no anomaly was found on the
instances tried; it is evidence, not proof.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Set

from src.config.settings import settings
from src.core.combinatorics.allocations import possible_allocations_alg, possible_allocations_oracle
from src.core.combinatorics.partitions import all_partitions
from src.core.errors import TooLargeError
from src.core.events import event_broker
from src.core.instance import bid_value, scale_bids
from src.core.models import Allocation, AuctionInstance, Bid, Outcome, format_bundle
from src.core.vcg.single_good import second_price_outcome
from src.core.vcg.tiebreak import MASK64, check_seed
from src.core.wdp import DynamicProgrammingSolver, OracleSolver
from src.infrastructure.serialization.bidfile import instance_to_dict
from src.infrastructure.serialization.outcome import outcome_fingerprint
from src.services.auction import run_auction
from src.services.fuzzing import FuzzSpec, fuzz_instances, good_names
from src.utils.logger import get_logger

logger = get_logger("soundness")

AuctionRunner = Callable[..., Outcome]


class Goal(str, Enum):
    TOTALITY = "totality"
    WELL_DEFINEDNESS = "well_definedness"
    UNIQUENESS = "uniqueness"
    EQUIVALENCE = "equivalence"
    TRUTHFULNESS = "truthfulness"


@dataclass
class Failure:
    instance: Optional[AuctionInstance]
    diagnostic: str


@dataclass
class SoundnessReport:
    goal: Goal
    name: str = ""
    instances_checked: int = 0
    failures: List[Failure] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.name = self.name or self.goal.value

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, instance: Optional[AuctionInstance], diagnostic: str) -> None:
        self.failures.append(Failure(instance, diagnostic))
        event_broker.CHECK_FAILED.send(self, goal=self.name, diagnostic=diagnostic)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "goal": self.goal.value,
            "name": self.name,
            "checked": self.instances_checked,
            "passed": self.passed,
            "failures": [
                {"diagnostic": f.diagnostic, "instance": instance_to_dict(f.instance) if f.instance else None}
                for f in self.failures
            ],
            "details": self.details,
            "notes": self.notes,
        }


def _finish(report: SoundnessReport) -> SoundnessReport:
    logger.debug(f"{report.name}: {report.instances_checked} checked, {len(report.failures)} failed")
    event_broker.CHECK_COMPLETED.send(report, report=report)
    return report


def _evaluate(fn: Callable, items: Sequence) -> List:
    # Order of results always follows `items`.
    if settings.MAX_WORKERS > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=settings.MAX_WORKERS) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _attempt(runner: AuctionRunner, instance: AuctionInstance, seed: int, solver: Optional[str]):
    """(outcome, error) for one run; errors are returned, never raised."""
    try:
        return runner(instance, seed, solver), None
    except Exception as e:  # noqa: BLE001 - every failure mode is report content
        return None, e


# -------------------------------------------------------------------------
# Goal 1: totality
# -------------------------------------------------------------------------
def check_totality(instances: Sequence[AuctionInstance], seed: int, runner: AuctionRunner = run_auction,
                   solver: Optional[str] = None) -> SoundnessReport:
    report = SoundnessReport(Goal.TOTALITY)
    for instance, (outcome, error) in zip(instances, _evaluate(lambda i: _attempt(runner, i, seed, solver), instances)):
        report.instances_checked += 1
        if isinstance(error, TooLargeError):
            report.notes.append(f"skipped by size guard: {error}")
        elif error is not None:
            report.fail(instance, f"no outcome: {type(error).__name__}: {error}")
        elif outcome is None:
            report.fail(instance, "no outcome returned")
    return _finish(report)


# -------------------------------------------------------------------------
# Goal 2: well-definedness
# -------------------------------------------------------------------------
def audit_outcome(instance: AuctionInstance, outcome: Outcome) -> List[str]:
    """Everything wrong with one outcome, as human-readable diagnostics."""
    problems = []
    holders: Dict[str, List[int]] = {}
    seen_bidders: Set[int] = set()
    for bundle, bidder in outcome.chosen.pairs:
        if not bundle:
            problems.append(f"bidder {bidder} is assigned an empty bundle")
        if bidder not in instance.bidders:
            problems.append(f"bundle {format_bundle(bundle)} goes to unknown bidder {bidder}")
        if bidder in seen_bidders:
            problems.append(f"bidder {bidder} receives more than one bundle")
        seen_bidders.add(bidder)
        for good in bundle:
            holders.setdefault(good, []).append(bidder)
    for good in sorted(holders):
        if len(holders[good]) > 1:
            owners = " and ".join(str(n) for n in sorted(holders[good]))
            problems.append(f"good {good} is allocated more than once (bidders {owners})")
        if good not in instance.goods:
            problems.append(f"good {good} is not among the goods for sale")

    missing = sorted(instance.bidders - set(outcome.payments))
    if missing:
        problems.append(f"no payment for bidder(s) {', '.join(map(str, missing))}")
    for n, price in sorted(outcome.payments.items()):
        if price < 0:
            problems.append(f"bidder {n} has negative payment {price}")
    if problems:
        return problems

    total = sum((instance.bid_table.get((n, b), Fraction(0)) for b, n in outcome.chosen.pairs), Fraction(0))
    if total != outcome.max_value:
        problems.append(f"chosen allocation is worth {total}, not the reported maximum {outcome.max_value}")
    for n in sorted(instance.bidders):
        expected = outcome.alphas.get(n, Fraction(0)) - (total - bid_value(instance, n, outcome.chosen.bundle_of(n)))
        if outcome.payments[n] != expected:
            problems.append(f"bidder {n} pays {outcome.payments[n]} but alpha minus others' value is {expected}")

    if len(instance.goods) == 1:
        problems.extend(_audit_second_price(instance, outcome))
    return problems


def _audit_second_price(instance: AuctionInstance, outcome: Outcome) -> List[str]:
    (good,) = instance.goods
    closed = second_price_outcome({n: instance.bid_table.get((n, frozenset({good})), Fraction(0))
                                   for n in instance.bidders})
    winners = [n for b, n in outcome.chosen.pairs if good in b]
    winner = winners[0] if winners else None
    problems = []
    if winner is None and closed.highest_bid > 0:
        problems.append(f"good {good} unsold although the highest bid is {closed.highest_bid}")
    if winner is not None and winner not in closed.highest_bidders:
        problems.append(f"bidder {winner} wins {good} without a highest bid")
    expected = closed.payments(winner)
    for n in sorted(instance.bidders):
        if outcome.payments.get(n) != expected[n]:
            problems.append(f"bidder {n} pays {outcome.payments.get(n)}; the second-price rule says {expected[n]}")
    return problems


def check_well_defined(instances: Sequence[AuctionInstance], seed: int, runner: AuctionRunner = run_auction,
                       solver: Optional[str] = None) -> SoundnessReport:
    report = SoundnessReport(Goal.WELL_DEFINEDNESS)
    for instance, (outcome, error) in zip(instances, _evaluate(lambda i: _attempt(runner, i, seed, solver), instances)):
        report.instances_checked += 1
        if outcome is None:
            report.notes.append(f"no outcome to audit: {error}")
            continue
        for problem in audit_outcome(instance, outcome):
            report.fail(instance, problem)
    return _finish(report)


def check_individual_rationality(instances: Sequence[AuctionInstance], seed: int,
                                 runner: AuctionRunner = run_auction, solver: Optional[str] = None) -> SoundnessReport:
    """No bidder pays more than they bid on the bundle they win."""
    report = SoundnessReport(Goal.WELL_DEFINEDNESS, name="individual_rationality")
    for instance, (outcome, error) in zip(instances, _evaluate(lambda i: _attempt(runner, i, seed, solver), instances)):
        report.instances_checked += 1
        if outcome is None:
            report.notes.append(f"no outcome to audit: {error}")
            continue
        for n, price in sorted(outcome.payments.items()):
            bundle = outcome.chosen.bundle_of(n)
            own = instance.bid_table.get((n, bundle), Fraction(0))
            if price > own:
                report.fail(instance, f"bidder {n} pays {price} for {format_bundle(bundle)} but bid only {own}")
    return _finish(report)


def check_second_price(max_bidders: int, grid: Iterable, seed: int, runner: AuctionRunner = run_auction,
                       solver: Optional[str] = None) -> SoundnessReport:
    """Every single-good bid profile with up to `max_bidders` bidders matches the second-price rule."""
    report = SoundnessReport(Goal.WELL_DEFINEDNESS, name="second_price")
    grid = [Fraction(v) for v in grid]
    instances = []
    for count in range(1, max_bidders + 1):
        for profile in product(grid, repeat=count):
            bids = tuple(Bid(n, frozenset({"A"}), b) for n, b in enumerate(profile, start=1))
            instances.append(AuctionInstance(goods={"A"}, bidders=range(1, count + 1), bids=bids))
    for instance, (outcome, error) in zip(instances, _evaluate(lambda i: _attempt(runner, i, seed, solver), instances)):
        report.instances_checked += 1
        if outcome is None:
            report.fail(instance, f"no outcome: {error}")
            continue
        for problem in audit_outcome(instance, outcome):
            report.fail(instance, problem)
    return _finish(report)


# -------------------------------------------------------------------------
# Goal 3: uniqueness
# -------------------------------------------------------------------------
def check_uniqueness(instances: Sequence[AuctionInstance], seed: int, runner: AuctionRunner = run_auction,
                     compare_seed: Optional[int] = None) -> SoundnessReport:
    """Two oracle runs and one dp run at the same seed must serialize identically."""
    report = SoundnessReport(Goal.UNIQUENESS)

    def fingerprints(instance):
        runs = []
        for solver in ("oracle", "oracle", "dp"):
            outcome, error = _attempt(runner, instance, seed, solver)
            runs.append((outcome, error))
        return runs

    for instance, runs in zip(instances, _evaluate(fingerprints, instances)):
        report.instances_checked += 1
        errors = [e for _, e in runs if e is not None]
        if errors:
            if not all(isinstance(e, TooLargeError) for e in errors):
                report.fail(instance, f"run failed: {errors[0]}")
            continue
        prints = [outcome_fingerprint(o) for o, _ in runs]
        if prints[0] != prints[1]:
            report.fail(instance, "two oracle runs with the same seed disagree")
        if prints[0] != prints[2]:
            report.fail(instance, "oracle and dp runs with the same seed disagree")

        if compare_seed is not None:
            other, error = _attempt(runner, instance, compare_seed, "dp")
            if other is not None and outcome_fingerprint(other) != prints[2]:
                first = runs[2][0]
                if first.winner_count > 1:
                    report.notes.append(
                        f"seeds {seed} and {compare_seed} choose different winners among {first.winner_count}")
                else:
                    report.fail(instance, f"seeds {seed} and {compare_seed} disagree with a unique winner")
    return _finish(report)


def check_scale_invariance(instances: Sequence[AuctionInstance], seed: int, factor=Fraction(3, 2),
                           runner: AuctionRunner = run_auction, solver: Optional[str] = None) -> SoundnessReport:
    """Scaling all bids by `factor` keeps the chosen allocation and scales every amount exactly."""
    factor = Fraction(factor)
    report = SoundnessReport(Goal.UNIQUENESS, name="scale_invariance", details={"factor": str(factor)})

    def pair(instance):
        return _attempt(runner, instance, seed, solver), _attempt(runner, scale_bids(instance, factor), seed, solver)

    for instance, ((base, e1), (scaled, e2)) in zip(instances, _evaluate(pair, instances)):
        report.instances_checked += 1
        if base is None or scaled is None:
            report.notes.append(f"no outcome to compare: {e1 or e2}")
            continue
        if scaled.chosen != base.chosen:
            report.fail(instance, f"scaling by {factor} changes the chosen allocation: "
                                  f"{base.chosen.describe()} vs {scaled.chosen.describe()}")
        if scaled.max_value != base.max_value * factor:
            report.fail(instance, f"max value {base.max_value} scales to {scaled.max_value}")
        for n in sorted(instance.bidders):
            if scaled.payments.get(n) != base.payments.get(n, Fraction(0)) * factor:
                report.fail(instance, f"payment of bidder {n} does not scale by {factor}")
            if scaled.alphas.get(n) != base.alphas.get(n, Fraction(0)) * factor:
                report.fail(instance, f"alpha of bidder {n} does not scale by {factor}")
    return _finish(report)


# -------------------------------------------------------------------------
# Equivalence of the implicit and constructive definitions
# -------------------------------------------------------------------------
def _describe_difference(left: Set[Allocation], right: Set[Allocation], limit: int = 5) -> str:
    only_left = sorted(left - right, key=lambda a: a.canonical_key)
    only_right = sorted(right - left, key=lambda a: a.canonical_key)
    parts = []
    if only_left:
        parts.append("only in first: " + "; ".join(a.describe() for a in only_left[:limit]))
    if only_right:
        parts.append("only in second: " + "; ".join(a.describe() for a in only_right[:limit]))
    return ", ".join(parts)


def check_equivalence(max_goods: int, max_bidders: int, tables_per_shape: Optional[int] = None,
                      rng_seed: int = 0,
                      allocations_alg: Callable = possible_allocations_alg,
                      allocations_oracle: Callable = possible_allocations_oracle,
                      solvers=None) -> SoundnessReport:
    """
    For every shape up to (max_goods, max_bidders): the algorithmic allocation
    list equals the oracle set, and dp winners equal oracle winners on fuzzed bids.
    """
    if max_goods > settings.EXHAUSTIVE_MAX_GOODS:
        raise TooLargeError("equivalence sweep", max_goods, settings.EXHAUSTIVE_MAX_GOODS)
    if max_bidders > settings.EXHAUSTIVE_MAX_BIDDERS:
        raise TooLargeError(f"equivalence sweep ({max_bidders} bidders)", max_bidders, settings.EXHAUSTIVE_MAX_BIDDERS)
    tables = settings.EQUIVALENCE_TABLES_PER_SHAPE if tables_per_shape is None else tables_per_shape
    reference, candidate = solvers or (OracleSolver(), DynamicProgrammingSolver())
    report = SoundnessReport(Goal.EQUIVALENCE, details={"shapes": {}})

    for g in range(1, max_goods + 1):
        goods = good_names(g)
        for b in range(1, max_bidders + 1):
            bidders = list(range(1, b + 1))
            shape = f"{g}x{b}"
            report.instances_checked += 1

            listed = allocations_alg(goods, bidders)
            implicit = set(allocations_oracle(goods, bidders))
            if set(listed) != implicit:
                report.fail(None, f"allocations {shape}: {_describe_difference(set(listed), implicit)}")
            report.details["shapes"][shape] = {
                "partitions": len(all_partitions(goods)),
                "allocations": len(implicit),
            }

            spec = FuzzSpec(min_goods=g, max_goods=g, min_bidders=b, max_bidders=b,
                            bid_grid=settings.check_grid, instance_count=tables,
                            rng_seed=(rng_seed + 1000 * g + b) & MASK64)
            for instance in fuzz_instances(spec):
                report.instances_checked += 1
                expected = reference.solve(instance)
                actual = candidate.solve(instance)
                if expected.max_value != actual.max_value:
                    report.fail(instance, f"wdp {shape}: max value {expected.max_value} vs {actual.max_value}")
                elif expected.winners != actual.winners:
                    report.fail(instance, f"wdp {shape}: "
                                          f"{_describe_difference(set(expected.winners), set(actual.winners))}")
    return _finish(report)


# -------------------------------------------------------------------------
# Truthfulness, single good
# -------------------------------------------------------------------------
def check_truthfulness_single_good(n_bidders: int, grid: Iterable, seeds: Sequence[int],
                                   runner: AuctionRunner = run_auction, solver: Optional[str] = "dp") -> SoundnessReport:
    """
    For every valuation profile on the grid, every bidder and every deviation:
    bidding the true value is never worse than the deviation, others truthful.
    """
    grid = sorted({Fraction(v) for v in grid})
    if any(v < 0 for v in grid):
        raise ValueError("valuation grid must be non-negative")
    report = SoundnessReport(Goal.TRUTHFULNESS, details={"bidders": n_bidders, "grid": [str(v) for v in grid],
                                                          "seeds": list(seeds)})
    bidders = list(range(1, n_bidders + 1))
    profiles = list(product(grid, repeat=n_bidders))

    def instance_for(profile) -> AuctionInstance:
        bids = tuple(Bid(n, frozenset({"A"}), b) for n, b in zip(bidders, profile))
        return AuctionInstance(goods={"A"}, bidders=bidders, bids=bids)

    def utility(outcome: Outcome, n: int, value: Fraction) -> Fraction:
        won = value if "A" in outcome.chosen.bundle_of(n) else Fraction(0)
        return won - outcome.payments[n]

    for seed in seeds:
        outcomes = {}
        for profile, (outcome, error) in zip(
                profiles, _evaluate(lambda p: _attempt(runner, instance_for(p), seed, solver), profiles)):
            if outcome is None:
                report.fail(instance_for(profile), f"no outcome: {error}")
            outcomes[profile] = outcome
        for profile in profiles:
            truthful = outcomes[profile]
            if truthful is None:
                continue
            for i, n in enumerate(bidders):
                honest = utility(truthful, n, profile[i])
                for deviation in grid:
                    report.instances_checked += 1
                    deviated = outcomes[profile[:i] + (deviation,) + profile[i + 1:]]
                    if deviated is None:
                        continue
                    gain = utility(deviated, n, profile[i])
                    if gain > honest:
                        report.fail(instance_for(profile),
                                    f"seed {seed}: bidder {n} with value {profile[i]} gains {gain} > {honest} "
                                    f"by bidding {deviation}")
    return _finish(report)


# -------------------------------------------------------------------------
# Mutants and the full suite
# -------------------------------------------------------------------------
def mutant_auction(instance: AuctionInstance, seed: Optional[int] = None, solver: Optional[str] = None) -> Outcome:
    """A deliberately broken engine: the lowest-numbered bidder is paid 1 instead of charged."""
    outcome = run_auction(instance, seed, solver)
    first = min(instance.bidders)
    prices = dict(outcome.payments)
    prices[first] = prices[first] - 1
    return replace(outcome, payments=prices)


def run_suite(max_goods: int = None, max_bidders: int = None, instances: int = None, seed: int = None,
              runner: AuctionRunner = run_auction, tables_per_shape: Optional[int] = None,
              exhaustive_goods: Optional[int] = None, exhaustive_bidders: Optional[int] = None) -> List[SoundnessReport]:
    """Every goal, in a fixed order, over one fuzz corpus."""
    max_goods = settings.CHECK_MAX_GOODS if max_goods is None else max_goods
    max_bidders = settings.CHECK_MAX_BIDDERS if max_bidders is None else max_bidders
    instances = settings.CHECK_INSTANCES if instances is None else instances
    seed = settings.DEFAULT_SEED if seed is None else check_seed(seed)

    corpus = fuzz_instances(FuzzSpec(max_goods=max_goods, max_bidders=max_bidders,
                                     bid_grid=settings.check_grid, instance_count=instances, rng_seed=seed))
    if exhaustive_goods is None:
        exhaustive_goods = min(max_goods, settings.EXHAUSTIVE_MAX_GOODS)
    if exhaustive_bidders is None:
        exhaustive_bidders = min(max_bidders, settings.EXHAUSTIVE_MAX_BIDDERS)
    compare_seed = (seed + 1) & MASK64

    logger.debug(f"Soundness suite: {len(corpus)} instances, equivalence up to {exhaustive_goods}x{exhaustive_bidders}")
    reports = [
        check_totality(corpus, seed, runner),
        check_well_defined(corpus, seed, runner),
        check_individual_rationality(corpus, seed, runner),
        check_second_price(min(max_bidders, settings.TRUTHFULNESS_BIDDERS), settings.check_grid, seed, runner),
        check_uniqueness(corpus, seed, runner, compare_seed=compare_seed),
        check_scale_invariance(corpus, seed, runner=runner),
        check_equivalence(exhaustive_goods, exhaustive_bidders, tables_per_shape, rng_seed=seed),
        check_truthfulness_single_good(settings.TRUTHFULNESS_BIDDERS, settings.truthfulness_grid,
                                       settings.TRUTHFULNESS_SEEDS, runner),
    ]
    if exhaustive_goods < max_goods or exhaustive_bidders < max_bidders:
        reports[6].notes.append(f"equivalence sweep capped at {exhaustive_goods}x{exhaustive_bidders}")
    return reports
