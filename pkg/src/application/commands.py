import json
from pathlib import Path
from typing import List, Optional

from rich.console import Console

from src.config.settings import settings
from src.core.combinatorics.allocations import canonical_allocations, possible_allocations_alg
from src.core.combinatorics.partitions import all_partitions
from src.core.errors import InstanceError
from src.core.events import event_broker
from src.core.vcg.tiebreak import check_seed
from src.i18n.strings import Strings
from src.infrastructure.serialization.bidfile import load_bid_file, render_bid_file
from src.infrastructure.serialization.outcome import OutcomeDocument
from src.services.auction import AuctionEngine, run_auction
from src.services.soundness import SoundnessReport, mutant_auction, run_suite
from src.utils.logger import logger

# stdout carries documents only; logs go to stderr.
console = Console(highlight=False, soft_wrap=True, emoji=False, markup=False)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_TOO_LARGE = 2
EXIT_CHECK_FAILED = 3


def cmd_run(args) -> int:
    seed = settings.DEFAULT_SEED if args.seed is None else check_seed(args.seed)
    solver = args.solver or settings.DEFAULT_SOLVER
    instance = load_bid_file(args.bids)

    engine = AuctionEngine(solver=solver, tie_breaker=args.tie_break)
    outcome = engine.run(instance, seed)
    document = OutcomeDocument.from_outcome(outcome, seed=seed, solver=engine.solver.name).render()

    if args.output and str(args.output) != "-":
        Path(args.output).write_text(document, encoding="utf-8")
        logger.info(Strings.OUTCOME_WRITTEN.value.format(args.output))
    else:
        console.out(document, end="")
    return EXIT_OK


def _print_summary(sender, report: SoundnessReport, **kwargs):
    verdict = Strings.CHECK_PASSED.value if report.passed else Strings.CHECK_FAILED.value
    console.out(Strings.CHECK_SUMMARY.value.format(report.name, report.instances_checked, len(report.failures), verdict))


def _equivalence_sizes(reports: List[SoundnessReport]) -> Optional[str]:
    for report in reports:
        shapes = report.details.get("shapes") if report.goal.value == "equivalence" else None
        if shapes:
            # Shapes are inserted smallest first.
            largest = list(shapes.values())[-1]
            return Strings.EQUIVALENCE_SIZES.value.format(largest["partitions"], largest["allocations"])
    return None


def cmd_check(args) -> int:
    runner = mutant_auction if args.inject_mutant else run_auction
    seed = settings.DEFAULT_SEED if args.seed is None else check_seed(args.seed)

    event_broker.CHECK_COMPLETED.connect(_print_summary)
    try:
        reports = run_suite(
            max_goods=args.max_goods,
            max_bidders=args.max_bidders,
            instances=args.instances,
            seed=seed,
            runner=runner,
            exhaustive_goods=args.exhaustive_goods,
            exhaustive_bidders=args.exhaustive_bidders,
        )
    finally:
        event_broker.CHECK_COMPLETED.disconnect(_print_summary)

    sizes = _equivalence_sizes(reports)
    if sizes:
        console.out(sizes)

    if args.json:
        payload = [r.to_dict() for r in reports]
        Path(args.json).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    failed = [r for r in reports if not r.passed]
    if not failed:
        console.out(Strings.CHECK_ALL_PASSED.value)
        return EXIT_OK

    console.out(Strings.CHECK_SOME_FAILED.value.format(", ".join(r.name for r in failed)))
    first = failed[0].failures[0]
    console.out(Strings.CHECK_COUNTEREXAMPLE.value.format(failed[0].name, first.diagnostic))
    if first.instance is not None:
        console.out(render_bid_file(first.instance), end="")
    return EXIT_CHECK_FAILED


def _parse_list(text: Optional[str]) -> List[str]:
    if not text:
        return []
    return [item.strip() for item in text.split(",") if item.strip()]


def _parse_bidders(text: Optional[str]) -> List[int]:
    bidders = []
    for item in _parse_list(text):
        try:
            bidder = int(item)
        except ValueError:
            raise InstanceError(f"bidder '{item}' is not an integer") from None
        if bidder <= 0:
            raise InstanceError(f"bidder {bidder} is not a positive integer")
        bidders.append(bidder)
    return bidders


def cmd_enumerate(args) -> int:
    goods = _parse_list(args.goods)
    if args.what == "partitions":
        lines = [p.describe() for p in all_partitions(goods)]
    else:
        bidders = _parse_bidders(args.bidders)
        if not bidders:
            raise InstanceError("--bidders is required to enumerate allocations")
        # The empty allocation arises once per partition; list it once.
        lines = [a.describe() for a in canonical_allocations(possible_allocations_alg(goods, bidders))]

    for line in lines:
        console.out(line)
    console.out(Strings.COUNT_LINE.value.format(len(lines)))
    return EXIT_OK
