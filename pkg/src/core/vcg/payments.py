"""
VCG payments.

    p_n = α_n − Σ_{m≠n} b_m(X*_m)

where α_n is the optimal value of the auction run without bidder n.
"""
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, Optional

from src.config.settings import settings
from src.core.combinatorics.allocations import is_valid_allocation
from src.core.errors import NotAWinnerError
from src.core.instance import assignment_value, bid_value, without_bidder
from src.core.models import Allocation, Amount, AuctionInstance, BidderId
from src.core.wdp import SolverLike, max_value


def alpha(instance: AuctionInstance, n: BidderId, solver: SolverLike = None) -> Amount:
    """Optimal value of the instance without n's bids; 0 when n is the only bidder."""
    reduced = without_bidder(instance, n)
    if not reduced.bidders:
        return Fraction(0)
    return max_value(reduced, solver)


def all_alphas(instance: AuctionInstance, solver: SolverLike = None,
               max_workers: Optional[int] = None) -> Dict[BidderId, Amount]:
    bidders = sorted(instance.bidders)
    workers = settings.MAX_WORKERS if max_workers is None else max_workers
    if workers > 1 and len(bidders) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(lambda n: alpha(instance, n, solver), bidders))
    else:
        values = [alpha(instance, n, solver) for n in bidders]
    return dict(zip(bidders, values))


def payments_given(instance: AuctionInstance, chosen: Allocation,
                   alphas: Dict[BidderId, Amount]) -> Dict[BidderId, Amount]:
    # `chosen` is assumed optimal here; `payments` is the checked entry point.
    total = assignment_value(instance, chosen)
    result = {}
    for n in sorted(instance.bidders):
        others = total - bid_value(instance, n, chosen.bundle_of(n))
        result[n] = alphas[n] - others
    return result


def payments(instance: AuctionInstance, chosen: Allocation, solver: SolverLike = None) -> Dict[BidderId, Amount]:
    """Payment of every bidder, winners and losers alike, for a value-maximising allocation."""
    if not is_valid_allocation(chosen, instance.goods, instance.bidders):
        raise NotAWinnerError()
    if assignment_value(instance, chosen) != max_value(instance, solver):
        raise NotAWinnerError()
    return payments_given(instance, chosen, all_alphas(instance, solver))
