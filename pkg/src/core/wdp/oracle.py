from fractions import Fraction

from src.config.settings import settings
from src.core.combinatorics.allocations import possible_allocations_oracle
from src.core.instance import assignment_value
from src.core.models import AuctionInstance, WdpResult
from src.core.wdp.base import WdpSolver


class OracleSolver(WdpSolver):
    """Exhaustive argmax over every possible allocation."""
    name = "oracle"

    @property
    def max_goods(self) -> int:
        return settings.ENUMERATION_MAX_GOODS

    def _solve(self, instance: AuctionInstance) -> WdpResult:
        best = None
        winners = []
        for allocation in possible_allocations_oracle(instance.goods, instance.bidders):
            value = assignment_value(instance, allocation)
            if best is None or value > best:
                best = value
                winners = [allocation]
            elif value == best:
                winners.append(allocation)
        # The empty allocation is always feasible, so `best` is set.
        return WdpResult(max_value=best if best is not None else Fraction(0), winners=frozenset(winners), solver=self.name)


def winning_allocations_oracle(instance: AuctionInstance) -> WdpResult:
    return OracleSolver().solve(instance)
