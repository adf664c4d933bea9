"""
Subset dynamic programming for the winner determination problem.

Goods are mapped to bit positions in canonical order. With bidders taken in
ascending order, W(i, S) is the best value the first i bidders can reach
using only goods in mask S:

    W(0, S) = 0
    W(i, S) = max( W(i-1, S), max over T ⊆ S of b_i(T) + W(i-1, S \\ T) )

T ranges over the bundles bidder i placed a positive bid on. Unlisted and
zero bids never raise the value, so they are left to the completion step:
each optimal assignment found by backtracking (a "core") is extended by
every allocation of its leftover goods to its leftover bidders, which is
exactly the set of allocations worth the same.

That set grows exponentially with the leftover goods, so it is kept
factored as a `CompletionFamily`. Only `solve` expands it, and only up to
`WINNER_SET_MAX` allocations; `decide` counts and tie-breaks it in place.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Set, Tuple, TYPE_CHECKING

from src.config.settings import settings
from src.core.combinatorics.allocations import CompletionFamily
from src.core.combinatorics.partitions import canonical_order
from src.core.errors import TooLargeError
from src.core.models import Allocation, Amount, AuctionInstance, BidderId, WdpDecision, WdpResult
from src.core.wdp.base import WdpSolver
from src.utils.logger import logger

if TYPE_CHECKING:
    from src.core.vcg.tiebreak import TieBreaker


@dataclass
class SubsetTable:
    goods: List[str]
    bidders: List[BidderId]
    options: List[List[Tuple[int, Amount]]]
    layers: List[Dict[int, Amount]]

    @property
    def full_mask(self) -> int:
        return (1 << len(self.goods)) - 1

    @property
    def value(self) -> Amount:
        return self.layers[len(self.bidders)][self.full_mask]

    def bundle(self, mask: int) -> frozenset:
        return frozenset(g for i, g in enumerate(self.goods) if mask >> i & 1)


def build_table(instance: AuctionInstance) -> SubsetTable:
    goods = canonical_order(instance.goods)
    position = {g: i for i, g in enumerate(goods)}
    bidders = sorted(instance.bidders)

    options = []
    for n in bidders:
        entries = []
        for bundle, price in instance.bids_by_bidder.get(n, ()):
            if bundle and price > 0:
                entries.append((sum(1 << position[g] for g in bundle), price))
        options.append(entries)

    # States reachable from the full mask, layer by layer from the last bidder down.
    full = (1 << len(goods)) - 1
    reachable: List[Set[int]] = [set() for _ in range(len(bidders) + 1)]
    reachable[len(bidders)].add(full)
    for i in range(len(bidders), 0, -1):
        below = reachable[i - 1]
        for state in reachable[i]:
            below.add(state)
            for mask, _ in options[i - 1]:
                if mask & state == mask:
                    below.add(state & ~mask)

    layers: List[Dict[int, Amount]] = [{state: Fraction(0) for state in reachable[0]}]
    for i in range(1, len(bidders) + 1):
        previous = layers[i - 1]
        current = {}
        for state in reachable[i]:
            value = previous[state]
            for mask, price in options[i - 1]:
                if mask & state == mask:
                    candidate = price + previous[state & ~mask]
                    if candidate > value:
                        value = candidate
            current[state] = value
        layers.append(current)

    logger.debug(f"dp table: {len(goods)} goods, {len(bidders)} bidders, {sum(len(l) for l in layers)} cells")
    return SubsetTable(goods=goods, bidders=bidders, options=options, layers=layers)


def optimal_cores(table: SubsetTable) -> Set[Allocation]:
    """Every optimal assignment made only of positive bids, by backtracking through all ties."""
    cores = set()
    stack = [(len(table.bidders), table.full_mask, ())]
    while stack:
        i, state, pairs = stack.pop()
        if i == 0:
            cores.add(Allocation(frozenset(pairs)))
            continue
        target = table.layers[i][state]
        previous = table.layers[i - 1]
        if previous[state] == target:
            stack.append((i - 1, state, pairs))
        bidder = table.bidders[i - 1]
        for mask, price in table.options[i - 1]:
            if mask & state == mask and price + previous[state & ~mask] == target:
                stack.append((i - 1, state & ~mask, pairs + ((table.bundle(mask), bidder),)))
    return cores


class DynamicProgrammingSolver(WdpSolver):
    name = "dp"

    @property
    def max_goods(self) -> int:
        return settings.DP_MAX_GOODS

    def family(self, instance: AuctionInstance) -> Tuple[Amount, CompletionFamily]:
        """The optimum and its winners in factored form, without expanding them."""
        self.check_size(instance)
        table = build_table(instance)
        cores = tuple(sorted(optimal_cores(table), key=lambda a: a.canonical_key))
        return table.value, CompletionFamily(goods=instance.goods, bidders=instance.bidders, cores=cores)

    def _solve(self, instance: AuctionInstance) -> WdpResult:
        value, family = self.family(instance)
        count = family.count()
        if count > settings.WINNER_SET_MAX:
            raise TooLargeError("winner set", count, settings.WINNER_SET_MAX, unit="allocations")
        return WdpResult(max_value=value, winners=frozenset(family), solver=self.name)

    def decide(self, instance: AuctionInstance, tie_breaker: "TieBreaker", seed: int) -> WdpDecision:
        value, family = self.family(instance)
        count = family.count()
        self._announce(value, count)
        chosen = tie_breaker.choose_from_family(family, instance, seed, count)
        return WdpDecision(max_value=value, chosen=chosen, winner_count=count, solver=self.name)

    def value(self, instance: AuctionInstance) -> Amount:
        """The optimum alone, without reconstructing winners."""
        self.check_size(instance)
        return build_table(instance).value


def winning_allocations_dp(instance: AuctionInstance) -> WdpResult:
    return DynamicProgrammingSolver().solve(instance)
