"""Closed form of the auction when only one good is for sale: the second-price rule."""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Mapping, Optional

from src.core.models import AmountLike, Amount, BidderId, to_amount


@dataclass(frozen=True)
class SecondPriceResult:
    highest_bid: Amount
    highest_bidders: FrozenSet[BidderId]
    bids: Dict[BidderId, Amount]

    def price_for(self, winner: BidderId) -> Amount:
        """The highest bid among everyone except the winner."""
        others = [b for n, b in self.bids.items() if n != winner]
        return max(others, default=Fraction(0))

    def payments(self, winner: Optional[BidderId]) -> Dict[BidderId, Amount]:
        result = {n: Fraction(0) for n in self.bids}
        if winner is not None:
            result[winner] = self.price_for(winner)
        return result


def second_price_outcome(bids: Mapping[BidderId, AmountLike]) -> SecondPriceResult:
    amounts = {n: to_amount(b) for n, b in bids.items()}
    top = max(amounts.values(), default=Fraction(0))
    return SecondPriceResult(
        highest_bid=top,
        highest_bidders=frozenset(n for n, b in amounts.items() if b == top),
        bids=amounts,
    )
