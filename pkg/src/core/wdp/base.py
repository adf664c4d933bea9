from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

from src.core.errors import TooLargeError
from src.core.events import event_broker
from src.core.models import Amount, AuctionInstance, WdpDecision, WdpResult
from src.i18n.strings import Strings
from src.utils.logger import logger

if TYPE_CHECKING:
    from src.core.vcg.tiebreak import TieBreaker


class WdpSolver(ABC):
    """A strategy for the winner determination problem: the maximum bid value and every allocation reaching it."""

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @property
    @abstractmethod
    def max_goods(self) -> int:
        pass

    @abstractmethod
    def _solve(self, instance: AuctionInstance) -> WdpResult:
        pass

    def check_size(self, instance: AuctionInstance) -> None:
        if len(instance.goods) > self.max_goods:
            raise TooLargeError(f"{self.name} solver input", len(instance.goods), self.max_goods)

    def _announce(self, max_value: Amount, winner_count: int) -> None:
        logger.debug(Strings.WINNERS_FOUND.value.format(self.name, max_value, winner_count))
        event_broker.WINNERS_DETERMINED.send(self, max_value=max_value, winner_count=winner_count)

    def solve(self, instance: AuctionInstance) -> WdpResult:
        self.check_size(instance)
        result = self._solve(instance)
        self._announce(result.max_value, len(result.winners))
        return result

    def decide(self, instance: AuctionInstance, tie_breaker: "TieBreaker", seed: int) -> WdpDecision:
        """Solve, then let `tie_breaker` pick one winner."""
        result = self.solve(instance)
        chosen = tie_breaker.choose(result.winners, instance, seed)
        return WdpDecision(max_value=result.max_value, chosen=chosen,
                           winner_count=len(result.winners), solver=self.name)

    def value(self, instance: AuctionInstance) -> Amount:
        return self.solve(instance).max_value
