import time
from typing import Optional, Union

from src.config.settings import settings
from src.core.events import event_broker
from src.core.instance import validate_instance
from src.core.models import AuctionInstance, Outcome
from src.core.vcg.payments import all_alphas, payments_given
from src.core.vcg.tiebreak import TieBreaker, check_seed, get_tie_breaker
from src.core.wdp import SolverLike, get_solver
from src.i18n.strings import Strings
from src.utils.logger import logger


class AuctionEngine:
    """
    Runs the combinatorial Vickrey auction end to end:
    validate, solve the WDP, break ties, price.
    """
    def __init__(self, solver: SolverLike = None, tie_breaker: Union[str, TieBreaker, None] = None,
                 max_workers: Optional[int] = None):
        self.solver = get_solver(solver)
        self.tie_breaker = get_tie_breaker(tie_breaker)
        self.max_workers = max_workers

    def run(self, instance: AuctionInstance, seed: Optional[int] = None) -> Outcome:
        start_time = time.time()
        seed = settings.DEFAULT_SEED if seed is None else check_seed(seed)
        validate_instance(instance)
        logger.debug(Strings.AUCTION_STARTED.value.format(
            len(instance.goods), len(instance.bidders), self.solver.name, seed))
        event_broker.AUCTION_STARTED.send(self, instance=instance, solver=self.solver.name, seed=seed)

        # 1-2. Winner determination and tie-breaking
        decision = self.solver.decide(instance, self.tie_breaker, seed)
        chosen = decision.chosen

        # 3. Pricing
        alphas = all_alphas(instance, self.solver, self.max_workers)
        prices = payments_given(instance, chosen, alphas)

        outcome = Outcome(
            chosen=chosen,
            payments=prices,
            max_value=decision.max_value,
            alphas=alphas,
            tie_break_applied=decision.winner_count > 1,
            winner_count=decision.winner_count,
            tie_break_rule=self.tie_breaker.name,
        )
        logger.debug(f"Auction done in {time.time() - start_time:.3f}s: {chosen.describe()}")
        event_broker.OUTCOME_READY.send(self, outcome=outcome)
        return outcome


def run_auction(instance: AuctionInstance, seed: Optional[int] = None, solver: SolverLike = None,
                tie_breaker: Union[str, TieBreaker, None] = None) -> Outcome:
    return AuctionEngine(solver=solver, tie_breaker=tie_breaker).run(instance, seed)
