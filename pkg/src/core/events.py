import logging

from blinker import signal

from src.utils.logger import get_logger

logger = get_logger("events")


class EventBroker:
    """
    Blinker signals for the auction lifecycle and the soundness suite.
    The cli and the tests observe the engine through these without the engine knowing about them.
    """

    # Auction
    AUCTION_STARTED = signal("auction-started")          # Payload: {instance, solver: str, seed: int}
    WINNERS_DETERMINED = signal("winners-determined")    # Payload: {max_value: Fraction, winner_count: int}
    TIE_BROKEN = signal("tie-broken")                    # Payload: {candidates: int, rule: str, chosen: Allocation}
    OUTCOME_READY = signal("outcome-ready")              # Payload: {outcome: Outcome}

    # Soundness suite
    CHECK_COMPLETED = signal("check-completed")          # Payload: {report: SoundnessReport}
    CHECK_FAILED = signal("check-failed")                # Payload: {goal: str, diagnostic: str}

    def __init__(self):
        for event in (self.AUCTION_STARTED, self.WINNERS_DETERMINED, self.TIE_BROKEN, self.OUTCOME_READY):
            event.connect(self._trace)
        self.CHECK_FAILED.connect(self._report_failure)

    def _trace(self, sender, **kwargs):
        if not logger.isEnabledFor(logging.DEBUG):
            return
        sender_name = getattr(sender, "name", type(sender).__name__)
        logger.debug(f"{sender_name}: {', '.join(f'{k}={v}' for k, v in kwargs.items() if k != 'instance')}")

    def _report_failure(self, sender, **kwargs):
        logger.error(f"Check {kwargs.get('goal')} failed: {kwargs.get('diagnostic')}")


event_broker = EventBroker()
