from .auction import AuctionEngine, run_auction
from .soundness import Goal, SoundnessReport, run_suite

__all__ = ["AuctionEngine", "run_auction", "Goal", "SoundnessReport", "run_suite"]
