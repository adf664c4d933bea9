from src.core.vcg.payments import alpha, all_alphas, payments, payments_given
from src.core.vcg.single_good import SecondPriceResult, second_price_outcome
from src.core.vcg.tiebreak import (
    CanonicalOrderTieBreaker,
    RandomWeightTieBreaker,
    TieBreaker,
    bundle_weight,
    check_seed,
    get_tie_breaker,
    splitmix64,
    tie_break,
)

__all__ = [
    "alpha",
    "all_alphas",
    "payments",
    "payments_given",
    "SecondPriceResult",
    "second_price_outcome",
    "TieBreaker",
    "RandomWeightTieBreaker",
    "CanonicalOrderTieBreaker",
    "bundle_weight",
    "check_seed",
    "get_tie_breaker",
    "splitmix64",
    "tie_break",
]
