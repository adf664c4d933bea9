"""
Deterministic random auction instances for the soundness suite.

Randomness comes from a splitmix64 stream (the same generator family as the
tie-breaking weights), so a FuzzSpec always yields the same instances.
"""
from fractions import Fraction
from itertools import combinations
from string import ascii_uppercase
from typing import Iterator, List, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.core.instance import validate_instance
from src.core.models import AuctionInstance, Bid, to_amount
from src.core.vcg.tiebreak import GOLDEN_GAMMA, MASK64, splitmix64

MAX_FUZZ_GOODS = 12


class KeyedStream:
    """splitmix64 as a sequential generator: state advances by the golden gamma."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        value = splitmix64(self.state)
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return value

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound

    def between(self, low: int, high: int) -> int:
        return low + self.below(high - low + 1)


class FuzzSpec(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    max_goods: int
    max_bidders: int
    bid_grid: Tuple[Fraction, ...]
    instance_count: int
    rng_seed: int = 0
    min_goods: int = 1
    min_bidders: int = 1
    # Chance, out of 1, that a given (bidder, bundle) pair gets an explicit bid.
    bid_density: Fraction = Fraction(1, 2)

    @field_validator("bid_grid", mode="before")
    @classmethod
    def _exact_grid(cls, value):
        return tuple(to_amount(v) for v in value)

    @field_validator("bid_density", mode="before")
    @classmethod
    def _exact_density(cls, value):
        return to_amount(value)

    @model_validator(mode="after")
    def _check_bounds(self):
        if not 1 <= self.min_goods <= self.max_goods <= MAX_FUZZ_GOODS:
            raise ValueError(f"goods bounds must satisfy 1 <= min_goods <= max_goods <= {MAX_FUZZ_GOODS}")
        if not 1 <= self.min_bidders <= self.max_bidders:
            raise ValueError("bidder bounds must satisfy 1 <= min_bidders <= max_bidders")
        if not self.bid_grid:
            raise ValueError("bid_grid must not be empty")
        if any(v < 0 for v in self.bid_grid):
            raise ValueError("bid_grid values must be non-negative")
        if self.instance_count < 0:
            raise ValueError("instance_count must be non-negative")
        if not 0 <= self.rng_seed <= MASK64:
            raise ValueError("rng_seed must be an unsigned 64-bit integer")
        if not 0 <= self.bid_density <= 1:
            raise ValueError("bid_density must lie in [0, 1]")
        return self


def good_names(count: int) -> List[str]:
    return list(ascii_uppercase[:count])


def _draw_instance(stream: KeyedStream, spec: FuzzSpec) -> AuctionInstance:
    goods = good_names(stream.between(spec.min_goods, spec.max_goods))
    bidders = list(range(1, stream.between(spec.min_bidders, spec.max_bidders) + 1))
    bundles = [frozenset(c) for size in range(1, len(goods) + 1) for c in combinations(goods, size)]
    scale = spec.bid_density.denominator
    bids = []
    for n in bidders:
        for bundle in bundles:
            if stream.below(scale) < spec.bid_density.numerator:
                price = spec.bid_grid[stream.below(len(spec.bid_grid))]
                bids.append(Bid(n, bundle, price))
    return validate_instance(AuctionInstance(goods=goods, bidders=bidders, bids=tuple(bids)))


def iter_fuzz_instances(spec: FuzzSpec) -> Iterator[AuctionInstance]:
    stream = KeyedStream(spec.rng_seed)
    for _ in range(spec.instance_count):
        yield _draw_instance(stream, spec)


def fuzz_instances(spec: FuzzSpec) -> List[AuctionInstance]:
    return list(iter_fuzz_instances(spec))
