from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Tuple, Union

# Goods are short text tokens ordered by their text; bidders are positive integers.
Good = str
BidderId = int
Bundle = FrozenSet[Good]
Amount = Fraction

EMPTY_BUNDLE: Bundle = frozenset()

AmountLike = Union[Fraction, int, str]


def to_amount(value: AmountLike) -> Fraction:
    """Exact conversion; floats are refused because they are not exact decimals."""
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"amounts must be exact (int, Fraction or 'p/q' string), got {value!r}")
    return Fraction(value)


def make_bundle(goods: Iterable[Good]) -> Bundle:
    return frozenset(goods)


def canonical_bundle(bundle: Iterable[Good]) -> Tuple[Good, ...]:
    return tuple(sorted(set(bundle)))


def format_bundle(bundle: Iterable[Good]) -> str:
    return "{" + ",".join(canonical_bundle(bundle)) + "}"


@dataclass(frozen=True)
class Bid:
    bidder: BidderId
    bundle: Bundle
    price: Amount

    def __post_init__(self):
        object.__setattr__(self, "bundle", make_bundle(self.bundle))
        object.__setattr__(self, "price", to_amount(self.price))

    @property
    def key(self) -> Tuple[BidderId, Bundle]:
        return self.bidder, self.bundle

    def sort_key(self) -> Tuple[BidderId, Tuple[Good, ...]]:
        return self.bidder, canonical_bundle(self.bundle)


@dataclass(frozen=True, eq=False)
class AuctionInstance:
    """
    The goods on sale, the bidders, and their sealed bids.

    Bids are sparse: a (bidder, bundle) pair without an entry is worth 0.
    The raw bid sequence is kept so validation can see duplicate entries;
    equality compares the resulting bid table.
    """
    goods: FrozenSet[Good]
    bidders: FrozenSet[BidderId]
    bids: Tuple[Bid, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "goods", frozenset(self.goods))
        object.__setattr__(self, "bidders", frozenset(self.bidders))
        object.__setattr__(self, "bids", tuple(
            b if isinstance(b, Bid) else Bid(*b) for b in self.bids
        ))

    @cached_property
    def bid_table(self) -> Mapping[Tuple[BidderId, Bundle], Amount]:
        return MappingProxyType({b.key: b.price for b in self.bids})

    @cached_property
    def bids_by_bidder(self) -> Mapping[BidderId, Tuple[Tuple[Bundle, Amount], ...]]:
        grouped: Dict[BidderId, list] = {}
        for (bidder, bundle), price in self.bid_table.items():
            grouped.setdefault(bidder, []).append((bundle, price))
        return MappingProxyType({
            n: tuple(sorted(entries, key=lambda e: canonical_bundle(e[0])))
            for n, entries in grouped.items()
        })

    def _identity(self):
        return self.goods, self.bidders, frozenset(self.bid_table.items())

    def __eq__(self, other):
        if not isinstance(other, AuctionInstance):
            return NotImplemented
        return self._identity() == other._identity()

    def __hash__(self):
        return hash(self._identity())

    def describe(self) -> str:
        return f"{len(self.goods)} goods, {len(self.bidders)} bidders, {len(self.bids)} bids"


@dataclass(frozen=True)
class Allocation:
    """
    An assignment of bundles to bidders, stored as (bundle, bidder) pairs.

    Validity (disjoint non-empty bundles, one bundle per bidder) is checked
    by `is_valid_allocation`, not here, so invalid candidates can be represented.
    """
    pairs: FrozenSet[Tuple[Bundle, BidderId]] = frozenset()

    @classmethod
    def of(cls, assignments: Union[Mapping, Iterable[Tuple[Iterable[Good], BidderId]]] = ()) -> "Allocation":
        items = assignments.items() if isinstance(assignments, Mapping) else assignments
        return cls(frozenset((make_bundle(goods), bidder) for goods, bidder in items))

    @cached_property
    def canonical_key(self) -> Tuple[Tuple[Tuple[Good, ...], BidderId], ...]:
        return tuple(sorted((canonical_bundle(b), n) for b, n in self.pairs))

    def __iter__(self) -> Iterator[Tuple[Bundle, BidderId]]:
        for goods, bidder in self.canonical_key:
            yield frozenset(goods), bidder

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def bidders(self) -> Tuple[BidderId, ...]:
        return tuple(n for _, n in self.canonical_key)

    @property
    def goods(self) -> FrozenSet[Good]:
        return frozenset().union(*(b for b, _ in self.pairs))

    def bundle_of(self, bidder: BidderId) -> Bundle:
        for bundle, n in self.pairs:
            if n == bidder:
                return bundle
        return EMPTY_BUNDLE

    def merged(self, other: "Allocation") -> "Allocation":
        return Allocation(self.pairs | other.pairs)

    def describe(self) -> str:
        if not self.pairs:
            return "(empty)"
        return " ".join(f"{format_bundle(goods)}->{bidder}" for goods, bidder in self.canonical_key)


EMPTY_ALLOCATION = Allocation()


@dataclass(frozen=True)
class WdpResult:
    max_value: Amount
    winners: FrozenSet[Allocation]
    solver: str = ""

    def ordered_winners(self) -> Tuple[Allocation, ...]:
        return tuple(sorted(self.winners, key=lambda a: a.canonical_key))


@dataclass(frozen=True)
class WdpDecision:
    """The optimum, how many allocations reach it, and the one the tie-break picked."""
    max_value: Amount
    chosen: Allocation
    winner_count: int
    solver: str = ""


@dataclass(frozen=True)
class Outcome:
    chosen: Allocation
    payments: Dict[BidderId, Amount]
    max_value: Amount
    alphas: Dict[BidderId, Amount]
    tie_break_applied: bool
    winner_count: int = 1
    tie_break_rule: str = field(default="random_weights", compare=False)

    @property
    def revenue(self) -> Amount:
        return sum(self.payments.values(), Fraction(0))
