"""Validation and bid evaluation shared by every other module."""
from fractions import Fraction
from typing import Iterable

from src.core.combinatorics.allocations import is_valid_allocation
from src.core.errors import (
    BundleNotSubsetError,
    DuplicateBidEntryError,
    EmptyBiddersError,
    EmptyGoodsError,
    InstanceError,
    InvalidAllocationError,
    NegativeBidError,
    NonzeroEmptyBundleBidError,
    UnknownBidderError,
)
from src.core.models import (
    AmountLike,
    Allocation,
    Amount,
    AuctionInstance,
    Bid,
    BidderId,
    Good,
    make_bundle,
    to_amount,
)


def validate_instance(raw: AuctionInstance) -> AuctionInstance:
    """Return `raw` unchanged if it is an admissible auction, otherwise raise an InstanceError."""
    if not raw.goods:
        raise EmptyGoodsError()
    if not raw.bidders:
        raise EmptyBiddersError()
    for good in raw.goods:
        if not isinstance(good, str) or not good:
            raise InstanceError(f"good identifiers must be non-empty text, got {good!r}")
    for bidder in raw.bidders:
        if isinstance(bidder, bool) or not isinstance(bidder, int) or bidder < 1:
            raise InstanceError(f"bidder identifiers must be positive integers, got {bidder!r}")

    seen = set()
    for bid in raw.bids:
        if bid.bidder not in raw.bidders:
            raise UnknownBidderError(bid.bidder)
        outside = bid.bundle - raw.goods
        if outside:
            raise BundleNotSubsetError(outside, bidder=bid.bidder)
        if bid.price < 0:
            raise NegativeBidError(bid.bidder, bid.bundle, bid.price)
        if not bid.bundle and bid.price != 0:
            raise NonzeroEmptyBundleBidError(bid.bidder, bid.price)
        if bid.key in seen:
            raise DuplicateBidEntryError(bid.bidder, bid.bundle)
        seen.add(bid.key)
    return raw


def bid_value(instance: AuctionInstance, n: BidderId, bundle: Iterable[Good]) -> Amount:
    """b_n(X): the stored amount, 0 for unlisted bundles and always 0 for the empty bundle."""
    if n not in instance.bidders:
        raise UnknownBidderError(n)
    bundle = make_bundle(bundle)
    outside = bundle - instance.goods
    if outside:
        raise BundleNotSubsetError(outside)
    if not bundle:
        return Fraction(0)
    return instance.bid_table.get((n, bundle), Fraction(0))


def allocation_value(instance: AuctionInstance, allocation: Allocation) -> Amount:
    """Sum of b_n(X_n) over the assigned pairs."""
    if not is_valid_allocation(allocation, instance.goods, instance.bidders):
        raise InvalidAllocationError(allocation.describe())
    return assignment_value(instance, allocation)


def assignment_value(instance: AuctionInstance, allocation: Allocation) -> Amount:
    # Unchecked variant for callers that only hold valid allocations.
    table = instance.bid_table
    return sum((table.get((n, bundle), Fraction(0)) for bundle, n in allocation.pairs), Fraction(0))


def scale_bids(instance: AuctionInstance, factor: AmountLike) -> AuctionInstance:
    """Multiply every bid by a positive rational."""
    factor = to_amount(factor)
    if factor <= 0:
        raise InstanceError(f"scale factor must be positive, got {factor}")
    return AuctionInstance(
        goods=instance.goods,
        bidders=instance.bidders,
        bids=tuple(Bid(b.bidder, b.bundle, b.price * factor) for b in instance.bids),
    )


def without_bidder(instance: AuctionInstance, n: BidderId) -> AuctionInstance:
    """The instance with bidder n and all of n's bids removed. May leave no bidders."""
    if n not in instance.bidders:
        raise UnknownBidderError(n)
    return AuctionInstance(
        goods=instance.goods,
        bidders=instance.bidders - {n},
        bids=tuple(b for b in instance.bids if b.bidder != n),
    )
