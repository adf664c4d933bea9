"""Exception hierarchy for the auction engine.

`InstanceError` covers everything a caller did wrong with the input
(cli exit code 1); `TooLargeError` is the size guard (exit code 2).
"""
from typing import Iterable, Optional


class AuctionError(Exception):
    """Base class for all engine errors."""


class InstanceError(AuctionError):
    """The input does not describe an admissible auction."""


class EmptyGoodsError(InstanceError):
    def __init__(self):
        super().__init__("the set of goods is empty")


class EmptyBiddersError(InstanceError):
    def __init__(self):
        super().__init__("the set of bidders is empty")


class BundleNotSubsetError(InstanceError):
    def __init__(self, unknown_goods: Iterable[str], bidder: Optional[int] = None):
        self.unknown_goods = tuple(sorted(unknown_goods))
        self.bidder = bidder
        names = ", ".join(self.unknown_goods)
        where = f" (bid by bidder {bidder})" if bidder is not None else ""
        super().__init__(f"bundle references unknown good(s): {names}{where}")


class NegativeBidError(InstanceError):
    def __init__(self, bidder: int, bundle: Iterable[str], price):
        super().__init__(f"bidder {bidder} bids {price} on {{{','.join(sorted(bundle))}}}; bids must be non-negative")


class NonzeroEmptyBundleBidError(InstanceError):
    def __init__(self, bidder: int, price):
        super().__init__(f"bidder {bidder} bids {price} on the empty bundle; the empty bundle is worth 0")


class DuplicateBidEntryError(InstanceError):
    def __init__(self, bidder: int, bundle: Iterable[str]):
        super().__init__(f"bidder {bidder} has more than one bid on {{{','.join(sorted(bundle))}}}")


class UnknownBidderError(InstanceError):
    def __init__(self, bidder: int):
        self.bidder = bidder
        super().__init__(f"unknown bidder {bidder}")


class InvalidAllocationError(InstanceError):
    def __init__(self, reason: str):
        super().__init__(f"invalid allocation: {reason}")


class NotAWinnerError(InstanceError):
    def __init__(self):
        super().__init__("payments are only defined for value-maximising allocations")


class EmptyCandidatesError(InstanceError):
    def __init__(self):
        super().__init__("tie-breaking needs at least one candidate allocation")


class BidFileError(InstanceError):
    """Bid file could not be read or parsed. Carries a position for JSON syntax errors."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        super().__init__(message)


class TooLargeError(AuctionError):
    def __init__(self, what: str, size: int, limit: int, unit: str = "goods"):
        self.size = size
        self.limit = limit
        super().__init__(f"{what} has {size} {unit}; the limit is {limit}")
