import pytest

from src.config.settings import settings
from src.core.models import Allocation, AuctionInstance, Bid


@pytest.fixture
def example_one():
    """Two goods, three bidders, five bids of value 2: two tied winners."""
    return AuctionInstance(
        goods={"A", "B"},
        bidders={1, 2, 3},
        bids=(
            Bid(1, {"A", "B"}, 2),
            Bid(2, {"A"}, 2),
            Bid(2, {"B"}, 2),
            Bid(3, {"A"}, 2),
            Bid(3, {"B"}, 2),
        ),
    )


@pytest.fixture
def example_one_winners():
    return {
        Allocation.of([(["A"], 2), (["B"], 3)]),
        Allocation.of([(["A"], 3), (["B"], 2)]),
    }


@pytest.fixture
def single_good():
    """One good, bids 2, 5 and 3."""
    return AuctionInstance(
        goods={"A"},
        bidders={1, 2, 3},
        bids=(Bid(1, {"A"}, 2), Bid(2, {"A"}, 5), Bid(3, {"A"}, 3)),
    )


@pytest.fixture
def restore_settings():
    saved = settings.model_dump()
    yield settings
    for name, value in saved.items():
        setattr(settings, name, value)
