from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from strategies import auction_instances, replace_bid

from src.core.combinatorics.allocations import possible_allocations_oracle
from src.core.errors import InstanceError, TooLargeError
from src.core.instance import assignment_value, scale_bids, without_bidder
from src.core.models import Allocation, AuctionInstance, Bid
from src.core.vcg.tiebreak import TIE_BREAKERS, get_tie_breaker
from src.core.wdp import (
    DynamicProgrammingSolver,
    OracleSolver,
    get_solver,
    max_value,
    winning_allocations_dp,
    winning_allocations_oracle,
)
from src.services.fuzzing import good_names

SOLVERS = [winning_allocations_oracle, winning_allocations_dp]


@pytest.mark.parametrize("solve", SOLVERS)
def test_example_one(solve, example_one, example_one_winners):
    result = solve(example_one)
    assert result.max_value == 4
    assert result.winners == example_one_winners


@pytest.mark.parametrize("solve", SOLVERS)
def test_all_zero_bids_every_allocation_wins(solve):
    instance = AuctionInstance(goods={"A"}, bidders={1, 2})
    result = solve(instance)
    assert result.max_value == 0
    assert result.winners == possible_allocations_oracle({"A"}, {1, 2})
    assert len(result.winners) == 3


@pytest.mark.parametrize("solve", SOLVERS)
def test_single_good_highest_bid_wins(solve, single_good):
    result = solve(single_good)
    assert result.max_value == 5
    assert result.winners == {Allocation.of([(["A"], 2)])}


@pytest.mark.parametrize("solve", SOLVERS)
def test_one_nonzero_bid(solve):
    instance = AuctionInstance(goods={"A", "B"}, bidders={1}, bids=(Bid(1, {"A", "B"}, 7),))
    result = solve(instance)
    assert result.max_value == 7
    assert result.winners == {Allocation.of([(["A", "B"], 1)])}


@pytest.mark.parametrize("solve", SOLVERS)
def test_zero_value_goods_are_completed(solve):
    # Bidder 2 has no bids, so giving them B (or not) is worth the same.
    instance = AuctionInstance(goods={"A", "B"}, bidders={1, 2}, bids=(Bid(1, {"A"}, 3),))
    result = solve(instance)
    assert result.winners == {
        Allocation.of([(["A"], 1)]),
        Allocation.of([(["A"], 1), (["B"], 2)]),
    }


@pytest.mark.parametrize("solve", SOLVERS)
def test_empty_bidder_set_yields_empty_allocation(solve):
    result = solve(AuctionInstance(goods={"A"}, bidders=set()))
    assert result.max_value == 0
    assert result.winners == {Allocation()}


def test_max_value(example_one):
    assert max_value(example_one) == 4
    assert max_value(example_one, "oracle") == 4
    assert max_value(AuctionInstance(goods={"A", "B"}, bidders={1})) == 0
    assert max_value(scale_bids(example_one, 2)) == 8


def test_fractional_bids_stay_exact():
    instance = AuctionInstance(goods={"A", "B"}, bidders={1, 2},
                               bids=(Bid(1, {"A"}, "1/3"), Bid(2, {"B"}, "1/6"), Bid(1, {"A", "B"}, "1/2")))
    assert max_value(instance) == Fraction(1, 2)
    assert len(winning_allocations_dp(instance).winners) == 2


def test_unknown_solver():
    with pytest.raises(InstanceError):
        get_solver("simplex")


def test_size_guards():
    with pytest.raises(TooLargeError):
        DynamicProgrammingSolver().solve(AuctionInstance(goods=good_names(21), bidders={1}))
    with pytest.raises(TooLargeError):
        OracleSolver().solve(AuctionInstance(goods=good_names(13), bidders={1}))


def test_dp_value_handles_twenty_goods():
    goods = good_names(20)
    instance = AuctionInstance(goods=goods, bidders={1, 2},
                               bids=(Bid(1, goods[:10], 4), Bid(2, goods[10:], 5), Bid(1, goods, 8)))
    assert DynamicProgrammingSolver().value(instance) == 9


@pytest.mark.property_based
@given(auction_instances())
@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_dp_matches_oracle(instance):
    expected = winning_allocations_oracle(instance)
    actual = winning_allocations_dp(instance)
    assert actual.max_value == expected.max_value
    assert actual.winners == expected.winners


@pytest.mark.property_based
@given(auction_instances(max_goods=3, max_bidders=3))
@settings(max_examples=100, deadline=None)
def test_winners_dominate_every_allocation(instance):
    result = winning_allocations_dp(instance)
    for allocation in possible_allocations_oracle(instance.goods, instance.bidders):
        assert assignment_value(instance, allocation) <= result.max_value
    for winner in result.winners:
        assert assignment_value(instance, winner) == result.max_value


@pytest.mark.property_based
@given(auction_instances(max_goods=3, max_bidders=3), st.data())
@settings(max_examples=100, deadline=None)
def test_raising_a_bid_never_lowers_the_optimum(instance, data):
    n = data.draw(st.sampled_from(sorted(instance.bidders)))
    goods = data.draw(st.sets(st.sampled_from(sorted(instance.goods)), min_size=1))
    current = instance.bid_table.get((n, frozenset(goods)), Fraction(0))
    raised = replace_bid(instance, n, goods, current + data.draw(st.integers(0, 5)))
    assert max_value(raised) >= max_value(instance)


@pytest.mark.property_based
@given(auction_instances(max_goods=3, max_bidders=3))
@settings(max_examples=50, deadline=None)
def test_scaling_bids_scales_the_optimum(instance):
    factor = Fraction(3, 2)
    assert max_value(scale_bids(instance, factor)) == max_value(instance) * factor
    assert winning_allocations_dp(scale_bids(instance, factor)).winners == winning_allocations_dp(instance).winners


def test_dp_family_is_counted_not_expanded():
    goods = good_names(20)
    instance = AuctionInstance(goods=goods, bidders={1, 2}, bids=(Bid(1, {"A"}, 3),))
    value, family = DynamicProgrammingSolver().family(instance)
    assert value == 3
    assert family.cores == (Allocation.of([(["A"], 1)]),)
    # Bidder 2 may take any subset of the other 19 goods.
    assert family.count() == 2 ** 19


def test_dp_refuses_to_expand_a_huge_winner_set():
    goods = good_names(20)
    instance = AuctionInstance(goods=goods, bidders={1, 2}, bids=(Bid(1, {"A"}, 3),))
    with pytest.raises(TooLargeError, match="winner set"):
        winning_allocations_dp(instance)


def test_dp_expands_a_moderate_winner_set():
    goods = good_names(13)
    instance = AuctionInstance(goods=goods, bidders={1, 2}, bids=(Bid(1, {"A"}, 3),))
    result = winning_allocations_dp(instance)
    assert len(result.winners) == 2 ** 12
    assert all(w.bundle_of(1) == {"A"} for w in result.winners)


@pytest.mark.property_based
@pytest.mark.parametrize("rule", sorted(TIE_BREAKERS))
@given(instance=auction_instances(max_goods=3, max_bidders=3), seed=st.integers(0, 2 ** 64 - 1))
@settings(max_examples=100, deadline=None)
def test_dp_decision_matches_choosing_from_every_winner(rule, instance, seed):
    breaker = get_tie_breaker(rule)
    winners = winning_allocations_oracle(instance).winners
    decision = DynamicProgrammingSolver().decide(instance, breaker, seed)
    assert decision.winner_count == len(winners)
    assert decision.chosen == breaker.choose(winners, instance, seed)


@pytest.mark.property_based
@given(auction_instances(max_goods=3, max_bidders=3), st.data())
@settings(max_examples=100, deadline=None)
def test_removing_a_bidder_never_raises_the_optimum(instance, data):
    n = data.draw(st.sampled_from(sorted(instance.bidders)))
    reduced = without_bidder(instance, n)
    if reduced.bidders:
        assert max_value(reduced) <= max_value(instance)
