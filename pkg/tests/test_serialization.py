import json
from fractions import Fraction

import pytest

from src.core.errors import BidFileError, BundleNotSubsetError
from src.core.instance import scale_bids
from src.infrastructure.serialization.bidfile import (
    instance_to_dict,
    load_bid_file,
    parse_bid_file,
    render_bid_file,
)
from src.infrastructure.serialization.outcome import OutcomeDocument, outcome_fingerprint
from src.services.auction import run_auction
from src.services.fuzzing import FuzzSpec, fuzz_instances

EXAMPLE_ONE = """
{
  "goods": ["A", "B"],
  "bidders": [1, 2, 3],
  "bids": [
    {"bidder": 1, "bundle": ["A", "B"], "price": "2"},
    {"bidder": 2, "bundle": ["A"], "price": 2},
    {"bidder": 2, "bundle": ["B"], "price": "2"},
    {"bidder": 3, "bundle": ["A"], "price": "4/2"},
    {"bidder": 3, "bundle": ["B"], "price": "2.0"}
  ]
}
"""


def test_parse_example_one(example_one):
    assert parse_bid_file(EXAMPLE_ONE) == example_one


def test_prices_are_exact():
    text = '{"goods": ["A"], "bidders": [1, 2], "bids": [' \
           '{"bidder": 1, "bundle": ["A"], "price": "5/2"}, {"bidder": 2, "bundle": ["A"], "price": "0.1"}]}'
    instance = parse_bid_file(text)
    assert instance.bid_table[(1, frozenset({"A"}))] == Fraction(5, 2)
    assert instance.bid_table[(2, frozenset({"A"}))] == Fraction(1, 10)


def test_float_prices_refused():
    text = '{"goods": ["A"], "bidders": [1], "bids": [{"bidder": 1, "bundle": ["A"], "price": 2.5}]}'
    with pytest.raises(BidFileError, match="price"):
        parse_bid_file(text)


def test_unparseable_price_refused():
    text = '{"goods": ["A"], "bidders": [1], "bids": [{"bidder": 1, "bundle": ["A"], "price": "two"}]}'
    with pytest.raises(BidFileError):
        parse_bid_file(text)


def test_json_syntax_error_has_position():
    text = '{"goods": ["A"],\n "bidders": [1,]}'
    with pytest.raises(BidFileError, match="line 2") as excinfo:
        parse_bid_file(text, source="bids.json")
    assert excinfo.value.line == 2
    assert excinfo.value.column is not None
    assert "bids.json" in str(excinfo.value)


def test_unknown_good_is_named():
    text = '{"goods": ["A", "B"], "bidders": [1], "bids": [{"bidder": 1, "bundle": ["C"], "price": "1"}]}'
    with pytest.raises(BundleNotSubsetError, match="C"):
        parse_bid_file(text)


@pytest.mark.parametrize("text", [
    '{"goods": ["A", "A"], "bidders": [1]}',
    '{"goods": ["A"], "bidders": [1, 1]}',
    '{"goods": ["A"], "bidders": [0]}',
    '{"goods": [""], "bidders": [1]}',
    '{"goods": ["A"], "bidders": [1], "sellers": []}',
    '{"goods": ["A"]}',
    '[]',
])
def test_malformed_documents(text):
    with pytest.raises(BidFileError):
        parse_bid_file(text)


def test_missing_file(tmp_path):
    with pytest.raises(BidFileError, match="Cannot read"):
        load_bid_file(tmp_path / "absent.json")


def test_load_bid_file(tmp_path, example_one):
    path = tmp_path / "bids.json"
    path.write_text(EXAMPLE_ONE, encoding="utf-8")
    assert load_bid_file(path) == example_one


def test_render_is_canonical(example_one):
    data = instance_to_dict(example_one)
    assert data["goods"] == ["A", "B"]
    assert data["bidders"] == [1, 2, 3]
    assert data["bids"][0] == {"bidder": 1, "bundle": ["A", "B"], "price": "2"}
    assert render_bid_file(example_one) == render_bid_file(parse_bid_file(EXAMPLE_ONE))


def test_fuzzed_instances_survive_a_round_trip():
    spec = FuzzSpec(max_goods=3, max_bidders=3, bid_grid=[0, "1/2", 1, "7/3"], instance_count=50, rng_seed=3)
    for instance in fuzz_instances(spec):
        assert parse_bid_file(render_bid_file(instance)) == instance


def test_outcome_document(example_one):
    outcome = run_auction(example_one, 42)
    document = OutcomeDocument.from_outcome(outcome, seed=42, solver="dp")
    data = json.loads(document.render())
    assert data["max_value"] == "4"
    assert data["payments"] == {"1": "0", "2": "0", "3": "0"}
    assert data["alphas"] == {"1": "4", "2": "2", "3": "2"}
    assert data["seed"] == 42
    assert data["solver"] == "dp"
    assert data["tie_break_applied"] is True
    assert data["winner_count"] == 2
    assert len(data["chosen"]) == 2
    assert OutcomeDocument.parse(document.render()) == document


def test_outcome_amounts_are_lowest_terms(single_good):
    outcome = run_auction(scale_bids(single_good, Fraction(1, 2)), 0)
    data = json.loads(OutcomeDocument.from_outcome(outcome, seed=0, solver="dp").render())
    assert data["payments"]["2"] == "3/2"
    assert data["max_value"] == "5/2"
    assert data["chosen"] == [{"bundle": ["A"], "bidder": 2}]


def test_outcome_rendering_is_byte_stable(example_one):
    first = OutcomeDocument.from_outcome(run_auction(example_one, 42), seed=42, solver="dp").render()
    second = OutcomeDocument.from_outcome(run_auction(example_one, 42), seed=42, solver="dp").render()
    assert first == second
    assert first.endswith("\n")
    assert outcome_fingerprint(run_auction(example_one, 42, "oracle")) == \
        outcome_fingerprint(run_auction(example_one, 42, "dp"))
