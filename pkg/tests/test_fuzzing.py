from fractions import Fraction

import pytest
from pydantic import ValidationError

from src.core.instance import validate_instance
from src.core.vcg.tiebreak import splitmix64
from src.services.fuzzing import FuzzSpec, KeyedStream, fuzz_instances, good_names


def spec(**overrides):
    values = dict(max_goods=3, max_bidders=3, bid_grid=[0, 1, 2], instance_count=50, rng_seed=7)
    values.update(overrides)
    return FuzzSpec(**values)


def test_zero_instances():
    assert fuzz_instances(spec(instance_count=0)) == []


def test_same_spec_same_instances():
    assert fuzz_instances(spec()) == fuzz_instances(spec())


def test_different_seed_different_instances():
    assert fuzz_instances(spec(rng_seed=7)) != fuzz_instances(spec(rng_seed=8))


def test_generated_instances_are_valid_and_in_bounds():
    instances = fuzz_instances(spec())
    assert len(instances) == 50
    for instance in instances:
        assert validate_instance(instance) is instance
        assert 1 <= len(instance.goods) <= 3
        assert 1 <= len(instance.bidders) <= 3
        assert all(bid.price in {0, 1, 2} for bid in instance.bids)
        assert all(bid.bundle for bid in instance.bids)


def test_fixed_shape():
    for instance in fuzz_instances(spec(min_goods=2, max_goods=2, min_bidders=3, max_bidders=3, instance_count=10)):
        assert instance.goods == frozenset({"A", "B"})
        assert instance.bidders == frozenset({1, 2, 3})


def test_full_density_bids_on_every_bundle():
    for instance in fuzz_instances(spec(max_goods=2, bid_density=1, instance_count=5)):
        bundles = (1 << len(instance.goods)) - 1
        assert len(instance.bids) == bundles * len(instance.bidders)


def test_fractional_grid():
    instances = fuzz_instances(spec(bid_grid=["1/2", "3/2"], bid_density=1, instance_count=3))
    assert all(bid.price in {Fraction(1, 2), Fraction(3, 2)} for i in instances for bid in i.bids)


@pytest.mark.parametrize("overrides", [
    dict(max_goods=13),
    dict(min_goods=3, max_goods=2),
    dict(max_bidders=0),
    dict(bid_grid=[]),
    dict(bid_grid=[-1, 2]),
    dict(instance_count=-1),
    dict(rng_seed=-1),
    dict(bid_density=2),
])
def test_invalid_specs(overrides):
    with pytest.raises(ValidationError):
        spec(**overrides)


def test_float_grid_refused():
    with pytest.raises((ValidationError, TypeError)):
        spec(bid_grid=[0.5])


def test_keyed_stream():
    stream = KeyedStream(7)
    assert stream.next_u64() == splitmix64(7)
    values = [stream.below(6) for _ in range(200)]
    assert set(values) <= set(range(6))
    assert all(2 <= stream.between(2, 4) <= 4 for _ in range(50))
    with pytest.raises(ValueError):
        stream.below(0)


def test_good_names():
    assert good_names(3) == ["A", "B", "C"]
    assert good_names(0) == []
