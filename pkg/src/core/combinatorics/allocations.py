"""
The set of possible allocations, defined twice.

`possible_allocations_oracle` follows the implicit definition: quantify over
every partition of the goods, every subset of its blocks and every function
from that subset to the bidders, and keep the injective ones.
`possible_allocations_alg` builds the list directly, concatenating the
injective partial maps of each partition. The two must agree as sets.

`CompletionFamily` holds a winner set in factored form for the dp solver;
`count_allocations` and `iter_allocations` size and expand it.
"""
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import FrozenSet, Iterable, Iterator, List, Sequence, Tuple

from src.config.settings import settings
from src.core.combinatorics.partitions import all_partitions, canonical_order, guard_size
from src.core.models import Allocation, BidderId, Bundle, Good


def is_valid_allocation(allocation: Allocation, goods: Iterable[Good], bidders: Iterable[BidderId]) -> bool:
    goods = frozenset(goods)
    bidders = frozenset(bidders)
    bundles = [b for b, _ in allocation.pairs]
    assigned = [n for _, n in allocation.pairs]

    if any(not b for b in bundles):
        return False
    if any(n not in bidders for n in assigned):
        return False
    if any(count > 1 for count in Counter(assigned).values()):
        return False
    covered = frozenset().union(*bundles)
    if sum(len(b) for b in bundles) != len(covered):
        return False
    return covered <= goods


def _oracle(goods: FrozenSet[Good], bidders: FrozenSet[BidderId]) -> FrozenSet[Allocation]:
    ordered_bidders = sorted(bidders)
    found = set()
    for partition in all_partitions(goods):
        for size in range(len(partition.blocks) + 1):
            for domain in combinations(partition.blocks, size):
                for image in product(ordered_bidders, repeat=size):
                    if len(set(image)) != size:
                        continue
                    candidate = Allocation(frozenset(zip(domain, image)))
                    if is_valid_allocation(candidate, goods, bidders):
                        found.add(candidate)
    return frozenset(found)


def possible_allocations_oracle(goods: Iterable[Good], bidders: Iterable[BidderId]) -> FrozenSet[Allocation]:
    goods = frozenset(goods)
    guard_size(goods, "allocation oracle")
    bidders = frozenset(bidders)
    if len(goods) <= settings.EXHAUSTIVE_MAX_GOODS:
        return _small_oracle(goods, bidders)
    return _oracle(goods, bidders)


# Only the small shapes the equivalence sweep revisits are worth keeping.
_small_oracle = lru_cache(maxsize=256)(_oracle)


def _injective(blocks: Sequence[Bundle], free: Tuple[BidderId, ...]) -> Iterator[Tuple[Tuple[Bundle, BidderId], ...]]:
    if not blocks:
        yield ()
        return
    first, rest = blocks[0], blocks[1:]
    for tail in _injective(rest, free):
        yield tail
    for i, bidder in enumerate(free):
        for tail in _injective(rest, free[:i] + free[i + 1:]):
            yield ((first, bidder),) + tail


def injective_functions(blocks: Sequence[Iterable[Good]], bidders: Sequence[BidderId]) -> List[Allocation]:
    """Every injective partial map from `blocks` to `bidders`, each exactly once."""
    blocks = [frozenset(b) for b in blocks]
    return [Allocation(frozenset(pairs)) for pairs in _injective(blocks, tuple(bidders))]


def possible_allocations_alg(goods: Iterable[Good], bidders: Iterable[BidderId]) -> List[Allocation]:
    goods = frozenset(goods)
    guard_size(goods, "allocation enumeration")
    ordered_bidders = sorted(set(bidders))
    result = []
    for partition in all_partitions(goods):
        result.extend(injective_functions(partition.blocks, ordered_bidders))
    return result



def canonical_allocations(allocations: Iterable[Allocation]) -> List[Allocation]:
    """Deduplicate and sort in canonical allocation order."""
    return sorted(set(allocations), key=lambda a: a.canonical_key)


def _stirling_row(n: int) -> List[int]:
    # S(n, k) for k = 0..n, second kind.
    row = [1]
    for i in range(1, n + 1):
        row = [0] + [k * (row[k] if k < len(row) else 0) + row[k - 1] for k in range(1, i + 1)]
    return row


def count_allocations(n_goods: int, n_bidders: int) -> int:
    """
    Number of distinct allocations of n_goods goods to n_bidders bidders.

    Adding a marker to the goods, the block holding it is the unsold part;
    the other k blocks go injectively to k of the bidders.
    """
    row = _stirling_row(n_goods + 1)
    total, falling = 0, 1
    for k in range(min(n_goods, n_bidders) + 1):
        total += row[k + 1] * falling
        falling *= n_bidders - k
    return total


def _assign(goods: Tuple[Good, ...], bidders: Tuple[BidderId, ...]) -> Iterator[Tuple[Tuple[Bundle, BidderId], ...]]:
    if not goods or not bidders:
        yield ()
        return
    first, rest = bidders[0], bidders[1:]
    yield from _assign(goods, rest)
    for size in range(1, len(goods) + 1):
        for bundle in combinations(goods, size):
            remaining = tuple(g for g in goods if g not in bundle)
            for tail in _assign(remaining, rest):
                yield ((frozenset(bundle), first),) + tail


def iter_allocations(goods: Iterable[Good], bidders: Iterable[BidderId]) -> Iterator[Allocation]:
    """Each distinct allocation once, bidder by bidder, without going through partitions."""
    for pairs in _assign(tuple(canonical_order(goods)), tuple(sorted(set(bidders)))):
        yield Allocation(frozenset(pairs))


@dataclass(frozen=True)
class CompletionFamily:
    """
    A set of allocations in factored form: every core, extended by every
    allocation of the goods it leaves unsold to the bidders it leaves out.
    Distinct cores never share an extension.
    """
    goods: FrozenSet[Good]
    bidders: FrozenSet[BidderId]
    cores: Tuple[Allocation, ...]

    def leftover(self, core: Allocation) -> Tuple[FrozenSet[Good], FrozenSet[BidderId]]:
        return self.goods - core.goods, self.bidders - frozenset(core.bidders)

    def count(self) -> int:
        total = 0
        for core in self.cores:
            goods, bidders = self.leftover(core)
            total += count_allocations(len(goods), len(bidders))
        return total

    def __iter__(self) -> Iterator[Allocation]:
        for core in self.cores:
            for extension in iter_allocations(*self.leftover(core)):
                yield core.merged(extension)
