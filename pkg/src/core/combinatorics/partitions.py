"""
Set partitions of a goods set.

Enumeration recurses over the goods in canonical order: every partition of
the first k goods yields the partitions of the first k+1 goods by putting
the new good into each existing block (in block-creation order) and then
into a new singleton block.
"""
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, List, Tuple

from src.config.settings import settings
from src.core.errors import TooLargeError
from src.core.models import Bundle, Good, format_bundle


@dataclass(frozen=True, eq=False)
class Partition:
    """Blocks kept in creation order; equality is set equality of blocks."""
    blocks: Tuple[Bundle, ...]

    @property
    def block_set(self) -> FrozenSet[Bundle]:
        return frozenset(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.block_set == other.block_set

    def __hash__(self):
        return hash(self.block_set)

    def __len__(self) -> int:
        return len(self.blocks)

    def describe(self) -> str:
        return " ".join(format_bundle(b) for b in self.blocks) if self.blocks else "(empty)"


def canonical_order(goods: Iterable[Good]) -> List[Good]:
    """The goods sorted by their text, without duplicates."""
    return sorted(set(goods))


def guard_size(goods: Iterable[Good], what: str = "enumeration", limit: int = None) -> None:
    size = len(set(goods))
    limit = settings.ENUMERATION_MAX_GOODS if limit is None else limit
    if size > limit:
        raise TooLargeError(what, size, limit)


def iter_partitions(goods: Iterable[Good]) -> Iterator[Partition]:
    ordered = canonical_order(goods)
    guard_size(ordered, "partition enumeration")
    for blocks in _grow(ordered):
        yield Partition(tuple(frozenset(b) for b in blocks))


def _grow(ordered: List[Good]) -> Iterator[List[List[Good]]]:
    if not ordered:
        yield []
        return
    *head, last = ordered
    for smaller in _grow(head):
        for i in range(len(smaller)):
            yield smaller[:i] + [smaller[i] + [last]] + smaller[i + 1:]
        yield smaller + [[last]]


def all_partitions(goods: Iterable[Good]) -> List[Partition]:
    """Every partition of `goods` exactly once, in the deterministic recursion order."""
    return list(iter_partitions(goods))


def is_partition_of(candidate: Iterable[Iterable[Good]], goods: Iterable[Good]) -> bool:
    """True iff the blocks are non-empty, pairwise disjoint and cover `goods` exactly."""
    blocks = [frozenset(b) for b in candidate]
    goods = frozenset(goods)
    if any(not b for b in blocks):
        return False
    covered = frozenset().union(*blocks)
    if sum(len(b) for b in blocks) != len(covered):
        return False
    return covered == goods
