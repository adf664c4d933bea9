"""
Tie-breaking among value-maximising allocations.

Each (bidder, bundle) pair, the empty bundle included, gets a pseudo-random
64-bit weight derived from the seed with a splitmix64 chain. The winning
candidate maximises the sum of its bidders' weights; candidates still tied
after that fall back to canonical allocation order.
"""
from abc import ABC, abstractmethod
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from src.config.settings import settings
from src.core.combinatorics.allocations import CompletionFamily
from src.core.combinatorics.partitions import canonical_order
from src.core.errors import EmptyCandidatesError, InstanceError
from src.core.events import event_broker
from src.core.models import EMPTY_BUNDLE, Allocation, AuctionInstance, BidderId, Bundle, Good, canonical_bundle
from src.i18n.strings import Strings
from src.utils.logger import logger

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """The splitmix64 finalizer applied to state + golden gamma."""
    z = (state + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= MASK64:
        raise InstanceError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


def _u64(value: int) -> bytes:
    return value.to_bytes(8, "little")


def encode_bundle(bundle: Iterable[Good]) -> bytes:
    """Length-prefixed, sorted, UTF-8 good identifiers."""
    goods = canonical_bundle(bundle)
    parts = [_u64(len(goods))]
    for good in goods:
        raw = good.encode("utf-8")
        parts.append(_u64(len(raw)))
        parts.append(raw)
    return b"".join(parts)


def keyed_hash(data: bytes) -> int:
    # Fold 8-byte little-endian chunks into the state; the tail is zero padded.
    if len(data) % 8:
        data += b"\x00" * (8 - len(data) % 8)
    state = 0
    for offset in range(0, len(data), 8):
        state = splitmix64(state ^ int.from_bytes(data[offset:offset + 8], "little"))
    return state


def bundle_weight(seed: int, n: BidderId, bundle: Iterable[Good]) -> int:
    """r_n(X): deterministic across runs and platforms, independent of the order goods are listed in."""
    return keyed_hash(_u64(seed) + _u64(n) + encode_bundle(bundle))


class TieBreaker(ABC):
    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @abstractmethod
    def _pick(self, candidates: Sequence[Allocation], instance: AuctionInstance, seed: int) -> Allocation:
        pass

    @abstractmethod
    def _pick_from_family(self, family: CompletionFamily, instance: AuctionInstance, seed: int) -> Allocation:
        pass

    def _announce(self, count: int, chosen: Allocation) -> None:
        logger.debug(Strings.TIE_BROKEN.value.format(count, self.name))
        event_broker.TIE_BROKEN.send(self, candidates=count, rule=self.name, chosen=chosen)

    def choose(self, candidates: Iterable[Allocation], instance: AuctionInstance, seed: int) -> Allocation:
        seed = check_seed(seed)
        ordered = sorted(set(candidates), key=lambda a: a.canonical_key)
        if not ordered:
            raise EmptyCandidatesError()
        if len(ordered) == 1:
            return ordered[0]
        chosen = self._pick(ordered, instance, seed)
        self._announce(len(ordered), chosen)
        return chosen

    def choose_from_family(self, family: CompletionFamily, instance: AuctionInstance, seed: int,
                           count: Optional[int] = None) -> Allocation:
        """Same choice as `choose(list(family), ...)`, without expanding the family."""
        seed = check_seed(seed)
        count = family.count() if count is None else count
        if not family.cores:
            raise EmptyCandidatesError()
        if count == 1:
            # A lone core with nothing left to hand out.
            return family.cores[0]
        chosen = self._pick_from_family(family, instance, seed)
        self._announce(count, chosen)
        return chosen


class RandomWeightTieBreaker(TieBreaker):
    """Maximise the sum of per-bidder weights over all bidders, unassigned ones scoring r_n(∅)."""
    name = "random_weights"

    def weight(self, seed: int, n: BidderId, bundle: Bundle) -> int:
        return bundle_weight(seed, n, bundle)

    def score(self, allocation: Allocation, instance: AuctionInstance, seed: int,
              cache: Optional[Dict[Tuple[BidderId, Bundle], int]] = None) -> int:
        cache = {} if cache is None else cache
        total = 0
        for n in instance.bidders:
            key = (n, allocation.bundle_of(n))
            if key not in cache:
                cache[key] = self.weight(seed, *key)
            total += cache[key]
        return total

    def _pick(self, candidates, instance, seed):
        cache: Dict[Tuple[BidderId, Bundle], int] = {}
        # Candidates arrive in canonical order and min() keeps the first minimum.
        return min(candidates, key=lambda a: -self.score(a, instance, seed, cache))

    def best_extensions(self, goods: Iterable[Good], bidders: Iterable[BidderId],
                        seed: int) -> Tuple[int, List[Allocation]]:
        """
        The heaviest allocations of `goods` to `bidders` and their weight, by a
        subset DP: V(i, S) = max over T ⊆ S of r_i(T) + V(i-1, S \\ T), with
        T = ∅ scoring r_i(∅). Past TIE_BREAK_MAX_GOODS goods only the empty
        extension is considered.
        """
        goods = canonical_order(goods)
        bidders = sorted(bidders)
        if len(goods) > settings.TIE_BREAK_MAX_GOODS:
            logger.debug(f"{len(goods)} leftover goods stay unsold for tie-breaking")
            return sum(self.weight(seed, n, EMPTY_BUNDLE) for n in bidders), [Allocation()]

        size = 1 << len(goods)
        bundles = [frozenset(g for i, g in enumerate(goods) if mask >> i & 1) for mask in range(size)]
        weights = [[self.weight(seed, n, bundles[mask]) for mask in range(size)] for n in bidders]
        layers = [[0] * size]
        for row in weights:
            previous = layers[-1]
            current = []
            for state in range(size):
                best = row[0] + previous[state]
                sub = state
                while sub:
                    candidate = row[sub] + previous[state ^ sub]
                    if candidate > best:
                        best = candidate
                    sub = (sub - 1) & state
                current.append(best)
            layers.append(current)

        # Backtrack every tie; with 64-bit weights there is almost always one path.
        found = []
        stack = [(len(bidders), size - 1, ())]
        while stack:
            i, state, pairs = stack.pop()
            if i == 0:
                found.append(Allocation(frozenset(pairs)))
                continue
            row, previous, target = weights[i - 1], layers[i - 1], layers[i][state]
            if row[0] + previous[state] == target:
                stack.append((i - 1, state, pairs))
            sub = state
            while sub:
                if row[sub] + previous[state ^ sub] == target:
                    stack.append((i - 1, state ^ sub, pairs + ((bundles[sub], bidders[i - 1]),)))
                sub = (sub - 1) & state
        return layers[-1][size - 1], found

    def _pick_from_family(self, family, instance, seed):
        best_key, best = None, None
        for core in family.cores:
            goods, bidders = family.leftover(core)
            weight, extensions = self.best_extensions(goods, bidders, seed)
            weight += sum(self.weight(seed, n, bundle) for bundle, n in core.pairs)
            for extension in extensions:
                candidate = core.merged(extension)
                key = (-weight, candidate.canonical_key)
                if best_key is None or key < best_key:
                    best_key, best = key, candidate
        return best


class CanonicalOrderTieBreaker(TieBreaker):
    """The least candidate in canonical allocation order; ignores the seed."""
    name = "canonical_order"

    def _pick(self, candidates, instance, seed):
        return candidates[0]

    def _pick_from_family(self, family, instance, seed):
        return min((least_extension(core, *family.leftover(core)) for core in family.cores),
                   key=lambda a: a.canonical_key)


def least_extension(core: Allocation, goods: Iterable[Good], bidders: Iterable[BidderId]) -> Allocation:
    """
    The least allocation in canonical order among `core` extended by an
    allocation of `goods` to `bidders`.

    Pairs are placed in sorted order. Before each remaining core pair, the
    smallest pair that can precede it is a single free good ranked between
    the last placed pair and that core pair, given to the lowest free
    bidder; once the core pairs are placed, stopping is least.
    """
    free_goods = canonical_order(goods)
    free_bidders = sorted(bidders)
    pending = list(core.canonical_key)
    pairs = set(core.pairs)
    last = None
    while pending and free_goods and free_bidders:
        upper = pending[0][0][0]
        good = next((g for g in free_goods if (last is None or g > last) and g < upper), None)
        if good is None:
            last = pending.pop(0)[0][0]
            continue
        free_goods.remove(good)
        pairs.add((frozenset({good}), free_bidders.pop(0)))
        last = good
    return Allocation(frozenset(pairs))


TIE_BREAKERS = {
    RandomWeightTieBreaker.name: RandomWeightTieBreaker,
    CanonicalOrderTieBreaker.name: CanonicalOrderTieBreaker,
}


def get_tie_breaker(rule: Union[str, TieBreaker, None] = None) -> TieBreaker:
    if isinstance(rule, TieBreaker):
        return rule
    name = rule or settings.TIE_BREAK_RULE
    try:
        return TIE_BREAKERS[name]()
    except KeyError:
        raise InstanceError(f"unknown tie-break rule '{name}'; choose from {', '.join(sorted(TIE_BREAKERS))}") from None


def tie_break(candidates: Iterable[Allocation], instance: AuctionInstance, seed: int,
              rule: Union[str, TieBreaker, None] = None) -> Allocation:
    return get_tie_breaker(rule).choose(candidates, instance, seed)
