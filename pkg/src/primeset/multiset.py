"""Finite multisets over interned element ids, plus their text format."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from itertools import combinations_with_replacement
from math import comb

from .errors import InvalidMultiplicityError, ParseError

ElementId = int

MAX_MULTIPLICITY = 2**32 - 1


def _check_multiplicity(k: int, limit: int) -> None:
    if isinstance(k, bool) or not isinstance(k, int):
        raise InvalidMultiplicityError(f"multiplicity must be an int, got {k!r}")
    if k < 1:
        raise InvalidMultiplicityError(f"multiplicity must be >= 1, got {k}")
    if k > limit:
        raise InvalidMultiplicityError(f"multiplicity {k} exceeds limit {limit}")


class Multiset(Mapping[ElementId, int]):
    """Immutable multiset: a sparse map from element id to multiplicity >= 1.

    Behaves as a read-only mapping. Zero counts passed to the constructor
    are dropped; negative counts are rejected.
    """

    __slots__ = ("_counts", "_size", "_hash", "limit")

    def __init__(
        self,
        counts: Mapping[ElementId, int] | Iterable[ElementId] = (),
        *,
        limit: int = MAX_MULTIPLICITY,
    ):
        if not isinstance(counts, Mapping):
            counts = Counter(counts)
        clean: dict[ElementId, int] = {}
        for x, k in counts.items():
            if k == 0:
                continue
            if isinstance(x, bool) or not isinstance(x, int) or x < 0:
                raise ValueError(f"element ids are non-negative ints, got {x!r}")
            _check_multiplicity(k, limit)
            clean[x] = k
        self._counts = clean
        self._size = sum(clean.values())
        self._hash: int | None = None
        self.limit = limit

    def __getitem__(self, x: ElementId) -> int:
        return self._counts[x]

    def __iter__(self) -> Iterator[ElementId]:
        return iter(self._counts)

    def __len__(self) -> int:
        """Number of distinct elements. Use :attr:`size` for the multiset size."""
        return len(self._counts)

    @property
    def size(self) -> int:
        return self._size

    def multiplicity(self, x: ElementId) -> int:
        return self._counts.get(x, 0)

    def sorted_items(self) -> list[tuple[ElementId, int]]:
        return sorted(self._counts.items())

    def insert(self, x: ElementId, k: int = 1) -> Multiset:
        _check_multiplicity(k, self.limit)
        counts = dict(self._counts)
        counts[x] = counts.get(x, 0) + k
        return Multiset(counts, limit=self.limit)

    def union(self, other: Multiset) -> Multiset:
        """Multiset sum: multiplicities add pointwise."""
        counts = dict(self._counts)
        for x, k in other.items():
            counts[x] = counts.get(x, 0) + k
        return Multiset(counts, limit=min(self.limit, other.limit))

    __add__ = union

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Multiset):
            return self._counts == other._counts
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{x}: {k}" for x, k in self.sorted_items())
        return f"Multiset({{{body}}})"


EMPTY = Multiset()


def insert(X: Multiset, x: ElementId, k: int = 1) -> Multiset:
    return X.insert(x, k)


def union(X: Multiset, Y: Multiset) -> Multiset:
    return X.union(Y)


def size(X: Multiset) -> int:
    return X.size


def multiset_count(alphabet_size: int, max_size: int) -> int:
    """Number of multisets over ``alphabet_size`` ids with size <= ``max_size``."""
    if alphabet_size == 0:
        return 1
    return sum(comb(alphabet_size + t - 1, t) for t in range(max_size + 1))


def enumerate_multisets(alphabet_size: int, max_size: int) -> Iterator[Multiset]:
    """Yield every multiset over ids ``0..alphabet_size-1`` of size <= ``max_size``.

    Ordered by size, then lexicographically. Each multiset appears once.
    """
    if alphabet_size < 0 or max_size < 0:
        raise ValueError("alphabet_size and max_size must be non-negative")
    yield EMPTY
    if alphabet_size == 0:
        return
    for t in range(1, max_size + 1):
        for combo in combinations_with_replacement(range(alphabet_size), t):
            yield Multiset(Counter(combo))


# -- text format -------------------------------------------------------------

def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_multiset_text(text: str, *, limit: int = MAX_MULTIPLICITY) -> dict[str, int]:
    """Parse ``<symbol> <multiplicity>`` lines into symbol counts.

    ``#`` starts a comment. Duplicate symbols are summed. Line order does
    not matter.
    """
    counts: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<symbol> <multiplicity>', got {raw!r}", lineno)
        symbol, mult = parts
        try:
            k = int(mult)
        except ValueError:
            raise ParseError(f"multiplicity is not an integer: {mult!r}", lineno) from None
        if k < 1:
            raise ParseError(f"multiplicity must be >= 1, got {k}", lineno)
        total = counts.get(symbol, 0) + k
        if total > limit:
            raise ParseError(f"multiplicity of {symbol!r} exceeds limit {limit}", lineno)
        counts[symbol] = total
    return counts


def format_multiset_text(entries: Iterable[tuple[str, int]]) -> str:
    return "".join(f"{symbol} {k}\n" for symbol, k in entries)
