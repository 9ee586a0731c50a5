"""The element-to-prime bijection and the symbol interner in front of it.

Ids are dense and assigned in first-use order; id ``i`` always maps to the
(i+1)-th prime, so growth never changes an existing assignment.

File format (UTF-8, line-oriented)::

    primeset-codebook 1
    <symbol> <prime>
    ...

Entry ``i`` must carry the (i+1)-th prime. Blank lines and ``#`` comments
are ignored.
"""

from __future__ import annotations

import os
import threading
from collections.abc import Iterable, Mapping
from pathlib import Path

from .errors import (
    NotPrimeError,
    ParseError,
    UnassignedPrimeError,
    UnknownIdError,
    UnknownSymbolError,
    VersionMismatchError,
)
from .multiset import MAX_MULTIPLICITY, ElementId, Multiset
from .primes import PrimeSupply, default_supply, is_prime

FORMAT_NAME = "primeset-codebook"
FORMAT_VERSION = 1

Symbol = str | int


def normalize_symbol(symbol: Symbol) -> str:
    """Symbols are stored as text; ints map to their decimal form."""
    if isinstance(symbol, bool):
        raise TypeError("bool is not a valid symbol")
    if isinstance(symbol, int):
        return str(symbol)
    if not isinstance(symbol, str):
        raise TypeError(f"symbols are str or int, got {type(symbol).__name__}")
    if not symbol or "#" in symbol or any(ch.isspace() for ch in symbol):
        raise ValueError(f"invalid symbol {symbol!r}: must be non-empty, without whitespace or '#'")
    return symbol


class PrimeCodebook:
    """Growable bijection between interned symbols, ids, and primes.

    Lookups of assigned ids are safe from many threads; interning takes an
    internal lock. :meth:`snapshot` returns a frozen copy for bulk work.
    """

    def __init__(self, symbols: Iterable[Symbol] = (), *, supply: PrimeSupply | None = None,
                 frozen: bool = False):
        self._supply = supply if supply is not None else default_supply()
        self._ids: dict[str, ElementId] = {}
        self._symbols: list[str] = []
        self._lock = threading.RLock()
        self.frozen = False
        self.intern_many(symbols)
        self.frozen = frozen

    @classmethod
    def from_symbols(cls, symbols: Iterable[Symbol], *, sort: bool = True) -> PrimeCodebook:
        """Deterministic construction: with ``sort`` the assignment ignores input order."""
        syms = [normalize_symbol(s) for s in symbols]
        if sort:
            syms = sorted(set(syms))
        return cls(syms)

    def __len__(self) -> int:
        return len(self._symbols)

    def __contains__(self, symbol: object) -> bool:
        try:
            return normalize_symbol(symbol) in self._ids  # type: ignore[arg-type]
        except (TypeError, ValueError):
            return False

    # -- interning ------------------------------------------------------------

    def intern(self, symbol: Symbol) -> ElementId:
        found = self._ids.get(symbol) if isinstance(symbol, str) else None
        if found is not None:
            return found
        key = normalize_symbol(symbol)
        found = self._ids.get(key)
        if found is not None:
            return found
        with self._lock:
            found = self._ids.get(key)
            if found is not None:
                return found
            if self.frozen:
                raise UnknownSymbolError(f"symbol {key!r} is not in this frozen codebook")
            idx = len(self._symbols)
            self._supply.ensure_count(idx + 1)
            self._symbols.append(key)
            self._ids[key] = idx
            return idx

    def intern_many(self, symbols: Iterable[Symbol], *, sort: bool = False) -> list[ElementId]:
        """Intern in order; with ``sort``, new symbols are assigned in sorted order."""
        syms = [normalize_symbol(s) for s in symbols]
        if sort:
            for s in sorted(set(syms)):
                self.intern(s)
        return [self.intern(s) for s in syms]

    def id_of(self, symbol: Symbol) -> ElementId:
        key = normalize_symbol(symbol)
        try:
            return self._ids[key]
        except KeyError:
            raise UnknownSymbolError(f"unknown symbol {key!r}") from None

    def symbol(self, x: ElementId) -> str:
        self._check_id(x)
        return self._symbols[x]

    def symbols(self) -> list[str]:
        return list(self._symbols)

    def _check_id(self, x: ElementId) -> None:
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < len(self._symbols):
            raise UnknownIdError(f"element id {x!r} is not assigned in this codebook")

    # -- the bijection --------------------------------------------------------

    def beta(self, x: ElementId) -> int:
        self._check_id(x)
        return self._supply.nth_prime(x)

    def beta_inverse(self, p: int) -> ElementId:
        """Id mapped to prime ``p``.

        Raises NotPrimeError for non-primes and UnassignedPrimeError for
        primes that no id maps to yet.
        """
        if p < 2:
            raise NotPrimeError(f"{p} is not prime")
        n = len(self._symbols)
        if n and p <= self._supply.nth_prime(n - 1):
            idx = self._supply.index_of(p)
            if idx is None:
                raise NotPrimeError(f"{p} is not prime")
            return idx
        if not is_prime(p):
            raise NotPrimeError(f"{p} is not prime")
        raise UnassignedPrimeError(f"prime {p} is not assigned to any element")

    def primes(self) -> list[int]:
        return self._supply.primes(len(self._symbols))

    def max_prime(self) -> int:
        if not self._symbols:
            raise UnknownIdError("codebook is empty")
        return self._supply.nth_prime(len(self._symbols) - 1)

    def mapping(self) -> dict[str, int]:
        return dict(zip(self._symbols, self.primes()))

    # -- multisets over raw symbols -------------------------------------------

    def multiset(self, counts: Mapping[Symbol, int], *, intern: bool = True,
                 sort: bool = True, limit: int = MAX_MULTIPLICITY) -> Multiset:
        """Build a Multiset from symbol counts, interning unseen symbols.

        With ``sort``, unseen symbols are interned in sorted order so the
        result does not depend on mapping order.
        """
        keys = [normalize_symbol(s) for s in counts]
        if intern:
            self.intern_many(keys, sort=sort)
        ids = {self.id_of(k): v for k, v in zip(keys, counts.values())}
        return Multiset(ids, limit=limit)

    def symbol_counts(self, X: Multiset) -> list[tuple[str, int]]:
        """Entries of ``X`` as (symbol, multiplicity), ordered by prime."""
        return [(self.symbol(x), k) for x, k in X.sorted_items()]

    # -- snapshots and persistence --------------------------------------------

    def snapshot(self) -> PrimeCodebook:
        cb = PrimeCodebook(supply=self._supply)
        with self._lock:
            cb._symbols = list(self._symbols)
            cb._ids = dict(self._ids)
        cb.frozen = True
        return cb

    def dumps(self) -> str:
        lines = [f"{FORMAT_NAME} {FORMAT_VERSION}"]
        lines += [f"{s} {p}" for s, p in zip(self._symbols, self.primes())]
        return "\n".join(lines) + "\n"

    def save(self, path: str | os.PathLike) -> None:
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(self.dumps(), encoding="utf-8")
        os.replace(tmp, path)

    @classmethod
    def loads(cls, text: str, *, supply: PrimeSupply | None = None) -> PrimeCodebook:
        cb = cls(supply=supply)
        header_seen = False
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if not header_seen:
                if len(parts) != 2 or parts[0] != FORMAT_NAME:
                    raise ParseError(f"expected header '{FORMAT_NAME} {FORMAT_VERSION}'", lineno)
                if parts[1] != str(FORMAT_VERSION):
                    raise VersionMismatchError(
                        f"codebook version {parts[1]!r}, this build reads {FORMAT_VERSION}", lineno
                    )
                header_seen = True
                continue
            if len(parts) != 2:
                raise ParseError(f"expected '<symbol> <prime>', got {raw!r}", lineno)
            symbol, prime_text = parts
            try:
                prime = int(prime_text)
                symbol = normalize_symbol(symbol)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            if symbol in cb._ids:
                raise ParseError(f"duplicate symbol {symbol!r}", lineno)
            expected = cb._supply.nth_prime(len(cb))
            if prime != expected:
                raise ParseError(
                    f"symbol {symbol!r} maps to {prime}, expected the next prime {expected}", lineno
                )
            cb.intern(symbol)
        if not header_seen:
            raise ParseError("missing codebook header")
        return cb

    @classmethod
    def load(cls, path: str | os.PathLike) -> PrimeCodebook:
        return cls.loads(Path(path).read_text(encoding="utf-8"))

    def __repr__(self) -> str:
        return f"PrimeCodebook({len(self)} symbols)"


def beta(cb: PrimeCodebook, x: ElementId) -> int:
    return cb.beta(x)


def beta_inverse(cb: PrimeCodebook, p: int) -> ElementId:
    return cb.beta_inverse(p)


def load_codebook(path: str | os.PathLike) -> PrimeCodebook:
    return PrimeCodebook.load(path)


def save_codebook(cb: PrimeCodebook, path: str | os.PathLike) -> None:
    cb.save(path)
