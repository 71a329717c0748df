"""Finite multisets in canonical sparse form.

Markings (place -> tokens) and transition multisets (transition -> count)
share this representation. Zero entries are never stored, so two
multisets are equal exactly when their dictionaries are equal.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping


def shortlex(name: str) -> tuple[int, str]:
    """Sort key ordering names by length first, then lexicographically."""
    return (len(name), name)


_TERM = re.compile(r"\s*(\d*)\s*\*?\s*([A-Za-z_][A-Za-z0-9_.\-]*)\s*")


class Multiset(Mapping):
    """Immutable multiset over string identifiers.

    >>> m = Multiset({"p1": 1, "p2": 2})
    >>> str(m + Multiset.parse("p1"))
    '2p1+2p2'
    """

    __slots__ = ("_d", "_hash", "_key")

    def __init__(self, data: Mapping[str, int] | Iterable[str] | None = None):
        d: dict[str, int] = {}
        if data is None:
            pass
        elif isinstance(data, Mapping):
            for k, v in data.items():
                if not isinstance(v, int) or isinstance(v, bool):
                    raise TypeError(f"count for {k!r} must be an int, got {v!r}")
                if v < 0:
                    raise ValueError(f"negative count for {k!r}: {v}")
                if v:
                    d[k] = v
        else:
            for k in data:
                d[k] = d.get(k, 0) + 1
        self._d = d
        self._hash: int | None = None
        self._key: tuple | None = None

    @classmethod
    def _raw(cls, d: dict[str, int]) -> Multiset:
        # d must already be zero-free
        obj = cls.__new__(cls)
        obj._d = d
        obj._hash = None
        obj._key = None
        return obj

    @classmethod
    def parse(cls, text: str) -> Multiset:
        """Parse additive notation such as ``"2p1 + p4"``; ``"0"`` or ``""`` is empty."""
        text = text.strip()
        if text in ("", "0", "∅"):
            return cls()
        d: dict[str, int] = {}
        for part in text.split("+"):
            mt = _TERM.fullmatch(part)
            if not mt:
                raise ValueError(f"cannot parse multiset term {part!r}")
            n = int(mt.group(1)) if mt.group(1) else 1
            if n:
                d[mt.group(2)] = d.get(mt.group(2), 0) + n
        return cls(d)

    # Mapping protocol; absent keys count as zero
    def __getitem__(self, key: str) -> int:
        return self._d.get(key, 0)

    def __iter__(self) -> Iterator[str]:
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __contains__(self, key: object) -> bool:
        return key in self._d

    def get(self, key: str, default: int = 0) -> int:
        return self._d.get(key, default)

    def key(self) -> tuple[tuple[str, int], ...]:
        """Canonical tuple form, entries sorted shortlex by identifier."""
        if self._key is None:
            self._key = tuple(sorted(self._d.items(), key=lambda kv: shortlex(kv[0])))
        return self._key

    def sort_key(self) -> tuple:
        return tuple((shortlex(k), v) for k, v in self.key())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Multiset):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __add__(self, other: Mapping[str, int]) -> Multiset:
        if not other:
            return self
        if not self._d:
            return other if isinstance(other, Multiset) else Multiset(other)
        d = dict(self._d)
        if isinstance(other, Multiset):
            # both sides are zero-free and nonnegative, so no sum is zero
            for k, v in other._d.items():
                d[k] = d.get(k, 0) + v
            return Multiset._raw(d)
        for k, v in other.items():
            d[k] = d.get(k, 0) + v
        return Multiset._raw({k: v for k, v in d.items() if v})

    def __sub__(self, other: Mapping[str, int]) -> Multiset:
        if not other:
            return self
        d = dict(self._d)
        items = other._d.items() if isinstance(other, Multiset) else other.items()
        for k, v in items:
            r = d.get(k, 0) - v
            if r < 0:
                raise ValueError(f"cannot subtract {other} from {self}: not pointwise smaller")
            if r:
                d[k] = r
            else:
                d.pop(k, None)
        return Multiset._raw(d)

    def __le__(self, other: Mapping[str, int]) -> bool:
        g = other._d.get if isinstance(other, Multiset) else other.get
        for k, v in self._d.items():
            if v > g(k, 0):
                return False
        return True

    def __ge__(self, other: Mapping[str, int]) -> bool:
        g = self._d.get
        return all(v <= g(k, 0) for k, v in other.items())

    def __mul__(self, n: int) -> Multiset:
        if n < 0:
            raise ValueError("negative scalar")
        if n == 0:
            return Multiset()
        if n == 1:
            return self
        return Multiset._raw({k: v * n for k, v in self._d.items()})

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self._d)

    def size(self) -> int:
        """Total number of elements counted with multiplicity."""
        return sum(self._d.values())

    def support(self) -> frozenset[str]:
        return frozenset(self._d)

    def as_dict(self) -> dict[str, int]:
        """Plain dict with shortlex-ordered keys (for serialization)."""
        return dict(self.key())

    def __str__(self) -> str:
        if not self._d:
            return "0"
        return "+".join(k if v == 1 else f"{v}{k}" for k, v in self.key())

    def __repr__(self) -> str:
        return f"Multiset({str(self)!r})"


Marking = Multiset
TransitionMultiset = Multiset


def msum(items: Iterable[Mapping[str, int]]) -> Multiset:
    """Sum of an iterable of multisets."""
    d: dict[str, int] = {}
    for m in items:
        for k, v in (m._d if isinstance(m, Multiset) else m).items():
            d[k] = d.get(k, 0) + v
    return Multiset._raw({k: v for k, v in d.items() if v})
