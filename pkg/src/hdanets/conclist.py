"""Conclists as canonically ordered tuples of transition labels.

An event is a position in the tuple. Keeping the tuple sorted under the
shortlex order on labels picks one representative per multiset of
concurrently active transitions, so equal tuples are isomorphic conclists.
"""

from __future__ import annotations

from bisect import bisect_right
from collections.abc import Iterable

from .multiset import Multiset, TransitionMultiset, shortlex

Conclist = tuple[str, ...]
EventSet = frozenset[int]


def canonical(labels: Iterable[str]) -> Conclist:
    return tuple(sorted(labels, key=shortlex))


def is_canonical(c: Conclist) -> bool:
    return all(shortlex(a) <= shortlex(b) for a, b in zip(c, c[1:]))


def canon_insert(c: Conclist, t: str) -> tuple[Conclist, int]:
    """Insert ``t`` after any existing copies; return the new conclist and position."""
    i = bisect_right(c, shortlex(t), key=shortlex)
    return c[:i] + (t,) + c[i:], i


def remove(c: Conclist, A: Iterable[int]) -> Conclist:
    A = frozenset(A)
    for j in A:
        if not 0 <= j < len(c):
            raise IndexError(f"event {j} out of range for conclist of length {len(c)}")
    return tuple(t for j, t in enumerate(c) if j not in A)


def parikh(c: Iterable[str]) -> TransitionMultiset:
    return Multiset(list(c))


def sort_key(c: Conclist) -> tuple:
    return (len(c), tuple(shortlex(t) for t in c))


def surviving(n: int, removed: Iterable[int]) -> list[int]:
    """Positions of a length-``n`` conclist left after deleting ``removed``.

    Index ``j`` of the result is the original position of event ``j`` in the face.
    """
    removed = frozenset(removed)
    return [j for j in range(n) if j not in removed]
