"""Shared enumeration oracles for the test suite.

Everything here is deliberately brute force: tests compare the fast library
routes against these independently coded baselines.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import product


def brute_force_compositions(n: int) -> list[tuple[int, ...]]:
    """All compositions of n, built from cut patterns without the library."""
    out = []
    for bits in product((0, 1), repeat=n - 1):
        parts = []
        run = 1
        for b in bits:
            if b:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        out.append(tuple(parts))
    return out


@lru_cache(maxsize=None)
def multiplicity_census(n: int) -> dict[tuple[int, int], int]:
    """(k, multiplicity) -> number of compositions of n realizing it,
    for every k = 1..n and multiplicity = 0..n."""
    census: Counter = Counter()
    for parts in brute_force_compositions(n):
        profile = Counter(parts)
        for k in range(1, n + 1):
            census[(k, profile.get(k, 0))] += 1
    return dict(census)


@lru_cache(maxsize=None)
def event_probability_by_enumeration(n: int, m: int) -> Fraction:
    total = Fraction(0)
    for parts in brute_force_compositions(n):
        profile = Counter(parts)
        hits = sum(1 for v in profile.values() if v == m)
        total += Fraction(hits, len(profile))
    return total / 2 ** (n - 1)


# The sixteen compositions of 5, as displayed in any introduction to the
# subject; used as a frozen ground truth for the enumerator.
COMPOSITIONS_OF_FIVE = frozenset(
    {
        (5,),
        (4, 1),
        (1, 4),
        (3, 2),
        (2, 3),
        (3, 1, 1),
        (1, 3, 1),
        (1, 1, 3),
        (2, 2, 1),
        (2, 1, 2),
        (1, 2, 2),
        (2, 1, 1, 1),
        (1, 2, 1, 1),
        (1, 1, 2, 1),
        (1, 1, 1, 2),
        (1, 1, 1, 1, 1),
    }
)
