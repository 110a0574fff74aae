"""Uniform random compositions of an integer and their multiplicity profiles.

A composition of ``n`` is an ordered tuple of positive integers summing to
``n``; there are ``2**(n-1)`` of them.  Throughout this package a composition
is represented as a plain tuple of parts and a multiplicity profile as a
``collections.Counter`` mapping part size to multiplicity.

The module provides ground-truth enumeration for small ``n``, exact rational
event probabilities from that enumeration, and seeded Monte Carlo estimators
that remain practical for very large ``n`` (a profile of a uniform composition
of ``n = 10**6`` is sampled in a few dozen vectorized draws rather than by
materializing ~n/2 parts).
"""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

DEFAULT_ENUMERATION_CAP = 25
ENUM_CAP_ENV_VAR = "COMPANA_ENUM_CAP"

_MC_BATCH = 1 << 16


class EnumerationCapError(ValueError):
    """Raised when an exhaustive enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class EventEstimate:
    """Monte Carlo estimate of an event probability.

    ``value`` is the sample mean of the per-trial statistic, ``stderr`` its
    standard error (sample standard deviation over sqrt(trials)).
    """

    value: float
    stderr: float
    trials: int
    seed: int
    workers: int = 1

    def __post_init__(self) -> None:
        if not (0.0 <= self.value <= 1.0):
            raise ValueError(f"estimate {self.value} outside [0, 1]")
        if self.stderr < 0.0:
            raise ValueError("stderr must be nonnegative")


def enumeration_cap() -> int:
    """Current enumeration cap; the COMPANA_ENUM_CAP env var overrides it."""
    raw = os.environ.get(ENUM_CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_ENUMERATION_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{ENUM_CAP_ENV_VAR} must be a positive integer")
    return cap


def _check_cap(n: int, cap: int | None) -> None:
    effective = enumeration_cap() if cap is None else cap
    if n > effective:
        raise EnumerationCapError(
            f"n={n} exceeds the enumeration cap of {effective} "
            f"(2**{n - 1} compositions); raise {ENUM_CAP_ENV_VAR} to override"
        )


def bits_to_composition(n: int, bits: Sequence[int]) -> tuple[int, ...]:
    """Decode a cut pattern into a composition of ``n``.

    Bit ``i`` (0-based index ``i``, unit cells 1..n) set means a part
    boundary after cell ``i+1``.  The map is a bijection between the
    ``2**(n-1)`` bit patterns and the compositions of ``n``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(bits) != n - 1:
        raise ValueError(f"expected {n - 1} boundary bits, got {len(bits)}")
    parts = []
    run = 1
    for b in bits:
        if b:
            parts.append(run)
            run = 1
        else:
            run += 1
    parts.append(run)
    return tuple(parts)


def enumerate_compositions(n: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every composition of ``n`` exactly once (2**(n-1) of them).

    Refuses n above the enumeration cap (default 25, COMPANA_ENUM_CAP
    overrides); the worst case is ~16M tuples.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_cap(n, cap)
    for mask in range(1 << (n - 1)):
        parts = []
        prev = 0
        m = mask
        while m:
            cut = (m & -m).bit_length()  # 1-based position of lowest set bit
            parts.append(cut - prev)
            prev = cut
            m &= m - 1
        parts.append(n - prev)
        yield tuple(parts)


def multiplicity_profile(parts: Sequence[int]) -> Counter:
    """Map each part size to the number of parts with that size."""
    if not parts:
        raise ValueError("a composition has at least one part")
    return Counter(parts)


def distinct_size_count(parts: Sequence[int]) -> int:
    """Number of distinct part sizes."""
    return len(set(parts))


def exact_event_probability(n: int, m: int, cap: int | None = None) -> Fraction:
    """Exact probability that a uniform part size of a uniform composition
    of ``n`` has multiplicity ``m``.

    Averages |{sizes with multiplicity m}| / |{distinct sizes}| over all
    2**(n-1) compositions, in exact rational arithmetic.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    _check_cap(n, cap)
    # Tally (hits, distinct) pairs first: there are O(n^2) distinct pairs,
    # so the Fraction arithmetic stays off the hot loop.
    pair_counts: Counter = Counter()
    for parts in enumerate_compositions(n, cap=cap):
        profile = Counter(parts)
        hits = sum(1 for v in profile.values() if v == m)
        pair_counts[(hits, len(profile))] += 1
    total = Fraction(0)
    for (hits, dd), count in sorted(pair_counts.items()):
        if hits:
            total += Fraction(hits * count, dd)
    return total / (1 << (n - 1))


def exact_expected_sizes_with_multiplicity(n: int, m: int, cap: int | None = None) -> Fraction:
    """Exact expected number of part sizes with multiplicity ``m``, averaged
    over all compositions of ``n`` by brute force (enumeration route)."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    _check_cap(n, cap)
    total = 0
    for parts in enumerate_compositions(n, cap=cap):
        profile = Counter(parts)
        total += sum(1 for v in profile.values() if v == m)
    return Fraction(total, 1 << (n - 1))


def sample_composition(n: int, rng: np.random.Generator) -> tuple[int, ...]:
    """Draw a uniform composition of ``n`` from ``n - 1`` fair boundary bits."""
    if n < 1:
        raise ValueError("n must be >= 1")
    bits = rng.integers(0, 2, size=n - 1)
    return bits_to_composition(n, bits.tolist())


def worker_rng(seed: int, worker: int) -> np.random.Generator:
    """Independent, reproducible substream for a given (seed, worker) pair."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(worker,)))


def _split_trials(trials: int, workers: int) -> list[int]:
    base, extra = divmod(trials, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def _profile_stats_batch(
    n: int, size: int, rng: np.random.Generator, m: int | None
) -> tuple[np.ndarray, np.ndarray | None]:
    """Distinct-size counts (and, if m given, multiplicity-m size counts)
    for ``size`` independent uniform compositions of ``n``.

    Works on counts only.  The part count p is 1 + Binomial(n-1, 1/2); given
    p remaining parts that are all >= k with shifted total M = S - (k-1)p,
    the number of parts equal to k is hypergeometric with p marked items
    among M-1, sample size p-1 (all parts equal k exactly when M == p).
    Scanning k = 1, 2, ... therefore costs about log2(n) vectorized draws
    per batch instead of O(n) bits per trial.
    """
    if n > 1:
        p = 1 + rng.binomial(n - 1, 0.5, size=size).astype(np.int64)
    else:
        p = np.ones(size, dtype=np.int64)
    remaining = np.full(size, n, dtype=np.int64)
    distinct = np.zeros(size, dtype=np.int64)
    hits = np.zeros(size, dtype=np.int64) if m is not None else None
    k = 1
    while p.max() > 0:
        if k > n:
            raise RuntimeError("profile scan exceeded the maximum part size")
        shifted = remaining - (k - 1) * p
        c = np.zeros(size, dtype=np.int64)
        full = (shifted == p) & (p > 0)
        c[full] = p[full]
        hyp = ~full & (p > 1)
        if hyp.any():
            c[hyp] = rng.hypergeometric(p[hyp], shifted[hyp] - 1 - p[hyp], p[hyp] - 1)
        distinct += c > 0
        if hits is not None:
            hits += c == m
        remaining -= k * c
        p -= c
        k += 1
    return distinct, hits


def _mc_event_worker(args: tuple[int, int, int, int, int]) -> tuple[float, float, int]:
    n, m, trials, seed, worker = args
    rng = worker_rng(seed, worker)
    total = 0.0
    total_sq = 0.0
    left = trials
    while left > 0:
        size = min(left, _MC_BATCH)
        distinct, hits = _profile_stats_batch(n, size, rng, m)
        x = hits / distinct
        total += float(np.sum(x))
        total_sq += float(np.sum(x * x))
        left -= size
    return total, total_sq, trials


def _distinct_hist_worker(args: tuple[int, int, int, int]) -> np.ndarray:
    n, trials, seed, worker = args
    rng = worker_rng(seed, worker)
    hist = np.zeros(1, dtype=np.int64)
    left = trials
    while left > 0:
        size = min(left, _MC_BATCH)
        distinct, _ = _profile_stats_batch(n, size, rng, None)
        batch_hist = np.bincount(distinct)
        if len(batch_hist) > len(hist):
            hist = np.pad(hist, (0, len(batch_hist) - len(hist)))
        hist[: len(batch_hist)] += batch_hist
        left -= size
    return hist


def _run_workers(worker_fn, tasks: list, workers: int) -> list:
    """Run worker tasks, in parallel when asked; results in task order."""
    if workers <= 1 or len(tasks) <= 1:
        return [worker_fn(t) for t in tasks]
    try:
        with ProcessPoolExecutor(max_workers=min(workers, os.cpu_count() or 1)) as pool:
            return list(pool.map(worker_fn, tasks))
    except (OSError, PermissionError):
        # Sandboxed environments may forbid subprocesses; the serial path
        # consumes the same substreams and yields identical results.
        return [worker_fn(t) for t in tasks]


def mc_event_probability(
    n: int, m: int, trials: int, seed: int, workers: int = 1
) -> EventEstimate:
    """Monte Carlo estimate of the multiplicity-m event probability.

    Unbiased: averages |{sizes with multiplicity m}| / |{distinct sizes}|
    over independent uniform compositions.  Deterministic for a fixed
    (seed, trials, workers) triple; worker ``w`` consumes the substream
    derived from (seed, w).
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    tasks = [
        (n, m, t, seed, w) for w, t in enumerate(_split_trials(trials, workers)) if t > 0
    ]
    parts = _run_workers(_mc_event_worker, tasks, workers)
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    value = total / trials
    if trials > 1:
        var = max(0.0, (total_sq - total * total / trials) / (trials - 1))
        stderr = math.sqrt(var / trials)
    else:
        stderr = 0.0
    return EventEstimate(value=value, stderr=stderr, trials=trials, seed=seed, workers=workers)


def distinct_size_histogram(
    n: int, trials: int, seed: int, workers: int = 1
) -> np.ndarray:
    """Histogram of |{distinct part sizes}| over ``trials`` uniform
    compositions of ``n``; entry d counts trials with exactly d sizes.

    Deterministic for fixed (seed, trials, workers).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    tasks = [
        (n, t, seed, w) for w, t in enumerate(_split_trials(trials, workers)) if t > 0
    ]
    hists = _run_workers(_distinct_hist_worker, tasks, workers)
    width = max(len(h) for h in hists)
    out = np.zeros(width, dtype=np.int64)
    for h in hists:
        out[: len(h)] += h
    return out
