"""Ground truth by exhaustive enumeration of the symmetric group.

Every identity elsewhere in the package is checked against the counts
produced here.  Enumeration partitions the n! words by a fixed prefix and
merges per-partition count vectors by addition, so parallel runs are
deterministic.  All entry points are guarded by the factorial-time cap.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Sequence

from . import permcore
from .algebra import QPolynomial
from .ddescent import DistTriangle
from .errors import CapExceeded, InvalidPrefix
from .permcore import Statistic

#: below this size a single process wins; above it the pool pays off
_PARALLEL_MIN_N = 9


def _check_cap(n: int, cap: int | None) -> None:
    limit = cap if cap is not None else permcore.enumeration_cap()
    if n > limit:
        raise CapExceeded(f"n={n} exceeds enumeration cap {limit}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


def _count_chunk(st: Statistic, n: int, prefixes: Sequence[tuple[int, ...]]) -> list[int]:
    """Count vector of the statistic over all words extending the prefixes."""
    counter = permcore._counter(st)
    flattened = st.flattened
    flatten_word = permcore.flatten_word
    vec = [0] * n  # a length-n word has at most n-1 occurrence positions
    for prefix in prefixes:
        for w in permcore.iter_words(n, prefix):
            if flattened:
                w = flatten_word(w)
            vec[counter(w)] += 1
    return vec


def _auto_jobs(n: int) -> int:
    if n < _PARALLEL_MIN_N:
        return 1
    return max(1, min(os.cpu_count() or 1, 8))


def _brute_vector(st: Statistic, n: int, jobs: int | None) -> list[int]:
    jobs = _auto_jobs(n) if jobs is None else max(1, jobs)
    if jobs == 1 or n <= 3:
        return _count_chunk(st, n, ((),))
    # Fix the first ceil(n/2) letters per task, then batch tasks.
    plen = (n + 1) // 2
    prefixes = list(itertools.permutations(range(1, n + 1), plen))
    nchunks = min(len(prefixes), jobs * 4)
    chunks = [prefixes[i::nchunks] for i in range(nchunks)]
    vec = [0] * n
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_count_chunk, itertools.repeat(st), itertools.repeat(n), chunks):
            for i, c in enumerate(part):
                vec[i] += c
    return vec


@lru_cache(maxsize=None)
def _brute_cached(st: Statistic, n: int) -> QPolynomial:
    return QPolynomial(_brute_vector(st, n, None))


def brute_distribution(
    st: Statistic, n: int, *, cap: int | None = None, jobs: int | None = None
) -> QPolynomial:
    """Exact distribution of the statistic over S_n as a polynomial in q.

    The coefficient of q^m counts the permutations with exactly m
    occurrences; coefficients sum to n!.
    """
    _check_cap(n, cap)
    if jobs is None:
        return _brute_cached(st, n)
    return QPolynomial(_brute_vector(st, n, jobs))


def _check_prefix(prefix: Sequence[int], n: int) -> tuple[int, ...]:
    prefix = tuple(prefix)
    if not prefix:
        raise InvalidPrefix("prefix must be nonempty")
    if len(set(prefix)) != len(prefix):
        raise InvalidPrefix(f"repeated letters in prefix {prefix}")
    if any(not 1 <= v <= n for v in prefix):
        raise InvalidPrefix(f"prefix {prefix} has letters outside 1..{n}")
    if len(prefix) > n:
        raise InvalidPrefix(f"prefix longer than n={n}")
    return prefix


@lru_cache(maxsize=None)
def _brute_prefix_cached(st: Statistic, n: int, prefix: tuple[int, ...]) -> QPolynomial:
    counter = permcore._counter(st)
    plen = len(prefix)
    vec = [0] * n
    for w in permcore.iter_words(n):
        fw = permcore.flatten_word(w)
        if fw[:plen] == prefix:
            vec[counter(fw if st.flattened else w)] += 1
    return QPolynomial(vec)


def brute_prefix_distribution(
    st: Statistic, n: int, prefix: Sequence[int], *, cap: int | None = None
) -> QPolynomial:
    """Distribution over permutations whose flattened word starts with
    ``prefix``.

    Flattened words always start with 1, so a prefix with a different first
    letter yields the zero polynomial.
    """
    _check_cap(n, cap)
    prefix = _check_prefix(prefix, n)
    if prefix[0] != 1:
        return QPolynomial.zero()
    return _brute_prefix_cached(st, n, prefix)


def verify_lemma_reduction(st: Statistic, n: int, i: int, j: int, k: int) -> bool:
    """Check the deletion identity for a length-4 flattened prefix.

    Removing the second letter i from the prefix 1,i,j,k (relabelling the
    larger letters down by one) multiplies the prefix distribution by a
    power of q equal to the change in the pattern count of the prefix word,
    and by 2 when i = 2 since the deleted letter may sit in either of two
    cycles of the preimage.
    """
    if n < 4:
        raise ValueError("need n >= 4")
    if st.kind not in (
        permcore.StatKind.SUB123,
        permcore.StatKind.SUB321,
        permcore.StatKind.PEAK,
        permcore.StatKind.VALLEY,
    ):
        raise ValueError("the reduction identity applies to length-3 patterns")
    if len({i, j, k}) != 3 or not all(2 <= v <= n for v in (i, j, k)):
        raise ValueError(f"i, j, k must be distinct in 2..{n}")
    delta = permcore.count_word((1, i, j, k), st) - permcore.count_word((1, j, k), st)
    jp = j - (1 if j > i else 0)
    kp = k - (1 if k > i else 0)
    lhs = brute_prefix_distribution(st, n, (1, i, j, k))
    rhs = (2 if i == 2 else 1) * brute_prefix_distribution(st, n - 1, (1, jp, kp))
    # delta may be negative; move the q power to whichever side keeps it a
    # polynomial identity.
    if delta >= 0:
        return lhs == rhs.shift(delta)
    return lhs.shift(-delta) == rhs


def verify_lemma_exchange(st: Statistic, n: int, i: int, j: int) -> bool:
    """Check the letter-exchange identity: the prefix 1,i,j (with j < i) has
    the same distribution as 1,(j+1),j."""
    if n < 4:
        raise ValueError("need n >= 4")
    if not 2 <= j < i <= n:
        raise ValueError(f"need 2 <= j < i <= n, got i={i}, j={j}")
    return brute_prefix_distribution(st, n, (1, i, j)) == brute_prefix_distribution(
        st, n, (1, j + 1, j)
    )


def brute_ddescent_table(n: int, d: int, *, cap: int | None = None) -> DistTriangle:
    """Exact (level, d-descents, cycles) triangle for all levels <= n."""
    _check_cap(n, cap)
    if d < 1:
        raise ValueError("d must be >= 1")
    entries: dict[tuple[int, int, int], int] = {}
    for level in range(1, n + 1):
        for w in permcore.iter_words(level):
            fw, ncycles = permcore.flatten_word_and_cycles(w)
            m = sum(a - b >= d for a, b in zip(fw, fw[1:]))
            key = (level, m, ncycles)
            entries[key] = entries.get(key, 0) + 1
    return DistTriangle(d=d, nmax=n, entries=entries)
