"""Permutations, standard cycle form, flattening, and subword-statistic counting.

Conventions used throughout the package:

- A permutation of length n is a word over the letters 1..n, each appearing
  exactly once.  Words are 1-based tuples: ``letters[i-1]`` is the image of i.
- Standard cycle form writes each cycle with its smallest element first and
  orders the cycles by increasing minima, so the first cycle starts with 1.
- Flattening erases the parentheses of the standard cycle form.  Every
  flattened word therefore starts with 1.
- A statistic counts positions of a word where a local comparison pattern
  holds (descent, ascent, descent of size >= d, and the length-3 patterns:
  increasing run, decreasing run, peak, valley).  Occurrences may overlap.
  A statistic carries a flag saying whether it is read on the flattened word
  or on the word form as given.

Enumeration over the full symmetric group is factorial-time, so it is guarded
by a cap (default 10, overridable via the FLATSTAT_MAX_N environment variable
or an explicit argument).
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .errors import (
    CapExceeded,
    InvalidPermutation,
    NonStandardOrder,
    ParseError,
)

DEFAULT_MAX_N = 10
MAX_N_ENV_VAR = "FLATSTAT_MAX_N"


def enumeration_cap() -> int:
    """Largest n for which full enumeration of S_n is allowed."""
    raw = os.environ.get(MAX_N_ENV_VAR)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{MAX_N_ENV_VAR} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{MAX_N_ENV_VAR} must be >= 1, got {value}")
    return value


class StatKind(Enum):
    DES = "des"
    ASC = "asc"
    BIG_DES = "bigdes"
    D_DES = "ddes"
    SUB123 = "123"
    SUB321 = "321"
    PEAK = "peak"
    VALLEY = "valley"


@dataclass(frozen=True)
class Statistic:
    """A subword statistic together with the flattened/plain reading flag.

    ``d`` is meaningful only for ``D_DES`` (descents of size >= d); it is
    pinned to 1 for every other kind so that equal statistics compare equal.
    """

    kind: StatKind
    d: int = 1
    flattened: bool = True

    def __post_init__(self):
        if self.kind is StatKind.D_DES:
            if self.d < 1:
                raise ValueError("d must be >= 1 for d-descents")
        elif self.d != 1:
            raise ValueError(f"d is only meaningful for d-descents, got {self.kind}")

    def on_plain(self) -> "Statistic":
        return replace(self, flattened=False)

    def on_flattened(self) -> "Statistic":
        return replace(self, flattened=True)

    def label(self) -> str:
        name = f"{self.kind.value}-{self.d}" if self.kind is StatKind.D_DES else self.kind.value
        return f"{name}/{'flat' if self.flattened else 'plain'}"


DES = Statistic(StatKind.DES)
ASC = Statistic(StatKind.ASC)
BIG_DES = Statistic(StatKind.BIG_DES)
SUB123 = Statistic(StatKind.SUB123)
SUB321 = Statistic(StatKind.SUB321)
PEAK = Statistic(StatKind.PEAK)
VALLEY = Statistic(StatKind.VALLEY)


def ddes(d: int, flattened: bool = True) -> Statistic:
    """Descents of size >= d."""
    return Statistic(StatKind.D_DES, d=d, flattened=flattened)


@dataclass(frozen=True)
class Permutation:
    """A permutation of 1..n in one-line word form."""

    letters: tuple[int, ...]

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        n = len(letters)
        if n < 1 or sorted(letters) != list(range(1, n + 1)):
            raise InvalidPermutation(f"not a permutation of 1..{n}: {letters}")

    @property
    def n(self) -> int:
        return len(self.letters)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    def image(self, i: int) -> int:
        """The image of i under the permutation read as a function."""
        return self.letters[i - 1]

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.letters)


@dataclass(frozen=True)
class CycleForm:
    """A permutation in standard cycle form.

    Each cycle starts with its minimum and cycle minima increase left to
    right; the union of the cycles is exactly {1..n}.
    """

    cycles: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cycles = tuple(tuple(c) for c in self.cycles)
        object.__setattr__(self, "cycles", cycles)
        if not cycles or any(not c for c in cycles):
            raise InvalidPermutation("cycle form must have at least one nonempty cycle")
        seen: list[int] = []
        prev_min = 0
        for cyc in cycles:
            if min(cyc) != cyc[0]:
                raise NonStandardOrder(f"cycle {cyc} does not start with its minimum")
            if cyc[0] <= prev_min:
                raise NonStandardOrder("cycle minima must strictly increase")
            prev_min = cyc[0]
            seen.extend(cyc)
        n = len(seen)
        if sorted(seen) != list(range(1, n + 1)):
            raise InvalidPermutation(f"cycles do not partition 1..{n}: {cycles}")

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.cycles)

    def to_permutation(self) -> Permutation:
        """Read the cycles as a function and return its word form."""
        image = [0] * (self.n + 1)
        for cyc in self.cycles:
            for i, x in enumerate(cyc):
                image[x] = cyc[(i + 1) % len(cyc)]
        return Permutation(tuple(image[1:]))

    def __str__(self) -> str:
        return "".join("(" + " ".join(str(x) for x in c) + ")" for c in self.cycles)


def standard_cycle_form(p: Permutation) -> CycleForm:
    """The unique standard cycle form of the function i -> p(i)."""
    letters = p.letters
    n = len(letters)
    seen = bytearray(n + 1)
    cycles: list[tuple[int, ...]] = []
    # Walking unvisited starts in increasing order yields each cycle from its
    # minimum, with minima increasing.
    for start in range(1, n + 1):
        if seen[start]:
            continue
        cyc = []
        j = start
        while not seen[j]:
            seen[j] = 1
            cyc.append(j)
            j = letters[j - 1]
        cycles.append(tuple(cyc))
    return CycleForm(tuple(cycles))


def flatten(c: CycleForm) -> Permutation:
    """Erase the parentheses of a standard cycle form."""
    word: list[int] = []
    for cyc in c.cycles:
        word.extend(cyc)
    return Permutation(tuple(word))


def flatten_word(letters: Sequence[int]) -> tuple[int, ...]:
    """Flattened word of the permutation given in one-line form.

    Fast path used by exhaustive enumeration; assumes the input is a valid
    word over 1..n.
    """
    n = len(letters)
    seen = bytearray(n + 1)
    out: list[int] = []
    for start in range(1, n + 1):
        if seen[start]:
            continue
        j = start
        while not seen[j]:
            seen[j] = 1
            out.append(j)
            j = letters[j - 1]
    return tuple(out)


def flatten_word_and_cycles(letters: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Flattened word together with the number of cycles."""
    n = len(letters)
    seen = bytearray(n + 1)
    out: list[int] = []
    ncycles = 0
    for start in range(1, n + 1):
        if seen[start]:
            continue
        ncycles += 1
        j = start
        while not seen[j]:
            seen[j] = 1
            out.append(j)
            j = letters[j - 1]
    return tuple(out), ncycles


@lru_cache(maxsize=None)
def _counter(st: Statistic) -> Callable[[Sequence[int]], int]:
    kind = st.kind
    if kind is StatKind.DES:
        return lambda w: sum(a > b for a, b in zip(w, w[1:]))
    if kind is StatKind.ASC:
        return lambda w: sum(a < b for a, b in zip(w, w[1:]))
    if kind is StatKind.BIG_DES:
        return lambda w: sum(a - b >= 2 for a, b in zip(w, w[1:]))
    if kind is StatKind.D_DES:
        d = st.d
        return lambda w: sum(a - b >= d for a, b in zip(w, w[1:]))
    if kind is StatKind.SUB123:
        return lambda w: sum(a < b < c for a, b, c in zip(w, w[1:], w[2:]))
    if kind is StatKind.SUB321:
        return lambda w: sum(a > b > c for a, b, c in zip(w, w[1:], w[2:]))
    if kind is StatKind.PEAK:
        return lambda w: sum(b > a and b > c for a, b, c in zip(w, w[1:], w[2:]))
    if kind is StatKind.VALLEY:
        return lambda w: sum(b < a and b < c for a, b, c in zip(w, w[1:], w[2:]))
    raise ValueError(f"unknown statistic kind {kind!r}")


def count_word(word: Sequence[int], st: Statistic) -> int:
    """Number of occurrences of the statistic's pattern in the given word.

    Counts on the word exactly as given (the flattened/plain flag is not
    consulted here).  The letters must be distinct integers but need not be
    1..n; only order comparisons are used.  Words shorter than the pattern
    give 0.
    """
    return _counter(st)(tuple(word))


def count_stat(p: Permutation, st: Statistic) -> int:
    """Number of occurrences of the statistic on p, honouring the flag.

    For a flattened statistic the word is first replaced by the flattening of
    the standard cycle form of p.
    """
    word = flatten_word(p.letters) if st.flattened else p.letters
    return count_word(word, st)


def iter_words(n: int, prefix: Sequence[int] = ()) -> Iterator[tuple[int, ...]]:
    """All words of S_n starting with ``prefix``, in lexicographic order.

    Unwrapped fast path used by the enumeration oracle; no cap check.
    """
    prefix = tuple(prefix)
    if not prefix:
        yield from itertools.permutations(range(1, n + 1))
        return
    rest = sorted(set(range(1, n + 1)) - set(prefix))
    if len(prefix) + len(rest) != n:
        raise InvalidPermutation(f"prefix {prefix} not extendable in S_{n}")
    for tail in itertools.permutations(rest):
        yield prefix + tail


def iterate_sym(
    n: int, *, cap: int | None = None, prefix: Sequence[int] = ()
) -> Iterator[Permutation]:
    """Yield the n! permutations of S_n in lexicographic order of word form.

    ``prefix`` restricts to words with the given first letters, which lets
    parallel consumers partition the iteration space.  Raises CapExceeded if
    n is above the configured cap (factorial-time guard).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    limit = cap if cap is not None else enumeration_cap()
    if n > limit:
        raise CapExceeded(f"n={n} exceeds enumeration cap {limit}")
    for word in iter_words(n, prefix):
        yield Permutation(word)


_WORD_RE = re.compile(r"\s*\d+\s*(?:,\s*\d+\s*)*")
_CYCLES_RE = re.compile(r"(?:\s*\(\s*\d+(?:\s+\d+)*\s*\)\s*)+")
_CYCLE_GROUP_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, *, lenient: bool = False) -> Permutation | CycleForm:
    """Parse a word ("7,5,1,6,2,4,3,8") or cycle form ("(1 7 3)(2 5)(4 6)(8)").

    Cycle input must already be in standard order unless ``lenient`` is set,
    in which case each cycle is rotated to start at its minimum and the
    cycles are sorted by minima.
    """
    if _WORD_RE.fullmatch(text):
        letters = tuple(int(tok) for tok in text.split(","))
        return Permutation(letters)
    if _CYCLES_RE.fullmatch(text):
        cycles = tuple(
            tuple(int(tok) for tok in group.split())
            for group in _CYCLE_GROUP_RE.findall(text)
        )
        if lenient:
            rotated = []
            for cyc in cycles:
                if not cyc:
                    raise ParseError("empty cycle")
                k = cyc.index(min(cyc))
                rotated.append(cyc[k:] + cyc[:k])
            cycles = tuple(sorted(rotated, key=lambda c: c[0]))
        return CycleForm(cycles)
    raise ParseError(f"not a permutation word or cycle form: {text!r}")
