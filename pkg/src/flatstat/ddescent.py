"""Counting permutations by flattened d-descents and cycles.

A d-descent of a flattened word is a position where the left letter exceeds
the right one by at least d.  The triangle entry (n, m, k) counts the
permutations of length n whose flattened word has exactly m d-descents and
whose cycle form has exactly k cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from . import permcore
from .classical import stirling_first_unsigned, weak_compositions
from .errors import CapExceeded, RangeError


@dataclass(frozen=True)
class DistTriangle:
    """Tabulated counts (n, m, k) -> number of permutations, for n <= nmax.

    Only nonzero cells are stored.  Instances are treated as immutable.
    """

    d: int
    nmax: int
    entries: Mapping[tuple[int, int, int], int]

    def count(self, n: int, m: int, k: int) -> int:
        return self.entries.get((n, m, k), 0)

    def level_total(self, n: int) -> int:
        return sum(v for (nn, _, _), v in self.entries.items() if nn == n)

    def marginal(self, n: int) -> dict[int, int]:
        """m -> count at the given n (summed over cycles)."""
        out: dict[int, int] = {}
        for (nn, m, _), v in self.entries.items():
            if nn == n:
                out[m] = out.get(m, 0) + v
        return out

    def sorted_cells(self) -> list[tuple[int, int, int, int]]:
        return [(n, m, k, v) for (n, m, k), v in sorted(self.entries.items())]

    def to_csv(self) -> str:
        lines = ["n,m,k,count"]
        lines.extend(f"{n},{m},{k},{v}" for n, m, k, v in self.sorted_cells())
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "d": self.d,
            "nmax": self.nmax,
            "cells": [
                {"n": n, "m": m, "k": k, "count": str(v)}
                for n, m, k, v in self.sorted_cells()
            ],
        }


def triangle_by_recurrence(nmax: int, d: int) -> DistTriangle:
    """Fill the triangle for all n <= nmax.

    Base rows: for n <= d+1 the letters are unrestricted, so the counts are
    the unsigned Stirling numbers at m = 0.  At n = d+2 the only possible
    d-descent is the largest letter landing just before 2 in the flattened
    word.  From n >= d+3 the insertion recurrence applies: the new largest
    letter either forms its own cycle, lands in one of the m+d slots that
    create no new d-descent, or in one of the n-m-d slots that create one.
    """
    if nmax < 1 or d < 1:
        raise RangeError("nmax and d must be >= 1")
    entries: dict[tuple[int, int, int], int] = {}
    for n in range(1, min(nmax, d + 1) + 1):
        for k in range(1, n + 1):
            c = stirling_first_unsigned(n, k)
            if c:
                entries[(n, 0, k)] = c
    if nmax >= d + 2:
        n = d + 2
        for k in range(1, n + 1):
            c1 = stirling_first_unsigned(d + 1, k)
            if c1:
                entries[(n, 1, k)] = c1
            c0 = stirling_first_unsigned(d + 2, k) - stirling_first_unsigned(d + 1, k)
            if c0:
                entries[(n, 0, k)] = c0
    for n in range(d + 3, nmax + 1):
        for m in range(0, n - d):
            for k in range(1, n + 1):
                total = (
                    entries.get((n - 1, m, k - 1), 0)
                    + (m + d) * entries.get((n - 1, m, k), 0)
                    + (n - m - d) * entries.get((n - 1, m - 1, k), 0)
                )
                if total:
                    entries[(n, m, k)] = total
    return DistTriangle(d=d, nmax=nmax, entries=entries)


def marginal_by_recurrence(nmax: int, d: int) -> dict[tuple[int, int], int]:
    """Counts by d-descents alone: (n, m) -> number of permutations."""
    if nmax < 1 or d < 1:
        raise RangeError("nmax and d must be >= 1")
    out: dict[tuple[int, int], int] = {}
    for n in range(1, min(nmax, d + 1) + 1):
        out[(n, 0)] = math.factorial(n)
    if nmax >= d + 2:
        out[(d + 2, 1)] = math.factorial(d + 1)
        out[(d + 2, 0)] = math.factorial(d + 2) - math.factorial(d + 1)
    for n in range(d + 3, nmax + 1):
        for m in range(0, n - d):
            total = (m + d + 1) * out.get((n - 1, m), 0) + (n - m - d) * out.get(
                (n - 1, m - 1), 0
            )
            if total:
                out[(n, m)] = total
    return out


def _composition_weight_sum(n: int, m: int, d: int, with_prefix_products: bool) -> int:
    """Sum over weak compositions (i_1..i_{m+1}) of n-1-d-m of
    prod_j (d+j)^(i_j), optionally times prod_{j<=m} (1 + i_1+...+i_j)."""
    total = n - 1 - d - m
    acc = 0
    for comp in weak_compositions(total, m + 1):
        weight = 1
        for j, i in enumerate(comp, start=1):
            weight *= (d + j) ** i
        if with_prefix_products:
            partial = 0
            for i in comp[:m]:
                partial += i
                weight *= partial + 1
        acc += weight
    return acc


def explicit_marginal(n: int, m: int, d: int) -> int:
    """Closed composition-sum count of permutations of length n with exactly
    m d-descents.

    Each composition records the runs of non-producing letters between the
    m letters whose insertion creates a new d-descent; the prefix products
    count the placements of those producers.
    """
    if d < 1 or m < 0 or n < 1:
        raise RangeError("need d >= 1, m >= 0, n >= 1")
    if m > 0 and n < m + d + 1:
        return 0
    if m == 0 and n < d + 1:
        return math.factorial(n)
    return math.factorial(d + 1) * _composition_weight_sum(n, m, d, True)


def factorial_identity_check(n: int, d: int) -> bool:
    """Does the double composition sum over m reproduce n! / (d+1)! exactly?"""
    if d < 1 or n < d + 1:
        raise RangeError("need n >= d+1 >= 2")
    acc = sum(_composition_weight_sum(n, m, d, True) for m in range(0, n - d))
    return acc == math.factorial(n) // math.factorial(d + 1)


def equidistribution_check(n: int, d: int, *, cap: int | None = None) -> bool:
    """Flattened d-descents vs plain (d+1)-descents over the whole of S_n.

    Compares the two count multisets; d = 1 is the flattened-descent /
    big-descent equidistribution realized constructively by the bijections
    module.
    """
    if n < 1 or d < 1:
        raise RangeError("need n, d >= 1")
    limit = cap if cap is not None else permcore.enumeration_cap()
    if n > limit:
        raise CapExceeded(f"n={n} exceeds enumeration cap {limit}")
    flat_counts = [0] * n
    plain_counts = [0] * n
    dd = d + 1
    for w in permcore.iter_words(n):
        fw = permcore.flatten_word(w)
        flat_counts[sum(a - b >= d for a, b in zip(fw, fw[1:]))] += 1
        plain_counts[sum(a - b >= dd for a, b in zip(w, w[1:]))] += 1
    return flat_counts == plain_counts
