"""Brute-force partition and partition-pair enumeration.

Everything here is deliberately independent of the series machinery so it can
serve as an oracle for it. Enumeration is deterministic: pairs come out sorted
lexicographically on their part tuples.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

FAMILIES = (1, 2, 3, 4)
# pair counts grow roughly like exp(c sqrt(n)); n = 60 already takes minutes
ENUMERATION_CAP = 60


class CombinatoricsError(ValueError):
    pass


class NotInFamily(CombinatoricsError):
    pass


class CapExceeded(CombinatoricsError):
    pass


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise CombinatoricsError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            parts = tuple(sorted(parts, reverse=True))
        object.__setattr__(self, "parts", parts)

    def __len__(self):
        return len(self.parts)

    def __bool__(self):
        return bool(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def largest(self) -> int:
        return self.parts[0] if self.parts else 0

    @property
    def smallest(self) -> int:
        return self.parts[-1] if self.parts else 0

    @property
    def count(self) -> int:
        return len(self.parts)

    @property
    def spt(self) -> int:
        """Multiplicity of the smallest part (0 for the empty partition)."""
        if not self.parts:
            return 0
        s = self.parts[-1]
        return sum(1 for p in self.parts if p == s)

    def __str__(self):
        return "+".join(map(str, self.parts)) if self.parts else "()"


@dataclass(frozen=True, order=True)
class PartitionPair:
    first: Partition
    second: Partition = Partition()

    @property
    def size(self) -> int:
        return self.first.size + self.second.size

    def __str__(self):
        return f"({self.first}, {self.second})"


@lru_cache(maxsize=None)
def _bounded(n: int, lo: int, hi: int) -> tuple[tuple[int, ...], ...]:
    """Partitions of n with every part in [lo, hi], parts non-increasing."""
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, hi), lo - 1, -1):
        for rest in _bounded(n - first, lo, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(n: int) -> list[Partition]:
    if n < 0:
        raise CombinatoricsError("n must be non-negative")
    return sorted(Partition(p) for p in _bounded(n, 1, max(n, 1)))


def partition_count(n: int) -> int:
    return len(_bounded(n, 1, max(n, 1))) if n >= 0 else 0


def spt_total(n: int) -> int:
    if n < 1:
        raise CombinatoricsError("spt is defined for n >= 1")
    return sum(p.spt for p in partitions_of(n))


def _spt_floor(i: int, s: int) -> int:
    # minimum multiplicity of the smallest part of the first partition
    return {1: 1, 2: 2, 3: s + 1, 4: s}[i]


def _check_family(i: int):
    if i not in FAMILIES:
        raise CombinatoricsError(f"family must be one of {FAMILIES}, got {i}")


def in_family(i: int, pair: PartitionPair, strict: bool = False) -> bool:
    """Membership predicate; strict=True selects the smaller family used by the weighted count."""
    _check_family(i)
    p1, p2 = pair.first, pair.second
    if not p1:
        return False
    s = p1.smallest
    if p1.spt < _spt_floor(i, s):
        return False
    if not p2:
        return True
    lower_ok = s < p2.smallest if strict else s <= p2.smallest
    return lower_ok and p2.largest <= 2 * s


def check_cap(n: int, cap: int | None = None) -> None:
    limit = ENUMERATION_CAP if cap is None else cap
    if n > limit:
        raise CapExceeded(f"n = {n} is above the enumeration cap {limit}")


def _raw_pairs(i: int, n: int, strict: bool) -> Iterator[tuple]:
    # yields (s, m, rest, second): first partition is rest + (s,)*m
    for s in range(1, n + 1):
        lo2 = s + 1 if strict else s
        for m in range(_spt_floor(i, s), n // s + 1):
            left = n - m * s
            for n1 in range(left + 1):
                seconds = _bounded(left - n1, lo2, 2 * s)
                if not seconds:
                    continue
                for rest in _bounded(n1, s + 1, max(n1, s + 1)):
                    for sec in seconds:
                        yield s, m, rest, sec


def pair_enumerate(i: int, n: int, strict: bool = False, cap: int | None = None) -> list[PartitionPair]:
    """All pairs of size n in family i, sorted lexicographically."""
    _check_family(i)
    check_cap(n, cap)
    if n < 1:
        return []
    return sorted(
        PartitionPair(Partition(rest + (s,) * m), Partition(sec))
        for s, m, rest, sec in _raw_pairs(i, n, strict))


def pair_weight(i: int, pair: PartitionPair) -> int:
    # the weight attached to each strict-family pair in the weighted count
    s = pair.first.smallest
    return pair.first.spt - _spt_floor(i, s) + 1


def weighted_count(i: int, n: int) -> int:
    return sum(m - _spt_floor(i, s) + 1 for s, m, _, _ in _raw_pairs(i, n, True))


def unweighted_count(i: int, n: int) -> int:
    return sum(1 for _ in _raw_pairs(i, n, False))


def paircrank(i: int, pair: PartitionPair) -> int:
    if not in_family(i, pair):
        raise NotInFamily(f"{pair} is not in family {i}")
    p1, p2 = pair.first, pair.second
    s = p1.smallest
    k = sum(1 for p in p1.parts if p > s + p2.count)
    offset = {1: 1, 2: 2, 3: s + 1, 4: s}[i]
    return p1.spt - offset + k - p2.count


def crank_histogram(i: int, n: int, cap: int | None = None) -> dict[int, int]:
    hist: Counter = Counter()
    offsets = {1: lambda s: 1, 2: lambda s: 2, 3: lambda s: s + 1, 4: lambda s: s}
    _check_family(i)
    check_cap(n, cap)
    for s, m, rest, sec in _raw_pairs(i, n, False):
        c = len(sec)
        k = sum(1 for p in rest if p > s + c)
        hist[m - offsets[i](s) + k - c] += 1
    return dict(sorted(hist.items()))


def residue_classes(hist: dict[int, int], t: int) -> list[int]:
    """Group a crank histogram by m mod t."""
    out = [0] * t
    for m, c in hist.items():
        out[m % t] += c
    return out
