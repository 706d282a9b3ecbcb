"""Ackermann tower, its inverse, and size-indexing Sperner families of multisets.

A size-indexing Sperner family is a sequence Q_1, Q_2, ... of multisets with
|Q_m| = m where no member is a sub-multiset of another.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import CapExceededError

OVERCAP = math.inf  # compares above every integer
DEFAULT_CAP = 1 << 64
MAX_M = 1 << 32


@lru_cache(maxsize=1 << 16)
def ack(r: int, t: int, cap: int = DEFAULT_CAP):
    """A_r(t) when it is at most cap, else OVERCAP."""
    if r < 1 or t < 1:
        raise ValueError("ack needs r, t >= 1")
    if r == 1:
        v = 2 * t
    elif r == 2:
        v = 1 << t if t < cap.bit_length() + 1 else OVERCAP
    else:
        # A_r(t) = A_{r-1} applied t-1 times to A_r(1) = 2
        v = 2
        for _ in range(t - 1):
            v = ack(r - 1, v, cap)
            if v is OVERCAP:
                break
    return OVERCAP if v > cap else v


def inv_ack(n: int) -> int:
    """Smallest t with n <= A_t(t)."""
    if n < 1:
        raise ValueError("inv_ack needs n >= 1")
    t = 1
    while ack(t, t, n) < n:
        t += 1
    return t


def _level(r: int, s: int) -> int:
    """The j with A_r(j) <= s < A_r(j+1), for s >= 2."""
    if r == 1:
        return s // 2
    if r == 2:
        return s.bit_length() - 1
    j = 1
    while ack(r, j + 1, s) <= s:
        j += 1
    return j


def segment_range(r: int, t: int) -> tuple:
    lo = ack(r, t)
    return lo, ack(r, lo) if lo is not OVERCAP else OVERCAP


@lru_cache(maxsize=4096)
def _segment(r: int, t: int, m: int) -> tuple:
    if r == 1:
        return ((1, 4 * t - m), (2, 2 * m - 4 * t))
    if t == 1:
        return _segment(1, 1, m)
    T = ack(r, t)
    size = m - T + 2
    j = _level(r, size)
    inner = 1 if j == 1 else ack(r, j - 1)
    return ((2 * r - 1, T - j - 1), (2 * r, j - 1)) + _segment(r - 1, inner, size)


def family_segment(r: int, t: int, m: int) -> "SpernerMultiset":
    """Member of size m of the family covering sizes [A_r(t), A_r(A_r(t))].

    Local symbols are 1..2r.
    """
    if r < 1 or t < 1:
        raise ValueError("family_segment needs r, t >= 1")
    lo = ack(r, t, MAX_M)
    if lo is OVERCAP:
        raise CapExceededError(f"A_{r}({t}) exceeds the implementation cap")
    hi = ack(r, lo, MAX_M)
    if not lo <= m <= hi:
        raise ValueError(f"size {m} outside [{lo}, {hi}] for segment ({r},{t})")
    return SpernerMultiset.from_pairs(_segment(r, t, m))


class SpernerSymbol(NamedTuple):
    tier: int
    segment: int
    local: int

    def pack(self) -> int:
        return (self.tier << 12) | (self.segment << 4) | self.local

    @classmethod
    def unpack(cls, v: int) -> "SpernerSymbol":
        return cls(v >> 12, (v >> 4) & 0xFF, v & 0xF)

    def to_bytes(self) -> bytes:
        return self.pack().to_bytes(2, "big")


SYMBOL_BITS = 16
TIER0 = SpernerSymbol(0, 0, 1)


@dataclass(frozen=True)
class SpernerMultiset:
    counts: tuple  # sorted (symbol, multiplicity) pairs, multiplicities > 0

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "SpernerMultiset":
        c = Counter()
        for s, k in pairs:
            if k < 0:
                raise ValueError("negative multiplicity")
            c[s] += k
        return cls(tuple(sorted((s, k) for s, k in c.items() if k)))

    @property
    def size(self) -> int:
        return sum(k for _, k in self.counts)

    def __len__(self):
        return self.size

    def as_counter(self) -> Counter:
        return Counter(dict(self.counts))

    def elements(self) -> list:
        return [s for s, k in self.counts for _ in range(k)]

    def symbols(self) -> set:
        return {s for s, _ in self.counts}

    def issubset(self, other: "SpernerMultiset") -> bool:
        mine = other.as_counter()
        return all(mine[s] >= k for s, k in self.counts)

    def tagged(self, tier: int, segment: int) -> "SpernerMultiset":
        return SpernerMultiset.from_pairs((SpernerSymbol(tier, segment, s), k)
                                          for s, k in self.counts)


def global_position(m: int) -> tuple:
    """(tier, segment, r, t) of the family segment used for size m >= 2."""
    tier = max(2, inv_ack(m))
    i = 1
    while ack(tier, i + 1, m) <= m:
        i += 1
    inner = 1 if i == 1 else ack(tier, i - 1)
    return tier, i, tier - 1, inner


@lru_cache(maxsize=1024)
def global_family(m: int) -> SpernerMultiset:
    """Member of size m of a single size-indexing Sperner family over all m >= 1."""
    if m < 1:
        raise ValueError("global_family needs m >= 1")
    if m > MAX_M:
        raise CapExceededError(f"m = {m} exceeds {MAX_M}")
    if m == 1:
        return SpernerMultiset(((TIER0, 1),))
    tier, seg, r, t = global_position(m)
    return SpernerMultiset.from_pairs(_segment(r, t, m)).tagged(tier, seg)


def verify_sperner(family: Sequence[SpernerMultiset], block: int = 256) -> bool:
    """True iff no member is a sub-multiset of another member.

    Exhaustive pairwise comparison, vectorized over blocks of rows.
    """
    if len(family) < 2:
        return True
    alphabet = sorted({s for q in family for s in q.symbols()})
    col = {s: k for k, s in enumerate(alphabet)}
    mat = np.zeros((len(family), len(alphabet)), dtype=np.int64)
    for row, q in enumerate(family):
        for s, k in q.counts:
            mat[row, col[s]] = k
    # a member can only sit inside one that is at least as large
    mat = mat[np.argsort(mat.sum(axis=1), kind="stable")]
    for start in range(0, len(mat), block):
        rows, rest = mat[start:start + block], mat[start:]
        inside = np.ones((len(rows), len(rest)), dtype=bool)
        for c in range(mat.shape[1]):
            inside &= rest[None, :, c] >= rows[:, None, c]
        diag = np.arange(len(rows))
        inside[diag, diag] = False
        if inside.any():
            return False
    return True


def alphabet_used(upto: int) -> int:
    """Distinct symbols across global_family(1..upto)."""
    seen = set()
    for m in range(1, upto + 1):
        seen |= global_family(m).symbols()
    return len(seen)
