"""Affine subspaces of GF(2)^d kept as reduced constraint systems.

A vector (v_1..v_d) is stored as an int with bit j-1 holding v_j.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


def to_mask(v) -> int:
    return sum(int(b) << j for j, b in enumerate(v))


def from_mask(mask: int, d: int) -> tuple:
    return tuple((mask >> j) & 1 for j in range(d))


def _insert(rows: dict, mask: int, rhs: int) -> bool:
    """Add constraint <w,mask> = rhs to a reduced system keyed by pivot bit.

    Returns False when the constraint contradicts the system.
    """
    for p, (m, r) in rows.items():
        if mask >> p & 1:
            mask ^= m
            rhs ^= r
    if mask == 0:
        return rhs == 0
    p = mask.bit_length() - 1
    for q, (m, r) in list(rows.items()):
        if m >> p & 1:
            rows[q] = (m ^ mask, r ^ rhs)
    rows[p] = (mask, rhs)
    return True


@dataclass(frozen=True)
class AffineSpace:
    """Solution set {w : <w, m> = r for every row (m, r)}.

    Rows are fully reduced, each pivoting on its highest bit, and sorted by
    pivot. This form is unique for a given space, so equal spaces compare
    and serialize identically.
    """

    d: int
    rows: tuple = ()

    @classmethod
    def full(cls, d: int) -> "AffineSpace":
        return cls(d, ())

    @classmethod
    def solve(cls, d: int, constraints: Iterable[tuple[int, int]]) -> "AffineSpace | None":
        rows: dict = {}
        for mask, rhs in constraints:
            if not _insert(rows, mask, rhs):
                return None
        return cls(d, tuple(rows[p] for p in sorted(rows)))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def intersect(self, other: "AffineSpace") -> "AffineSpace | None":
        return AffineSpace.solve(self.d, self.rows + other.rows)

    def contains(self, w) -> bool:
        wm = to_mask(w)
        return all(bin(wm & m).count("1") % 2 == r for m, r in self.rows)

    def lex_min(self) -> tuple:
        # free coordinates all sit below their row's pivot, so zeroing them and
        # reading each pivot off its row gives the lexicographically least w
        w = 0
        for m, r in self.rows:
            if r:
                w |= 1 << (m.bit_length() - 1)
        return from_mask(w, self.d)

    def __iter__(self):
        for wm in range(2 ** self.d):
            w = from_mask(wm, self.d)
            if self.contains(w):
                yield w


class RankTracker:
    """Incremental span of masks, used by the greedy compressor."""

    def __init__(self):
        self._rows: dict = {}

    def add(self, mask: int) -> bool:
        """Insert mask; return True when it increased the rank."""
        for p, m in self._rows.items():
            if mask >> p & 1:
                mask ^= m
        if mask == 0:
            return False
        p = mask.bit_length() - 1
        for q, m in list(self._rows.items()):
            if m >> p & 1:
                self._rows[q] = m ^ mask
        self._rows[p] = mask
        return True
