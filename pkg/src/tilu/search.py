"""Binary search over thresholds on the padded domain {1..2^d - 2}."""
from __future__ import annotations

from typing import Iterable

from .domain import Example
from .errors import UnrealizableError


def padded_bits(size: int) -> int:
    """Smallest d >= 2 with 2^d - 2 >= size."""
    d = 2
    while (1 << d) - 2 < size:
        d += 1
    return d


def consistent_range(top: int, items: Iterable[Example]) -> tuple:
    """[p, q]: the thresholds consistent with the items on {1..top}."""
    p, q = 0, top
    for x, y in items:
        if y:
            q = min(q, x - 1)
        else:
            p = max(p, x)
    if p > q:
        raise UnrealizableError("a 0-label sits at or above a 1-label")
    return p, q


def search_path(d: int, p: int, q: int) -> list[int]:
    """Thresholds visited until the first one inside [p, q]."""
    a, step = (1 << (d - 1)) - 1, 1 << (d - 2)
    path = [a]
    while a < p or a > q:
        a = a + step if a < p else a - step
        step >>= 1
        path.append(a)
    return path


def path_to(d: int, target: int) -> list[int]:
    """The unique search path from the root to `target`."""
    top = (1 << d) - 2
    if not 0 <= target <= top:
        raise ValueError(f"threshold {target} outside 0..{top}")
    return search_path(d, target, target)
