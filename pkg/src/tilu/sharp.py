"""Schemes whose tickets are Count-to-Zero symbols.

MinVal / MaxVal, point functions, products of thresholds and 1D thresholds.
Values and hypothesis parameters are bit-packed in fixed widths derived from
the domain; a missing value (NONE) is stored as 0.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Sequence

from .base import Scheme, Verdict
from .bits import BitReader, BitWriter, Bits, width
from .ctz import ctz_learn, ctz_unlearn, read_symbol, write_symbol
from .domain import (Point, PointFunctions, ProductThreshold, ProductThresholds, Threshold,
                     Thresholds, AugmentedPointFunctions, canonical_erm)
from .errors import ClassMismatchError, TicketError
from .search import consistent_range, padded_bits, path_to, search_path
from .sperner import SYMBOL_BITS


def _empty(ticket: Bits):
    if ticket.length:
        raise TicketError("expected an empty ticket")


def _groups(keys: Sequence) -> dict:
    """Positions grouped by key, in order of appearance."""
    out = defaultdict(list)
    for pos, k in enumerate(keys):
        out[k].append(pos)
    return out


def _ctz_tickets(keys: Sequence) -> list:
    """A CtZ symbol per position, with one CtZ instance per distinct key."""
    symbols = [None] * len(keys)
    for members in _groups(keys).values():
        _, tickets = ctz_learn(len(members))
        for pos, s in zip(members, tickets):
            symbols[pos] = s
    return symbols


def _all_gone(symbols: list) -> bool:
    return ctz_unlearn(symbols, None) is Verdict.BOTTOM


class ValueChain:
    """MinVal (lowest=True) or MaxVal over values in 1..size.

    Ticket: CtZ symbol of the item's value group, then the next distinct
    value in the walk direction (successor for MinVal, predecessor for
    MaxVal) or NONE.
    """

    def __init__(self, size: int, lowest: bool = True):
        self.size = size
        self.lowest = lowest
        self.value_width = width(size + 1)

    @property
    def ticket_bits(self) -> int:
        return SYMBOL_BITS + self.value_width

    def _after(self, u, v) -> bool:
        return u > v if self.lowest else u < v

    def learn(self, values: Sequence[int]) -> tuple:
        """(best value or None, [(symbol, link)] per position)."""
        distinct = sorted(set(values), reverse=not self.lowest)
        link = {v: w for v, w in zip(distinct, distinct[1:] + [None])}
        symbols = _ctz_tickets(values)
        best = distinct[0] if distinct else None
        return best, [(s, link[v]) for s, v in zip(symbols, values)]

    def unlearn(self, best, deleted: Sequence[tuple]) -> int | None:
        """`deleted` holds (value, (symbol, link)) pairs."""
        by_value = defaultdict(list)
        for v, t in deleted:
            if best is None or self._after(best, v):
                raise TicketError(f"deleted value {v} lies beyond the learned extreme {best}")
            by_value[v].append(t)
        b = best
        while b is not None:
            tickets = by_value.get(b)
            if not tickets or not _all_gone([s for s, _ in tickets]):
                return b
            links = {link for _, link in tickets}
            if len(links) != 1:
                raise TicketError(f"tickets for value {b} disagree on the next value")
            nxt = links.pop()
            if nxt is not None and not self._after(nxt, b):
                raise TicketError(f"broken value chain at {b}")
            b = nxt
        return None

    def write_value(self, w: BitWriter, v):
        w.write(0 if v is None else v, self.value_width)

    def read_value(self, r: BitReader):
        v = r.read(self.value_width)
        if v > self.size:
            raise ValueError("value out of range")
        return v or None

    def write_ticket(self, w: BitWriter, t):
        write_symbol(w, t[0])
        self.write_value(w, t[1])

    def read_ticket(self, r: BitReader):
        return read_symbol(r), self.read_value(r)


class ValueScheme(Scheme):
    """MinVal / MaxVal over the x values of a thresholds dataset (labels ignored)."""

    class_type = Thresholds

    def __init__(self, cls, lowest=True):
        super().__init__(cls)
        self.chain = ValueChain(cls.size, lowest)
        self.id = "sharp:minval" if lowest else "sharp:maxval"

    def _learn(self, data):
        order = data.canonical_order()
        best, tickets = self.chain.learn([data[i].x for i in order])
        out = [None] * len(data)
        for i, t in zip(order, tickets):
            w = BitWriter()
            self.chain.write_ticket(w, t)
            out[i] = w.getvalue()
        aux = BitWriter()
        self.chain.write_value(aux, best)
        return best, aux.getvalue(), out

    def _unlearn(self, aux, deletions, n):
        r = BitReader(aux)
        best = self.chain.read_value(r)
        r.expect_end()
        deleted = []
        for d in deletions:
            tr = BitReader(d.ticket)
            deleted.append((d.example.x, self.chain.read_ticket(tr)))
            tr.expect_end()
        return self.chain.unlearn(best, deleted)


def minval_learn(values, size):
    return ValueChain(size, True).learn(values)


def minval_unlearn(best, deleted, size):
    return ValueChain(size, True).unlearn(best, deleted)


def maxval_learn(values, size):
    return ValueChain(size, False).learn(values)


def maxval_unlearn(best, deleted, size):
    return ValueChain(size, False).unlearn(best, deleted)


class PointScheme(Scheme):
    """Point functions with CtZ tickets per x-value group.

    aux: hypothesis, a bit telling whether a 1-label exists, and the smallest
    b with (b,0) absent. Ticket: the CtZ symbol of the item's x group.
    """

    id = "sharp:point"
    class_type = PointFunctions

    def __init__(self, cls):
        if isinstance(cls, AugmentedPointFunctions):
            raise ClassMismatchError("sharp:point works on plain point functions")
        super().__init__(cls)
        self.w = width(cls.size)

    def _learn(self, data):
        h = canonical_erm(self.cls, data)
        has_one = any(y for _, y in data)
        zeros = {x for x, y in data if not y}
        free = next(b for b in self.cls.points() if b not in zeros)
        order = data.canonical_order()
        symbols = _ctz_tickets([data[i].x for i in order])
        tickets = [None] * len(data)
        for i, s in zip(order, symbols):
            w = BitWriter()
            write_symbol(w, s)
            tickets[i] = w.getvalue()
        aux = BitWriter().write(h.a - 1, self.w).write(int(has_one), 1).write(free - 1, self.w)
        return h, aux.getvalue(), tickets

    def _unlearn(self, aux, deletions, n):
        r = BitReader(aux)
        a, has_one, b = r.read(self.w) + 1, r.read(1), r.read(self.w) + 1
        r.expect_end()
        if a > self.cls.size or b > self.cls.size:
            raise ValueError("aux value out of range")
        groups = defaultdict(list)
        for d in deletions:
            tr = BitReader(d.ticket)
            groups[d.example.x].append(read_symbol(tr))
            tr.expect_end()
        if has_one and (a not in groups or not _all_gone(groups[a])):
            return Point(a)
        for j in range(b - 1, 0, -1):
            if j in groups and _all_gone(groups[j]):
                b = j
        return Point(b)


class ProductThresholdScheme(Scheme):
    """Products of thresholds via one MinVal per coordinate over 1-labeled items."""

    id = "sharp:prodthresh"
    class_type = ProductThresholds

    def __init__(self, cls):
        super().__init__(cls)
        self.chain = ValueChain(cls.m, True)

    def _learn(self, data):
        h = canonical_erm(self.cls, data)
        ones = [i for i in data.canonical_order() if data[i].y]
        tickets = [Bits()] * len(data)
        aux = BitWriter()
        per_coord = []
        for j in range(self.cls.d):
            best, ts = self.chain.learn([data[i].x[j] for i in ones])
            self.chain.write_value(aux, best)
            per_coord.append(ts)
        for k, i in enumerate(ones):
            w = BitWriter()
            for ts in per_coord:
                self.chain.write_ticket(w, ts[k])
            tickets[i] = w.getvalue()
        return h, aux.getvalue(), tickets

    def _unlearn(self, aux, deletions, n):
        r = BitReader(aux)
        bests = [self.chain.read_value(r) for _ in range(self.cls.d)]
        r.expect_end()
        deleted = [[] for _ in range(self.cls.d)]
        for d in deletions:
            if not d.example.y:
                _empty(d.ticket)
                continue
            tr = BitReader(d.ticket)
            for j in range(self.cls.d):
                deleted[j].append((d.example.x[j], self.chain.read_ticket(tr)))
            tr.expect_end()
        a = []
        for j in range(self.cls.d):
            b = self.chain.unlearn(bests[j], deleted[j])
            a.append(self.cls.m if b is None else b - 1)
        return ProductThreshold(tuple(a))


class SharpThresholdScheme(Scheme):
    """1D thresholds: binary search plus CtZ on the cells between path points.

    aux: final search point in d bits (domain padded to 2^d - 2), then one
    CtZ verdict bit per cell in increasing order. Ticket: the CtZ symbol of
    the item's cell, or empty for items outside every cell.
    """

    id = "sharp:thresholds"
    class_type = Thresholds

    def __init__(self, cls):
        super().__init__(cls)
        self.d = padded_bits(cls.size)
        self.top = (1 << self.d) - 2

    def output(self, a: int) -> Threshold:
        # thresholds past the real domain act like h_{>|X|} on it
        return Threshold(min(a, self.cls.size))

    @staticmethod
    def cell_of(bounds: list, x: int):
        for k in range(len(bounds) - 1):
            if bounds[k] < x <= bounds[k + 1]:
                return k
        return None

    def _learn(self, data):
        p, q = consistent_range(self.top, data)
        path = search_path(self.d, p, q)
        bounds = sorted(path)
        order = data.canonical_order()
        inside = [i for i in order if self.cell_of(bounds, data[i].x) is not None]
        symbols = _ctz_tickets([self.cell_of(bounds, data[i].x) for i in inside])
        tickets = [Bits()] * len(data)
        for i, s in zip(inside, symbols):
            w = BitWriter()
            write_symbol(w, s)
            tickets[i] = w.getvalue()
        aux = BitWriter().write(path[-1], self.d)
        occupied = {self.cell_of(bounds, data[i].x) for i in inside}
        for k in range(len(bounds) - 1):
            aux.write(int(k in occupied), 1)
        return self.output(path[-1]), aux.getvalue(), tickets

    def _unlearn(self, aux, deletions, n):
        r = BitReader(aux)
        final = r.read(self.d)
        path = path_to(self.d, final)
        bounds = sorted(path)
        occupied = [r.read(1) for _ in range(len(bounds) - 1)]
        r.expect_end()
        groups = defaultdict(list)
        for d in deletions:
            k = self.cell_of(bounds, d.example.x)
            if k is None:
                _empty(d.ticket)
                continue
            tr = BitReader(d.ticket)
            groups[k].append(read_symbol(tr))
            tr.expect_end()
        empty = [not occupied[k] if k not in groups else _all_gone(groups[k])
                 for k in range(len(occupied))]
        for a in path:
            lo, hi = sorted((a, final))
            if all(empty[k] for k in range(len(empty)) if lo <= bounds[k] and bounds[k + 1] <= hi):
                return self.output(a)
        raise AssertionError("the final search point always has zero loss")
