"""Compression-chain scheme.

The dataset (in canonical example order) is peeled into cells
T_1 = compress(S), T_2 = compress(S - T_1), ... until the compression of
what is left is empty. Those leftover items never influence the encoding
and get TERMINAL tickets.

Wire formats (w_Z = bits per example code, K = max compression size):

* aux: the hypothesis code.
* ticket: cell index j in ceil(log2(n+1)) bits (0 = TERMINAL), then 2K
  example slots of w_Z bits holding T_j then T_{j+1}, each padded with an
  example no compression can contain. No count field is needed, which
  keeps every ticket at exactly 2K*w_Z + ceil(log2(n+1)) bits.
"""
from __future__ import annotations

from collections import Counter

from .base import Scheme
from .bits import BitReader, BitWriter, width
from .domain import Dataset, ExplicitClass, Parities, ProductThresholds, Thresholds
from .errors import TicketError
from .mergeable import codec_for


class ChainScheme(Scheme):
    class_type = (Thresholds, ProductThresholds, Parities, ExplicitClass)

    def __init__(self, cls):
        super().__init__(cls)
        self.codec = codec_for(cls)
        self.id = f"chain:{cls.kind}"
        self.filler = self.codec.never_compressed()

    def cells(self, data: Dataset) -> list[list[int]]:
        """Dataset indices of T_1, T_2, ... in construction order."""
        self.codec.encode(data)
        remaining = data.canonical_order()
        out = []
        while True:
            picked = self.codec.compress([data[i] for i in remaining])
            if not picked:
                return out
            assert len(picked) <= self.codec.K
            cell = [remaining[p] for p in picked]
            out.append(cell)
            taken = set(cell)
            remaining = [i for i in remaining if i not in taken]

    def ticket_bits(self, n: int) -> int:
        return width(n + 1) + 2 * self.codec.K * self.cls.example_width

    def _write_cell(self, w: BitWriter, cell):
        cls = self.cls
        for z in list(cell) + [self.filler] * (self.codec.K - len(cell)):
            w.write(cls.example_code(z), cls.example_width)

    def _read_cell(self, r: BitReader):
        cls = self.cls
        out = []
        for _ in range(self.codec.K):
            code = r.read(cls.example_width)
            if code >= cls.n_examples:
                raise ValueError("example code out of range")
            z = cls.example_from_code(code)
            if z != self.filler:
                out.append(z)
        return out

    def _learn(self, data):
        n = len(data)
        cells = self.cells(data)
        h = self.codec.decode(self.codec.encode(data))
        aux = BitWriter()
        self.cls.write_hypothesis(aux, h)
        contents = [[data[i] for i in cell] for cell in cells] + [[]]
        terminal = BitWriter().write(0, width(n + 1))
        self._write_cell(terminal, [])
        self._write_cell(terminal, [])
        tickets = [terminal.getvalue()] * n
        for j, cell in enumerate(cells, start=1):
            w = BitWriter().write(j, width(n + 1))
            self._write_cell(w, contents[j - 1])
            self._write_cell(w, contents[j])
            t = w.getvalue()
            for i in cell:
                tickets[i] = t
        return h, aux.getvalue(), tickets

    def read_ticket(self, ticket, n):
        r = BitReader(ticket)
        j = r.read(width(n + 1))
        first, second = self._read_cell(r), self._read_cell(r)
        r.expect_end()
        return j, first, second

    def _unlearn(self, aux, deletions, n):
        r = BitReader(aux)
        h = self.cls.read_hypothesis(r)
        r.expect_end()
        if not deletions:
            return h
        payload = {}
        removed = {}
        for d in deletions:
            j, first, second = self.read_ticket(d.ticket, n)
            if j == 0:
                continue
            if payload.setdefault(j, (first, second)) != (first, second):
                raise TicketError(f"tickets disagree on cell {j}")
            if d.example not in first:
                raise TicketError(f"deleted example {d.example} is not in its cell {j}")
            removed.setdefault(j, Counter())[d.example] += 1
        ell = 1
        while ell in payload:
            ell += 1
        if ell == 1:
            return h
        for j in range(1, ell - 1):
            if payload[j][1] != payload[j + 1][0]:
                raise TicketError(f"cells {j} and {j + 1} do not chain")
        survivors = list(payload[ell - 1][1])
        for j in range(1, ell):
            left = Counter(payload[j][0])
            left.subtract(removed[j])
            if min(left.values()) < 0:
                raise TicketError(f"more deletions than members in cell {j}")
            survivors += list(left.elements())
        return self.codec.decode(self.codec.encode(survivors))


def chain_learn(cls, data):
    return ChainScheme(cls).learn(data)


def chain_unlearn(cls, deletions, aux, n):
    return ChainScheme(cls).unlearn(aux, deletions, n)
