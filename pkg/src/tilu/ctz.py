"""Count-to-Zero: after deletions, does anything survive?

The m learned items receive the elements of global_family(m) as tickets.
A deletion of k items removes everything exactly when the deleted tickets
form global_family(k), since for k < m that multiset is not contained in
global_family(m).
"""
from __future__ import annotations

from collections import Counter
from typing import Sequence

from .base import Deletion, LearnOutput, Scheme, Verdict
from .bits import BitReader, BitWriter, Bits
from .domain import Dataset
from .errors import TiluError
from .sperner import SYMBOL_BITS, SpernerSymbol, global_family


def ctz_learn(m: int) -> tuple:
    if m == 0:
        return Verdict.BOTTOM, []
    return Verdict.TOP, sorted(global_family(m).elements(), key=SpernerSymbol.pack)


def ctz_unlearn(deleted: Sequence[SpernerSymbol], aux: Verdict | None) -> Verdict:
    """Verdict for the survivors; `aux` may be None (absent) when deleted is non-empty."""
    if not deleted:
        if aux is None:
            raise TiluError("an empty deletion needs the learned aux bit")
        return aux
    if Counter(deleted) == global_family(len(deleted)).as_counter():
        return Verdict.BOTTOM
    return Verdict.TOP


def write_symbol(w: BitWriter, s: SpernerSymbol):
    w.write(s.pack(), SYMBOL_BITS)


def read_symbol(r: BitReader) -> SpernerSymbol:
    return SpernerSymbol.unpack(r.read(SYMBOL_BITS))


def symbol_bits(s: SpernerSymbol) -> Bits:
    return BitWriter().write(s.pack(), SYMBOL_BITS).getvalue()


def verdict_bits(v: Verdict) -> Bits:
    return Bits(int(v is Verdict.TOP), 1)


def bits_verdict(b: Bits) -> Verdict:
    if b.length != 1:
        raise ValueError("verdict must be a single bit")
    return Verdict.TOP if b.value else Verdict.BOTTOM


class CtzScheme(Scheme):
    """CtZ over a dataset of any class; only the item count matters."""

    id = "ctz"

    def _learn(self, data):
        aux, symbols = ctz_learn(len(data))
        tickets = [None] * len(data)
        for i, s in zip(data.canonical_order(), symbols):
            tickets[i] = symbol_bits(s)
        return aux, verdict_bits(aux), tickets

    def _unlearn(self, aux, deletions, n):
        symbols = []
        for d in deletions:
            r = BitReader(d.ticket)
            symbols.append(read_symbol(r))
            r.expect_end()
        return ctz_unlearn(symbols, bits_verdict(aux))


class CtzAdapter:
    """CtZ built from a scheme for any class with two hypotheses that disagree.

    With h1 the hypothesis learned from nothing and (h2, x) a hypothesis and
    point where h2(x) != h1(x), the wrapped scheme learns m copies of
    (x, h2(x)); after deletion, something survives iff the recovered
    hypothesis still labels x as h2 does.
    """

    def __init__(self, scheme: Scheme):
        self.scheme = scheme
        cls = scheme.cls
        h1 = scheme.learn(Dataset(cls, ())).result
        for h2 in cls.hypotheses():
            x = next((x for x in cls.points() if h2(x) != h1(x)), None)
            if x is not None:
                break
        else:
            raise TiluError("every hypothesis agrees with the empty-data hypothesis")
        self.x, self.label = x, h2(x)

    def dataset(self, m: int) -> Dataset:
        return Dataset(self.scheme.cls, ((self.x, self.label),) * m)

    def learn(self, m: int) -> LearnOutput:
        out = self.scheme.learn(self.dataset(m))
        out.result = self._verdict(out.result)
        return out

    def unlearn(self, out: LearnOutput, indices: Sequence[int]) -> Verdict:
        z = (self.x, self.label)
        deletions = [Deletion(i, z, out.tickets[i]) for i in indices]
        return self._verdict(self.scheme.unlearn(out.aux, deletions, out.n))

    def _verdict(self, h) -> Verdict:
        return Verdict.TOP if h(self.x) == self.label else Verdict.BOTTOM


def ctz_from_class_scheme(scheme: Scheme) -> CtzAdapter:
    return CtzAdapter(scheme)
