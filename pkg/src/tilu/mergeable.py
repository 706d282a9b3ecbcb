"""Encode / Decode / Merge / Compress for the mergeable classes.

Encoded states are plain values: an int for thresholds, an AffineSpace for
parities, the closure parameter for intersection-closed classes. Each codec
writes its states in a fixed number of bits (`bit_len`), which the tree
scheme relies on.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .bits import BitReader, BitWriter, Bits, width
from .domain import (ConceptClass, Dataset, Example, ExplicitClass, Parities, Parity,
                     PointFunctions, ProductThreshold, ProductThresholds, Threshold,
                     Thresholds, closure_rows)
from .errors import TiluError, UnrealizableError
from .gf2 import AffineSpace, RankTracker, from_mask, to_mask


class Codec:
    cls: ConceptClass
    K: int          # largest compression size
    bit_len: int    # fixed serialized size of a state
    tag: int
    neutral = None

    def encode(self, items: Iterable[Example]):
        raise NotImplementedError

    def decode(self, e):
        raise NotImplementedError

    def merge(self, e1, e2):
        raise NotImplementedError

    def compress(self, items: Sequence[Example]) -> list[int]:
        """Positions (into `items`) of a compression, scanning in the given order."""
        raise NotImplementedError

    def write(self, w: BitWriter, e):
        raise NotImplementedError

    def read(self, r: BitReader):
        raise NotImplementedError

    def never_compressed(self) -> Example:
        """An example that no compression ever contains (used as slot filler)."""
        raise NotImplementedError

    def to_bits(self, e) -> Bits:
        w = BitWriter()
        self.write(w, e)
        return w.getvalue()

    def from_bits(self, bits: Bits):
        r = BitReader(bits)
        e = self.read(r)
        r.expect_end()
        return e


class ThresholdCodec(Codec):
    """State x_-: the largest 0-labeled point, 0 when there is none."""

    tag = 1
    K = 1
    neutral = 0

    def __init__(self, cls: Thresholds):
        self.cls = cls
        self.bit_len = width(cls.size + 1)

    def encode(self, items):
        lo, hi = 0, self.cls.size + 1
        for x, y in items:
            if y:
                hi = min(hi, x)
            else:
                lo = max(lo, x)
        if lo >= hi:
            raise UnrealizableError("a 0-label sits at or above a 1-label")
        return lo

    def decode(self, e):
        return Threshold(e)

    def merge(self, e1, e2):
        return max(e1, e2)

    def compress(self, items):
        target = self.encode(items)
        if target == 0:
            return []
        return [next(i for i, z in enumerate(items) if z == (target, 0))]

    def write(self, w, e):
        w.write(e, self.bit_len)

    def read(self, r):
        e = r.read(self.bit_len)
        if e > self.cls.size:
            raise ValueError("threshold state out of range")
        return e

    def never_compressed(self):
        return Example(1, 1)


class ParityCodec(Codec):
    """State: the affine space of consistent parity vectors."""

    tag = 2

    def __init__(self, cls: Parities):
        self.cls = cls
        self.K = cls.d
        self.bit_len = cls.d * (cls.d + 1)
        self.neutral = AffineSpace.full(cls.d)

    def encode(self, items):
        space = AffineSpace.solve(self.cls.d, ((to_mask(x), y) for x, y in items))
        if space is None:
            raise UnrealizableError("parity constraints are inconsistent")
        return space

    def decode(self, e):
        return Parity(e.lex_min())

    def merge(self, e1, e2):
        out = e1.intersect(e2)
        if out is None:
            raise UnrealizableError("merged parity constraints are inconsistent")
        return out

    def compress(self, items):
        self.encode(items)
        span = RankTracker()
        return [i for i, (x, _) in enumerate(items) if span.add(to_mask(x))]

    def write(self, w, e):
        d = self.cls.d
        rows = list(e.rows) + [(0, 0)] * (d - len(e.rows))
        for m, rhs in rows:
            w.write(m, d)
            w.write(rhs, 1)

    def read(self, r):
        d = self.cls.d
        rows = []
        for _ in range(d):
            m, rhs = r.read(d), r.read(1)
            if m:
                rows.append((m, rhs))
            elif rhs:
                raise ValueError("contradictory parity row")
        space = AffineSpace.solve(d, rows)
        if space is None or space.rows != tuple(rows):
            raise ValueError("parity rows are not in reduced form")
        return space

    def never_compressed(self):
        return Example(from_mask(0, self.cls.d), 0)


class _ClosureCodec(Codec):
    """Intersection-closed classes: the state is the closure h_S.

    Merging two closures yields the closure of the union, i.e. the smallest
    member of the class containing both (not their pointwise AND).
    """

    def close(self, positives: Sequence):
        raise NotImplementedError

    def _consistent(self, e, items) -> bool:
        h = self.decode(e)
        return all(h(x) == y for x, y in items)

    def encode(self, items):
        items = list(items)
        e = self.close([x for x, y in items if y])
        if e is None or not self._consistent(e, items):
            raise UnrealizableError("no hypothesis is consistent with the dataset")
        return e

    def compress(self, items):
        target = self.encode(items)
        kept, current = [], self.neutral
        for i, (x, y) in enumerate(items):
            if y and current != target:
                nxt = self.close([items[j].x for j in kept] + [x])
                if nxt != current:
                    kept.append(i)
                    current = nxt
        # drop redundant members so the result is an inclusion-minimal generator
        for i in list(reversed(kept)):
            rest = [j for j in kept if j != i]
            if self.close([items[j].x for j in rest]) == target:
                kept = rest
        return kept

    def never_compressed(self):
        return Example(next(iter(self.cls.points())), 0)


class ProductThresholdCodec(_ClosureCodec):
    tag = 3

    def __init__(self, cls: ProductThresholds):
        self.cls = cls
        self.K = cls.d
        self._w = width(cls.m + 1)
        self.bit_len = cls.d * self._w
        self.neutral = (cls.m,) * cls.d

    def close(self, positives):
        a = list(self.neutral)
        for x in positives:
            a = [min(aj, xj - 1) for aj, xj in zip(a, x)]
        return tuple(a)

    def decode(self, e):
        return ProductThreshold(e)

    def merge(self, e1, e2):
        return tuple(min(u, v) for u, v in zip(e1, e2))

    def write(self, w, e):
        for v in e:
            w.write(v, self._w)

    def read(self, r):
        e = tuple(r.read(self._w) for _ in range(self.cls.d))
        if any(v > self.cls.m for v in e):
            raise ValueError("product threshold state out of range")
        return e


class ExplicitCodec(_ClosureCodec):
    """State: the closure row (bitmask), serialized as its table index."""

    tag = 4

    def __init__(self, cls: ExplicitClass):
        if not cls.is_intersection_closed():
            raise TiluError("explicit class is not intersection-closed")
        self.cls = cls
        self.K = cls.vc_dimension()
        self.bit_len = width(len(cls.rows))
        self.neutral = closure_rows(cls, 0)

    def close(self, positives):
        mask = 0
        for x in positives:
            mask |= 1 << (x - 1)
        return closure_rows(self.cls, mask)

    def decode(self, e):
        return self.cls.hypothesis_for_row(e)

    def merge(self, e1, e2):
        out = closure_rows(self.cls, e1 | e2)
        if out is None:
            raise UnrealizableError("no row covers both closures")
        return out

    def write(self, w, e):
        w.write(self.cls.rows.index(e), self.bit_len)

    def read(self, r):
        i = r.read(self.bit_len)
        if i >= len(self.cls.rows):
            raise ValueError("row index out of range")
        return self.cls.rows[i]


def codec_for(cls: ConceptClass) -> Codec:
    if isinstance(cls, Thresholds):
        return ThresholdCodec(cls)
    if isinstance(cls, Parities):
        return ParityCodec(cls)
    if isinstance(cls, ProductThresholds):
        return ProductThresholdCodec(cls)
    if isinstance(cls, ExplicitClass):
        return ExplicitCodec(cls)
    if isinstance(cls, PointFunctions):
        raise TiluError("point functions admit no small mergeable encoding")
    raise TiluError(f"no codec for {cls!r}")


# thin functional wrappers over the codecs


def encode(cls: ConceptClass, S: Dataset | Iterable[Example]):
    return codec_for(cls).encode(S)


def decode(cls: ConceptClass, e):
    return codec_for(cls).decode(e)


def merge(cls: ConceptClass, e1, e2):
    return codec_for(cls).merge(e1, e2)


def compress(cls: ConceptClass, S: Dataset) -> Dataset:
    items = list(S)
    return Dataset(cls, tuple(items[i] for i in codec_for(cls).compress(items)))


def state_to_bytes(cls: ConceptClass, e) -> bytes:
    """Class tag byte followed by the bit-packed state."""
    codec = codec_for(cls)
    return bytes([codec.tag]) + codec.to_bits(e).to_bytes()


def state_from_bytes(cls: ConceptClass, data: bytes):
    codec = codec_for(cls)
    if not data or data[0] != codec.tag:
        raise ValueError("class tag mismatch")
    return codec.from_bits(Bits.from_bytes(data[1:], codec.bit_len))
