"""Central schemes: all state lives in aux and tickets are empty."""
from __future__ import annotations

from .base import Scheme
from .bits import BitReader, BitWriter, Bits, width
from .domain import (AugmentedPointFunctions, Point, PointFunctions, PointOrZero, Threshold,
                     Thresholds, canonical_erm)
from .errors import ClassMismatchError, TiluError
from .search import consistent_range, padded_bits, path_to, search_path


def _no_tickets(deletions):
    for d in deletions:
        if d.ticket.length:
            raise TiluError("central schemes issue empty tickets")


class CentralThresholdScheme(Scheme):
    """Binary search over thresholds, keeping the loss of every visited point.

    aux: final search point in d bits, then err_0..err_i, each in
    ceil(log2(n+1)) bits. The path length follows from the final point.
    """

    id = "central:thresholds"
    class_type = Thresholds

    def __init__(self, cls):
        super().__init__(cls)
        self.d = padded_bits(cls.size)
        self.top = (1 << self.d) - 2

    def output(self, a: int) -> Threshold:
        return Threshold(min(a, self.cls.size))

    def _learn(self, data):
        p, q = consistent_range(self.top, data)
        path = search_path(self.d, p, q)
        aux = BitWriter().write(path[-1], self.d)
        for a in path:
            aux.write(sum(int(x > a) != y for x, y in data), width(len(data) + 1))
        return self.output(path[-1]), aux.getvalue(), [Bits()] * len(data)

    def _unlearn(self, aux, deletions, n):
        _no_tickets(deletions)
        r = BitReader(aux)
        path = path_to(self.d, r.read(self.d))
        errs = [r.read(width(n + 1)) for _ in path]
        r.expect_end()
        for a, err in zip(path, errs):
            if err == sum(int(x > a) != y for (x, y) in (d.example for d in deletions)):
                return self.output(a)
        raise TiluError("no visited threshold is consistent with the survivors")


class AugmentedPointScheme(Scheme):
    """Point functions plus zero; aux = (hypothesis, copies of its 1-label)."""

    id = "central:augpoint"
    class_type = AugmentedPointFunctions

    def _learn(self, data):
        h = canonical_erm(self.cls, data)
        copies = sum(1 for x, y in data if y)
        aux = BitWriter()
        self.cls.write_hypothesis(aux, h)
        aux.write(copies, width(len(data) + 1))
        return h, aux.getvalue(), [Bits()] * len(data)

    def _unlearn(self, aux, deletions, n):
        _no_tickets(deletions)
        r = BitReader(aux)
        h = self.cls.read_hypothesis(r)
        copies = r.read(width(n + 1))
        r.expect_end()
        gone = sum(1 for d in deletions if d.example == (h.a, 1))
        if h.a is None or gone == copies:
            return PointOrZero(None)
        return h


class NoRepetitionPointScheme(Scheme):
    """Point functions on datasets without repeated examples.

    aux = (a, b, has_one): the learned point a, the smallest b with (b,0)
    absent, and whether a 1-label exists.
    """

    id = "central:noreppoint"
    class_type = PointFunctions

    def __init__(self, cls):
        if isinstance(cls, AugmentedPointFunctions):
            raise ClassMismatchError("central:noreppoint works on plain point functions")
        super().__init__(cls)
        self.w = width(cls.size)

    def _learn(self, data):
        if len(set(data)) != len(data):
            raise TiluError("dataset repeats an example")
        h = canonical_erm(self.cls, data)
        zeros = {x for x, y in data if not y}
        b = next(v for v in self.cls.points() if v not in zeros)
        has_one = any(y for _, y in data)
        aux = BitWriter().write(h.a - 1, self.w).write(b - 1, self.w).write(int(has_one), 1)
        return h, aux.getvalue(), [Bits()] * len(data)

    def _unlearn(self, aux, deletions, n):
        _no_tickets(deletions)
        r = BitReader(aux)
        a, b, has_one = r.read(self.w) + 1, r.read(self.w) + 1, r.read(1)
        r.expect_end()
        if a > self.cls.size or b > self.cls.size:
            raise ValueError("aux value out of range")
        gone = {d.example for d in deletions}
        if not gone or (has_one and (a, 1) not in gone):
            return Point(a)
        c = min((x for x, y in gone if not y), default=b)
        return Point(min(b, c))
