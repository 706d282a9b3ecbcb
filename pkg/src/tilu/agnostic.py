"""Agnostic 1D thresholds (minimal ERM) and ticketed realizability testing."""
from __future__ import annotations

from collections import defaultdict

from .base import Scheme, Verdict
from .bits import BitReader, BitWriter, width
from .domain import Thresholds, Threshold, threshold_losses
from .errors import TicketError
from .sharp import ValueChain


def _loss(a: int, items) -> int:
    return sum(int(x > a) != y for x, y in items)


class AgnosticThresholdScheme(Scheme):
    """Minimal ERM over thresholds for arbitrary (possibly unrealizable) data.

    The domain is padded to D = 2^k points and a complete binary tree is laid
    over it; node [p,q] stores a_pq, the smallest threshold in [p-1, q]
    minimizing the loss on the items inside [p,q] (capped at |X|), and
    err_pq, the loss of h_{>a_pq} on the whole dataset.

    aux: the hypothesis. Ticket for an item at x, with w_a = ceil(log2(|X|+1))
    and w_n = ceil(log2(n+1)):
      * per level 1..k, root side first: (a, err) of the sibling of the
        path node, w_a + w_n bits;
      * the leaf record for [x,x]: 1 bit (a_xx - (x-1)) and err_xx;
      * the counts of 0- and 1-labels at x.
    The leaf record and counts give the survivor loss of both x-1 and x once
    x has deletions, which the sibling stats alone cannot.
    """

    id = "agnostic:thresholds"
    class_type = Thresholds

    def __init__(self, cls):
        super().__init__(cls)
        self.k = width(cls.size)
        self.D = 1 << self.k

    def span(self, level: int, node: int) -> tuple:
        size = self.D >> level
        return node * size + 1, (node + 1) * size

    def stats(self, data) -> dict:
        """(level, node) -> (a_pq, err_pq) for every node of the tree."""
        D = self.D
        ones, zeros = [0] * (D + 2), [0] * (D + 2)
        for x, y in data:
            (ones if y else zeros)[x] += 1
        total = threshold_losses(D, data)
        out = {}
        for level in range(self.k + 1):
            for node in range(1 << level):
                p, q = self.span(level, node)
                local = sum(zeros[p:q + 1])
                best, best_a = local, p - 1
                for a in range(p, q + 1):
                    local += ones[a] - zeros[a]
                    if local < best:
                        best, best_a = local, a
                # nodes wholly inside the padding store |X| instead of p-1: same
                # labels on the real domain, so values fit in ceil(log2(|X|+1)) bits
                out[(level, node)] = (min(best_a, self.cls.size), total[best_a])
        return out

    def _learn(self, data):
        n = len(data)
        wa, wn = width(self.cls.size + 1), width(n + 1)
        st = self.stats(data)
        h = Threshold(st[(0, 0)][0])
        aux = BitWriter()
        self.cls.write_hypothesis(aux, h)
        counts = defaultdict(lambda: [0, 0])
        for x, y in data:
            counts[x][y] += 1
        by_x = {}
        for x in {x for x, _ in data}:
            w = BitWriter()
            leaf = x - 1
            for level in range(1, self.k + 1):
                a, err = st[(level, (leaf >> (self.k - level)) ^ 1)]
                w.write(a, wa).write(err, wn)
            a, err = st[(self.k, leaf)]
            w.write(a - (x - 1), 1).write(err, wn)
            w.write(counts[x][0], wn).write(counts[x][1], wn)
            by_x[x] = w.getvalue()
        return h, aux.getvalue(), [by_x[x] for x, _ in data]

    def _unlearn(self, aux, deletions, n):
        r = BitReader(aux)
        h = self.cls.read_hypothesis(r)
        r.expect_end()
        if not deletions:
            return h
        wa, wn = width(self.cls.size + 1), width(n + 1)
        known, leaves = {}, {}
        for d in deletions:
            x = d.example.x
            tr = BitReader(d.ticket)
            leaf = x - 1
            for level in range(1, self.k + 1):
                node = (level, (leaf >> (self.k - level)) ^ 1)
                stat = (tr.read(wa), tr.read(wn))
                if stat[0] > self.cls.size:
                    raise ValueError("threshold value out of range")
                if known.setdefault(node, stat) != stat:
                    raise TicketError(f"tickets disagree on node {node}")
            record = (x - 1 + tr.read(1), tr.read(wn), tr.read(wn), tr.read(wn))
            tr.expect_end()
            if leaves.setdefault(x, record) != record:
                raise TicketError(f"tickets disagree on the leaf record of {x}")
        gone = [d.example for d in deletions]
        candidates = []

        def visit(level, node):
            p, q = self.span(level, node)
            if not any(p <= x <= q for x in leaves):
                if (level, node) not in known:
                    raise TicketError(f"no ticket carries node {(level, node)}")
                a, err = known[(level, node)]
                candidates.append((err - _loss(a, gone), a))
            elif level < self.k:
                visit(level + 1, 2 * node)
                visit(level + 1, 2 * node + 1)
            else:
                a, err, c0, c1 = leaves[p]
                below = err if a == p - 1 else err - c1 + c0
                candidates.append((below - _loss(p - 1, gone), p - 1))
                candidates.append((below + c1 - c0 - _loss(p, gone), p))

        visit(0, 0)
        return Threshold(min(candidates)[1])


class RealizabilityScheme(Scheme):
    """Is the dataset consistent with some threshold?

    Realizable (BOTTOM) iff the largest 0-labeled x is below the smallest
    1-labeled x. aux: verdict bit (1 = TOP, unrealizable), then the MaxVal
    state over 0-labels and the MinVal state over 1-labels. 0-labeled items
    carry MaxVal tickets, 1-labeled items MinVal tickets.
    """

    id = "realizability:thresholds"
    class_type = Thresholds

    def __init__(self, cls):
        super().__init__(cls)
        self.low = ValueChain(cls.size, lowest=False)   # over 0-labels
        self.high = ValueChain(cls.size, lowest=True)   # over 1-labels

    @staticmethod
    def verdict(x0, x1) -> Verdict:
        if x0 is None or x1 is None or x0 < x1:
            return Verdict.BOTTOM
        return Verdict.TOP

    def _learn(self, data):
        order = data.canonical_order()
        tickets = [None] * len(data)
        bests = []
        for label, chain in ((0, self.low), (1, self.high)):
            idx = [i for i in order if data[i].y == label]
            best, ts = chain.learn([data[i].x for i in idx])
            bests.append(best)
            for i, t in zip(idx, ts):
                w = BitWriter()
                chain.write_ticket(w, t)
                tickets[i] = w.getvalue()
        v = self.verdict(*bests)
        aux = BitWriter().write(int(v is Verdict.TOP), 1)
        self.low.write_value(aux, bests[0])
        self.high.write_value(aux, bests[1])
        return v, aux.getvalue(), tickets

    def _unlearn(self, aux, deletions, n):
        r = BitReader(aux)
        v = Verdict.TOP if r.read(1) else Verdict.BOTTOM
        x0, x1 = self.low.read_value(r), self.high.read_value(r)
        r.expect_end()
        if not deletions or v is Verdict.BOTTOM:
            return v
        deleted = ([], [])
        for d in deletions:
            chain = self.high if d.example.y else self.low
            tr = BitReader(d.ticket)
            deleted[d.example.y].append((d.example.x, chain.read_ticket(tr)))
            tr.expect_end()
        return self.verdict(self.low.unlearn(x0, deleted[0]), self.high.unlearn(x1, deleted[1]))
