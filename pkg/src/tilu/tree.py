"""Merkle-style tree scheme for any mergeable class.

Items are placed on the leaves of a complete binary tree (in canonical
example order, padded to a power of two with neutral leaves). Every node
holds the encoding of the items below it.

Layout on the wire (depth D = log2 of the padded leaf count, C = codec.bit_len):

* aux: the encodings of the root's two children (just the root when D = 0);
  the hypothesis is decode(merge(aux)).
* ticket: leaf position in D bits, then the sibling encodings at depths
  2..D, root side first.

So a ticket at n = 2^D is exactly D + C(D-1) bits. Sibling encodings at
depth 1 are never needed in tickets because the aux already holds both.
"""
from __future__ import annotations

from .base import Deletion, Scheme
from .bits import BitReader, BitWriter, Bits
from .domain import Dataset, ExplicitClass, Parities, ProductThresholds, Thresholds
from .errors import TicketError
from .mergeable import codec_for


def padded_depth(n: int) -> int:
    return (n - 1).bit_length() if n > 1 else 0


class TreeScheme(Scheme):
    class_type = (Thresholds, ProductThresholds, Parities, ExplicitClass)

    def __init__(self, cls):
        super().__init__(cls)
        self.codec = codec_for(cls)
        self.id = f"tree:{cls.kind}"

    def build(self, data: Dataset):
        """Return (order, levels): levels[l][i] is the encoding of node i at depth l."""
        codec = self.codec
        codec.encode(data)  # rejects unrealizable input up front
        order = data.canonical_order()
        depth = padded_depth(len(data))
        leaves = [codec.encode([data[i]]) for i in order]
        leaves += [codec.neutral] * ((1 << depth) - len(leaves))
        levels = [leaves]
        while len(levels[0]) > 1:
            below = levels[0]
            levels.insert(0, [codec.merge(below[2 * i], below[2 * i + 1])
                              for i in range(len(below) // 2)])
        return order, levels

    def _learn(self, data):
        codec = self.codec
        order, levels = self.build(data)
        depth = len(levels) - 1
        w = BitWriter()
        for e in levels[min(depth, 1)]:
            codec.write(w, e)
        aux = w.getvalue()
        tickets = [None] * len(data)
        for leaf, i in enumerate(order):
            t = BitWriter().write(leaf, depth)
            for level in range(2, depth + 1):
                node = leaf >> (depth - level)
                codec.write(t, levels[level][node ^ 1])
            tickets[i] = t.getvalue()
        return codec.decode(levels[0][0]), aux, tickets

    def _read_aux(self, aux: Bits, depth: int) -> dict:
        r = BitReader(aux)
        if depth == 0:
            known = {(0, 0): self.codec.read(r)}
        else:
            known = {(1, 0): self.codec.read(r), (1, 1): self.codec.read(r)}
        r.expect_end()
        return known

    def read_ticket(self, ticket: Bits, depth: int):
        r = BitReader(ticket)
        leaf = r.read(depth)
        siblings = {}
        for level in range(2, depth + 1):
            node = leaf >> (depth - level)
            siblings[(level, node ^ 1)] = self.codec.read(r)
        r.expect_end()
        return leaf, siblings

    def _unlearn(self, aux, deletions: list[Deletion], n):
        codec = self.codec
        depth = padded_depth(n)
        known = self._read_aux(aux, depth)
        if not deletions:
            return codec.decode(self._fold(known.values()))
        deleted = set()
        for d in deletions:
            leaf, siblings = self.read_ticket(d.ticket, depth)
            if leaf >= n or leaf in deleted:
                raise TicketError(f"ticket names an invalid or repeated leaf {leaf}")
            deleted.add(leaf)
            for node, e in siblings.items():
                if known.setdefault(node, e) != e:
                    raise TicketError(f"tickets disagree on the encoding of node {node}")
        frontier = self.frontier(deleted, depth)
        return codec.decode(self._fold(known[v] for v in frontier))

    @staticmethod
    def frontier(deleted: set, depth: int) -> list:
        """Maximal subtrees with no deleted leaf, left to right, as (level, index)."""
        out = []

        def visit(level, node):
            lo = node << (depth - level)
            hi = (node + 1) << (depth - level)
            if not any(lo <= leaf < hi for leaf in deleted):
                out.append((level, node))
            elif level < depth:
                visit(level + 1, 2 * node)
                visit(level + 1, 2 * node + 1)

        visit(0, 0)
        return out

    def _fold(self, states):
        acc = self.codec.neutral
        for e in states:
            acc = self.codec.merge(acc, e)
        return acc


def tree_learn(cls, data):
    return TreeScheme(cls).learn(data)


def tree_unlearn(cls, deletions, aux, n):
    return TreeScheme(cls).unlearn(aux, deletions, n)
