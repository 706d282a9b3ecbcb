"""Aux and ticket size measurements, checked against closed-form bounds."""
from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import astuple, dataclass, fields

from .bits import width
from .oracle import MASK64, default_class, random_dataset
from .scheme_api import base_id, make_scheme
from .search import padded_bits
from .sperner import SYMBOL_BITS
from .tree import padded_depth

DEFAULT_SCHEMES = ("tree:thresholds", "chain:thresholds", "sharp:thresholds", "central:thresholds",
                   "agnostic:thresholds", "ctz")
DEFAULT_NS = tuple(2 ** k for k in range(3, 13))


@dataclass(frozen=True)
class BenchRow:
    scheme: str
    class_params: str
    n: int
    cs_bits: int
    max_ct_bits: int
    wall_time: float


def bounds(scheme, n: int) -> tuple:
    """(aux bound, ticket bound) in bits for a scheme at dataset size n."""
    sid, cls = scheme.id, scheme.cls
    wn = width(n + 1)
    kind = sid.split(":", 1)[0]
    if kind == "tree":
        C, D = scheme.codec.bit_len, padded_depth(n)
        return (2 * C if D else C), D + C * max(D - 1, 0)
    if kind == "chain":
        return cls.hypothesis_width, 2 * scheme.codec.K * cls.example_width + wn
    if sid == "ctz":
        return 1, SYMBOL_BITS
    if sid in ("sharp:minval", "sharp:maxval"):
        return width(cls.size + 1), SYMBOL_BITS + width(cls.size + 1)
    if sid == "sharp:point":
        return 2 * width(cls.size) + 1, SYMBOL_BITS
    if sid == "sharp:prodthresh":
        return cls.d * width(cls.m + 1), cls.d * (SYMBOL_BITS + width(cls.m + 1))
    if sid == "sharp:thresholds":
        d = padded_bits(cls.size)
        return 2 * d, SYMBOL_BITS
    if sid == "central:thresholds":
        d = padded_bits(cls.size)
        return d * (1 + wn), 0
    if sid == "central:augpoint":
        return cls.hypothesis_width + wn, 0
    if sid == "central:noreppoint":
        return 2 * width(cls.size) + 1, 0
    if sid == "agnostic:thresholds":
        k = scheme.k
        return cls.hypothesis_width, k * (width(cls.size + 1) + wn) + 1 + 3 * wn
    if sid == "realizability:thresholds":
        return 1 + 2 * width(cls.size + 1), SYMBOL_BITS + width(cls.size + 1)
    raise KeyError(sid)


def measure(scheme_id: str, cls, n: int, seed: int) -> BenchRow:
    scheme = make_scheme(scheme_id, cls)
    rng = random.Random((seed * 0x9E3779B97F4A7C15 + n) & MASK64)
    data = random_dataset(scheme_id, cls, n, rng)
    start = time.perf_counter()
    out = scheme.learn(data)
    elapsed = time.perf_counter() - start
    return BenchRow(scheme.id, cls.descriptor(), len(data), out.aux_bits, out.max_ticket_bits,
                    round(elapsed, 6))


def violations(row: BenchRow, scheme) -> list[str]:
    cs, ct = bounds(scheme, row.n)
    out = []
    if row.cs_bits > cs:
        out.append(f"{row.scheme} n={row.n}: aux {row.cs_bits} > {cs}")
    if row.max_ct_bits > ct:
        out.append(f"{row.scheme} n={row.n}: ticket {row.max_ct_bits} > {ct}")
    if base_id(row.scheme).startswith("tree:") and row.n and row.n & (row.n - 1) == 0:
        if row.max_ct_bits != ct:
            out.append(f"{row.scheme} n={row.n}: ticket {row.max_ct_bits} != {ct} at a power of two")
    return out


def run_bench(scheme_ids=DEFAULT_SCHEMES, ns=DEFAULT_NS, domain: int = 1000, seed: int = 0):
    """Rows for every (scheme, n), plus the list of bound violations."""
    rows, bad = [], []
    for sid in scheme_ids:
        cls = default_class(sid, domain)
        scheme = make_scheme(sid, cls)
        for n in ns:
            row = measure(sid, cls, n, seed)
            rows.append(row)
            bad += violations(row, scheme)
    return rows, bad


def to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(BenchRow)])
    for r in rows:
        w.writerow(astuple(r))
    return buf.getvalue()
