"""Brute-force verification of learn/unlearn pairs.

Datasets are enumerated as multisets of labeled examples (exhaustive up to a
cap, otherwise a seeded random sample), every deletion subset is unlearned,
and the outcome is compared with an independent reference on the survivors.
"""
from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .base import Deletion, Verdict
from .bits import Bits
from .ctz import CtzAdapter
from .domain import (AugmentedPointFunctions, ConceptClass, Dataset, ExplicitClass, Parities,
                     PointFunctions, ProductThresholds, Threshold, Thresholds, erm_set, is_realizable,
                     parse_class)
from .errors import TiluError
from .scheme_api import base_id, make_scheme
from .sperner import global_family

ANY_LABELS = ("agnostic:thresholds", "realizability:thresholds", "sharp:minval", "sharp:maxval", "ctz")
SUBSET_CAP = 4096
MASK64 = (1 << 64) - 1


def count_multisets(kinds: int, max_n: int) -> int:
    """Number of multisets of size <= max_n over `kinds` distinct elements."""
    return sum(math.comb(kinds + k - 1, k) for k in range(max_n + 1))


def enumerate_datasets(cls: ConceptClass, max_n: int):
    codes = range(cls.n_examples)
    for k in range(max_n + 1):
        for combo in itertools.combinations_with_replacement(codes, k):
            yield Dataset(cls, tuple(cls.example_from_code(c) for c in combo))


def random_multiset(cls: ConceptClass, max_n: int, rng: random.Random) -> Dataset:
    n = rng.randint(0, max_n)
    return Dataset(cls, tuple(cls.example_from_code(rng.randrange(cls.n_examples)) for _ in range(n)))


def random_dataset(scheme_id: str, cls: ConceptClass, n: int, rng: random.Random) -> Dataset:
    """n items valid for the scheme: labeled by a random member of the class,
    with arbitrary labels for schemes that accept any data and with distinct
    points where repetition is not allowed."""
    sid = base_id(scheme_id)
    if sid == "central:noreppoint":
        n = min(n, cls.n_points)
        xs = [cls.point_from_code(c) for c in rng.sample(range(cls.n_points), n)]
    else:
        xs = [cls.point_from_code(rng.randrange(cls.n_points)) for _ in range(n)]
    if sid in ANY_LABELS:
        return Dataset(cls, tuple((x, rng.randint(0, 1)) for x in xs))
    h = cls.hypothesis_from_code(rng.randrange(cls.n_hypotheses))
    return Dataset(cls, tuple((x, h(x)) for x in xs))


def default_class(scheme_id: str, domain: int) -> ConceptClass:
    """The class an id runs on when only a domain size is given."""
    sid = base_id(scheme_id)
    kind = sid.split(":", 1)[-1]
    if kind in ("thresholds", "minval", "maxval") or sid == "ctz":
        return Thresholds(domain)
    if kind == "prodthresh":
        return ProductThresholds(2, domain)
    if kind == "parities":
        return Parities(domain)
    if kind in ("point", "noreppoint"):
        return PointFunctions(domain)
    if kind == "augpoint":
        return AugmentedPointFunctions(domain)
    if kind == "explicit":
        # all prefixes of {1..domain}: intersection-closed, VC dimension 1
        return ExplicitClass.from_strings(["1" * i + "0" * (domain - i) for i in range(domain + 1)])
    raise TiluError(f"no default class for {scheme_id!r}")


# ------------------------------------------------------------- references


def minimal_erm_bruteforce(size: int, items) -> int:
    """Smallest-loss threshold parameter, smallest a on ties, by direct loss sums."""
    best = None
    for a in range(size + 1):
        value = sum(int(x > a) != y for x, y in items)
        if best is None or value < best[0]:
            best = (value, a)
    return best[1]


class Reference:
    """Expected unlearning output for a survivor dataset, computed independently."""

    def __init__(self, scheme):
        self.scheme = scheme
        self.sid = scheme.id
        self.retrain = lru_cache(maxsize=1 << 16)(self._retrain)

    def _retrain(self, items: tuple):
        return self.scheme.learn(Dataset(self.scheme.cls, items)).result

    def expected(self, survivors: Dataset):
        cls, sid = survivors.cls, self.sid
        if sid == "agnostic:thresholds":
            return Threshold(minimal_erm_bruteforce(cls.size, survivors))
        if sid == "realizability:thresholds":
            return Verdict.BOTTOM if is_realizable(cls, survivors) else Verdict.TOP
        if sid == "sharp:minval":
            return min((x for x, _ in survivors), default=None)
        if sid == "sharp:maxval":
            return max((x for x, _ in survivors), default=None)
        if sid == "ctz":
            return Verdict.TOP if len(survivors) else Verdict.BOTTOM
        return self.retrain(tuple(sorted(survivors.items, key=cls.example_code)))

    def also_minimizes(self, survivors: Dataset, got) -> bool:
        """Second route for hypothesis outputs: got must be an exact ERM."""
        if self.sid in ANY_LABELS:
            return True
        return got in erm_set(survivors.cls, survivors)


# ------------------------------------------------------------------ report


@dataclass
class OracleReport:
    scheme: str
    cls: str
    mode: str
    datasets: int = 0
    skipped: int = 0
    cases: int = 0
    mismatches: list = field(default_factory=list)
    flagged: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def merge(self, other: "OracleReport"):
        self.datasets += other.datasets
        self.skipped += other.skipped
        self.cases += other.cases
        self.mismatches += other.mismatches
        self.flagged += other.flagged

    def summary(self) -> str:
        s = (f"{self.scheme} on {self.cls} [{self.mode}]: {self.datasets} datasets, "
             f"{self.skipped} outside the regime, {self.cases} deletion cases, "
             f"{len(self.mismatches)} mismatches")
        if self.flagged:
            s += f", {self.flagged} corrupted cases flagged"
        return s


def flip_low_bit(t: Bits) -> Bits:
    if not t.length:
        return Bits(1, 1)
    return Bits(t.value ^ 1, t.length)


def deletion_subsets(n: int, rng: random.Random):
    if 1 << n <= SUBSET_CAP:
        for k in range(n + 1):
            yield from itertools.combinations(range(n), k)
        return
    yield ()
    yield tuple(range(n))
    for _ in range(SUBSET_CAP - 2):
        yield tuple(i for i in range(n) if rng.random() < 0.5)


def check_dataset(scheme, ref: Reference, data: Dataset, report: OracleReport,
                  seed=None, corrupt=False):
    try:
        out = scheme.learn(data)
    except TiluError:
        report.skipped += 1
        return
    report.datasets += 1
    rng = random.Random(seed if seed is not None else len(data))
    for subset in deletion_subsets(len(data), rng):
        report.cases += 1
        survivors = data.without(subset)
        req = out.request(data, subset)
        if corrupt:
            if not req:
                continue
            req[0] = Deletion(req[0].index, req[0].example, flip_low_bit(req[0].ticket))
        expected = ref.expected(survivors)
        try:
            got = scheme.unlearn(out.aux, req, len(data))
            fine = got == expected and ref.also_minimizes(survivors, got)
        except TiluError as e:
            got, fine = f"error: {e}", False
        if fine:
            continue
        if corrupt:
            report.flagged += 1
        else:
            report.mismatches.append({"items": [list(z) for z in data.items], "deleted": list(subset),
                                      "got": str(got), "expected": str(expected), "seed": seed})


def _shard(scheme_id, descriptor, max_n, cap, samples, seed, corrupt, shard, workers) -> OracleReport:
    cls = parse_class(descriptor)
    scheme = make_scheme(scheme_id, cls)
    ref = Reference(scheme)
    total = count_multisets(cls.n_examples, max_n)
    mode = "exhaustive" if total <= cap else "random"
    report = OracleReport(scheme.id, descriptor, mode)
    if mode == "exhaustive":
        for i, data in enumerate(enumerate_datasets(cls, max_n)):
            if i % workers == shard:
                check_dataset(scheme, ref, data, report, corrupt=corrupt)
    else:
        for i in range(shard, samples, workers):
            case_seed = (seed * 0x9E3779B97F4A7C15 + i) & MASK64
            data = random_multiset(cls, max_n, random.Random(case_seed))
            check_dataset(scheme, ref, data, report, seed=case_seed, corrupt=corrupt)
    return report


def oracle_check(scheme_id: str, cls: ConceptClass, max_n: int, cap: int = 10 ** 6,
                 samples: int = 2000, seed: int = 0, workers: int = 1,
                 corrupt: bool = False) -> OracleReport:
    """Compare unlearning with the reference on every dataset and deletion subset."""
    args = (scheme_id, cls.descriptor(), max_n, cap, samples, seed, corrupt)
    if workers <= 1:
        return _shard(*args, 0, 1)
    with ProcessPoolExecutor(workers) as pool:
        parts = list(pool.map(_shard, *zip(*[args + (k, workers) for k in range(workers)])))
    report = parts[0]
    for p in parts[1:]:
        report.merge(p)
    return report


def enumeration_matches_count(cls: ConceptClass, max_n: int) -> bool:
    seen = Counter(len(d) for d in enumerate_datasets(cls, max_n))
    return (sum(seen.values()) == count_multisets(cls.n_examples, max_n)
            and all(seen[k] == math.comb(cls.n_examples + k - 1, k) for k in range(max_n + 1)))


# -------------------------------------------------------- count-to-zero


def ctz_containment_failures(max_m: int) -> list:
    """(k, m) pairs violating: Q_k is not inside Q_m for k < m."""
    bad = []
    counts = [None] + [global_family(m).as_counter() for m in range(1, max_m + 1)]
    for m in range(1, max_m + 1):
        if sum(counts[m].values()) != m:
            bad.append((m, m))
        for k in range(1, m):
            if not counts[k] - counts[m]:
                bad.append((k, m))
    return bad


def adapter_failures(scheme_id: str, cls: ConceptClass, max_m: int, seed: int = 0,
                     tries: int = 3) -> list:
    """Run CtZ through a hypothesis scheme; returns failing (m, deleted indices)."""
    adapter = CtzAdapter(make_scheme(scheme_id, cls))
    rng = random.Random(seed)
    bad = []
    for m in range(1, max_m + 1):
        out = adapter.learn(m)
        if out.result is not Verdict.TOP:
            bad.append((m, None))
        for k in range(0, m + 1):
            picks = {tuple(range(k)), tuple(range(m - k, m))}
            picks |= {tuple(sorted(rng.sample(range(m), k))) for _ in range(tries)}
            want = Verdict.TOP if k < m else Verdict.BOTTOM
            for idx in picks:
                if adapter.unlearn(out, idx) is not want:
                    bad.append((m, idx))
    return bad


# --------------------------------------------------- permutation invariance


def paired(cls, data, tickets) -> list:
    return sorted((cls.example_code(z), t.length, t.value) for z, t in zip(data, tickets))


def permutation_failures(scheme_id: str, cls: ConceptClass, trials: int, max_n: int,
                         seed: int = 0) -> list:
    """Seeds of random datasets whose learn output changes under permutation or reruns."""
    scheme = make_scheme(scheme_id, cls)
    bad = []
    for t in range(trials):
        case_seed = (seed * 0x9E3779B97F4A7C15 + t) & MASK64
        rng = random.Random(case_seed)
        data = random_dataset(scheme_id, cls, rng.randint(0, max_n), rng)
        perm = list(range(len(data)))
        rng.shuffle(perm)
        shuffled = data.subset(perm)
        a, b, again = scheme.learn(data), scheme.learn(shuffled), scheme.learn(data)
        # equal examples may trade tickets; each example keeps the same multiset
        same = (a.result == b.result == again.result and a.aux == b.aux == again.aux
                and a.tickets == again.tickets
                and paired(cls, data, a.tickets) == paired(cls, shuffled, b.tickets))
        if not same:
            bad.append(case_seed)
    return bad
