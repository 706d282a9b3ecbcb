"""Acceptance criteria 1-9, each recorded for the terminal summary."""
import itertools
import math

from tilu.base import Verdict
from tilu.bench import bounds, measure, run_bench
from tilu.bits import width
from tilu.domain import Dataset, Parities, ProductThresholds, Thresholds
from tilu.oracle import (Reference, adapter_failures, ctz_containment_failures, default_class,
                         enumerate_datasets, oracle_check, permutation_failures)
from tilu.scheme_api import SCHEME_IDS, make_scheme
from tilu.sperner import (ack, alphabet_used, family_segment, global_family, inv_ack,
                          segment_range, verify_sperner)

EXACT_IDS = ("tree:thresholds", "tree:prodthresh(d=2,m=3)", "tree:parities(d=2)", "chain:thresholds",
             "chain:parities(d=2)", "chain:prodthresh(d=2,m=3)", "central:thresholds",
             "central:augpoint", "central:noreppoint", "sharp:point", "sharp:prodthresh(d=2,m=3)",
             "sharp:thresholds")


def grid(sid):
    if "prodthresh" in sid:
        return [ProductThresholds(2, 3)]
    if "parities" in sid:
        return [Parities(2)]
    return [default_class(sid, size) for size in range(1, 7)]


def test_criterion_1_exact_unlearning(acceptance):
    bad = {}
    for sid in EXACT_IDS:
        mismatches = datasets = 0
        for cls in grid(sid):
            r = oracle_check(sid, cls, 4)
            assert r.mode == "exhaustive"
            mismatches += len(r.mismatches)
            datasets += r.datasets
        if mismatches or not datasets:
            bad[sid] = mismatches
    acceptance(1, not bad, f"{len(EXACT_IDS)} schemes, 0 mismatches expected, got {bad or 0}")
    assert not bad


def test_criterion_2_agnostic(acceptance):
    r = oracle_check("agnostic:thresholds", Thresholds(8), 4)
    ok = r.ok and r.mode == "exhaustive" and r.skipped == 0 and r.datasets == 4845
    acceptance(2, ok, r.summary())
    assert ok, r.mismatches[:5]


def test_criterion_3_realizability(acceptance):
    r = oracle_check("realizability:thresholds", Thresholds(8), 4)
    scheme = make_scheme("realizability:thresholds", Thresholds(8))
    broken = checked = 0
    for data in enumerate_datasets(Thresholds(8), 4):
        out = scheme.learn(data)
        if out.result is not Verdict.BOTTOM:
            continue
        for k in range(len(data) + 1):
            for subset in itertools.combinations(range(len(data)), k):
                checked += 1
                if scheme.unlearn(out.aux, out.request(data, subset), len(data)) is not Verdict.BOTTOM:
                    broken += 1
    ok = r.ok and r.skipped == 0 and broken == 0 and checked > 0
    acceptance(3, ok, f"{r.summary()}; monotonicity {checked} cases, {broken} broken")
    assert ok


def test_criterion_4_minval_maxval(acceptance):
    reports = [oracle_check(sid, Thresholds(5), 5) for sid in ("sharp:minval", "sharp:maxval")]
    # the empty survivor set must come back as NONE
    ref = Reference(make_scheme("sharp:minval", Thresholds(5)))
    ok = all(r.ok and r.mode == "exhaustive" for r in reports)
    ok &= ref.expected(Dataset(Thresholds(5), ())) is None
    acceptance(4, ok, "; ".join(r.summary() for r in reports))
    assert ok


def test_criterion_5_count_to_zero(acceptance):
    containment = ctz_containment_failures(300)
    scheme = make_scheme("ctz", Thresholds(3))
    direct = []
    for m in range(1, 301):
        data = Dataset(Thresholds(3), tuple((1 + i % 3, i % 2) for i in range(m)))
        out = scheme.learn(data)
        if scheme.unlearn(out.aux, out.request(data, range(m)), m) is not Verdict.BOTTOM:
            direct.append((m, "all"))
        for k in {1, m // 2, m - 1} - {0}:
            if k < m and scheme.unlearn(out.aux, out.request(data, range(m - k, m)), m) is not Verdict.TOP:
                direct.append((m, k))
    adapter = adapter_failures("sharp:thresholds", Thresholds(6), 64)
    ok = not containment and not direct and not adapter
    acceptance(5, ok, f"containment failures {len(containment)}, full-deletion/partial failures "
                      f"{len(direct)}, adapter failures (m<=64) {len(adapter)}")
    assert ok


def test_criterion_6_sperner(acceptance):
    sizes = all(global_family(m).size == m for m in range(1, 10 ** 4 + 1))
    pairwise = verify_sperner([global_family(m) for m in range(1, 301)])
    segments = {}
    for r, t in ((1, 1), (1, 2), (1, 4), (1, 8), (2, 2), (2, 3), (3, 2)):
        lo, hi = segment_range(r, t)
        fam = [family_segment(r, t, m) for m in range(lo, hi + 1)]
        segments[(r, t)] = (verify_sperner(fam)
                            and all(q.size == m for m, q in zip(range(lo, hi + 1), fam)))
    alphabet = alphabet_used(10 ** 4)
    ok = sizes and pairwise and all(segments.values()) and alphabet <= 48
    acceptance(6, ok, f"sizes {sizes}, pairwise {pairwise}, segments "
                      f"{sum(segments.values())}/{len(segments)}, alphabet {alphabet} <= 48")
    assert ok, segments


def test_criterion_7_ackermann(acceptance):
    first = all(ack(1, t) == 2 * t for t in range(1, 21))
    second = all(ack(2, t) == 2 ** t for t in range(1, 21))
    third = ack(3, 4) == 65536
    want = {2: 1, 3: 2, 4: 2, **{n: 3 for n in range(5, 17)}}
    small = all(inv_ack(n) == v for n, v in want.items())
    large = all(inv_ack(n) == 4 for n in range(17, 10 ** 6 + 1))
    ok = first and second and third and small and large
    acceptance(7, ok, f"A_1 {first}, A_2 {second}, A_3(4)=65536 {third}, inv_ack 2..16 {small}, "
                      f"17..10^6 {large}")
    assert ok


def test_criterion_8_bit_formulas(acceptance):
    problems = []
    cls = Thresholds(1000)
    tree = make_scheme("tree:thresholds", cls)
    C = tree.codec.bit_len
    for d in range(1, 7):
        row = measure("tree:thresholds", cls, 2 ** d, seed=d)
        if row.max_ct_bits != d + C * (d - 1):
            problems.append(f"tree n={2 ** d}: {row.max_ct_bits} != {d + C * (d - 1)}")
    for cls in (Thresholds(6), Thresholds(1000), Parities(3), ProductThresholds(2, 3)):
        sid = f"chain:{cls.kind}"
        K = make_scheme(sid, cls).codec.K
        z = math.ceil(math.log2(cls.n_examples))
        for n in (1, 2, 5, 16, 64, 200):
            row = measure(sid, cls, n, seed=n)
            if row.max_ct_bits > 2 * K * z + width(n + 1):
                problems.append(f"{sid} n={n}: {row.max_ct_bits}")
    ctz = make_scheme("ctz", Thresholds(3))
    for m in range(1, 301):
        data = Dataset(Thresholds(3), ((1, 0),) * m)
        if {t.length for t in ctz.learn(data).tickets} != {16}:
            problems.append(f"ctz m={m}")
    # the binary search runs on |X| = 2^d - 2
    for d in range(3, 11):
        size = 2 ** d - 2
        for n in (0, 1, 2, 7, 64, 1000):
            row = measure("central:thresholds", Thresholds(size), n, seed=n)
            if row.cs_bits > math.ceil(math.log2(size)) * (1 + width(n + 1)):
                problems.append(f"central |X|={size} n={n}: {row.cs_bits}")
    rows, violations = run_bench(SCHEME_IDS, ns=(0, 1, 3, 8, 64, 512), domain=100)
    problems += violations
    ok = not problems
    acceptance(8, ok, f"{len(problems)} formula violations over tree/chain/ctz/central and "
                      f"{len(rows)} bench rows")
    assert ok, problems[:10]


def test_criterion_9_determinism(acceptance):
    bad = {}
    for sid in SCHEME_IDS:
        cls = default_class(sid, 3 if "parities" in sid else 8)
        first = permutation_failures(sid, cls, 1000, 10, seed=1)
        second = permutation_failures(sid, cls, 1000, 10, seed=1)
        if first or second:
            bad[sid] = len(first) + len(second)
    strip = lambda rows: [(r.scheme, r.class_params, r.n, r.cs_bits, r.max_ct_bits) for r in rows]
    a, _ = run_bench(SCHEME_IDS, ns=(5, 50), domain=20, seed=3)
    b, _ = run_bench(SCHEME_IDS, ns=(5, 50), domain=20, seed=3)
    ok = not bad and strip(a) == strip(b)
    acceptance(9, ok, f"{len(SCHEME_IDS)} schemes x 1000 datasets, permutation failures {bad or 0}, "
                      f"repeated bench identical {strip(a) == strip(b)}")
    assert ok


def test_bounds_are_what_the_bench_checks():
    # bench bounds at the acceptance sizes are the formulas asserted above
    cls = Thresholds(1000)
    tree = make_scheme("tree:thresholds", cls)
    assert bounds(tree, 8)[1] == 3 + tree.codec.bit_len * 2
    assert bounds(make_scheme("ctz", cls), 5) == (1, 16)
