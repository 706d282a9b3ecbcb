import pytest

from tilu.base import Deletion
from tilu.bits import Bits, BitReader, width
from tilu.central import AugmentedPointScheme, CentralThresholdScheme, NoRepetitionPointScheme
from tilu.domain import (AugmentedPointFunctions, Dataset, Point, PointFunctions, PointOrZero,
                         Threshold, Thresholds)
from tilu.errors import TiluError, UnrealizableError
from tilu.oracle import OracleReport, Reference, check_dataset, enumerate_datasets

T6 = Thresholds(6)


def errs(scheme, out, n):
    r = BitReader(out.aux)
    r.read(scheme.d)
    return [r.read(width(n + 1)) for _ in range(r.remaining // width(n + 1))]


def test_central_threshold_examples():
    scheme = CentralThresholdScheme(T6)
    S = Dataset(T6, ((4, 0), (5, 1)))
    out = scheme.learn(S)
    assert out.result == Threshold(4)
    assert errs(scheme, out, 2) == [1, 1, 0]
    assert scheme.unlearn(out.aux, out.request(S, [0]), 2) == Threshold(3)
    assert scheme.unlearn(out.aux, [], 2) == Threshold(4)
    assert scheme.unlearn(out.aux, out.request(S, [0, 1]), 2) == Threshold(3)
    S = Dataset(T6, ((2, 0), (5, 1)))
    out = scheme.learn(S)
    assert out.result == Threshold(3) and errs(scheme, out, 2) == [0]
    assert scheme.learn(Dataset(T6, ())).result == Threshold(3)
    with pytest.raises(UnrealizableError):
        scheme.learn(Dataset(T6, ((4, 1), (5, 0))))


def test_central_threshold_aux_bound():
    # with the domain padded to 2^d - 2 (d >= 3), aux <= d * (1 + ceil(log2(n+1)))
    for size in range(3, 31):
        T = Thresholds(size)
        scheme = CentralThresholdScheme(T)
        for n in (1, 3, 8):
            for a in range(size + 1):
                S = Dataset(T, tuple((x, int(x > a)) for x in range(1, size + 1))[:n])
                out = scheme.learn(S)
                assert out.aux_bits <= scheme.d * (1 + width(len(S) + 1))
                assert out.max_ticket_bits == 0


def test_central_threshold_rejects_tickets():
    scheme = CentralThresholdScheme(T6)
    S = Dataset(T6, ((4, 0),))
    out = scheme.learn(S)
    with pytest.raises(TiluError):
        scheme.unlearn(out.aux, [Deletion(0, S[0], Bits(1, 1))], 1)


def test_augpoint_examples():
    A = AugmentedPointFunctions(5)
    scheme = AugmentedPointScheme(A)
    S = Dataset(A, ((2, 1), (2, 1), (5, 0)))
    out = scheme.learn(S)
    assert out.result == PointOrZero(2)
    assert scheme.unlearn(out.aux, out.request(S, [0, 1]), 3) == PointOrZero(None)
    assert scheme.unlearn(out.aux, out.request(S, [0]), 3) == PointOrZero(2)
    assert scheme.learn(Dataset(A, ((3, 0),))).result == PointOrZero(None)
    with pytest.raises(UnrealizableError):
        scheme.learn(Dataset(A, ((1, 1), (3, 1))))


def test_noreppoint_examples():
    P5 = PointFunctions(5)
    scheme = NoRepetitionPointScheme(P5)
    S = Dataset(P5, ((1, 0), (2, 0), (4, 1)))
    out = scheme.learn(S)
    assert out.result == Point(4)
    r = BitReader(out.aux)
    assert (r.read(scheme.w) + 1, r.read(scheme.w) + 1) == (4, 3)
    assert scheme.unlearn(out.aux, out.request(S, [0]), 3) == Point(4)
    assert scheme.unlearn(out.aux, out.request(S, [2]), 3) == Point(3)
    assert scheme.unlearn(out.aux, out.request(S, [0, 2]), 3) == Point(1)
    with pytest.raises(TiluError):
        scheme.learn(Dataset(P5, ((1, 0), (1, 0))))


def test_noreppoint_needs_the_one_label_flag():
    # same (a, b) pair, different right answers: the flag tells them apart
    P3 = PointFunctions(3)
    scheme = NoRepetitionPointScheme(P3)
    with_one = Dataset(P3, ((1, 1),))
    without = Dataset(P3, ((2, 0), (3, 0)))
    a1, a2 = scheme.learn(with_one), scheme.learn(without)
    assert a1.result == a2.result == Point(1)
    assert scheme.unlearn(a1.aux, a1.request(with_one, [0]), 1) == Point(1)
    assert scheme.unlearn(a2.aux, a2.request(without, [1]), 2) == Point(1)
    assert scheme.unlearn(a2.aux, a2.request(without, [0]), 2) == Point(1)
    # and the case where the flag matters: (1,0) absent, no 1-label, deleting a 0
    P4 = PointFunctions(4)
    scheme = NoRepetitionPointScheme(P4)
    S = Dataset(P4, ((2, 0), (3, 0)))
    out = scheme.learn(S)
    assert scheme.unlearn(out.aux, out.request(S, [0]), 2) == Point(1)


@pytest.mark.parametrize("scheme_cls,cls,unique", [
    (CentralThresholdScheme, Thresholds(6), False),
    (AugmentedPointScheme, AugmentedPointFunctions(5), False),
    (NoRepetitionPointScheme, PointFunctions(6), True),
], ids=["thresholds", "augpoint", "noreppoint"])
def test_exhaustive_equivalence(scheme_cls, cls, unique):
    scheme = scheme_cls(cls)
    ref = Reference(scheme)
    report = OracleReport(scheme.id, cls.descriptor(), "exhaustive")
    for S in enumerate_datasets(cls, 5):
        if unique and len(set(S)) != len(S):
            continue
        check_dataset(scheme, ref, S, report)
    assert report.datasets > 0 and report.mismatches == []


def test_noreppoint_flag_separates_equal_pairs():
    P3 = PointFunctions(3)
    scheme = NoRepetitionPointScheme(P3)
    answers = []
    for S in (Dataset(P3, ((1, 0), (2, 1))), Dataset(P3, ((1, 0), (3, 0)))):
        out = scheme.learn(S)
        assert out.aux.value & 0b1111 == 0b0101  # a-1 = b-1 = 1, flag above
        answers.append(scheme.unlearn(out.aux, out.request(S, [0]), 2))
    assert answers == [Point(2), Point(1)]
