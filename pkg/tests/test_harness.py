import csv
import io
import json
import math

import pytest

from tilu import cli
from tilu.bench import BenchRow, bounds, run_bench, to_csv
from tilu.domain import (AugmentedPointFunctions, Dataset, Parities, PointFunctions,
                         ProductThresholds, Thresholds)
from tilu.oracle import (adapter_failures, count_multisets, ctz_containment_failures,
                         enumerate_datasets, enumeration_matches_count, oracle_check,
                         permutation_failures)
from tilu.scheme_api import SCHEME_IDS, make_scheme


def test_multiset_count():
    assert count_multisets(12, 4) == sum(math.comb(11 + k, k) for k in range(5))
    for cls in (Thresholds(3), Parities(2), ProductThresholds(2, 2)):
        assert enumeration_matches_count(cls, 4)
    assert len(list(enumerate_datasets(Thresholds(2), 2))) == 1 + 4 + 10


def test_oracle_exhaustive_and_negative_control():
    report = oracle_check("tree:thresholds", Thresholds(4), 3)
    assert report.ok and report.mode == "exhaustive" and report.cases > 0
    corrupted = oracle_check("tree:thresholds", Thresholds(4), 3, corrupt=True)
    assert corrupted.flagged > 0


def test_oracle_random_mode_is_seeded():
    a = oracle_check("agnostic:thresholds", Thresholds(8), 6, cap=100, samples=30, seed=5)
    b = oracle_check("agnostic:thresholds", Thresholds(8), 6, cap=100, samples=30, seed=5)
    assert a.mode == "random" and a.ok
    assert (a.datasets, a.cases) == (b.datasets, b.cases)


def test_oracle_workers_agree():
    one = oracle_check("chain:parities", Parities(2), 3)
    two = oracle_check("chain:parities", Parities(2), 3, workers=2)
    assert (one.datasets, one.skipped, one.cases) == (two.datasets, two.skipped, two.cases)


def test_ctz_helpers():
    assert ctz_containment_failures(60) == []
    assert adapter_failures("sharp:thresholds", Thresholds(6), 10) == []


def test_permutation_helper():
    assert permutation_failures("tree:thresholds", Thresholds(6), 30, 6) == []


def test_bench_rows_and_bounds():
    rows, bad = run_bench(SCHEME_IDS, ns=(0, 1, 5, 16), domain=5)
    assert bad == []
    assert len(rows) == 4 * len(SCHEME_IDS)
    text = to_csv(rows)
    header = next(csv.reader(io.StringIO(text)))
    assert header == ["scheme", "class_params", "n", "cs_bits", "max_ct_bits", "wall_time"]
    again, _ = run_bench(SCHEME_IDS, ns=(0, 1, 5, 16), domain=5)
    strip = [(r.scheme, r.class_params, r.n, r.cs_bits, r.max_ct_bits) for r in rows]
    assert strip == [(r.scheme, r.class_params, r.n, r.cs_bits, r.max_ct_bits) for r in again]


def test_bench_shapes():
    rows, bad = run_bench(("tree:thresholds", "chain:thresholds", "sharp:thresholds"),
                          ns=(8, 64, 512, 4096), domain=1000)
    assert bad == []
    ct = {(r.scheme, r.n): r.max_ct_bits for r in rows}
    tree = [ct[("tree:thresholds", n)] for n in (8, 64, 512, 4096)]
    chain = [ct[("chain:thresholds", n)] for n in (8, 64, 512, 4096)]
    sharp = [ct[("sharp:thresholds", n)] for n in (8, 64, 512, 4096)]
    assert tree == [3 + 10 * 2, 6 + 10 * 5, 9 + 10 * 8, 12 + 10 * 11]
    assert chain == [2 * 11 + b for b in (4, 7, 10, 13)]
    assert sharp == [16] * 4


def test_bench_row_violation_detection():
    from tilu.bench import violations
    scheme = make_scheme("ctz", Thresholds(4))
    assert violations(BenchRow("ctz", "", 3, 1, 17, 0.0), scheme)
    assert not violations(BenchRow("ctz", "", 3, 1, 16, 0.0), scheme)
    assert bounds(scheme, 3) == (1, 16)


# ---------------------------------------------------------------------- cli


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_cli_learn_unlearn(tmp_path, capsys):
    data = write(tmp_path, "d.txt", "class=thresholds domain=6\n4 ; 0\n5 ; 1\n")
    out = tmp_path / "o"
    assert cli.main(["learn", data, "--scheme", "sharp:thresholds", "--out", str(out)]) == 0
    assert (out / "hypothesis.txt").read_text().strip() == "h>4"
    assert len(list((out / "tickets").iterdir())) == 2
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["n"] == 2 and manifest["ticket_bits"] == [16, 16]
    assert cli.main(["unlearn", str(out), "--delete", "0"]) == 0
    assert (out / "unlearned.txt").read_text().strip() == "h>3"
    assert cli.main(["unlearn", str(out), "--delete", "0"]) == 1


def test_cli_learn_edge_cases(tmp_path):
    empty = write(tmp_path, "e.txt", "class=thresholds domain=6\n")
    out = tmp_path / "c"
    assert cli.main(["learn", empty, "--scheme", "ctz", "--out", str(out)]) == 0
    assert (out / "hypothesis.txt").read_text().strip() == "⊥"
    assert list((out / "tickets").iterdir()) == []
    assert cli.main(["unlearn", str(out)]) == 0
    assert (out / "unlearned.txt").read_text().strip() == "⊥"
    bad = write(tmp_path, "u.txt", "class=thresholds domain=6\n5 ; 0\n4 ; 1\n")
    assert cli.main(["learn", bad, "--scheme", "tree:thresholds", "--out", str(tmp_path / "u")]) == 1
    junk = write(tmp_path, "j.txt", "nothing here\n")
    assert cli.main(["learn", junk, "--scheme", "ctz", "--out", str(tmp_path / "j")]) == 2
    assert cli.main(["learn", empty, "--scheme", "nope", "--out", str(tmp_path / "n")]) == 2
    assert cli.main([]) == 2


def test_cli_unlearn_errors(tmp_path):
    data = write(tmp_path, "d.txt", "class=thresholds domain=6\n4 ; 0\n5 ; 1\n")
    out = tmp_path / "o"
    cli.main(["learn", data, "--scheme", "ctz", "--out", str(out)])
    assert cli.main(["unlearn", str(out), "--delete", "5"]) == 2
    (out / "tickets" / "ticket_00001.bin").unlink()
    assert cli.main(["unlearn", str(out), "--delete", "0,1"]) == 1
    assert cli.main(["unlearn", str(tmp_path / "missing")]) == 2
    assert cli.main(["unlearn", str(out), "--delete", "x"]) == 2


def test_cli_full_ctz_request(tmp_path, capsys):
    data = write(tmp_path, "d.txt", "class=thresholds domain=6\n4 ; 0\n5 ; 1\n4 ; 0\n")
    out = tmp_path / "o"
    cli.main(["learn", data, "--scheme", "ctz", "--out", str(out)])
    assert cli.main(["unlearn", str(out), "--delete", "0,1,2"]) == 0
    assert capsys.readouterr().out.strip().endswith("⊥")


def test_cli_oracle(tmp_path):
    report = tmp_path / "r.json"
    assert cli.main(["oracle-check", "--scheme", "tree:thresholds", "--domain", "4", "--max-n", "3",
                     "--out", str(report)]) == 0
    assert json.loads(report.read_text())["mismatches"] == []
    assert cli.main(["oracle-check", "--scheme", "tree:thresholds", "--domain", "4", "--max-n", "2",
                     "--corrupt"]) == 0
    assert cli.main(["oracle-check", "--scheme", "sharp:point", "--class", "class=points domain=3",
                     "--max-n", "3"]) == 0
    assert cli.main(["oracle-check", "--scheme", "nope"]) == 1


def test_cli_sperner(tmp_path):
    out = tmp_path / "s.csv"
    assert cli.main(["sperner-verify", "--max-m", "60", "--segments", "1,2", "2,2",
                     "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "m,size,alphabet_used" and lines[1].startswith("1,1,")
    assert len(lines) == 61
    assert cli.main(["sperner-verify", "--max-m", "30", "--segments", "--inject-duplicate"]) == 1
    assert cli.main(["sperner-verify", "--max-m", "3", "--segments", "x"]) == 2


def test_cli_bench(tmp_path):
    out = tmp_path / "b.csv"
    assert cli.main(["bench", "--scheme", "tree:thresholds", "--scheme", "ctz", "--ns", "8,16",
                     "--domain", "50", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [(r["scheme"], r["n"]) for r in rows] == [("tree:thresholds", "8"), ("tree:thresholds", "16"),
                                                     ("ctz", "8"), ("ctz", "16")]
    assert cli.main(["bench", "--scheme", "nope"]) == 2


def test_cli_demo(capsys):
    assert cli.main(["demo"]) == 0
    assert "agnostic:thresholds" in capsys.readouterr().out


@pytest.mark.parametrize("cls", [PointFunctions(3), AugmentedPointFunctions(3)], ids=lambda c: c.kind)
def test_dataset_files_for_point_classes(tmp_path, cls):
    from tilu.domain import format_dataset
    S = Dataset(cls, ((1, 0), (2, 1)))
    path = write(tmp_path, "p.txt", format_dataset(S))
    sid = "sharp:point" if cls.kind == "points" else "central:augpoint"
    assert cli.main(["learn", path, "--scheme", sid, "--out", str(tmp_path / "o")]) == 0
