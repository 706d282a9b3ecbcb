"""Command line front end.

Exit codes: 0 ok, 1 a check failed (or a scheme refused the input), 2 usage
or input-format error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench, oracle
from .base import Deletion, LearnOutput
from .bits import Bits
from .domain import Dataset, Thresholds, format_dataset, parse_class, parse_dataset
from .errors import TiluError
from .scheme_api import SCHEME_IDS, make_scheme, run_learn, run_unlearn
from .sperner import family_segment, global_family, segment_range, verify_sperner

OK, FAILED, USAGE = 0, 1, 2
DEFAULT_SEGMENTS = ("1,1", "1,2", "1,4", "1,8", "2,2", "2,3", "3,2")


class UsageError(Exception):
    pass


def show(result) -> str:
    return "NONE" if result is None else str(result)


def ticket_path(out: Path, i: int) -> Path:
    return out / "tickets" / f"ticket_{i:05d}.bin"


# ------------------------------------------------------------------ learn


def cmd_learn(args) -> int:
    try:
        data = parse_dataset(Path(args.dataset).read_text())
    except (OSError, ValueError) as e:
        raise UsageError(f"cannot read dataset: {e}")
    out = Path(args.out)
    result = run_learn(args.scheme, data)
    (out / "tickets").mkdir(parents=True, exist_ok=True)
    for old in (out / "tickets").glob("ticket_*.bin"):
        old.unlink()
    (out / "hypothesis.txt").write_text(show(result.result) + "\n")
    (out / "aux.bin").write_bytes(result.aux.to_bytes())
    for i, t in enumerate(result.tickets):
        ticket_path(out, i).write_bytes(t.to_bytes())
    (out / "examples.txt").write_text(format_dataset(data))
    manifest = {
        "scheme": result.scheme,
        "class": data.cls.descriptor(),
        "n": result.n,
        "aux_bits": result.aux_bits,
        "ticket_bits": [t.length for t in result.tickets],
        "unlearned": False,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"{result.scheme}: {show(result.result)}  aux={result.aux_bits} bits  "
          f"max ticket={result.max_ticket_bits} bits  n={result.n}")
    return OK


# ---------------------------------------------------------------- unlearn


def parse_indices(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad index list {text!r}")


def cmd_unlearn(args) -> int:
    out = Path(args.dir)
    try:
        manifest = json.loads((out / "manifest.json").read_text())
        data = parse_dataset((out / "examples.txt").read_text())
        aux = Bits.from_bytes((out / "aux.bin").read_bytes(), manifest["aux_bits"])
    except (OSError, ValueError, KeyError) as e:
        raise UsageError(f"not a learn output directory: {e}")
    if manifest.get("unlearned"):
        print("error: this learn output was already unlearned once", file=sys.stderr)
        return FAILED
    indices = parse_indices(args.delete)
    n = manifest["n"]
    tickets = [Bits()] * n
    for i in sorted(set(indices)):
        if not 0 <= i < n:
            raise UsageError(f"index {i} outside 0..{n - 1}")
        try:
            tickets[i] = Bits.from_bytes(ticket_path(out, i).read_bytes(), manifest["ticket_bits"][i])
        except OSError:
            print(f"error: missing ticket file for index {i}", file=sys.stderr)
            return FAILED
    output = LearnOutput(manifest["scheme"], data.cls, None, aux, tickets)
    request = [Deletion(i, data[i], tickets[i]) for i in indices]
    manifest["unlearned"] = True
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    result = run_unlearn(manifest["scheme"], request, output)
    (out / "unlearned.txt").write_text(show(result) + "\n")
    print(show(result))
    return OK


# ----------------------------------------------------------------- checks


def cmd_oracle(args) -> int:
    cls = parse_class(args.cls) if args.cls else oracle.default_class(args.scheme, args.domain)
    report = oracle.oracle_check(args.scheme, cls, args.max_n, cap=args.cap, samples=args.samples,
                                 seed=args.seed, workers=args.workers, corrupt=args.corrupt)
    print(report.summary())
    for m in report.mismatches[:10]:
        print("  mismatch:", json.dumps(m))
    if args.out:
        Path(args.out).write_text(json.dumps(report.__dict__, indent=2, default=str) + "\n")
    if args.corrupt:
        return OK if report.flagged else FAILED
    return OK if report.ok else FAILED


def parse_segment(text: str) -> tuple:
    try:
        r, t = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"segment must look like r,t: {text!r}")
    return r, t


def cmd_sperner(args) -> int:
    ok = True
    family = [global_family(m) for m in range(1, args.max_m + 1)]
    if args.inject_duplicate and family:
        family.append(family[-1])
    sizes_ok = all(q.size == m for m, q in enumerate(family[:args.max_m], 1))
    sperner_ok = verify_sperner(family)
    print(f"global family m=1..{args.max_m}: sizes {'ok' if sizes_ok else 'WRONG'}, "
          f"Sperner {'ok' if sperner_ok else 'VIOLATED'}")
    ok &= sizes_ok and sperner_ok
    for seg in args.segments:
        r, t = parse_segment(seg)
        lo, hi = segment_range(r, t)
        fam = [family_segment(r, t, m) for m in range(lo, hi + 1)]
        good = verify_sperner(fam) and all(q.size == m for m, q in zip(range(lo, hi + 1), fam))
        print(f"segment ({r},{t}) m={lo}..{hi}: {'ok' if good else 'VIOLATED'}")
        ok &= good
    if args.out:
        seen, lines = set(), ["m,size,alphabet_used"]
        for m, q in enumerate(family[:args.max_m], 1):
            seen |= q.symbols()
            lines.append(f"{m},{q.size},{len(seen)}")
        Path(args.out).write_text("\n".join(lines) + "\n")
    return OK if ok else FAILED


def cmd_bench(args) -> int:
    schemes = args.scheme or list(bench.DEFAULT_SCHEMES)
    for s in schemes:
        if s.split("(", 1)[0] not in SCHEME_IDS:
            raise UsageError(f"unknown scheme id {s!r}")
    ns = [int(v) for v in args.ns.split(",")] if args.ns else list(bench.DEFAULT_NS)
    if args.max_n is not None:
        ns = [n for n in ns if n <= args.max_n]
    rows, bad = bench.run_bench(schemes, ns, args.domain, args.seed)
    text = bench.to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    for b in bad:
        print("bound violated:", b, file=sys.stderr)
    return FAILED if bad else OK


def cmd_demo(args) -> int:
    cls = Thresholds(6)
    data = Dataset(cls, ((4, 0), (5, 1), (2, 0), (6, 1)))
    print(format_dataset(data), end="")
    for sid in ("tree:thresholds", "chain:thresholds", "sharp:thresholds", "central:thresholds",
                "agnostic:thresholds"):
        scheme = make_scheme(sid, cls)
        out = scheme.learn(data)
        after = scheme.unlearn(out.aux, out.request(data, [0, 2]), out.n)
        print(f"{sid:22s} learn {show(out.result):6s} aux {out.aux_bits:3d} bits  "
              f"ticket <= {out.max_ticket_bits:3d} bits  delete items 0,2 -> {show(after)}")
    return OK


# ------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tilu", description="Ticketed learning and one-shot unlearning.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("learn", help="learn from a dataset file and write aux and tickets")
    s.add_argument("dataset")
    s.add_argument("--scheme", required=True, choices=SCHEME_IDS)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_learn)

    s = sub.add_parser("unlearn", help="unlearn a list of item indices from a learn output")
    s.add_argument("dir")
    s.add_argument("--delete", default="", help="comma separated indices")
    s.set_defaults(func=cmd_unlearn)

    s = sub.add_parser("oracle-check", help="compare unlearning with retraining exhaustively")
    s.add_argument("--scheme", required=True)
    s.add_argument("--domain", type=int, default=6)
    s.add_argument("--class", dest="cls", help="class header overriding --domain")
    s.add_argument("--max-n", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cap", type=int, default=10 ** 6, help="largest exhaustive grid")
    s.add_argument("--samples", type=int, default=2000, help="random datasets past the cap")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--corrupt", action="store_true", help="negative control: flip a ticket bit")
    s.add_argument("--out")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("sperner-verify", help="check the size-indexed Sperner families")
    s.add_argument("--max-m", type=int, default=300)
    s.add_argument("--segments", nargs="*", default=list(DEFAULT_SEGMENTS))
    s.add_argument("--inject-duplicate", action="store_true")
    s.add_argument("--out", help="CSV of (m, size, alphabet used so far)")
    s.set_defaults(func=cmd_sperner)

    s = sub.add_parser("bench", help="measure aux and ticket sizes")
    s.add_argument("--scheme", action="append")
    s.add_argument("--ns", help="comma separated dataset sizes")
    s.add_argument("--max-n", type=int)
    s.add_argument("--domain", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("demo", help="run every threshold scheme on a small example")
    s.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return USAGE
    except TiluError as e:
        print(f"error: {e}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
