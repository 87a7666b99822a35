"""Command-line front end: one subcommand per party role plus bench and audit."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from . import aoe, bench, secharness, sss, store
from .errors import DecryptionFailure, FormatError, ParameterError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

MPK_FILE = "mpk.bin"
MSK_FILE = "msk.bin"
PTOKEN_FILE = "ptoken.bin"
MTOKEN_FILE = "mtoken.bin"
DECRYPT_FAIL = "DECRYPT-FAIL"


class UsageError(Exception):
    pass


def _read(path) -> bytes:
    return Path(path).read_bytes()


def _write_new(path: Path, data: bytes, mode: int, force: bool) -> None:
    flags = os.O_WRONLY | os.O_CREAT | (os.O_TRUNC if force else os.O_EXCL)
    fd = os.open(path, flags, mode)
    with os.fdopen(fd, "wb") as f:
        f.write(data)
    os.chmod(path, mode)


def cmd_setup(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    targets = [out / MPK_FILE, out / MSK_FILE]
    if not args.force and any(t.exists() for t in targets):
        raise UsageError(f"key files already exist in {out}; pass --force to overwrite")
    keys = sss.init(128, args.n)
    _write_new(targets[1], aoe.serialize_msk(keys.msk), 0o600, args.force)
    _write_new(targets[0], aoe.serialize_mpk(keys.mpk), 0o644, args.force)
    print(f"wrote {targets[0]} and {targets[1]} for n={args.n}")
    return EXIT_OK


def parse_row(text: str) -> list[str]:
    return next(csv.reader([text]))


def cmd_ingest(args) -> int:
    mpk = aoe.deserialize_mpk(_read(args.mpk))
    row = parse_row(args.row)
    if len(row) != mpk.params.n:
        raise UsageError(f"row has {len(row)} cells, keys are for {mpk.params.n}")
    if os.path.exists(args.stream) and os.path.getsize(args.stream) > 0:
        header = store.read_header(args.stream)
        if header.n != mpk.params.n:
            raise UsageError(f"stream has {header.n} columns, keys are for {mpk.params.n}")
    erow = sss.encrypt_row(mpk, row)
    store.append(args.stream, erow, args.source, mpk.params.group.curve_id)
    return EXIT_OK


def load_policy(path) -> tuple[list, int]:
    try:
        obj = json.loads(Path(path).read_text())
        entries, k = obj["policy"], obj["k"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed policy file: {exc}") from exc
    if not isinstance(entries, list) or not all(e is None or isinstance(e, str) for e in entries):
        raise UsageError("policy must be an array of strings and nulls")
    if not isinstance(k, int) or isinstance(k, bool):
        raise UsageError("k must be an integer")
    return entries, k


def cmd_authorize(args) -> int:
    msk = aoe.deserialize_msk(_read(args.msk))
    policy, k = load_policy(args.policy)
    n = msk.params.n
    if len(policy) != n:
        raise UsageError(f"policy has {len(policy)} entries, keys are for {n}")
    if not 1 <= k <= n:
        raise UsageError(f"k={k} outside 1..{n}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / PTOKEN_FILE).write_bytes(aoe.serialize_ptoken(sss.authorize_sel(msk, policy)))
    (out / MTOKEN_FILE).write_bytes(aoe.serialize_mtoken(sss.authorize_dec(msk, policy, k)))
    return EXIT_OK


def cmd_scan(args) -> int:
    ptoken = aoe.deserialize_ptoken(_read(args.ptoken))
    header, records = store.iter_records(args.stream)
    if header.n != ptoken.params.n:
        raise UsageError(f"stream has {header.n} columns, token is for {ptoken.params.n}")
    selected = [rec for rec in records if sss.select(rec.row, ptoken)]
    store.create(args.out, header, selected, force=True)
    print(len(selected))
    return EXIT_OK


def render_cell(value: bytes) -> str:
    try:
        text = value.decode("utf-8")
    except UnicodeDecodeError:
        return "hex:" + value.hex()
    if text.isprintable() and not text.startswith("hex:"):
        return text
    return "hex:" + value.hex()


def cmd_decrypt(args) -> int:
    mtoken = aoe.deserialize_mtoken(_read(args.mtoken))
    if args.k != mtoken.k:
        raise UsageError(f"token opens column {mtoken.k}, not {args.k}")
    header, records = store.iter_records(args.selected)
    if header.n != mtoken.params.n:
        raise UsageError(f"records have {header.n} columns, token is for {mtoken.params.n}")
    for rec in records:
        try:
            print(render_cell(sss.decrypt_cell(rec.row, mtoken, args.k)))
        except DecryptionFailure:
            print(DECRYPT_FAIL)
    return EXIT_OK


def _cols(text: str) -> list[int]:
    try:
        cols = [int(c) for c in text.split(",") if c.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad column list {text!r}") from exc
    if not cols or any(c < 2 for c in cols):
        raise argparse.ArgumentTypeError("column counts must be at least 2")
    return cols


def cmd_bench(args) -> int:
    report = bench.run(args.cols, rows=args.rows, reps=args.reps)
    text = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return EXIT_OK


def cmd_audit(args) -> int:
    try:
        inst = secharness.instance_from_json(json.loads(Path(args.instance).read_text()))
        coalition = secharness.coalition_from_json(json.loads(Path(args.coalition).read_text()))
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot load fixtures: {exc}") from exc
    report = secharness.fixed_point_check(128, coalition, inst)
    print(secharness.dumps_leakage(report.leakage))
    print(f"leakage fixed point: {'PASS' if report.leakage_equal else 'FAIL'}")
    print(f"simulated view matches leakage: {'PASS' if report.view_matches_leakage else 'FAIL'}")
    print(f"token behaviour matches real view: {'PASS' if report.tokens_match_real else 'FAIL'}")
    print("PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selstream", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="generate master keys (data owner)")
    p.add_argument("--n", type=int, required=True, help="columns per row")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--force", action="store_true", help="overwrite existing key files")
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("ingest", help="encrypt one row and append it (data source)")
    p.add_argument("--mpk", required=True)
    p.add_argument("--stream", required=True)
    p.add_argument("--row", required=True, help="comma-separated cells (CSV quoting allowed)")
    p.add_argument("--source", default="", help="source id stored as plaintext metadata")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("authorize", help="issue predicate and message tokens (data owner)")
    p.add_argument("--msk", required=True)
    p.add_argument("--policy", required=True, help='JSON file {"policy": [...], "k": int}')
    p.add_argument("--out", required=True, help="directory for ptoken.bin and mtoken.bin")
    p.set_defaults(func=cmd_authorize)

    p = sub.add_parser("scan", help="select matching rows (query processor)")
    p.add_argument("--stream", required=True)
    p.add_argument("--ptoken", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("decrypt", help="open one column of selected rows (query source)")
    p.add_argument("--selected", required=True)
    p.add_argument("--mtoken", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("bench", help="amortized vs baseline scaling and per-cell timings")
    p.add_argument("--cols", type=_cols, default=list(bench.DEFAULT_COLS))
    p.add_argument("--rows", type=int, default=1)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("audit", help="leakage profile and simulator fixed-point check")
    p.add_argument("--instance", required=True)
    p.add_argument("--coalition", required=True)
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (FileNotFoundError, FileExistsError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
