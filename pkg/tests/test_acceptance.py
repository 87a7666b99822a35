"""One test per acceptance criterion, each run at its stated size and tolerance.

Every test records a single pass/fail line; the lines are repeated in the
"acceptance criteria" section of the pytest summary.
"""

import json
import random
import statistics
import struct
import time

import pytest

from selstream import aoe, bench, invert, secharness, sss, store
from selstream.cli import DECRYPT_FAIL, main
from selstream.errors import DecryptionFailure

from conftest import (P, complete_orthogonal, dot, random_compatible_set, random_instance,
                      random_vec, record_criterion)

pytestmark = pytest.mark.acceptance

# Reading of the qualitative per-cell ordering; each symbol gets a fixed factor.
MUCH_GREATER = 5.0   # a >> b  means  a >= 5 b
ROUGHLY_EQUAL = 3.0  # a ~ b   means  max/min <= 3


def _walk_counts(blob: bytes, header: int) -> int:
    """Independent element count: step over u16 length prefixes, no decoding."""
    pos, count = header, 0
    while pos < len(blob):
        (size,) = struct.unpack(">H", blob[pos:pos + 2])
        assert size in (32, 64, 384), size
        pos += 2 + size
        count += 1
    assert pos == len(blob)
    return count


# -- 1 -----------------------------------------------------------------------


def test_criterion_1_aoe_correctness():
    start = time.perf_counter()
    rng = random.Random(101)
    shapes = [(1, 1, 1), (4, 5, 2), (8, 9, 2)]
    keys = {s: aoe.par_gen(aoe.AoeParams(*s), rng) for s in shapes}
    p_ok = m_ok = total = 0
    for i in range(200):
        shape = shapes[i % 3]
        mpk, msk = keys[shape]
        n, u, v = shape
        x0 = random_vec(rng, u)
        xs = [random_vec(rng, v) for _ in range(n)]
        msgs = [mpk.params.group.random_gt(rng) for _ in range(n)]
        ct = aoe.enc(mpk, x0, xs, msgs, rng)

        s0 = complete_orthogonal(rng, 0, u, x0) if any(x0) else random_vec(rng, u)
        p_ok += aoe.p_dec(ct[0], aoe.p_key_gen(msk, s0, rng))

        k = rng.randint(1, n)
        sk = random_vec(rng, v)
        s0 = complete_orthogonal(rng, dot(sk, xs[k - 1]), u, x0)
        assert (dot(s0, x0) + dot(sk, xs[k - 1])) % P == 0
        m_ok += aoe.m_dec(ct[0], ct[k], aoe.m_key_gen(msk, s0, sk, k, rng)) == msgs[k - 1]
        total += 1
    elapsed = time.perf_counter() - start
    ok = p_ok == total and m_ok == total and elapsed <= 120
    record_criterion(1, "AOE correctness", ok,
                     f"p_dec {p_ok}/{total}, m_dec {m_ok}/{total}, {elapsed:.1f}s (limit 120s)")
    assert ok


# -- 2 -----------------------------------------------------------------------


def test_criterion_2_statistical_soundness():
    rng = random.Random(202)
    shapes = [(1, 1, 1), (2, 3, 2)]
    keys = {s: aoe.par_gen(aoe.AoeParams(*s), rng) for s in shapes}
    p_accepts = m_hits = 0
    for i in range(1000):
        n, u, v = shape = shapes[i % 2]
        mpk, msk = keys[shape]
        x0 = random_vec(rng, u)
        xs = [random_vec(rng, v) for _ in range(n)]
        msgs = [mpk.params.group.random_gt(rng) for _ in range(n)]
        ct = aoe.enc(mpk, x0, xs, msgs, rng)

        s0 = random_vec(rng, u)
        while dot(s0, x0) == 0:
            s0 = random_vec(rng, u)
        p_accepts += aoe.p_dec(ct[0], aoe.p_key_gen(msk, s0, rng))

        k = rng.randint(1, n)
        sk = random_vec(rng, v)
        # half the trials keep the shared part orthogonal so only the specific part is off
        if i % 4 < 2 and any(x0):
            s0 = complete_orthogonal(rng, 0, u, x0)
            while dot(sk, xs[k - 1]) == 0:
                sk = random_vec(rng, v)
        while (dot(s0, x0) + dot(sk, xs[k - 1])) % P == 0:
            sk = random_vec(rng, v)
        m_hits += aoe.m_dec(ct[0], ct[k], aoe.m_key_gen(msk, s0, sk, k, rng)) == msgs[k - 1]
    ok = p_accepts == 0 and m_hits == 0
    record_criterion(2, "statistical soundness", ok,
                     f"p_dec acceptances {p_accepts}/1000, m_dec recoveries {m_hits}/1000")
    assert ok


# -- 3 -----------------------------------------------------------------------


def test_criterion_3_sss_equivalence():
    start = time.perf_counter()
    rng = random.Random(303)
    alphabet = ["red", "green", "blue"]
    keys: dict[int, sss.SssKeys] = {}
    mismatches = []
    matched = 0
    for trial in range(500):
        n = rng.randint(1, 16)
        if n not in keys:
            keys[n] = sss.init(128, n, rng)
        kp = keys[n]
        row = [rng.choice(alphabet) for _ in range(n)]
        # sparse policies so that a fair share of pairs match
        policy = [rng.choice(alphabet) if rng.random() < 1.0 / n + 0.1 else None for _ in range(n)]
        if rng.random() < 0.3:
            policy = [row[i] if p is not None else None for i, p in enumerate(policy)]
        expected = all(p is None or p == c for p, c in zip(policy, row))
        k = rng.randint(1, n)

        erow = sss.deserialize_row(sss.serialize_row(sss.encrypt_row(kp.mpk, row, rng)))
        selected = sss.select(erow, sss.authorize_sel(kp.msk, policy, rng))
        mtoken = sss.authorize_dec(kp.msk, policy, k, rng)
        try:
            opened = sss.decrypt_cell(erow, mtoken, k)
        except DecryptionFailure:
            opened = None
        if selected != expected:
            mismatches.append((trial, "select"))
        if expected and opened != row[k - 1].encode():
            mismatches.append((trial, "round trip"))
        if not expected and opened is not None:
            mismatches.append((trial, "opened a non-matching row"))
        matched += expected
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed <= 300
    record_criterion(3, "SSS functional equivalence", ok,
                     f"500 pairs ({matched} matching), {len(mismatches)} mismatches, "
                     f"{elapsed:.1f}s (limit 300s)")
    assert ok, mismatches[:5]


# -- 4 and 5 share one benchmark run -----------------------------------------


@pytest.fixture(scope="module")
def bench_report():
    return bench.run((16, 32, 64, 128), rows=1, reps=5, rng=random.Random(404))


def test_criterion_4_ciphertext_size(bench_report):
    rng = random.Random(404)
    counts = {}
    for n in (4, 8, 16, 32):
        kp = sss.init(128, n, rng)
        erow = sss.encrypt_row(kp.mpk, [f"c{i}" for i in range(n)], rng)
        walked = _walk_counts(aoe.serialize_ciphertext(erow.ct), aoe.HEADER_BYTES)
        counts[n] = (sss.group_element_count(erow), walked)
    counts_ok = all(a == b == 19 * n + 11 for n, (a, b) in counts.items())

    mem = {p["cols"]: p["ratio_mem"] for p in bench_report["scaling"]}
    doublings = {n: mem[2 * n] / mem[n] for n in (16, 32, 64)}
    ratio_ok = all(1.7 <= d <= 2.3 for d in doublings.values())
    ok = counts_ok and ratio_ok
    record_criterion(4, "ciphertext size", ok,
                     "counts " + ", ".join(f"n={n}:{c[0]}" for n, c in counts.items())
                     + "; memory ratio doubling "
                     + ", ".join(f"{n}->{2 * n}:{d:.2f}" for n, d in doublings.items())
                     + " (band 1.7..2.3)")
    assert ok


def test_criterion_5_encryption_time_scaling(bench_report):
    t = {p["cols"]: p["ratio_time"] for p in bench_report["scaling"]}
    doublings = {n: t[2 * n] / t[n] for n in (16, 32, 64)}
    scaling_ok = all(1.6 <= d <= 2.4 for d in doublings.values())
    monotone = all(t[a] < t[b] for a, b in zip((16, 32, 64), (32, 64, 128)))

    cell = bench_report["per_cell"]
    tok, enc, m_apply = cell["token_generation_ms"], cell["encryption_ms"], cell["mtoken_apply_ms"]
    p_apply, keygen = cell["ptoken_apply_ms"], cell["keygen_ms"]
    order = {
        "token >> encryption": tok >= MUCH_GREATER * enc,
        "encryption > m-apply": enc > m_apply,
        "m-apply > p-apply": m_apply > p_apply,
        "p-apply ~ keygen": max(p_apply, keygen) <= ROUGHLY_EQUAL * min(p_apply, keygen),
    }
    ok = scaling_ok and monotone and all(order.values())
    failed = [k for k, v in order.items() if not v]
    record_criterion(5, "encryption-time scaling", ok,
                     "blow-up doubling "
                     + ", ".join(f"{n}->{2 * n}:{d:.2f}" for n, d in doublings.items())
                     + f" (band 1.6..2.4); monotone {monotone}; per-cell ms token {tok:.2f}, "
                     f"enc {enc:.2f}, m-apply {m_apply:.2f}, p-apply {p_apply:.2f}, keygen {keygen:.2f}; "
                     f"ordering failures: {failed or 'none'}")
    assert ok


# -- 6 -----------------------------------------------------------------------


def test_criterion_6_const_adm():
    rng = random.Random(606)
    rounds = []
    bad = 0
    for _ in range(500):
        n = rng.randint(1, 12)
        v, _ = random_compatible_set(rng, n)
        sol = invert.solve_constraints(v, n, rng)
        # plaintext oracle, written out independently of check_admissible
        for c in v.all():
            holds = all(p is None or p == x for p, x in zip(c.policy, sol.row))
            if c.kind is invert.Kind.NEGATIVE:
                good = not holds
            elif c.kind is invert.Kind.POSITIVE:
                good = holds
            else:
                good = holds and sol.row[c.k - 1] == c.val
            bad += (not good) or (good != invert.check_admissible(sol.row, c))
        rounds.append(sol.rounds)
    mean = statistics.fmean(rounds)
    ok = bad == 0 and mean < 1.01
    record_criterion(6, "ConstAdm invertibility", ok,
                     f"500 sets, {bad} violated constraints, mean rounds {mean:.4f} (limit 1.01)")
    assert ok


# -- 7 -----------------------------------------------------------------------


def test_criterion_7_leakage_fixed_point():
    rng = random.Random(707)
    failures = []
    for case in range(200):
        inst, coalition = random_instance(rng, max_n=8, max_m=10, max_l=6)
        report = secharness.fixed_point_check(128, coalition, inst, rng)

        # second route, no cryptography: simulated plaintext rows must give the same patterns
        leak = secharness.minimal_leakage(coalition, inst)
        rows = [leak.rows[i] if leak.rows[i] is not None
                else invert.const_adm(secharness.row_constraints(leak, i), inst.n, rng)
                for i in range(len(inst.rows))]
        plain_ok = all(
            req.policy is None
            or tuple(invert.matches(req.policy, r) for r in rows) == req.sel
            for req in leak.requests
        )
        if not (report.ok and plain_ok):
            failures.append(case)
    ok = not failures
    record_criterion(7, "leakage fixed point", ok, f"200 cases, failing: {failures or 'none'}")
    assert ok


# -- 8 -----------------------------------------------------------------------


def _pipeline(tmp, rng, capsys) -> bool:
    n = rng.randint(1, 8)
    m = rng.randint(0, 20)
    alphabet = ["x", "y", "z"]
    keys = tmp / "keys"
    assert main(["setup", "--n", str(n), "--out-dir", str(keys)]) == 0
    rows = [[rng.choice(alphabet) for _ in range(n)] for _ in range(m)]
    stream = tmp / "stream.bin"
    if not rows:
        store.create(stream, store.Header(n, "BN254"))
    for r in rows:
        assert main(["ingest", "--mpk", str(keys / "mpk.bin"), "--stream", str(stream),
                     "--row", ",".join(r), "--source", "ds"]) == 0
    policy = [rng.choice(alphabet) if rng.random() < 0.35 else None for _ in range(n)]
    k = rng.randint(1, n)
    (tmp / "policy.json").write_text(json.dumps({"policy": policy, "k": k}))
    assert main(["authorize", "--msk", str(keys / "msk.bin"), "--policy", str(tmp / "policy.json"),
                 "--out", str(tmp / "tok")]) == 0
    capsys.readouterr()
    assert main(["scan", "--stream", str(stream), "--ptoken", str(tmp / "tok" / "ptoken.bin"),
                 "--out", str(tmp / "sel.bin")]) == 0
    count = int(capsys.readouterr().out.strip())
    assert main(["decrypt", "--selected", str(tmp / "sel.bin"), "--mtoken", str(tmp / "tok" / "mtoken.bin"),
                 "--k", str(k)]) == 0
    got = capsys.readouterr().out.splitlines()
    expected = [r[k - 1] for r in rows if all(p is None or p == c for p, c in zip(policy, r))]
    return count == len(expected) and got == expected and DECRYPT_FAIL not in got


def _truncation_ok(tmp) -> bool:
    rng = random.Random(808)
    kp = sss.init(128, 2, rng)
    path = tmp / "trunc.bin"
    for i in range(4):
        store.append(path, sss.encrypt_row(kp.mpk, [f"a{i}", "b"], rng), "ds", "BN254")
    data = path.read_bytes()
    header_len = len(store.Header(2, "BN254").encode())
    offsets = [header_len]
    for rec in store.read_all(path)[1]:
        offsets.append(offsets[-1] + len(store.encode_record(rec)))
    assert offsets[-1] == len(data)
    for cut in range(header_len, len(data) + 1, 37):
        path.write_bytes(data[:cut])
        # every record ending before the cut survives; only the partial tail is lost
        complete = sum(1 for o in offsets[1:] if o <= cut)
        if len(store.read_all(path)[1]) != complete:
            return False
    return True


def test_criterion_8_cli_pipeline(tmp_path, capsys):
    rng = random.Random(888)
    failures = []
    for i in range(100):
        d = tmp_path / f"inst{i}"
        d.mkdir()
        if not _pipeline(d, rng, capsys):
            failures.append(i)
    trunc = _truncation_ok(tmp_path)
    ok = not failures and trunc
    with capsys.disabled():
        record_criterion(8, "end-to-end CLI pipeline", ok,
                         f"100 instances, failing: {failures or 'none'}; truncation loses <= 1 record: {trunc}")
    assert ok
