"""Amortized vs non-amortized encryption benchmark and per-cell operation timings.

Each measurement is the median of ``reps`` timed runs after one discarded
warm-up run, on ``time.perf_counter``, with the garbage collector paused.
"""

from __future__ import annotations

import gc
import random
import statistics
import time
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

from . import aoe, sss

DEFAULT_COLS = (16, 32, 64, 128)


def timed(fn: Callable[[], object], reps: int = 5) -> float:
    """Median wall time of ``fn`` in milliseconds."""
    return timed_pair(fn, None, reps)[0]


def _once(fn) -> float:
    start = time.perf_counter()
    fn()
    return (time.perf_counter() - start) * 1000.0


def timed_pair(first, second, reps: int = 5) -> tuple[float, float]:
    """Medians for two workloads timed alternately, so host drift hits both alike."""
    if reps < 1:
        raise ValueError("reps must be positive")
    fns = [f for f in (first, second) if f is not None]
    for f in fns:
        f()
    samples = [[] for _ in fns]
    enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(reps):
            for f, out in zip(fns, samples):
                out.append(_once(f))
    finally:
        if enabled:
            gc.enable()
    medians = [statistics.median(s) for s in samples]
    return medians[0], (medians[1] if second is not None else float("nan"))


@dataclass
class ScalingPoint:
    cols: int
    t_amortized_ms: float
    t_baseline_ms: float
    bytes_amortized: int
    bytes_baseline: int
    ratio_time: float
    ratio_mem: float


@dataclass
class PerCell:
    cols: int
    keygen_ms: float
    encryption_ms: float
    token_generation_ms: float
    ptoken_apply_ms: float
    mtoken_apply_ms: float


def _random_row(n: int, rng) -> list[bytes]:
    return [rng.randbytes(8).hex().encode() for _ in range(n)]


def scaling_point(cols: int, rows: int = 1, reps: int = 5, rng=None) -> ScalingPoint:
    if cols < 2:
        raise ValueError("column counts must be at least 2")
    rng = rng or random.Random()
    params = sss.stream_params(cols)
    mpk, _ = aoe.par_gen(params, rng)
    base_mpk, _ = aoe.baseline_par_gen(params, rng)
    group = params.group
    inputs = []
    for _ in range(rows):
        shared, specific = sss.row_attributes(_random_row(cols, rng))
        inputs.append((shared, specific, [group.random_gt(rng) for _ in range(cols)]))

    def amortized():
        return [aoe.enc(mpk, s, x, m, rng) for s, x, m in inputs]

    def baseline():
        return [aoe.enc_non_amortized(base_mpk, s, x, m, rng) for s, x, m in inputs]

    t_am, t_base = timed_pair(amortized, baseline, reps)
    s, x, m = inputs[0]
    b_am = len(aoe.serialize_ciphertext(aoe.enc(mpk, s, x, m, rng)))
    b_base = len(aoe.serialize_baseline_ciphertexts(params, aoe.enc_non_amortized(base_mpk, s, x, m, rng)))
    return ScalingPoint(cols, t_am, t_base, b_am, b_base, t_base / t_am, b_base / b_am)


def per_cell(cols: int, reps: int = 5, rng=None) -> PerCell:
    """Row-level operations divided by the column count.

    Token generation is the time to issue both tokens of one request, which
    opens a single column, so it is not divided.
    """
    rng = rng or random.Random()
    keys = sss.init(128, cols, rng)
    row = _random_row(cols, rng)
    erow = sss.encrypt_row(keys.mpk, row, rng)
    policy = [row[0]] + [None] * (cols - 1)
    ptoken = sss.authorize_sel(keys.msk, policy, rng)
    mtoken = sss.authorize_dec(keys.msk, policy, 1, rng)

    def tokens():
        sss.authorize_sel(keys.msk, policy, rng)
        sss.authorize_dec(keys.msk, policy, 1, rng)

    return PerCell(
        cols=cols,
        keygen_ms=timed(lambda: sss.init(128, cols, rng), reps) / cols,
        encryption_ms=timed(lambda: sss.encrypt_row(keys.mpk, row, rng), reps) / cols,
        token_generation_ms=timed(tokens, reps),
        ptoken_apply_ms=timed(lambda: sss.select(erow, ptoken), reps) / cols,
        mtoken_apply_ms=timed(lambda: sss.decrypt_cell(erow, mtoken, 1), reps) / cols,
    )


def run(cols: Sequence[int] = DEFAULT_COLS, rows: int = 1, reps: int = 5,
        per_cell_cols: int | None = None, rng=None) -> dict:
    rng = rng or random.Random()
    points = [scaling_point(c, rows, reps, rng) for c in cols]
    cell = per_cell(per_cell_cols or cols[0], reps, rng)
    return {
        "rows": rows,
        "reps": reps,
        "scaling": [asdict(p) for p in points],
        "per_cell": asdict(cell),
    }
