"""Leakage profiles, real and simulated coalition views.

Used as test oracles and by the ``audit`` command.  Cells and policy values
are byte strings; wildcards are ``None``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import invert, sss
from .aoe import MasterPublicKey, MToken, PToken, default_rng
from .errors import FormatError, ParameterError
from .invert import Constraint, ConstraintSet

Row = tuple[bytes, ...]
PolicyT = tuple[Optional[bytes], ...]

# Free cells of simulated rows are drawn from a 2^128-sized space.
SIM_CELL_BYTES = 16


@dataclass(frozen=True)
class Request:
    policy: PolicyT
    k: int
    qs: str
    qp: str


@dataclass(frozen=True)
class Instance:
    n: int
    stream: tuple[tuple[Row, str], ...]
    requests: tuple[Request, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("instances need at least one column")
        for row, _ in self.stream:
            if len(row) != self.n:
                raise ParameterError(f"row of width {len(row)} in an instance of width {self.n}")
        for req in self.requests:
            if len(req.policy) != self.n:
                raise ParameterError("policy width differs from instance width")
            if not 1 <= req.k <= self.n:
                raise ParameterError(f"column {req.k} outside 1..{self.n}")

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.n, len(self.stream), len(self.requests))

    @property
    def rows(self) -> list[Row]:
        return [row for row, _ in self.stream]


@dataclass(frozen=True)
class Coalition:
    sources: frozenset = field(default_factory=frozenset)
    processors: frozenset = field(default_factory=frozenset)
    queriers: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for name in ("sources", "processors", "queriers"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))


@dataclass(frozen=True)
class RequestLeak:
    policy: Optional[PolicyT]
    k: Optional[int]
    sel: tuple[Optional[bool], ...]
    val: tuple[Optional[bytes], ...]


@dataclass(frozen=True)
class LeakageProfile:
    dims: tuple[int, int, int]
    rows: tuple[Optional[Row], ...]
    requests: tuple[RequestLeak, ...]

    def check(self) -> None:
        """Raise ParameterError unless the profile is internally consistent."""
        n, m, l = self.dims
        if len(self.rows) != m or len(self.requests) != l:
            raise ParameterError("profile dimensions disagree with its contents")
        for req in self.requests:
            if len(req.sel) != m or len(req.val) != m:
                raise ParameterError("per-row leakage has the wrong length")
            if req.k is not None and req.policy is None:
                raise ParameterError("column leaked without its policy")
            for s, v in zip(req.sel, req.val):
                if v is not None and (s is not True or req.k is None):
                    raise ParameterError("value leaked for an unselected row or unknown column")
                if (s is None) != (req.policy is None):
                    raise ParameterError("selection bits must be leaked exactly with the policy")


@dataclass(frozen=True, eq=False)
class View:
    mpk: MasterPublicKey
    erows: tuple[sss.EncryptedRow, ...]
    vrows: tuple[Optional[Row], ...]
    vtokens: tuple[tuple[Optional[PToken], Optional[MToken]], ...]
    vpols: tuple[tuple[Optional[PolicyT], Optional[int]], ...]


def minimal_leakage(c: Coalition, inst: Instance) -> LeakageProfile:
    rows = inst.rows
    leak_rows = tuple(row if src in c.sources else None for row, src in inst.stream)
    reqs = []
    for req in inst.requests:
        q_corrupt = req.qs in c.queriers
        sees_policy = q_corrupt or req.qp in c.processors
        sel = tuple(invert.matches(req.policy, row) if sees_policy else None for row in rows)
        val = tuple(
            row[req.k - 1] if q_corrupt and invert.matches(req.policy, row) else None
            for row in rows
        )
        reqs.append(RequestLeak(
            policy=req.policy if sees_policy else None,
            k=req.k if q_corrupt else None,
            sel=sel,
            val=val,
        ))
    return LeakageProfile(inst.dims, leak_rows, tuple(reqs))


def is_admissible_pair(c: Coalition, i0: Instance, i1: Instance) -> bool:
    if i0.dims != i1.dims:
        raise ParameterError(f"instance dimensions differ: {i0.dims} vs {i1.dims}")
    return minimal_leakage(c, i0) == minimal_leakage(c, i1)


def real_view(security_bits: int, c: Coalition, inst: Instance, rng=None) -> View:
    keys = sss.init(security_bits, inst.n, rng)
    erows = tuple(sss.encrypt_row(keys.mpk, row, rng) for row in inst.rows)
    vrows = tuple(row if src in c.sources else None for row, src in inst.stream)
    vtokens, vpols = [], []
    for req in inst.requests:
        ptoken = sss.authorize_sel(keys.msk, req.policy, rng)
        mtoken = sss.authorize_dec(keys.msk, req.policy, req.k, rng)
        q_corrupt = req.qs in c.queriers
        p_corrupt = req.qp in c.processors
        vtokens.append((ptoken if q_corrupt or p_corrupt else None, mtoken if q_corrupt else None))
        if q_corrupt:
            vpols.append((req.policy, req.k))
        elif p_corrupt:
            vpols.append((req.policy, None))
        else:
            vpols.append((None, None))
    return View(keys.mpk, erows, vrows, tuple(vtokens), tuple(vpols))


def _random_cell(rng) -> bytes:
    return rng.randbytes(SIM_CELL_BYTES)


def row_constraints(leak: LeakageProfile, i: int) -> ConstraintSet:
    v = ConstraintSet()
    for req in leak.requests:
        s = req.sel[i]
        if s is False:
            v.add(Constraint.negative(req.policy))
        elif s is True and req.k is None:
            v.add(Constraint.positive(req.policy))
        elif s is True:
            v.add(Constraint.full(req.policy, req.k, req.val[i]))
    return v


def simulate_with_rows(security_bits: int, c: Coalition, leak: LeakageProfile,
                       rng=None) -> tuple[View, tuple[Row, ...]]:
    """Simulated view plus the plaintext rows it encrypts (test-only channel)."""
    leak.check()
    rng = rng or default_rng()
    n, m, _ = leak.dims
    keys = sss.init(security_bits, n, rng)
    rows = []
    for i in range(m):
        if leak.rows[i] is not None:
            rows.append(tuple(leak.rows[i]))
        else:
            rows.append(invert.const_adm(row_constraints(leak, i), n, rng, _random_cell))
    erows = tuple(sss.encrypt_row(keys.mpk, row, rng) for row in rows)
    vtokens, vpols = [], []
    for req in leak.requests:
        ptoken = sss.authorize_sel(keys.msk, req.policy, rng) if req.policy is not None else None
        mtoken = None
        if req.policy is not None and req.k is not None:
            mtoken = sss.authorize_dec(keys.msk, req.policy, req.k, rng)
        vtokens.append((ptoken, mtoken))
        vpols.append((req.policy, req.k))
    view = View(keys.mpk, erows, leak.rows, tuple(vtokens), tuple(vpols))
    return view, tuple(rows)


def simulate_view(security_bits: int, c: Coalition, leak: LeakageProfile, rng=None) -> View:
    return simulate_with_rows(security_bits, c, leak, rng)[0]


def _outsider(prefix: str, taken: frozenset) -> str:
    name = prefix
    while name in taken:
        name += "'"
    return name


def reconstruct_instance(c: Coalition, leak: LeakageProfile, rows: Sequence[Row]) -> Instance:
    """An instance over ``rows`` whose party assignment reproduces the visibility in ``leak``."""
    n, m, _ = leak.dims
    honest_src = _outsider("honest-source", c.sources)
    honest_qs = _outsider("honest-querier", c.queriers)
    honest_qp = _outsider("honest-processor", c.processors)
    stream = []
    for i in range(m):
        if leak.rows[i] is not None:
            if not c.sources:
                raise ParameterError("row leaked but the coalition has no sources")
            stream.append((tuple(rows[i]), min(c.sources)))
        else:
            stream.append((tuple(rows[i]), honest_src))
    requests = []
    for req in leak.requests:
        if req.k is not None:
            if not c.queriers:
                raise ParameterError("column leaked but the coalition has no queriers")
            requests.append(Request(req.policy, req.k, min(c.queriers), honest_qp))
        elif req.policy is not None:
            if not c.processors:
                raise ParameterError("policy leaked but the coalition has no processors")
            requests.append(Request(req.policy, 1, honest_qs, min(c.processors)))
        else:
            requests.append(Request((None,) * n, 1, honest_qs, honest_qp))
    return Instance(n, tuple(stream), tuple(requests))


# -- token application -------------------------------------------------------


def token_patterns(view: View, k_of: Sequence[Optional[int]]):
    """Per request: (selection bits, opened values) of the visible tokens on the view's rows."""
    out = []
    for (ptoken, mtoken), k in zip(view.vtokens, k_of):
        sel = None if ptoken is None else tuple(sss.select(e, ptoken) for e in view.erows)
        vals = None
        if mtoken is not None:
            vals = tuple(sss.try_decrypt_cell(e, mtoken, k) for e in view.erows)
        out.append((sel, vals))
    return out


@dataclass
class FixedPointReport:
    leakage: LeakageProfile
    leakage_equal: bool
    view_matches_leakage: bool
    tokens_match_real: bool

    @property
    def ok(self) -> bool:
        return self.leakage_equal and self.view_matches_leakage and self.tokens_match_real


def fixed_point_check(security_bits: int, c: Coalition, inst: Instance, rng=None) -> FixedPointReport:
    leak = minimal_leakage(c, inst)
    real = real_view(security_bits, c, inst, rng)
    sim, rows = simulate_with_rows(security_bits, c, leak, rng)
    leakage_equal = minimal_leakage(c, reconstruct_instance(c, leak, rows)) == leak

    real_k = [req.k for req in inst.requests]
    sim_k = [req.k for req in leak.requests]
    real_pat = token_patterns(real, real_k)
    sim_pat = token_patterns(sim, sim_k)
    tokens_match_real = real_pat == sim_pat

    view_ok = True
    for req, (sel, vals) in zip(leak.requests, sim_pat):
        if req.policy is None:
            view_ok &= sel is None and vals is None
            continue
        view_ok &= sel == req.sel
        if req.k is not None:
            view_ok &= vals == req.val
    return FixedPointReport(leak, leakage_equal, view_ok, tokens_match_real)


# -- JSON fixtures -----------------------------------------------------------


def _cell(x) -> bytes:
    if not isinstance(x, str):
        raise FormatError(f"cell values must be strings, got {x!r}")
    return x.encode("utf-8")


def _policy(entries) -> PolicyT:
    if not isinstance(entries, list):
        raise FormatError("policy must be a JSON array")
    return tuple(None if e is None else _cell(e) for e in entries)


def instance_from_json(obj) -> Instance:
    try:
        stream = tuple((tuple(_cell(x) for x in e["cells"]), str(e["source"])) for e in obj["stream"])
        requests = tuple(
            Request(_policy(r["policy"]), int(r["k"]), str(r["qs"]), str(r["qp"]))
            for r in obj.get("requests", [])
        )
        if "n" in obj:
            n = int(obj["n"])
        elif stream:
            n = len(stream[0][0])
        elif requests:
            n = len(requests[0].policy)
        else:
            raise FormatError("cannot infer the column count of an empty instance")
        return Instance(n, stream, requests)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed instance: {exc}") from exc


def coalition_from_json(obj) -> Coalition:
    try:
        return Coalition(
            frozenset(map(str, obj.get("sources", []))),
            frozenset(map(str, obj.get("processors", []))),
            frozenset(map(str, obj.get("queriers", []))),
        )
    except (AttributeError, TypeError) as exc:
        raise FormatError(f"malformed coalition: {exc}") from exc


def instance_to_json(inst: Instance) -> dict:
    def text(b: bytes) -> str:
        return b.decode("utf-8")

    return {
        "n": inst.n,
        "stream": [{"cells": [text(x) for x in row], "source": src} for row, src in inst.stream],
        "requests": [
            {"policy": [None if p is None else text(p) for p in r.policy], "k": r.k, "qs": r.qs, "qp": r.qp}
            for r in inst.requests
        ],
    }


def coalition_to_json(c: Coalition) -> dict:
    return {
        "sources": sorted(c.sources),
        "processors": sorted(c.processors),
        "queriers": sorted(c.queriers),
    }


def _show(b: Optional[bytes]):
    if b is None:
        return None
    try:
        return b.decode("utf-8")
    except UnicodeDecodeError:
        return "0x" + b.hex()


def leakage_to_json(leak: LeakageProfile) -> dict:
    n, m, l = leak.dims
    return {
        "n": n,
        "m": m,
        "l": l,
        "rows": [None if r is None else [_show(x) for x in r] for r in leak.rows],
        "requests": [
            {
                "policy": None if q.policy is None else [_show(p) for p in q.policy],
                "k": q.k,
                "sel": list(q.sel),
                "val": [_show(v) for v in q.val],
            }
            for q in leak.requests
        ],
    }


def dumps_leakage(leak: LeakageProfile) -> str:
    return json.dumps(leakage_to_json(leak), indent=2)
