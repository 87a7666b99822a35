"""Secure selective streams over amortized orthogonality encryption.

A row of ``n`` cells is encrypted as one AOE ciphertext with shared
attributes ``(x_1, ..., x_n, 1)`` (``x_i`` the hashed cell) and per-cell
attributes ``(1, i)``.  Each cell payload is sealed under a key derived from a
fresh random target-group message, so whoever can recover message ``i`` can
open cell ``i``.

A conjunctive equality policy becomes the selection vector
``(-t_1, ..., -t_n, sum t_i * pol_i)`` with ``t_i = 0`` at wildcard positions.
Its inner product with the shared attributes is ``sum t_i * (pol_i - x_i)``.
A message token for column k adds ``(k, -1)``, whose product with ``(1, i)``
vanishes only for ``i = k``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from . import aoe, envelope
from . import bilinear as bl
from .aoe import CumulativeCiphertext, MasterPublicKey, MasterSecretKey, MToken, PToken
from .bilinear import Reader
from .errors import DecryptionFailure, FormatError, ParameterError

MAGIC = b"SSS1"
VERSION = 1

Cell = Union[bytes, str]
Policy = Sequence[Optional[Cell]]


@dataclass(frozen=True, eq=False)
class SssKeys:
    mpk: MasterPublicKey
    msk: MasterSecretKey

    @property
    def n(self) -> int:
        return self.mpk.params.n


@dataclass(frozen=True, eq=False)
class EncryptedRow:
    ct: CumulativeCiphertext
    cells: tuple[bytes, ...]

    @property
    def n(self) -> int:
        return self.ct.params.n


def as_bytes(cell: Cell) -> bytes:
    if isinstance(cell, str):
        return cell.encode("utf-8")
    if isinstance(cell, (bytes, bytearray, memoryview)):
        return bytes(cell)
    raise TypeError(f"cell values must be bytes or str, not {type(cell).__name__}")


def cell_scalar(cell: Cell) -> int:
    return bl.hash_to_scalar(as_bytes(cell))


def stream_params(n: int) -> aoe.AoeParams:
    if n < 1:
        raise ParameterError("a stream needs at least one column")
    return aoe.AoeParams(n, n + 1, 2)


def init(security_bits: int = 128, n: int = 1, rng=None) -> SssKeys:
    group = bl.setup_group(security_bits)
    if n < 1:
        raise ParameterError("a stream needs at least one column")
    params = aoe.AoeParams(n, n + 1, 2, group)
    mpk, msk = aoe.par_gen(params, rng)
    return SssKeys(mpk, msk)


def _check_width(values: Sequence, n: int, what: str) -> None:
    if len(values) != n:
        raise ParameterError(f"{what} has {len(values)} entries, stream has {n} columns")


def policy_matches(policy: Policy, row: Sequence[Cell]) -> bool:
    """Plaintext evaluation of a conjunctive equality policy."""
    _check_width(row, len(policy), "row")
    return all(p is None or as_bytes(p) == as_bytes(c) for p, c in zip(policy, row))


def arithmetize(values: Sequence[Optional[int]], t: Sequence[int]) -> list[int]:
    """``(-t_1, ..., -t_n, sum t_i * v_i)`` with wildcard (None) weights forced to 0."""
    if len(t) != len(values):
        raise ParameterError("weight vector length differs from policy length")
    p = bl.ORDER
    weights = [0 if v is None else ti % p for v, ti in zip(values, t)]
    return [-w % p for w in weights] + [bl.inner(weights, (v or 0 for v in values))]


def selection_vector(policy: Policy, rng=None, t: Sequence[int] | None = None) -> list[int]:
    """Shared token vector for ``policy``; ``t`` overrides the random weights."""
    if t is None:
        rng = rng or aoe.default_rng()
        t = [0 if pol is None else rng.randrange(1, bl.ORDER) for pol in policy]
    return arithmetize([None if pol is None else cell_scalar(pol) for pol in policy], t)


def authorize_sel(msk: MasterSecretKey, policy: Policy, rng=None) -> PToken:
    _check_width(policy, msk.params.n, "policy")
    rng = rng or aoe.default_rng()
    return aoe.p_key_gen(msk, selection_vector(policy, rng), rng)


def authorize_dec(msk: MasterSecretKey, policy: Policy, k: int, rng=None) -> MToken:
    n = msk.params.n
    _check_width(policy, n, "policy")
    if not 1 <= k <= n:
        raise ParameterError(f"column {k} outside 1..{n}")
    rng = rng or aoe.default_rng()
    return aoe.m_key_gen(msk, selection_vector(policy, rng), [k, -1], k, rng)


def row_attributes(row: Sequence[Cell]) -> tuple[list[int], list[list[int]]]:
    shared = [cell_scalar(c) for c in row] + [1]
    specific = [[1, i] for i in range(1, len(row) + 1)]
    return shared, specific


def encrypt_row(mpk: MasterPublicKey, row: Sequence[Cell], rng=None) -> EncryptedRow:
    n = mpk.params.n
    _check_width(row, n, "row")
    rng = rng or aoe.default_rng()
    group = mpk.params.group
    messages = [group.random_gt(rng) for _ in range(n)]
    sealed = tuple(
        envelope.seal(bl.derive_cell_key(m), as_bytes(c), iv=rng.randbytes(envelope.IV_BYTES))
        for m, c in zip(messages, row)
    )
    shared, specific = row_attributes(row)
    ct = aoe.enc(mpk, shared, specific, messages, rng)
    return EncryptedRow(ct, sealed)


def _same_shape(erow: EncryptedRow, params: aoe.AoeParams) -> None:
    if erow.ct.params.triple() != params.triple():
        raise ParameterError(
            f"row parameters {erow.ct.params.triple()} do not match token parameters {params.triple()}")


def select(erow: EncryptedRow, ptoken: PToken) -> bool:
    _same_shape(erow, ptoken.params)
    return aoe.p_dec(erow.ct[0], ptoken)


def decrypt_cell(erow: EncryptedRow, mtoken: MToken, k: int) -> bytes:
    """Open cell ``k``; raises DecryptionFailure when the row does not match."""
    _same_shape(erow, mtoken.params)
    if not 1 <= k <= erow.n:
        raise ParameterError(f"column {k} outside 1..{erow.n}")
    if k != mtoken.k:
        raise ParameterError(f"token opens column {mtoken.k}, not {k}")
    m = aoe.m_dec(erow.ct[0], erow.ct[k], mtoken)
    return envelope.open_sealed(bl.derive_cell_key(m), erow.cells[k - 1])


def try_decrypt_cell(erow: EncryptedRow, mtoken: MToken, k: int) -> bytes | None:
    try:
        return decrypt_cell(erow, mtoken, k)
    except DecryptionFailure:
        return None


# -- serialization -----------------------------------------------------------


def serialize_row(erow: EncryptedRow) -> bytes:
    parts = [MAGIC, bytes([VERSION]), struct.pack(">I", erow.n), aoe.serialize_ciphertext(erow.ct)]
    for c in erow.cells:
        parts.append(struct.pack(">I", len(c)))
        parts.append(c)
    return b"".join(parts)


def deserialize_row(data: bytes) -> EncryptedRow:
    r = Reader(data)
    if r.raw(4) != MAGIC:
        raise FormatError("bad row magic")
    if r.u8() != VERSION:
        raise FormatError("unsupported row version")
    n = r.u32()
    ct = aoe.read_ciphertext(r)
    if ct.params.triple() != (n, n + 1, 2):
        raise FormatError("row ciphertext parameters do not match its width")
    cells = tuple(r.raw(r.u32()) for _ in range(n))
    r.done()
    return EncryptedRow(ct, cells)


def group_element_count(erow: EncryptedRow) -> int:
    return aoe.element_count(erow.ct)
