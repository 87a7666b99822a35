"""Pairing group backend.

The scheme is written for a symmetric pairing.  We run it over the
asymmetric BN254 curve provided by mcl (through ``mclbn256``):

* ciphertext-side elements (public key, A, B, D, E) live in G1,
* token-side elements (F, H, K, L and the secret ``g2``) live in G2,
* Lambda, C and messages live in GT.

Every pairing in the scheme pairs a ciphertext element with a token
element, so no value ever has to exist in both source groups.

Scalars are plain Python ints kept in ``[0, p)``; they are converted to mcl
``Fr`` values only at exponentiation time.
"""

from __future__ import annotations

import ctypes
import hashlib
import struct
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from mclbn256 import Fr, G1, G2, GT
from mclbn256 import mclbn256 as _mcl

from .errors import FormatError

_lib = _mcl.lib

# Type names used throughout the package.
GElem = G1
TokenElem = G2
GTElem = GT

CURVE_BN254 = "BN254"

SCALAR_TAG = b"selstream/hash-to-scalar/v1\x00"
CELL_KEY_TAG = b"selstream/cell-key/v1\x00"

_SUPPORTED = {128: CURVE_BN254}


def _curve_order() -> int:
    buf = ctypes.create_string_buffer(128)
    n = _lib.mclBn_getCurveOrder(buf, 128)
    return int(buf.raw[:n])


@dataclass(frozen=True, eq=False)
class GroupContext:
    curve_id: str
    order: int
    g1: G1
    g2: G2
    security_bits: int

    def __eq__(self, other):
        return (
            isinstance(other, GroupContext)
            and self.curve_id == other.curve_id
            and self.order == other.order
            and self.g1 == other.g1
            and self.g2 == other.g2
        )

    def __hash__(self):
        return hash((self.curve_id, self.order))

    def random_scalar(self, rng, nonzero: bool = False) -> int:
        if nonzero:
            return rng.randrange(1, self.order)
        return rng.randrange(self.order)

    def random_g1(self, rng) -> G1:
        return g1_pow(self.g1, self.random_scalar(rng, nonzero=True))

    def random_g2(self, rng) -> G2:
        return g2_pow(self.g2, self.random_scalar(rng, nonzero=True))

    def random_gt(self, rng) -> GT:
        return gt_pow(gt_generator(), self.random_scalar(rng))


def setup_group(security_bits: int = 128) -> GroupContext:
    if security_bits not in _SUPPORTED:
        raise ValueError(f"unsupported security level: {security_bits}")
    return _context(security_bits)


@lru_cache(maxsize=None)
def _context(security_bits: int) -> GroupContext:
    return GroupContext(
        curve_id=_SUPPORTED[security_bits],
        order=_curve_order(),
        g1=G1.base_point(),
        g2=G2.base_point(),
        security_bits=security_bits,
    )


ORDER = _curve_order()


def fr(x: int) -> Fr:
    return Fr(x % ORDER)


def g1_pow(base: G1, x: int) -> G1:
    return base * fr(x)


def g2_pow(base: G2, x: int) -> G2:
    return base * fr(x)


def gt_pow(base: GT, x: int) -> GT:
    return base ** fr(x)


def g1_multi_pow(bases: Sequence[G1], exps: Sequence[int]) -> G1:
    """prod bases[i]^exps[i] in one native call."""
    out = G1()
    n = len(bases)
    _lib.mclBnG1_mulVec(out.d, (G1 * n)(*bases), (Fr * n)(*(fr(e) for e in exps)), n)
    return out


def gt_one() -> GT:
    out = GT()
    _lib.mclBnGT_setInt(out.d12, ctypes.c_int64(1))
    return out


@lru_cache(maxsize=1)
def _gt_gen_bytes() -> bytes:
    ctx = _context(128)
    return pair(ctx.g1, ctx.g2).serialize()


def gt_generator() -> GT:
    return GT.deserialize(_gt_gen_bytes())


def pair(a: G1, b: G2) -> GT:
    return pair_product([a], [b])


def pair_product(left: Sequence[G1], right: Sequence[G2]) -> GT:
    """prod e(left[i], right[i]) with a single final exponentiation."""
    if len(left) != len(right):
        raise ValueError("pairing inputs differ in length")
    n = len(left)
    acc = GT()
    _lib.mclBn_millerLoopVec(acc.d12, (G1 * n)(*left), (G2 * n)(*right), n)
    return acc.final_exp()


def is_identity(x) -> bool:
    if isinstance(x, GT):
        return x == gt_one()
    return bool(x.zero())


def inner(xs: Iterable[int], ys: Iterable[int]) -> int:
    return sum(a * b for a, b in zip(xs, ys, strict=True)) % ORDER


def hash_to_scalar(data: bytes, context: GroupContext | None = None) -> int:
    # SHA-512 rather than SHA-256: p is 254 bits, so reducing a 256-bit
    # digest would be visibly biased.
    order = context.order if context is not None else ORDER
    digest = hashlib.sha512(SCALAR_TAG + bytes(data)).digest()
    return int.from_bytes(digest, "big") % order


def derive_cell_key(m: GT) -> bytes:
    """128-bit symmetric key from the canonical encoding of a GT element."""
    return hashlib.sha256(CELL_KEY_TAG + encode_gt(m)).digest()[:16]


# -- encodings -------------------------------------------------------------

SCALAR_BYTES = 32


def encode_scalar(x: int) -> bytes:
    return (x % ORDER).to_bytes(SCALAR_BYTES, "big")


def decode_scalar(b: bytes) -> int:
    if len(b) != SCALAR_BYTES:
        raise FormatError("scalar must be 32 bytes")
    x = int.from_bytes(b, "big")
    if x >= ORDER:
        raise FormatError("scalar not reduced")
    return x


def encode_g1(x: G1) -> bytes:
    return x.serialize()


def encode_g2(x: G2) -> bytes:
    return x.serialize()


def encode_gt(x: GT) -> bytes:
    return x.serialize()


_DESER = {
    G1: (_lib.mclBnG1_deserialize, "d"),
    G2: (_lib.mclBnG2_deserialize, "d2"),
    GT: (_lib.mclBnGT_deserialize, "d12"),
}


def _decode(cls, b: bytes, size: int):
    if len(b) != size:
        raise FormatError(f"{cls.__name__} encoding must be {size} bytes, got {len(b)}")
    fn, field = _DESER[cls]
    out = cls()
    if fn(getattr(out, field), bytes(b), size) != size:
        raise FormatError(f"invalid {cls.__name__} encoding")
    if cls is not GT and not out.valid():
        raise FormatError(f"{cls.__name__} point not in the prime-order subgroup")
    return out


def decode_g1(b: bytes) -> G1:
    return _decode(G1, b, 32)


def decode_g2(b: bytes) -> G2:
    return _decode(G2, b, 64)


def decode_gt(b: bytes) -> GT:
    return _decode(GT, b, 384)


class Writer:
    """Accumulates 2-byte-length-prefixed items."""

    def __init__(self, head: bytes = b""):
        self._parts = [head]
        self.items = 0

    def raw(self, b: bytes) -> None:
        self._parts.append(b)

    def item(self, b: bytes) -> None:
        if len(b) > 0xFFFF:
            raise ValueError("item too long")
        self._parts.append(struct.pack(">H", len(b)))
        self._parts.append(b)
        self.items += 1

    def g1(self, x: G1) -> None:
        self.item(encode_g1(x))

    def g2(self, x: G2) -> None:
        self.item(encode_g2(x))

    def gt(self, x: GT) -> None:
        self.item(encode_gt(x))

    def scalar(self, x: int) -> None:
        self.item(encode_scalar(x))

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class Reader:
    def __init__(self, data: bytes, offset: int = 0):
        self._data = memoryview(data)
        self.pos = offset

    def raw(self, n: int) -> bytes:
        if self.pos + n > len(self._data):
            raise FormatError("truncated input")
        out = bytes(self._data[self.pos:self.pos + n])
        self.pos += n
        return out

    def u8(self) -> int:
        return self.raw(1)[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.raw(4))[0]

    def item(self) -> bytes:
        (n,) = struct.unpack(">H", self.raw(2))
        return self.raw(n)

    def g1(self) -> G1:
        return decode_g1(self.item())

    def g2(self) -> G2:
        return decode_g2(self.item())

    def gt(self) -> GT:
        return decode_gt(self.item())

    def scalar(self) -> int:
        return decode_scalar(self.item())

    def done(self) -> None:
        if self.pos != len(self._data):
            raise FormatError("trailing bytes after object")
