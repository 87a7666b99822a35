"""Amortized orthogonality encryption.

One encryption carries ``n`` messages.  All of them share an attribute
vector ``X0`` of length ``u`` and each message ``j`` additionally has its own
vector ``Xj`` of length ``v``.  The ciphertext consists of ``n + 1`` basic
ciphertexts: block 0 encrypts ``(X0, y)`` with the identity message and block
``j`` encrypts ``(y, Xj)`` with message ``Mj``.  The random ``y`` is shared by
all blocks and cancels out when a message token combines block 0 and block k.

Exponent conventions (all arithmetic mod p, ``r`` fresh per slot)::

    D = g^(l*w + q*gamma + z_b*alpha_b*x)     K = h^(beta_b*r + lam_b*theta*s)
    E = g^(l*theta + q*delta + z_b*beta_b*x)  L = h^-(alpha_b*r + lam_b*w*s)
    F = g2^-1 * h^-(sum gamma*K_exp + delta*L_exp)
    H = h^(sum r)

With ``alpha_b*theta - beta_b*w = omega`` for every slot the block product
``C * e(A,F) * e(B,H) * prod e(D,K) e(E,L)`` equals
``M * e(g,h)^(omega * sum_b z_b*lam_b * <x, s>)``.  A predicate token is one
block over ``(S0, 0)``; a message token is two blocks over ``(S0, 1)`` and
``(-1, Sk)`` that share ``lam_1, lam_2`` so the ``y`` terms cancel.
"""

from __future__ import annotations

import secrets
import struct
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from . import bilinear as bl
from .bilinear import G1, G2, GT, GroupContext, Reader, Writer
from .errors import FormatError, ParameterError

MAGIC = b"AOE1"
VERSION = 1

KIND_MPK = 1
KIND_MSK = 2
KIND_CIPHERTEXT = 3
KIND_PTOKEN = 4
KIND_MTOKEN = 5
KIND_BASELINE_MPK = 6
KIND_BASELINE_MSK = 7
KIND_BASELINE_CIPHERTEXT = 8
KIND_BASELINE_TOKEN = 9

# magic, version, kind, n, u, v
HEADER_BYTES = 4 + 1 + 1 + 12


def default_rng():
    return secrets.SystemRandom()


@dataclass(frozen=True)
class AoeParams:
    n: int
    u: int
    v: int
    group: GroupContext | None = None

    def __post_init__(self):
        if self.n < 1 or self.u < 1 or self.v < 0:
            raise ParameterError(f"invalid parameters n={self.n} u={self.u} v={self.v}")
        if self.group is None:
            object.__setattr__(self, "group", bl.setup_group(128))

    @property
    def lengths(self) -> tuple[int, ...]:
        return (self.u + 1,) + (self.v + 1,) * self.n

    def triple(self) -> tuple[int, int, int]:
        return (self.n, self.u, self.v)


class SlotSecret(NamedTuple):
    gamma: int
    delta: int
    theta: int
    w: int


class SlotPublic(NamedTuple):
    gamma: G1
    delta: G1
    theta: G1
    w: G1


# slots[i][b]: slot i (0-based) of branch b in {0, 1}
BasicSecretKey = tuple[tuple[SlotSecret, SlotSecret], ...]
BasicPublicKey = tuple[tuple[SlotPublic, SlotPublic], ...]


@dataclass(frozen=True, eq=False)
class MasterPublicKey:
    params: AoeParams
    g: G1
    g_alpha: tuple[G1, G1]
    g_beta: tuple[G1, G1]
    lam: GT
    omega: G1
    keys: tuple[BasicPublicKey, ...]


@dataclass(frozen=True, eq=False)
class MasterSecretKey:
    params: AoeParams
    alpha: tuple[int, int]
    beta: tuple[int, int]
    omega: int
    g: G1
    g_hat: G2
    g2: G2
    keys: tuple[BasicSecretKey, ...]


@dataclass(frozen=True, eq=False)
class BasicCiphertext:
    A: G1
    B: G1
    C: GT
    D: tuple[tuple[G1, G1], ...]
    E: tuple[tuple[G1, G1], ...]

    @property
    def length(self) -> int:
        return len(self.D)


@dataclass(frozen=True, eq=False)
class CumulativeCiphertext:
    params: AoeParams
    blocks: tuple[BasicCiphertext, ...]

    def __getitem__(self, j: int) -> BasicCiphertext:
        return self.blocks[j]


@dataclass(frozen=True, eq=False)
class BlockToken:
    F: G2
    H: G2
    K: tuple[tuple[G2, G2], ...]
    L: tuple[tuple[G2, G2], ...]

    @property
    def length(self) -> int:
        return len(self.K)


@dataclass(frozen=True, eq=False)
class PToken:
    params: AoeParams
    block: BlockToken


@dataclass(frozen=True, eq=False)
class MToken:
    """Message token for index ``k``.

    Carries one (F, H) pair per block because block 0 and block k are
    paired against different basic keys.
    """

    params: AoeParams
    k: int
    shared: BlockToken
    specific: BlockToken


# -- key generation ---------------------------------------------------------


def _basic_keys(length: int, alpha, beta, omega: int, p: int, rng) -> BasicSecretKey:
    inv_alpha = [pow(a, -1, p) for a in alpha]
    slots = []
    for _ in range(length):
        pair = []
        for b in range(2):
            gamma = rng.randrange(p)
            delta = rng.randrange(p)
            w = rng.randrange(p)
            theta = (omega + beta[b] * w) * inv_alpha[b] % p
            pair.append(SlotSecret(gamma, delta, theta, w))
        slots.append(tuple(pair))
    return tuple(slots)


def _public_keys(g: G1, key: BasicSecretKey) -> BasicPublicKey:
    return tuple(
        tuple(SlotPublic(*(bl.g1_pow(g, e) for e in slot)) for slot in pair)
        for pair in key
    )


def _master_scalars(group: GroupContext, rng):
    p = group.order
    alpha = (group.random_scalar(rng, nonzero=True), group.random_scalar(rng, nonzero=True))
    beta = (group.random_scalar(rng), group.random_scalar(rng))
    omega = group.random_scalar(rng)
    g = group.random_g1(rng)
    g_hat = group.random_g2(rng)
    g2 = group.random_g2(rng)
    return p, alpha, beta, omega, g, g_hat, g2


def _public_header(g, alpha, beta, omega, g2):
    g_alpha = (bl.g1_pow(g, alpha[0]), bl.g1_pow(g, alpha[1]))
    g_beta = (bl.g1_pow(g, beta[0]), bl.g1_pow(g, beta[1]))
    return g_alpha, g_beta, bl.pair(g, g2), bl.g1_pow(g, omega)


def par_gen(params: AoeParams, rng=None) -> tuple[MasterPublicKey, MasterSecretKey]:
    rng = rng or default_rng()
    p, alpha, beta, omega, g, g_hat, g2 = _master_scalars(params.group, rng)
    keys = tuple(_basic_keys(ell, alpha, beta, omega, p, rng) for ell in params.lengths)
    g_alpha, g_beta, lam, big_omega = _public_header(g, alpha, beta, omega, g2)
    mpk = MasterPublicKey(
        params=params,
        g=g,
        g_alpha=g_alpha,
        g_beta=g_beta,
        lam=lam,
        omega=big_omega,
        keys=tuple(_public_keys(g, k) for k in keys),
    )
    msk = MasterSecretKey(params, alpha, beta, omega, g, g_hat, g2, keys)
    return mpk, msk


# -- encryption --------------------------------------------------------------


def _encrypt_block(mpk, key: BasicPublicKey, xs: Sequence[int], msg: GT, z, p: int, rng) -> BasicCiphertext:
    l = rng.randrange(p)
    q = rng.randrange(p)
    A = bl.g1_pow(mpk.g, q)
    B = bl.g1_pow(mpk.omega, l)
    C = bl.gt_pow(mpk.lam, q) * msg
    D, E = [], []
    for pair, x in zip(key, xs):
        d_row, e_row = [], []
        for b in range(2):
            pub = pair[b]
            zx = z[b] * x
            d_row.append(bl.g1_multi_pow((pub.w, pub.gamma, mpk.g_alpha[b]), (l, q, zx)))
            e_row.append(bl.g1_multi_pow((pub.theta, pub.delta, mpk.g_beta[b]), (l, q, zx)))
        D.append(tuple(d_row))
        E.append(tuple(e_row))
    return BasicCiphertext(A, B, C, tuple(D), tuple(E))


def _check_scalars(xs, length: int, what: str, p: int) -> list[int]:
    if len(xs) != length:
        raise ParameterError(f"{what}: expected length {length}, got {len(xs)}")
    return [int(x) % p for x in xs]


def _encrypt(mpk: MasterPublicKey, shared, specific, messages, rng, y: int | None = None) -> CumulativeCiphertext:
    params = mpk.params
    p = params.group.order
    x0 = _check_scalars(shared, params.u, "shared attributes", p)
    if len(specific) != params.n:
        raise ParameterError(f"expected {params.n} specific attribute vectors, got {len(specific)}")
    xj = [_check_scalars(x, params.v, f"specific attributes {j + 1}", p) for j, x in enumerate(specific)]
    if len(messages) != params.n:
        raise ParameterError(f"expected {params.n} messages, got {len(messages)}")
    if not all(isinstance(m, GT) for m in messages):
        raise ParameterError("messages must be target-group elements")

    if y is None:
        y = rng.randrange(p)
    z = (rng.randrange(p), rng.randrange(p))
    blocks = [_encrypt_block(mpk, mpk.keys[0], x0 + [y], bl.gt_one(), z, p, rng)]
    for j in range(params.n):
        blocks.append(_encrypt_block(mpk, mpk.keys[j + 1], [y] + xj[j], messages[j], z, p, rng))
    return CumulativeCiphertext(params, tuple(blocks))


def enc(mpk: MasterPublicKey, shared: Sequence[int], specific: Sequence[Sequence[int]],
        messages: Sequence[GT], rng=None) -> CumulativeCiphertext:
    """Encrypt ``messages[j]`` under ``(shared, specific[j])`` for every j."""
    return _encrypt(mpk, shared, specific, messages, rng or default_rng())


# -- tokens --------------------------------------------------------------------


def _block_token(msk, key: BasicSecretKey, ss: Sequence[int], lam, p: int, rng) -> BlockToken:
    h = msk.g_hat
    K, L = [], []
    f_exp = 0
    h_exp = 0
    for pair, s in zip(key, ss, strict=True):
        k_row, l_row = [], []
        for b in range(2):
            sec = pair[b]
            r = rng.randrange(p)
            ke = (msk.beta[b] * r + lam[b] * sec.theta * s) % p
            le = -(msk.alpha[b] * r + lam[b] * sec.w * s) % p
            k_row.append(bl.g2_pow(h, ke))
            l_row.append(bl.g2_pow(h, le))
            f_exp -= sec.gamma * ke + sec.delta * le
            h_exp += r
        K.append(tuple(k_row))
        L.append(tuple(l_row))
    F = bl.g2_pow(h, f_exp) - msk.g2
    H = bl.g2_pow(h, h_exp)
    return BlockToken(F, H, tuple(K), tuple(L))


def _lambdas(p: int, rng) -> tuple[int, int]:
    return (rng.randrange(1, p), rng.randrange(1, p))


def p_key_gen(msk: MasterSecretKey, s0: Sequence[int], rng=None) -> PToken:
    rng = rng or default_rng()
    params = msk.params
    p = params.group.order
    ss = _check_scalars(s0, params.u, "predicate vector", p) + [0]
    return PToken(params, _block_token(msk, msk.keys[0], ss, _lambdas(p, rng), p, rng))


def m_key_gen(msk: MasterSecretKey, s0: Sequence[int], sk: Sequence[int], k: int, rng=None) -> MToken:
    rng = rng or default_rng()
    params = msk.params
    if not 1 <= k <= params.n:
        raise ParameterError(f"index k={k} outside 1..{params.n}")
    p = params.group.order
    shared = _check_scalars(s0, params.u, "shared token vector", p) + [1]
    specific = [p - 1] + _check_scalars(sk, params.v, "specific token vector", p)
    lam = _lambdas(p, rng)
    return MToken(
        params,
        k,
        _block_token(msk, msk.keys[0], shared, lam, p, rng),
        _block_token(msk, msk.keys[k], specific, lam, p, rng),
    )


# -- decryption --------------------------------------------------------------


def _pairing_inputs(ct: BasicCiphertext, tok: BlockToken, left: list, right: list) -> None:
    if ct.length != tok.length:
        raise ParameterError(f"ciphertext has {ct.length} slots, token has {tok.length}")
    left += (ct.A, ct.B)
    right += (tok.F, tok.H)
    for d, e, k, l in zip(ct.D, ct.E, tok.K, tok.L):
        left += (d[0], e[0], d[1], e[1])
        right += (k[0], l[0], k[1], l[1])


def block_product(ct: BasicCiphertext, tok: BlockToken) -> GT:
    left, right = [], []
    _pairing_inputs(ct, tok, left, right)
    return ct.C * bl.pair_product(left, right)


def p_dec(ct0: BasicCiphertext, token: PToken) -> bool:
    return bl.is_identity(block_product(ct0, token.block))


def m_dec(ct0: BasicCiphertext, ctk: BasicCiphertext, token: MToken) -> GT:
    left, right = [], []
    _pairing_inputs(ct0, token.shared, left, right)
    _pairing_inputs(ctk, token.specific, left, right)
    return ct0.C * ctk.C * bl.pair_product(left, right)


# -- non-amortized baseline --------------------------------------------------
#
# Plain orthogonality encryption: every message gets its own basic ciphertext
# over the full vector (X0, Xj) of length u + v, with no shared randomizer.


@dataclass(frozen=True, eq=False)
class BaselinePublicKey:
    params: AoeParams
    g: G1
    g_alpha: tuple[G1, G1]
    g_beta: tuple[G1, G1]
    lam: GT
    omega: G1
    key: BasicPublicKey


@dataclass(frozen=True, eq=False)
class BaselineSecretKey:
    params: AoeParams
    alpha: tuple[int, int]
    beta: tuple[int, int]
    omega: int
    g: G1
    g_hat: G2
    g2: G2
    key: BasicSecretKey


def baseline_par_gen(params: AoeParams, rng=None) -> tuple[BaselinePublicKey, BaselineSecretKey]:
    rng = rng or default_rng()
    p, alpha, beta, omega, g, g_hat, g2 = _master_scalars(params.group, rng)
    key = _basic_keys(params.u + params.v, alpha, beta, omega, p, rng)
    g_alpha, g_beta, lam, big_omega = _public_header(g, alpha, beta, omega, g2)
    mpk = BaselinePublicKey(params, g, g_alpha, g_beta, lam, big_omega, _public_keys(g, key))
    msk = BaselineSecretKey(params, alpha, beta, omega, g, g_hat, g2, key)
    return mpk, msk


def enc_non_amortized(mpk: BaselinePublicKey, shared: Sequence[int], specific: Sequence[Sequence[int]],
                      messages: Sequence[GT], rng=None) -> tuple[BasicCiphertext, ...]:
    rng = rng or default_rng()
    params = mpk.params
    p = params.group.order
    x0 = _check_scalars(shared, params.u, "shared attributes", p)
    if len(specific) != params.n or len(messages) != params.n:
        raise ParameterError(f"expected {params.n} specific vectors and messages")
    out = []
    for j in range(params.n):
        xs = x0 + _check_scalars(specific[j], params.v, f"specific attributes {j + 1}", p)
        z = (rng.randrange(p), rng.randrange(p))
        out.append(_encrypt_block(mpk, mpk.key, xs, messages[j], z, p, rng))
    return tuple(out)


def baseline_key_gen(msk: BaselineSecretKey, s0: Sequence[int], sk: Sequence[int], rng=None) -> BlockToken:
    rng = rng or default_rng()
    params = msk.params
    p = params.group.order
    ss = _check_scalars(s0, params.u, "shared token vector", p) + _check_scalars(
        sk, params.v, "specific token vector", p)
    return _block_token(msk, msk.key, ss, _lambdas(p, rng), p, rng)


def baseline_dec(ct: BasicCiphertext, token: BlockToken) -> GT:
    return block_product(ct, token)


# -- element counts ------------------------------------------------------------


def _basic_ct_elements(ct: BasicCiphertext) -> tuple[int, int]:
    return 2 + 4 * ct.length, 1


def ciphertext_counts(ct: CumulativeCiphertext) -> tuple[int, int]:
    """(source-group count, target-group count)."""
    g = sum(_basic_ct_elements(b)[0] for b in ct.blocks)
    return g, len(ct.blocks)


def element_count(obj) -> int:
    if isinstance(obj, CumulativeCiphertext):
        return sum(ciphertext_counts(obj))
    if isinstance(obj, BasicCiphertext):
        return sum(_basic_ct_elements(obj))
    if isinstance(obj, BlockToken):
        return 2 + 4 * obj.length
    if isinstance(obj, PToken):
        return element_count(obj.block)
    if isinstance(obj, MToken):
        return element_count(obj.shared) + element_count(obj.specific)
    if isinstance(obj, MasterPublicKey):
        return 2 + 5 + sum(8 * len(k) for k in obj.keys)
    if isinstance(obj, (tuple, list)):
        return sum(element_count(x) for x in obj)
    raise TypeError(f"no element count for {type(obj).__name__}")


# -- serialization -----------------------------------------------------------


def _header(kind: int, params: AoeParams) -> Writer:
    return Writer(MAGIC + bytes([VERSION, kind]) + struct.pack(">III", *params.triple()))


def _read_header(data: bytes, kind: int) -> tuple[Reader, AoeParams]:
    r = Reader(data)
    if r.raw(4) != MAGIC:
        raise FormatError("bad magic")
    version, got = r.u8(), r.u8()
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if got != kind:
        raise FormatError(f"expected object kind {kind}, got {got}")
    n, u, v = r.u32(), r.u32(), r.u32()
    try:
        params = AoeParams(n, u, v)
    except ParameterError as exc:
        raise FormatError(str(exc)) from exc
    return r, params


def _write_public_head(w: Writer, mpk) -> None:
    w.gt(mpk.lam)
    w.g1(mpk.omega)
    w.g1(mpk.g)
    for x in mpk.g_alpha + mpk.g_beta:
        w.g1(x)


def _read_public_head(r: Reader):
    lam, omega, g = r.gt(), r.g1(), r.g1()
    ga = (r.g1(), r.g1())
    gb = (r.g1(), r.g1())
    return lam, omega, g, ga, gb


def _write_public_key(w: Writer, key: BasicPublicKey) -> None:
    for pair in key:
        for slot in pair:
            for x in slot:
                w.g1(x)


def _read_public_key(r: Reader, length: int) -> BasicPublicKey:
    return tuple(
        tuple(SlotPublic(r.g1(), r.g1(), r.g1(), r.g1()) for _ in range(2))
        for _ in range(length)
    )


def _write_secret_head(w: Writer, msk) -> None:
    w.g1(msk.g)
    w.g2(msk.g_hat)
    w.g2(msk.g2)
    for x in msk.alpha + msk.beta + (msk.omega,):
        w.scalar(x)


def _read_secret_head(r: Reader):
    g, g_hat, g2 = r.g1(), r.g2(), r.g2()
    alpha = (r.scalar(), r.scalar())
    beta = (r.scalar(), r.scalar())
    return g, g_hat, g2, alpha, beta, r.scalar()


def _write_secret_key(w: Writer, key: BasicSecretKey) -> None:
    for pair in key:
        for slot in pair:
            for x in slot:
                w.scalar(x)


def _read_secret_key(r: Reader, length: int) -> BasicSecretKey:
    return tuple(
        tuple(SlotSecret(r.scalar(), r.scalar(), r.scalar(), r.scalar()) for _ in range(2))
        for _ in range(length)
    )


def _write_basic_ct(w: Writer, ct: BasicCiphertext) -> None:
    w.g1(ct.A)
    w.g1(ct.B)
    w.gt(ct.C)
    for d, e in zip(ct.D, ct.E):
        w.g1(d[0])
        w.g1(e[0])
        w.g1(d[1])
        w.g1(e[1])


def _read_basic_ct(r: Reader, length: int) -> BasicCiphertext:
    A, B, C = r.g1(), r.g1(), r.gt()
    D, E = [], []
    for _ in range(length):
        d1, e1, d2, e2 = r.g1(), r.g1(), r.g1(), r.g1()
        D.append((d1, d2))
        E.append((e1, e2))
    return BasicCiphertext(A, B, C, tuple(D), tuple(E))


def _write_block_token(w: Writer, tok: BlockToken) -> None:
    w.g2(tok.F)
    w.g2(tok.H)
    for k, l in zip(tok.K, tok.L):
        w.g2(k[0])
        w.g2(l[0])
        w.g2(k[1])
        w.g2(l[1])


def _read_block_token(r: Reader, length: int) -> BlockToken:
    F, H = r.g2(), r.g2()
    K, L = [], []
    for _ in range(length):
        k1, l1, k2, l2 = r.g2(), r.g2(), r.g2(), r.g2()
        K.append((k1, k2))
        L.append((l1, l2))
    return BlockToken(F, H, tuple(K), tuple(L))


def serialize_mpk(mpk: MasterPublicKey) -> bytes:
    w = _header(KIND_MPK, mpk.params)
    _write_public_head(w, mpk)
    for key in mpk.keys:
        _write_public_key(w, key)
    return w.getvalue()


def deserialize_mpk(data: bytes) -> MasterPublicKey:
    r, params = _read_header(data, KIND_MPK)
    lam, omega, g, ga, gb = _read_public_head(r)
    keys = tuple(_read_public_key(r, ell) for ell in params.lengths)
    r.done()
    return MasterPublicKey(params, g, ga, gb, lam, omega, keys)


def serialize_msk(msk: MasterSecretKey) -> bytes:
    w = _header(KIND_MSK, msk.params)
    _write_secret_head(w, msk)
    for key in msk.keys:
        _write_secret_key(w, key)
    return w.getvalue()


def deserialize_msk(data: bytes) -> MasterSecretKey:
    r, params = _read_header(data, KIND_MSK)
    g, g_hat, g2, alpha, beta, omega = _read_secret_head(r)
    keys = tuple(_read_secret_key(r, ell) for ell in params.lengths)
    r.done()
    return MasterSecretKey(params, alpha, beta, omega, g, g_hat, g2, keys)


def serialize_ciphertext(ct: CumulativeCiphertext) -> bytes:
    w = _header(KIND_CIPHERTEXT, ct.params)
    for block in ct.blocks:
        _write_basic_ct(w, block)
    return w.getvalue()


def read_ciphertext(r: Reader) -> CumulativeCiphertext:
    """Decode a ciphertext starting at the reader's position."""
    _, params = _read_header(r.raw(HEADER_BYTES), KIND_CIPHERTEXT)
    blocks = tuple(_read_basic_ct(r, ell) for ell in params.lengths)
    return CumulativeCiphertext(params, blocks)


def deserialize_ciphertext(data: bytes) -> CumulativeCiphertext:
    r = Reader(data)
    ct = read_ciphertext(r)
    r.done()
    return ct


def serialize_ptoken(tok: PToken) -> bytes:
    w = _header(KIND_PTOKEN, tok.params)
    _write_block_token(w, tok.block)
    return w.getvalue()


def deserialize_ptoken(data: bytes) -> PToken:
    r, params = _read_header(data, KIND_PTOKEN)
    block = _read_block_token(r, params.u + 1)
    r.done()
    return PToken(params, block)


def serialize_mtoken(tok: MToken) -> bytes:
    w = _header(KIND_MTOKEN, tok.params)
    w.raw(struct.pack(">I", tok.k))
    _write_block_token(w, tok.shared)
    _write_block_token(w, tok.specific)
    return w.getvalue()


def deserialize_mtoken(data: bytes) -> MToken:
    r, params = _read_header(data, KIND_MTOKEN)
    k = r.u32()
    if not 1 <= k <= params.n:
        raise FormatError(f"token index {k} outside 1..{params.n}")
    shared = _read_block_token(r, params.u + 1)
    specific = _read_block_token(r, params.v + 1)
    r.done()
    return MToken(params, k, shared, specific)


def serialize_baseline_mpk(mpk: BaselinePublicKey) -> bytes:
    w = _header(KIND_BASELINE_MPK, mpk.params)
    _write_public_head(w, mpk)
    _write_public_key(w, mpk.key)
    return w.getvalue()


def deserialize_baseline_mpk(data: bytes) -> BaselinePublicKey:
    r, params = _read_header(data, KIND_BASELINE_MPK)
    lam, omega, g, ga, gb = _read_public_head(r)
    key = _read_public_key(r, params.u + params.v)
    r.done()
    return BaselinePublicKey(params, g, ga, gb, lam, omega, key)


def serialize_baseline_msk(msk: BaselineSecretKey) -> bytes:
    w = _header(KIND_BASELINE_MSK, msk.params)
    _write_secret_head(w, msk)
    _write_secret_key(w, msk.key)
    return w.getvalue()


def deserialize_baseline_msk(data: bytes) -> BaselineSecretKey:
    r, params = _read_header(data, KIND_BASELINE_MSK)
    g, g_hat, g2, alpha, beta, omega = _read_secret_head(r)
    key = _read_secret_key(r, params.u + params.v)
    r.done()
    return BaselineSecretKey(params, alpha, beta, omega, g, g_hat, g2, key)


def serialize_baseline_ciphertexts(params: AoeParams, cts: Sequence[BasicCiphertext]) -> bytes:
    if len(cts) != params.n:
        raise ParameterError(f"expected {params.n} ciphertexts, got {len(cts)}")
    w = _header(KIND_BASELINE_CIPHERTEXT, params)
    for ct in cts:
        _write_basic_ct(w, ct)
    return w.getvalue()


def deserialize_baseline_ciphertexts(data: bytes) -> tuple[BasicCiphertext, ...]:
    r, params = _read_header(data, KIND_BASELINE_CIPHERTEXT)
    cts = tuple(_read_basic_ct(r, params.u + params.v) for _ in range(params.n))
    r.done()
    return cts


def serialize_baseline_token(params: AoeParams, tok: BlockToken) -> bytes:
    w = _header(KIND_BASELINE_TOKEN, params)
    _write_block_token(w, tok)
    return w.getvalue()


def deserialize_baseline_token(data: bytes) -> BlockToken:
    r, params = _read_header(data, KIND_BASELINE_TOKEN)
    tok = _read_block_token(r, params.u + params.v)
    r.done()
    return tok
