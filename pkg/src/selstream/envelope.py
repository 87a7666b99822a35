"""AES-128-CBC with PKCS#7 padding, then HMAC-SHA256 over IV and ciphertext.

Record layout: ``iv (16) || ciphertext || tag (32)``.
"""

from __future__ import annotations

import hashlib
import hmac
import os

from cryptography.hazmat.primitives import padding
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .errors import DecryptionFailure

IV_BYTES = 16
TAG_BYTES = 32
BLOCK_BYTES = 16
KEY_BYTES = 16


def _subkeys(key: bytes) -> tuple[bytes, bytes]:
    if len(key) != KEY_BYTES:
        raise ValueError(f"envelope key must be {KEY_BYTES} bytes")
    enc = hmac.new(key, b"enc", hashlib.sha256).digest()[:16]
    mac = hmac.new(key, b"mac", hashlib.sha256).digest()
    return enc, mac


def sealed_size(plaintext_len: int) -> int:
    padded = (plaintext_len // BLOCK_BYTES + 1) * BLOCK_BYTES
    return IV_BYTES + padded + TAG_BYTES


def seal(key: bytes, plaintext: bytes, iv: bytes | None = None) -> bytes:
    enc_key, mac_key = _subkeys(key)
    iv = os.urandom(IV_BYTES) if iv is None else iv
    if len(iv) != IV_BYTES:
        raise ValueError("IV must be 16 bytes")
    padder = padding.PKCS7(128).padder()
    padded = padder.update(plaintext) + padder.finalize()
    encryptor = Cipher(algorithms.AES(enc_key), modes.CBC(iv)).encryptor()
    body = iv + encryptor.update(padded) + encryptor.finalize()
    return body + hmac.new(mac_key, body, hashlib.sha256).digest()


def open_sealed(key: bytes, blob: bytes) -> bytes:
    enc_key, mac_key = _subkeys(key)
    if len(blob) < IV_BYTES + BLOCK_BYTES + TAG_BYTES or (len(blob) - IV_BYTES - TAG_BYTES) % BLOCK_BYTES:
        raise DecryptionFailure("envelope has an impossible length")
    body, tag = blob[:-TAG_BYTES], blob[-TAG_BYTES:]
    if not hmac.compare_digest(tag, hmac.new(mac_key, body, hashlib.sha256).digest()):
        raise DecryptionFailure("envelope tag mismatch")
    decryptor = Cipher(algorithms.AES(enc_key), modes.CBC(body[:IV_BYTES])).decryptor()
    padded = decryptor.update(body[IV_BYTES:]) + decryptor.finalize()
    unpadder = padding.PKCS7(128).unpadder()
    try:
        return unpadder.update(padded) + unpadder.finalize()
    except ValueError as exc:
        raise DecryptionFailure("bad padding") from exc
