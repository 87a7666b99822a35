"""Append-only encrypted stream file.

Layout::

    header  = "SSTR" | version u8 | n u32 | len u8 | curve id
    record  = length u32 | crc32 u32 | payload
    payload = len u16 | source id (utf-8) | encrypted row

Appends hold an exclusive ``flock`` for the whole write.  A record cut short
at the end of the file is ignored on read; a record whose checksum or body
does not verify is skipped with a warning.
"""

from __future__ import annotations

import fcntl
import logging
import os
import struct
import zlib
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import sss
from .errors import FormatError, ParameterError
from .sss import EncryptedRow

log = logging.getLogger(__name__)

MAGIC = b"SSTR"
VERSION = 1
_REC = struct.Struct(">II")


@dataclass(frozen=True)
class Header:
    n: int
    curve_id: str

    def encode(self) -> bytes:
        cid = self.curve_id.encode("ascii")
        return MAGIC + bytes([VERSION]) + struct.pack(">I", self.n) + bytes([len(cid)]) + cid


@dataclass(frozen=True, eq=False)
class Record:
    source: str
    row: EncryptedRow


def _parse_header(data: bytes) -> tuple[Header, int]:
    if len(data) < 10 or data[:4] != MAGIC:
        raise FormatError("not a stream file")
    if data[4] != VERSION:
        raise FormatError(f"unsupported stream version {data[4]}")
    (n,) = struct.unpack(">I", data[5:9])
    end = 10 + data[9]
    if len(data) < end or n < 1:
        raise FormatError("corrupt stream header")
    return Header(n, data[10:end].decode("ascii")), end


def read_header(path: str | os.PathLike) -> Header:
    with open(path, "rb") as f:
        return _parse_header(f.read(10 + 255))[0]


def encode_record(rec: Record) -> bytes:
    sid = rec.source.encode("utf-8")
    payload = struct.pack(">H", len(sid)) + sid + sss.serialize_row(rec.row)
    return _REC.pack(len(payload), zlib.crc32(payload)) + payload


def _decode_payload(payload: bytes) -> Record:
    (slen,) = struct.unpack(">H", payload[:2])
    source = payload[2:2 + slen].decode("utf-8")
    return Record(source, sss.deserialize_row(payload[2 + slen:]))


def create(path: str | os.PathLike, header: Header, records: Iterable[Record] = (), force: bool = False) -> None:
    """Write a fresh stream file (used for scan output)."""
    mode = "wb" if force else "xb"
    with open(path, mode) as f:
        f.write(header.encode())
        for rec in records:
            _check_width(header, rec.row)
            f.write(encode_record(rec))


def _check_width(header: Header, row: EncryptedRow) -> None:
    if row.n != header.n:
        raise ParameterError(f"row has {row.n} columns, stream has {header.n}")


def append(path: str | os.PathLike, row: EncryptedRow, source: str, curve_id: str) -> None:
    """Append one record, creating the file with a header if it is empty."""
    data = encode_record(Record(source, row))
    fd = os.open(path, os.O_RDWR | os.O_CREAT | os.O_APPEND, 0o644)
    with os.fdopen(fd, "r+b") as f:
        fcntl.flock(f.fileno(), fcntl.LOCK_EX)
        try:
            f.seek(0, os.SEEK_END)
            if f.tell() == 0:
                header = Header(row.n, curve_id)
                f.write(header.encode())
            else:
                f.seek(0)
                header = _parse_header(f.read(10 + 255))[0]
                _check_width(header, row)
                if header.curve_id != curve_id:
                    raise ParameterError(f"stream uses curve {header.curve_id}, row uses {curve_id}")
            f.write(data)
            f.flush()
            os.fsync(f.fileno())
        finally:
            fcntl.flock(f.fileno(), fcntl.LOCK_UN)


def iter_records(path: str | os.PathLike) -> tuple[Header, Iterator[Record]]:
    with open(path, "rb") as f:
        fcntl.flock(f.fileno(), fcntl.LOCK_SH)
        try:
            data = f.read()
        finally:
            fcntl.flock(f.fileno(), fcntl.LOCK_UN)
    header, pos = _parse_header(data)
    return header, _records(data, pos, header)


def _records(data: bytes, pos: int, header: Header) -> Iterator[Record]:
    index = 0
    while pos < len(data):
        if pos + _REC.size > len(data):
            log.warning("ignoring truncated record header at offset %d", pos)
            return
        length, crc = _REC.unpack_from(data, pos)
        body_start = pos + _REC.size
        if body_start + length > len(data):
            log.warning("ignoring truncated record at offset %d", pos)
            return
        payload = data[body_start:body_start + length]
        pos = body_start + length
        index += 1
        if zlib.crc32(payload) != crc:
            log.warning("skipping record %d: checksum mismatch", index)
            continue
        try:
            rec = _decode_payload(payload)
            _check_width(header, rec.row)
        except (FormatError, ParameterError, UnicodeDecodeError, struct.error) as exc:
            log.warning("skipping record %d: %s", index, exc)
            continue
        yield rec


def read_all(path: str | os.PathLike) -> tuple[Header, list[Record]]:
    header, it = iter_records(path)
    return header, list(it)
