"""Tensor export formats.

CSV: one row per entry, columns ``a1, ..., aM, value``; the a_k are Pauli
labels (1..3 for correlation tensors, 0..3 for extended tensors), rows in
C order, values with 17 significant digits.

Binary: a 16-byte little-endian header

    bytes 0-3   magic b"CTNS"
    bytes 4-7   uint32 format version (1)
    bytes 8-11  uint32 tensor order M
    bytes 12-15 uint32 mode dimension (3 or 4)

followed by 3^M or 4^M little-endian float64 entries in C order.
"""
from __future__ import annotations

import csv
import itertools
import struct
from pathlib import Path

import numpy as np

from .tensor import CorrTensor, ExtendedTensor

MAGIC = b"CTNS"
VERSION = 1
_HEADER = struct.Struct("<4sIII")


def _parts(t):
    if isinstance(t, CorrTensor):
        return t.entries, 1
    if isinstance(t, ExtendedTensor):
        return t.entries, 0
    raise TypeError(f"cannot export {type(t).__name__}")


def write_csv(t, path) -> None:
    entries, first = _parts(t)
    order, dim = entries.ndim, entries.shape[0] if entries.ndim else 1
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"a{k}" for k in range(1, order + 1)] + ["value"])
        for idx, v in zip(itertools.product(range(dim), repeat=order), entries.ravel()):
            w.writerow([i + first for i in idx] + [format(float(v), ".17g")])


def to_bytes(t) -> bytes:
    entries, _ = _parts(t)
    header = _HEADER.pack(MAGIC, VERSION, entries.ndim, entries.shape[0])
    return header + np.ascontiguousarray(entries, dtype="<f8").tobytes()


def write_binary(t, path) -> None:
    Path(path).write_bytes(to_bytes(t))


def from_bytes(data: bytes):
    magic, version, order, dim = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError("not a CTNS tensor file")
    if version != VERSION:
        raise ValueError(f"unsupported CTNS version {version}")
    entries = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    if entries.size != dim**order:
        raise ValueError("truncated CTNS payload")
    entries = entries.reshape((dim,) * order).astype(float)
    if dim == 3:
        return CorrTensor(tuple(range(1, order + 1)), entries)
    if dim == 4:
        return ExtendedTensor(entries)
    raise ValueError(f"unsupported mode dimension {dim}")


def read_binary(path):
    return from_bytes(Path(path).read_bytes())
