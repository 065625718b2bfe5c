"""Named-tensor container file: JSON header table + raw little-endian data."""

from __future__ import annotations

import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from railcause.errors import DataError

MAGIC = b"RCTENSOR"
FORMAT_VERSION = 1

_DTYPES = {"float64": "<f8", "float32": "<f4", "int64": "<i8"}


def save_tensors(path: str | Path, tensors: dict[str, np.ndarray]) -> None:
    """Write named arrays atomically (temp file + rename).

    The header records a version tag plus (name, shape, dtype) for each
    tensor; payload bytes follow in header order, little-endian.
    """
    entries = []
    blobs = []
    for name, arr in tensors.items():
        dtype = str(arr.dtype)
        if dtype not in _DTYPES:
            raise ValueError(f"unsupported dtype {dtype} for tensor {name!r}")
        entries.append({"name": name, "shape": list(arr.shape), "dtype": dtype})
        blobs.append(np.ascontiguousarray(arr, dtype=_DTYPES[dtype]).tobytes())
    header = json.dumps({"version": FORMAT_VERSION, "tensors": entries}, sort_keys=True).encode()
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<I", len(header)))
            fh.write(header)
            for blob in blobs:
                fh.write(blob)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_tensors(path: str | Path) -> dict[str, np.ndarray]:
    """Read a container written by :func:`save_tensors`."""
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise DataError(f"{path}: not a tensor container (bad magic)")
        (header_len,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(header_len))
        if header.get("version") != FORMAT_VERSION:
            raise DataError(f"{path}: unsupported container version {header.get('version')}")
        out: dict[str, np.ndarray] = {}
        for entry in header["tensors"]:
            shape = tuple(entry["shape"])
            dtype = np.dtype(_DTYPES[entry["dtype"]])
            count = int(np.prod(shape)) if shape else 1
            data = fh.read(count * dtype.itemsize)
            if len(data) != count * dtype.itemsize:
                raise DataError(f"{path}: truncated data for tensor {entry['name']!r}")
            out[entry["name"]] = np.frombuffer(data, dtype=dtype).reshape(shape).copy()
    return out
