"""Point files, query files and the serialized index format."""
from __future__ import annotations

import io
import json
import pickle
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

from .core import MlrError

MAGIC_POINTS = b"MLR1"
MAGIC_INDEX = b"MLRIDX"
INDEX_VERSION = 1

PathLike = Union[str, Path]


class FileFormatError(MlrError):
    pass


@dataclass
class PointFile:
    points: List[Tuple[int, int]]
    m: Optional[int]          # declared grid side (binary files only)
    fmt: str                  # "csv" or "bin"


def _parse_int(tok: str, where: str) -> int:
    try:
        v = int(tok.strip())
    except ValueError:
        raise FileFormatError(f"{where}: not an integer: {tok.strip()!r}") from None
    return v


def read_points(path: PathLike) -> PointFile:
    data = Path(path).read_bytes()
    if data[:4] == MAGIC_POINTS:
        return PointFile(*decode_points_bin(data), "bin")
    return PointFile(decode_points_csv(data.decode("utf-8"), str(path)), None, "csv")


def decode_points_csv(text: str, name: str = "<csv>") -> List[Tuple[int, int]]:
    lines = text.splitlines()
    if not lines or lines[0].strip().replace(" ", "") != "x,y":
        raise FileFormatError(f"{name}:1: expected header 'x,y'")
    out = []
    for no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise FileFormatError(f"{name}:{no}: expected 'x,y', got {line.strip()!r}")
        out.append((_parse_int(parts[0], f"{name}:{no}"), _parse_int(parts[1], f"{name}:{no}")))
    return out


def encode_points_csv(points) -> str:
    return "x,y\n" + "".join(f"{x},{y}\n" for x, y in points)


def decode_points_bin(data: bytes) -> Tuple[List[Tuple[int, int]], int]:
    if len(data) < 16 or data[:4] != MAGIC_POINTS:
        raise FileFormatError("binary point file: bad magic or truncated header")
    m, count = struct.unpack_from("<IQ", data, 4)
    need = 16 + 8 * count
    if len(data) != need:
        raise FileFormatError(f"binary point file: expected {need} bytes for {count} points, "
                              f"got {len(data)}")
    flat = struct.unpack_from(f"<{2 * count}I", data, 16)
    pts = list(zip(flat[0::2], flat[1::2]))
    for i, (x, y) in enumerate(pts):
        if not (1 <= x <= m and 1 <= y <= m):
            raise FileFormatError(f"binary point file: point #{i} ({x},{y}) outside [1,{m}]")
    return pts, m


def encode_points_bin(points, m: int) -> bytes:
    flat = [c for p in points for c in p]
    return MAGIC_POINTS + struct.pack("<IQ", m, len(points)) + struct.pack(f"<{len(flat)}I", *flat)


def write_points(path: PathLike, points, m: int, fmt: str = "csv") -> None:
    if fmt == "csv":
        Path(path).write_text(encode_points_csv(points), encoding="utf-8")
    elif fmt == "bin":
        Path(path).write_bytes(encode_points_bin(points, m))
    else:
        raise MlrError(f"unknown point format {fmt!r}")


def read_queries(path: PathLike) -> List[Tuple[int, object]]:
    """``(line number, (a, b, d) or error message)`` per non-empty line."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip().replace(" ", "") != "a,b,d":
        raise FileFormatError(f"{path}:1: expected header 'a,b,d'")
    out: List[Tuple[int, object]] = []
    for no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        try:
            if len(parts) != 3:
                raise FileFormatError(f"expected 'a,b,d', got {line.strip()!r}")
            out.append((no, tuple(_parse_int(t, f"line {no}") for t in parts)))
        except FileFormatError as e:
            out.append((no, str(e)))
    return out


# -- index files ------------------------------------------------------------

def save_index(path: PathLike, header: dict, structure) -> None:
    """``MLRIDX`` + version byte + u32 header length + JSON header + pickled structure."""
    head = json.dumps(header, sort_keys=True).encode("utf-8")
    buf = io.BytesIO()
    buf.write(MAGIC_INDEX)
    buf.write(bytes([INDEX_VERSION]))
    buf.write(struct.pack("<I", len(head)))
    buf.write(head)
    pickle.dump(structure, buf, protocol=pickle.HIGHEST_PROTOCOL)
    Path(path).write_bytes(buf.getvalue())


def load_index(path: PathLike) -> Tuple[dict, object]:
    """Header and structure; the structure is ``None`` when the version does not match."""
    data = Path(path).read_bytes()
    if data[:6] != MAGIC_INDEX:
        raise FileFormatError(f"{path}: not an index file")
    version = data[6]
    (hlen,) = struct.unpack_from("<I", data, 7)
    header = json.loads(data[11:11 + hlen].decode("utf-8"))
    if version != INDEX_VERSION:
        return header, None
    try:
        structure = pickle.loads(data[11 + hlen:])
    except Exception:       # unreadable payload: caller rebuilds from the header
        structure = None
    return header, structure
