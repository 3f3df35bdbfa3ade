"""Serialization: the SPKS spike-stream container and portable image I/O.

SPKS container, version 1 (all integers little-endian):

    offset  size  field
    0       4     magic "SPKS"
    4       2     version (u16) == 1
    6       2     flags  (u16); bit 0: v_th field present
    8       4     width  (u32) >= 1
    12      4     height (u32) >= 1
    16      4     t_count (u32) >= 1
    20      4     v_th (f32), only if flags bit 0 is set
    then    t_count frames of ceil(width * height / 8) bytes each

Frame payload bits are row-major, MSB-first, zero-padded to the byte
boundary per frame: exactly the in-memory SpikeStream layout, so packing
is a straight copy.  Loading is strict by default and rejects nonzero
padding bits; pass strict=False to tolerate them.

Images: binary PGM (P5) for 8-bit grayscale, PPM (P6) for 8-bit RGB, and
SPKF for raw float32 rasters (header: magic "SPKF", width u32, height u32,
channels u32, then planar little-endian f32 planes).  8-bit bytes map to
unit floats as byte / 255; export quantizes by rounding half away from
zero.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import (
    BadMagicError,
    DirtyPaddingError,
    DomainError,
    FormatError,
    TruncatedError,
    UnsupportedVersionError,
)
from .spike_model import SpikeStream
from .synthesis import Image

SPKS_MAGIC = b"SPKS"
SPKS_VERSION = 1
FLAG_VTH = 0x0001

SPKF_MAGIC = b"SPKF"

_SPKS_HEADER = struct.Struct("<4sHHIII")
_SPKF_HEADER = struct.Struct("<4sIII")
_VTH = struct.Struct("<f")


def save_spks(stream: SpikeStream, v_th: Optional[float] = None) -> bytes:
    """Serialize a stream (and optionally its simulation threshold)."""
    flags = 0
    tail = b""
    if v_th is not None:
        if not np.isfinite(v_th) or v_th <= 0:
            raise DomainError(f"v_th must be a finite positive real, got {v_th}")
        flags |= FLAG_VTH
        tail = _VTH.pack(v_th)
    header = _SPKS_HEADER.pack(
        SPKS_MAGIC, SPKS_VERSION, flags, stream.width, stream.height, stream.t_count
    )
    return header + tail + stream.payload.tobytes()


def load_spks(data: bytes, strict: bool = True) -> tuple[SpikeStream, Optional[float]]:
    """Parse SPKS bytes back into (stream, v_th or None)."""
    if len(data) < _SPKS_HEADER.size:
        raise TruncatedError(
            f"container too short for header: expected >= {_SPKS_HEADER.size} bytes, got {len(data)}"
        )
    magic, version, flags, width, height, t_count = _SPKS_HEADER.unpack_from(data, 0)
    if magic != SPKS_MAGIC:
        raise BadMagicError(f"bad magic {magic!r}, expected {SPKS_MAGIC!r}")
    if version != SPKS_VERSION:
        raise UnsupportedVersionError(f"unsupported version {version}, expected {SPKS_VERSION}")
    if flags & ~FLAG_VTH:
        raise FormatError(f"unknown flag bits 0x{flags & ~FLAG_VTH:04x}")
    if width < 1 or height < 1 or t_count < 1:
        raise FormatError(f"dimensions must be >= 1, got {width}x{height}x{t_count}")
    offset = _SPKS_HEADER.size
    v_th = None
    if flags & FLAG_VTH:
        if len(data) < offset + _VTH.size:
            raise TruncatedError(
                f"container too short for v_th field: expected >= {offset + _VTH.size} bytes, got {len(data)}"
            )
        (v_th,) = _VTH.unpack_from(data, offset)
        v_th = float(v_th)
        offset += _VTH.size
    frame_nbytes = (width * height + 7) // 8
    expected = offset + t_count * frame_nbytes
    if len(data) != expected:
        raise TruncatedError(f"payload size mismatch: expected {expected} bytes, got {len(data)}")
    payload = np.frombuffer(data, dtype=np.uint8, offset=offset).reshape(t_count, frame_nbytes)
    pad_bits = frame_nbytes * 8 - width * height
    if pad_bits and np.unpackbits(payload, axis=1)[:, width * height:].any():
        if strict:
            raise DirtyPaddingError("nonzero frame padding bits")
        mask = np.uint8(0xFF << pad_bits & 0xFF)
        payload = payload.copy()
        payload[:, -1] &= mask
    return SpikeStream(width, height, t_count, payload.copy()), v_th


def read_spks(path: Union[str, Path], strict: bool = True) -> tuple[SpikeStream, Optional[float]]:
    return load_spks(Path(path).read_bytes(), strict=strict)


def write_spks(path: Union[str, Path], stream: SpikeStream, v_th: Optional[float] = None) -> None:
    Path(path).write_bytes(save_spks(stream, v_th))


def _encode_pnm(image: Image) -> bytes:
    u8 = image.to_u8()
    if image.channels == 1:
        header = b"P5\n%d %d\n255\n" % (image.width, image.height)
    else:
        header = b"P6\n%d %d\n255\n" % (image.width, image.height)
    return header + u8.tobytes()


def _encode_spkf(image: Image) -> bytes:
    header = _SPKF_HEADER.pack(SPKF_MAGIC, image.width, image.height, image.channels)
    if image.channels == 1:
        planes = image.values.astype("<f4")
    else:
        planes = np.moveaxis(image.values, 2, 0).astype("<f4")
    return header + planes.tobytes()


def save_image(image: Image, path: Union[str, Path]) -> None:
    """Write by extension: .pgm (gray), .ppm (RGB), or .spkf (float32)."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        if image.channels != 1:
            raise DomainError("PGM holds grayscale images; use .ppm for RGB")
        path.write_bytes(_encode_pnm(image))
    elif suffix == ".ppm":
        if image.channels != 3:
            raise DomainError("PPM holds RGB images; use .pgm for grayscale")
        path.write_bytes(_encode_pnm(image))
    elif suffix == ".spkf":
        path.write_bytes(_encode_spkf(image))
    else:
        raise DomainError(f"unsupported image extension {suffix!r} (use .pgm, .ppm, or .spkf)")


def _parse_pnm_header(data: bytes) -> tuple[bytes, int, int, int, int]:
    """Return (kind, width, height, maxval, payload offset); skips # comments."""
    kind = data[:2]
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token.isdigit():
            raise FormatError(f"malformed PNM header token {token!r}")
        fields.append(int(token))
    if pos >= len(data):
        raise TruncatedError("PNM header ends before payload")
    pos += 1  # single whitespace byte after maxval
    return kind, fields[0], fields[1], fields[2], pos


def _decode_pnm(data: bytes) -> Image:
    kind, width, height, maxval, offset = _parse_pnm_header(data)
    if maxval != 255:
        raise FormatError(f"unsupported maxval {maxval} (only 255)")
    if width < 1 or height < 1:
        raise FormatError(f"dimensions must be >= 1, got {width}x{height}")
    channels = 1 if kind == b"P5" else 3
    expected = offset + width * height * channels
    if len(data) < expected:
        raise TruncatedError(f"payload size mismatch: expected {expected} bytes, got {len(data)}")
    raw = np.frombuffer(data, dtype=np.uint8, offset=offset, count=width * height * channels)
    shape = (height, width) if channels == 1 else (height, width, 3)
    return Image.from_u8(raw.reshape(shape))


def _decode_spkf(data: bytes) -> Image:
    if len(data) < _SPKF_HEADER.size:
        raise TruncatedError(
            f"container too short for header: expected >= {_SPKF_HEADER.size} bytes, got {len(data)}"
        )
    magic, width, height, channels = _SPKF_HEADER.unpack_from(data, 0)
    if magic != SPKF_MAGIC:
        raise BadMagicError(f"bad magic {magic!r}, expected {SPKF_MAGIC!r}")
    if channels not in (1, 3):
        raise FormatError(f"channels must be 1 or 3, got {channels}")
    if width < 1 or height < 1:
        raise FormatError(f"dimensions must be >= 1, got {width}x{height}")
    expected = _SPKF_HEADER.size + 4 * width * height * channels
    if len(data) != expected:
        raise TruncatedError(f"payload size mismatch: expected {expected} bytes, got {len(data)}")
    raw = np.frombuffer(data, dtype="<f4", offset=_SPKF_HEADER.size)
    if channels == 1:
        values = raw.reshape(height, width)
    else:
        values = np.moveaxis(raw.reshape(3, height, width), 0, 2)
    return Image(values.astype(np.float64))


def load_image(source: Union[str, Path, bytes]) -> Image:
    """Read a PGM, PPM, or SPKF image from a path or raw bytes."""
    data = source if isinstance(source, bytes) else Path(source).read_bytes()
    if data[:2] in (b"P5", b"P6"):
        return _decode_pnm(data)
    if data[:4] == SPKF_MAGIC:
        return _decode_spkf(data)
    raise BadMagicError(f"unrecognized image magic {data[:4]!r}")
