"""Repetition code with majority decoding, plus bit/byte/hex conversions.

The repetition factor must be odd so majority votes cannot tie.  The
default factor of 5 matches the rate arithmetic of the synchronized
two-draw system it protects (5 documents per message bit).
"""

from __future__ import annotations

from typing import Sequence

from .errors import ConfigError, ProtocolError


def _check_repetition(r: int) -> None:
    if r < 1 or r % 2 == 0:
        raise ConfigError(f"repetition factor must be odd and >= 1, got {r}")


def enc(bits: Sequence[int], r: int = 5) -> list[int]:
    """Repeat each bit r times, preserving order."""
    _check_repetition(r)
    out: list[int] = []
    for b in bits:
        out.extend([b] * r)
    return out


def dec(bits: Sequence[int], r: int = 5) -> list[int]:
    """Majority-decode blocks of r bits; inverse of enc on clean input."""
    _check_repetition(r)
    if len(bits) % r:
        raise ProtocolError(
            f"coded length {len(bits)} is not a multiple of repetition factor {r}")
    half = r // 2
    return [1 if sum(bits[i:i + r]) > half else 0
            for i in range(0, len(bits), r)]


def bits_from_bytes(data: bytes) -> list[int]:
    """Unpack bytes to bits, most significant bit of each byte first."""
    out = []
    for byte in data:
        for shift in range(7, -1, -1):
            out.append((byte >> shift) & 1)
    return out


def bytes_from_bits(bits: Sequence[int]) -> bytes:
    """Pack bits (MSB first per byte) back into bytes."""
    if len(bits) % 8:
        raise ProtocolError(f"bit count {len(bits)} is not a multiple of 8")
    out = bytearray()
    for i in range(0, len(bits), 8):
        byte = 0
        for b in bits[i:i + 8]:
            byte = (byte << 1) | (b & 1)
        out.append(byte)
    return bytes(out)


def bits_from_hex(text: str) -> list[int]:
    compact = "".join(text.split())
    try:
        return bits_from_bytes(bytes.fromhex(compact))
    except ValueError as e:
        raise ConfigError(f"not valid hex: {text!r}") from e


def hex_from_bits(bits: Sequence[int]) -> str:
    return bytes_from_bits(bits).hex()
