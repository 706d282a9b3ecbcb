"""Bit strings with exact lengths, written and read LSB-first."""
from __future__ import annotations

from dataclasses import dataclass


def width(count: int) -> int:
    """Bits needed to store one of `count` distinct values (0 when count <= 1)."""
    return (count - 1).bit_length() if count > 1 else 0


@dataclass(frozen=True)
class Bits:
    value: int = 0
    length: int = 0

    def __post_init__(self):
        if self.length < 0 or self.value < 0 or self.value >> self.length:
            raise ValueError("value does not fit in length")

    def __len__(self):
        return self.length

    def to_bytes(self) -> bytes:
        return self.value.to_bytes((self.length + 7) // 8, "little")

    @classmethod
    def from_bytes(cls, data: bytes, length: int) -> "Bits":
        if len(data) != (length + 7) // 8:
            raise ValueError("byte count does not match bit length")
        return cls(int.from_bytes(data, "little"), length)

    def __str__(self):
        # first written bit first
        return "".join(str((self.value >> i) & 1) for i in range(self.length))


class BitWriter:
    def __init__(self):
        self._value = 0
        self._length = 0

    def write(self, value: int, nbits: int) -> "BitWriter":
        if nbits < 0 or value < 0 or value >> nbits:
            raise ValueError(f"{value} does not fit in {nbits} bits")
        self._value |= value << self._length
        self._length += nbits
        return self

    def write_bits(self, bits: Bits) -> "BitWriter":
        return self.write(bits.value, bits.length)

    def getvalue(self) -> Bits:
        return Bits(self._value, self._length)


class BitReader:
    def __init__(self, bits: Bits):
        self._bits = bits
        self._pos = 0

    @property
    def remaining(self) -> int:
        return self._bits.length - self._pos

    def read(self, nbits: int) -> int:
        if nbits > self.remaining:
            raise ValueError("read past end of bit string")
        out = (self._bits.value >> self._pos) & ((1 << nbits) - 1)
        self._pos += nbits
        return out

    def read_bits(self, nbits: int) -> Bits:
        return Bits(self.read(nbits), nbits)

    def expect_end(self):
        if self.remaining:
            raise ValueError(f"{self.remaining} trailing bits")
