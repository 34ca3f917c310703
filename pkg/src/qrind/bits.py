"""MSB-first bit packing for the bytecode stream."""

from __future__ import annotations


class TruncatedStream(ValueError):
    pass


class BitWriter:
    def __init__(self) -> None:
        self._bits: list = []

    def write_bit(self, bit: int) -> None:
        self._bits.append(bit & 1)

    def write_uint(self, value: int, width: int) -> None:
        for shift in range(width - 1, -1, -1):
            self._bits.append((value >> shift) & 1)

    def write_bits(self, bits) -> None:
        self._bits.extend(b & 1 for b in bits)

    def write_bytes(self, data: bytes) -> None:
        for byte in data:
            self.write_uint(byte, 8)

    def bit_length(self) -> int:
        return len(self._bits)

    def to_bytes(self) -> bytes:
        """Zero-fill to a byte boundary and pack MSB-first."""
        out = bytearray()
        acc = 0
        n = 0
        for bit in self._bits:
            acc = (acc << 1) | bit
            n += 1
            if n == 8:
                out.append(acc)
                acc = 0
                n = 0
        if n:
            out.append(acc << (8 - n))
        return bytes(out)


class BitReader:
    def __init__(self, data: bytes) -> None:
        self._data = data
        self._pos = 0  # bit index

    def remaining(self) -> int:
        return len(self._data) * 8 - self._pos

    def rest_is_zero(self) -> bool:
        """Non-consuming check that every remaining bit is 0."""
        pos = self._pos
        for i in range(pos, len(self._data) * 8):
            if (self._data[i >> 3] >> (7 - (i & 7))) & 1:
                return False
        return True

    def read_bit(self) -> int:
        if self._pos >= len(self._data) * 8:
            raise TruncatedStream("ran out of bits")
        byte = self._data[self._pos >> 3]
        bit = (byte >> (7 - (self._pos & 7))) & 1
        self._pos += 1
        return bit

    def read_uint(self, width: int) -> int:
        value = 0
        for _ in range(width):
            value = (value << 1) | self.read_bit()
        return value

    def read_bytes(self, count: int) -> bytes:
        return bytes(self.read_uint(8) for _ in range(count))
