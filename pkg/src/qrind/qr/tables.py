"""Constants and derived geometry for QR symbol versions 1..40.

Block structure and error-correction strengths follow ISO/IEC 18004:2015;
the module-count arithmetic is the standard closed form.
"""

from __future__ import annotations

import enum


class EcLevel(enum.Enum):
    LOW = "L"
    MEDIUM = "M"
    QUARTILE = "Q"
    HIGH = "H"

    @property
    def ordinal(self) -> int:
        return "LMQH".index(self.value)

    @property
    def format_bits(self) -> int:
        return {"L": 1, "M": 0, "Q": 3, "H": 2}[self.value]


# Indexed [ec.ordinal][version]; slot 0 unused.
ECC_PER_BLOCK = (
    (0, 7, 10, 15, 20, 26, 18, 20, 24, 30, 18, 20, 24, 26, 30, 22, 24, 28, 30, 28,
     28, 28, 28, 30, 30, 26, 28, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30),
    (0, 10, 16, 26, 18, 24, 16, 18, 22, 22, 26, 30, 22, 22, 24, 24, 28, 28, 26, 26,
     26, 26, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28),
    (0, 13, 22, 18, 26, 18, 24, 18, 22, 20, 24, 28, 26, 24, 20, 30, 24, 28, 28, 26,
     30, 28, 30, 30, 30, 30, 28, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30),
    (0, 17, 28, 22, 16, 22, 28, 26, 26, 24, 28, 24, 28, 22, 24, 24, 30, 28, 28, 26,
     28, 30, 24, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30),
)

NUM_BLOCKS = (
    (0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 4, 4, 4, 4, 4, 6, 6, 6, 6, 7,
     8, 8, 9, 9, 10, 12, 12, 12, 13, 14, 15, 16, 17, 18, 19, 19, 20, 21, 22, 24, 25),
    (0, 1, 1, 1, 2, 2, 4, 4, 4, 5, 5, 5, 8, 9, 9, 10, 10, 11, 13, 14,
     16, 17, 17, 18, 20, 21, 23, 25, 26, 28, 29, 31, 33, 35, 37, 38, 40, 43, 45, 47, 49),
    (0, 1, 1, 2, 2, 4, 4, 6, 6, 8, 8, 8, 10, 12, 16, 12, 17, 16, 18, 21,
     20, 23, 23, 25, 27, 29, 34, 34, 35, 38, 40, 43, 45, 48, 51, 53, 56, 59, 62, 65, 68),
    (0, 1, 1, 2, 4, 4, 4, 5, 6, 8, 8, 11, 11, 16, 16, 18, 16, 19, 21, 25,
     25, 25, 34, 30, 32, 35, 37, 40, 42, 45, 48, 51, 54, 57, 60, 63, 66, 70, 74, 77, 81),
)

MIN_VERSION = 1
MAX_VERSION = 40


def size_for(version: int) -> int:
    return version * 4 + 17


def raw_data_modules(version: int) -> int:
    """Modules available for codewords (includes 0..7 remainder bits)."""
    _check_version(version)
    result = (16 * version + 128) * version + 64
    if version >= 2:
        numalign = version // 7 + 2
        result -= (25 * numalign - 10) * numalign - 55
        if version >= 7:
            result -= 36
    return result


def total_codewords(version: int) -> int:
    return raw_data_modules(version) // 8


def data_codewords(version: int, ec: EcLevel) -> int:
    _check_version(version)
    return (
        total_codewords(version)
        - ECC_PER_BLOCK[ec.ordinal][version] * NUM_BLOCKS[ec.ordinal][version]
    )


def count_field_bits(version: int) -> int:
    """Width of the byte-mode character count field."""
    return 8 if version <= 9 else 16


def capacity(version: int, ec: EcLevel) -> int:
    """Byte-mode payload capacity in bytes."""
    bits = data_codewords(version, ec) * 8 - 4 - count_field_bits(version)
    return bits // 8


def smallest_version(payload_len: int, ec: EcLevel) -> int | None:
    for version in range(MIN_VERSION, MAX_VERSION + 1):
        if capacity(version, ec) >= payload_len:
            return version
    return None


def alignment_positions(version: int) -> list:
    _check_version(version)
    if version == 1:
        return []
    numalign = version // 7 + 2
    if version == 32:
        step = 26
    else:
        step = (version * 4 + numalign * 2 + 1) // (2 * numalign - 2) * 2
    result = [6]
    pos = version * 4 + 10
    for _ in range(numalign - 1):
        result.insert(1, pos)
        pos -= step
    return result


def block_structure(version: int, ec: EcLevel) -> list:
    """Per-block (data_len, ecc_len) in transmission order."""
    numblocks = NUM_BLOCKS[ec.ordinal][version]
    ecclen = ECC_PER_BLOCK[ec.ordinal][version]
    raw = total_codewords(version)
    numshort = numblocks - raw % numblocks
    shortlen = raw // numblocks
    blocks = []
    for i in range(numblocks):
        datalen = shortlen - ecclen + (0 if i < numshort else 1)
        blocks.append((datalen, ecclen))
    return blocks


MASKS = (
    lambda x, y: (x + y) % 2 == 0,
    lambda x, y: y % 2 == 0,
    lambda x, y: x % 3 == 0,
    lambda x, y: (x + y) % 3 == 0,
    lambda x, y: (x // 3 + y // 2) % 2 == 0,
    lambda x, y: x * y % 2 + x * y % 3 == 0,
    lambda x, y: (x * y % 2 + x * y % 3) % 2 == 0,
    lambda x, y: ((x + y) % 2 + x * y % 3) % 2 == 0,
)


def format_info_code(ec: EcLevel, mask: int) -> int:
    """15-bit format sequence: 5 data bits + BCH(15,5) remainder, masked."""
    data = ec.format_bits << 3 | mask
    rem = data
    for _ in range(10):
        rem = (rem << 1) ^ ((rem >> 9) * 0x537)
    return (data << 10 | rem) ^ 0x5412


def version_info_code(version: int) -> int:
    """18-bit version sequence: 6 data bits + BCH(18,6) remainder."""
    rem = version
    for _ in range(12):
        rem = (rem << 1) ^ ((rem >> 11) * 0x1F25)
    return version << 12 | rem


def _check_version(version: int) -> None:
    if not MIN_VERSION <= version <= MAX_VERSION:
        raise ValueError(f"QR version {version} outside [1, 40]")
