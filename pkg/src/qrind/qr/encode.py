"""Byte-mode QR symbol construction.

build_matrix() returns the module grid for a payload: segment bits, pad
codewords, per-block Reed-Solomon parity, interleaving, function
patterns, and the penalty-minimizing mask.
"""

from __future__ import annotations

from . import tables
from .gf256 import rs_generator, rs_remainder
from .tables import EcLevel


class CapacityExceeded(ValueError):
    def __init__(self, message: str, smallest_fitting: int | None = None):
        self.smallest_fitting = smallest_fitting
        super().__init__(message)


def _segment_bits(payload: bytes, version: int) -> list:
    bits = [0, 1, 0, 0]  # byte mode
    count_bits = tables.count_field_bits(version)
    for shift in range(count_bits - 1, -1, -1):
        bits.append((len(payload) >> shift) & 1)
    for byte in payload:
        for shift in range(7, -1, -1):
            bits.append((byte >> shift) & 1)
    return bits


def _data_codewords(payload: bytes, version: int, ec: EcLevel) -> bytes:
    bits = _segment_bits(payload, version)
    cap_bits = tables.data_codewords(version, ec) * 8
    assert len(bits) <= cap_bits
    # terminator, then pad to a byte, then alternating pad codewords
    bits.extend([0] * min(4, cap_bits - len(bits)))
    bits.extend([0] * (-len(bits) % 8))
    out = bytearray()
    for i in range(0, len(bits), 8):
        byte = 0
        for b in bits[i : i + 8]:
            byte = byte << 1 | b
        out.append(byte)
    pad = (0xEC, 0x11)
    i = 0
    while len(out) < cap_bits // 8:
        out.append(pad[i % 2])
        i += 1
    return bytes(out)


def _interleave(data: bytes, version: int, ec: EcLevel) -> bytes:
    structure = tables.block_structure(version, ec)
    gen = rs_generator(structure[0][1])
    blocks = []
    eccs = []
    pos = 0
    for datalen, ecclen in structure:
        chunk = data[pos : pos + datalen]
        pos += datalen
        blocks.append(chunk)
        eccs.append(rs_remainder(chunk, gen))
    assert pos == len(data)
    out = bytearray()
    for i in range(max(len(b) for b in blocks)):
        for b in blocks:
            if i < len(b):
                out.append(b[i])
    for i in range(structure[0][1]):
        for e in eccs:
            out.append(e[i])
    return bytes(out)


def function_pattern_map(version: int) -> list:
    """Boolean grid marking finder/timing/alignment/format/version areas."""
    size = tables.size_for(version)
    func = [[False] * size for _ in range(size)]

    def mark(x: int, y: int) -> None:
        if 0 <= x < size and 0 <= y < size:
            func[y][x] = True

    for i in range(size):
        mark(6, i)
        mark(i, 6)
    for cx, cy in ((3, 3), (size - 4, 3), (3, size - 4)):
        for dy in range(-4, 5):
            for dx in range(-4, 5):
                mark(cx + dx, cy + dy)
    positions = tables.alignment_positions(version)
    n = len(positions)
    for i in range(n):
        for j in range(n):
            if (i, j) in ((0, 0), (0, n - 1), (n - 1, 0)):
                continue
            for dy in range(-2, 3):
                for dx in range(-2, 3):
                    mark(positions[i] + dx, positions[j] + dy)
    # format info areas (both copies) and the dark module
    for i in range(9):
        mark(8, i)
        mark(i, 8)
    for i in range(8):
        mark(size - 1 - i, 8)
        mark(8, size - 1 - i)
    if version >= 7:
        for i in range(18):
            mark(size - 11 + i % 3, i // 3)
            mark(i // 3, size - 11 + i % 3)
    return func


def _draw_function_patterns(grid: list, version: int) -> None:
    size = len(grid)

    def put(x: int, y: int, dark: bool) -> None:
        if 0 <= x < size and 0 <= y < size:
            grid[y][x] = dark

    for i in range(size):
        put(6, i, i % 2 == 0)
        put(i, 6, i % 2 == 0)
    for cx, cy in ((3, 3), (size - 4, 3), (3, size - 4)):
        for dy in range(-4, 5):
            for dx in range(-4, 5):
                put(cx + dx, cy + dy, max(abs(dx), abs(dy)) not in (2, 4))
    positions = tables.alignment_positions(version)
    n = len(positions)
    for i in range(n):
        for j in range(n):
            if (i, j) in ((0, 0), (0, n - 1), (n - 1, 0)):
                continue
            for dy in range(-2, 3):
                for dx in range(-2, 3):
                    put(positions[i] + dx, positions[j] + dy,
                        max(abs(dx), abs(dy)) != 1)
    if version >= 7:
        code = tables.version_info_code(version)
        for i in range(18):
            bit = code >> i & 1 == 1
            put(size - 11 + i % 3, i // 3, bit)
            put(i // 3, size - 11 + i % 3, bit)


def draw_format_info(grid: list, ec: EcLevel, mask: int) -> None:
    size = len(grid)
    code = tables.format_info_code(ec, mask)

    def bit(i: int) -> bool:
        return code >> i & 1 == 1

    for i in range(6):
        grid[i][8] = bit(i)
    grid[7][8] = bit(6)
    grid[8][8] = bit(7)
    grid[8][7] = bit(8)
    for i in range(9, 15):
        grid[8][14 - i] = bit(i)
    for i in range(8):
        grid[8][size - 1 - i] = bit(i)
    for i in range(8, 15):
        grid[size - 15 + i][8] = bit(i)
    grid[size - 8][8] = True  # dark module


def data_module_order(version: int) -> list:
    """(x, y) coordinates of data modules in zigzag placement order."""
    size = tables.size_for(version)
    func = function_pattern_map(version)
    coords = []
    right = size - 1
    while right >= 1:
        if right == 6:
            right -= 1
        upward = (right + 1) & 2 == 0
        for vert in range(size):
            y = size - 1 - vert if upward else vert
            for x in (right, right - 1):
                if not func[y][x]:
                    coords.append((x, y))
        right -= 2
    return coords


def _place_data(grid: list, version: int, codewords: bytes) -> None:
    coords = data_module_order(version)
    total_bits = len(codewords) * 8
    assert total_bits <= len(coords) < total_bits + 8
    for i, (x, y) in enumerate(coords):
        if i < total_bits:
            grid[y][x] = codewords[i >> 3] >> (7 - (i & 7)) & 1 == 1
        else:
            grid[y][x] = False  # remainder bits


def _apply_mask(grid: list, func: list, mask: int) -> None:
    pattern = tables.MASKS[mask]
    size = len(grid)
    for y in range(size):
        for x in range(size):
            if not func[y][x] and pattern(x, y):
                grid[y][x] = not grid[y][x]


def _penalty(grid: list) -> int:
    size = len(grid)
    score = 0
    # runs of same color, rows and columns
    for axis in range(2):
        for a in range(size):
            run = 0
            prev = None
            for b in range(size):
                cell = grid[a][b] if axis == 0 else grid[b][a]
                if cell == prev:
                    run += 1
                    if run == 5:
                        score += 3
                    elif run > 5:
                        score += 1
                else:
                    prev = cell
                    run = 1
    # 2x2 blocks
    for y in range(size - 1):
        for x in range(size - 1):
            if grid[y][x] == grid[y][x + 1] == grid[y + 1][x] == grid[y + 1][x + 1]:
                score += 3
    # finder-like runs (dark:light 1:1:3:1:1 flanked by 4 light)
    for axis in range(2):
        for a in range(size):
            bits = 0
            for b in range(size):
                cell = grid[a][b] if axis == 0 else grid[b][a]
                bits = (bits << 1 | (1 if cell else 0)) & 0x7FF
                if b >= 10 and bits in (0x05D, 0x5D0):
                    score += 40
    # dark/light balance
    dark = sum(1 for row in grid for cell in row if cell)
    total = size * size
    k = 0
    while not (9 - k) * total <= dark * 20 <= (11 + k) * total:
        k += 1
        score += 10
    return score


def build_matrix(payload: bytes, version: int, ec: EcLevel) -> list:
    """Module grid (list of rows of bool, True = dark) for the payload."""
    if len(payload) > tables.capacity(version, ec):
        raise CapacityExceeded(
            f"{len(payload)} bytes exceed version {version}-"
            f"{ec.value} capacity {tables.capacity(version, ec)}",
            tables.smallest_version(len(payload), ec),
        )
    codewords = _interleave(_data_codewords(payload, version, ec), version, ec)
    size = tables.size_for(version)
    grid = [[False] * size for _ in range(size)]
    func = function_pattern_map(version)
    _draw_function_patterns(grid, version)
    _place_data(grid, version, codewords)

    best_mask = 0
    best_score = None
    for mask in range(8):
        _apply_mask(grid, func, mask)
        draw_format_info(grid, ec, mask)
        score = _penalty(grid)
        if best_score is None or score < best_score:
            best_mask, best_score = mask, score
        _apply_mask(grid, func, mask)  # XOR undo
    _apply_mask(grid, func, best_mask)
    draw_format_info(grid, ec, best_mask)
    return grid
