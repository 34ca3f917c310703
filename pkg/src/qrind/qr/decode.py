"""Extracting a payload from an image of an upright QR symbol.

Pipeline: binarize, locate the three finder patterns by their 1:1:3:1:1
run signature, derive module size and grid dimension, sample the module
grid, then reverse the encoding: format info (nearest of the 32 BCH
codes, two placements), unmask, de-interleave, Reed-Solomon-correct each
block, and parse the byte-mode segment.
"""

from __future__ import annotations

import numpy as np

from . import tables
from .encode import function_pattern_map
from .gf256 import UncorrectableBlock, rs_correct
from .image import binarize, load_grayscale
from .tables import EcLevel


class NoSymbolFound(ValueError):
    pass


class UndecodableSymbol(ValueError):
    pass


def _finder_candidates(dark: np.ndarray) -> list:
    """Centers (x, y, module_size) of runs matching 1:1:3:1:1 horizontally,
    confirmed vertically."""
    h, w = dark.shape
    candidates = []
    for y in range(h):
        row = dark[y]
        runs = []  # (start, length, value)
        x = 0
        while x < w:
            x0 = x
            v = row[x]
            while x < w and row[x] == v:
                x += 1
            runs.append((x0, x - x0, bool(v)))
        for i in range(len(runs) - 4):
            window = runs[i : i + 5]
            if [r[2] for r in window] != [True, False, True, False, True]:
                continue
            lengths = [r[1] for r in window]
            unit = sum(lengths) / 7.0
            if unit < 1:
                continue
            expect = (1, 1, 3, 1, 1)
            if any(abs(l - e * unit) > unit * 0.75 for l, e in zip(lengths, expect)):
                continue
            cx = window[0][0] + sum(lengths) / 2.0
            if _check_vertical(dark, int(cx), y, unit):
                candidates.append((cx, float(y), unit))
    return _cluster(candidates)


def _check_vertical(dark: np.ndarray, x: int, y: int, unit: float) -> bool:
    h = dark.shape[0]
    if not dark[y][x]:
        return False
    up = y
    while up > 0 and dark[up - 1][x]:
        up -= 1
    down = y
    while down < h - 1 and dark[down + 1][x]:
        down += 1
    run = down - up + 1
    return abs(run - 3 * unit) <= 2 * unit * 0.75


def _cluster(candidates: list) -> list:
    clusters: list = []
    for cx, cy, unit in candidates:
        for c in clusters:
            if abs(c[0] / c[3] - cx) < 3 * unit and abs(c[1] / c[3] - cy) < 3 * unit:
                c[0] += cx
                c[1] += cy
                c[2] += unit
                c[3] += 1
                break
        else:
            clusters.append([cx, cy, unit, 1])
    return [(c[0] / c[3], c[1] / c[3], c[2] / c[3]) for c in clusters]


def sample_grid(image_bytes: bytes) -> list:
    """Image bytes -> module grid (rows of bool)."""
    dark = binarize(load_grayscale(image_bytes))
    finders = _finder_candidates(dark)
    if len(finders) < 3:
        raise NoSymbolFound(f"found {len(finders)} finder patterns, need 3")

    # Upright symbol: top-left minimizes x+y; top-right shares its row,
    # bottom-left its column.
    tl = min(finders, key=lambda f: f[0] + f[1])
    rights = [f for f in finders if abs(f[1] - tl[1]) < 4 * tl[2] and f[0] > tl[0]]
    downs = [f for f in finders if abs(f[0] - tl[0]) < 4 * tl[2] and f[1] > tl[1]]
    if not rights or not downs:
        raise NoSymbolFound("finder patterns are not axis-aligned")
    tr = max(rights, key=lambda f: f[0])
    bl = max(downs, key=lambda f: f[1])

    unit = (tl[2] + tr[2] + bl[2]) / 3.0
    span = ((tr[0] - tl[0]) + (bl[1] - tl[1])) / 2.0  # 7 modules short of size
    size = round(span / unit) + 7
    version = round((size - 17) / 4)
    if not tables.MIN_VERSION <= version <= tables.MAX_VERSION:
        raise UndecodableSymbol(f"implied version {version} out of range")
    size = tables.size_for(version)
    module = span / (size - 7)

    x0 = tl[0] - 3.5 * module
    y0 = tl[1] - 3.5 * module
    h, w = dark.shape
    grid = []
    for gy in range(size):
        row = []
        for gx in range(size):
            px = int(round(x0 + (gx + 0.5) * module))
            py = int(round(y0 + (gy + 0.5) * module))
            if not (0 <= px < w and 0 <= py < h):
                raise UndecodableSymbol("module grid extends past the image")
            row.append(bool(dark[py][px]))
        grid.append(row)
    return grid


def _read_format(grid: list) -> tuple:
    """(EcLevel, mask) via nearest valid format code over both copies."""
    size = len(grid)
    copy1 = []
    for i in range(6):
        copy1.append(grid[i][8])
    copy1.append(grid[7][8])
    copy1.append(grid[8][8])
    copy1.append(grid[8][7])
    for i in range(9, 15):
        copy1.append(grid[8][14 - i])
    copy2 = []
    for i in range(8):
        copy2.append(grid[8][size - 1 - i])
    for i in range(8, 15):
        copy2.append(grid[size - 15 + i][8])

    best = None
    for bits in (copy1, copy2):
        observed = 0
        for i, b in enumerate(bits):
            observed |= (1 if b else 0) << i
        for ec in EcLevel:
            for mask in range(8):
                code = tables.format_info_code(ec, mask)
                dist = bin(observed ^ code).count("1")
                if best is None or dist < best[0]:
                    best = (dist, ec, mask)
    if best is None or best[0] > 3:
        raise UndecodableSymbol("format information unreadable")
    return best[1], best[2]


def decode_matrix(grid: list) -> bytes:
    size = len(grid)
    version = (size - 17) // 4
    if size != tables.size_for(version):
        raise UndecodableSymbol(f"grid size {size} is not a QR dimension")
    ec, mask = _read_format(grid)

    func = function_pattern_map(version)
    pattern = tables.MASKS[mask]
    bits = []
    right = size - 1
    while right >= 1:
        if right == 6:
            right -= 1
        upward = (right + 1) & 2 == 0
        for vert in range(size):
            y = size - 1 - vert if upward else vert
            for x in (right, right - 1):
                if not func[y][x]:
                    bits.append(grid[y][x] ^ pattern(x, y))
        right -= 2

    total = tables.total_codewords(version)
    codewords = bytearray()
    for i in range(total):
        byte = 0
        for b in bits[i * 8 : i * 8 + 8]:
            byte = byte << 1 | (1 if b else 0)
        codewords.append(byte)

    structure = tables.block_structure(version, ec)
    ecclen = structure[0][1]
    data_lens = [d for d, _ in structure]
    blocks = [bytearray() for _ in structure]
    pos = 0
    for i in range(max(data_lens)):
        for j, dlen in enumerate(data_lens):
            if i < dlen:
                blocks[j].append(codewords[pos])
                pos += 1
    eccs = [bytearray() for _ in structure]
    for i in range(ecclen):
        for j in range(len(structure)):
            eccs[j].append(codewords[pos])
            pos += 1

    data = bytearray()
    for block, ecc, dlen in zip(blocks, eccs, data_lens):
        try:
            corrected = rs_correct(bytes(block + ecc), ecclen)
        except UncorrectableBlock as exc:
            raise UndecodableSymbol(f"block beyond repair: {exc}") from None
        data.extend(corrected[:dlen])

    return _parse_segments(bytes(data), version)


def _parse_segments(data: bytes, version: int) -> bytes:
    bitlen = len(data) * 8

    def read(pos: int, width: int) -> int:
        value = 0
        for i in range(pos, pos + width):
            value = value << 1 | (data[i >> 3] >> (7 - (i & 7)) & 1)
        return value

    payload = bytearray()
    pos = 0
    while pos + 4 <= bitlen:
        mode = read(pos, 4)
        pos += 4
        if mode == 0b0000:  # terminator
            break
        if mode == 0b0111:  # ECI designator: 1, 2 or 3 bytes
            first = read(pos, 8)
            pos += 8 if first < 0x80 else (16 if first < 0xC0 else 24)
            continue
        if mode != 0b0100:
            raise UndecodableSymbol(f"unsupported segment mode {mode:04b}")
        count_bits = tables.count_field_bits(version)
        if pos + count_bits > bitlen:
            raise UndecodableSymbol("truncated character count")
        count = read(pos, count_bits)
        pos += count_bits
        if pos + count * 8 > bitlen:
            raise UndecodableSymbol("segment longer than data area")
        for _ in range(count):
            payload.append(read(pos, 8))
            pos += 8
    return bytes(payload)


def extract_payload(image_bytes: bytes) -> bytes:
    return decode_matrix(sample_grid(image_bytes))
