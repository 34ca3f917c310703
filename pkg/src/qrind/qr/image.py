"""Rendering module grids to PNG/SVG and loading images back to pixels."""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

QUIET_ZONE = 4


def render_png(grid: list, module_pixels: int) -> bytes:
    size = len(grid)
    full = size + 2 * QUIET_ZONE
    pixels = np.full((full, full), 255, dtype=np.uint8)
    for y, row in enumerate(grid):
        for x, dark in enumerate(row):
            if dark:
                pixels[QUIET_ZONE + y][QUIET_ZONE + x] = 0
    pixels = np.kron(pixels, np.ones((module_pixels, module_pixels), np.uint8))
    buf = io.BytesIO()
    Image.fromarray(pixels, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def render_svg(grid: list, module_pixels: int) -> bytes:
    size = len(grid)
    full = size + 2 * QUIET_ZONE
    parts = []
    for y, row in enumerate(grid):
        for x, dark in enumerate(row):
            if dark:
                parts.append(f"M{x + QUIET_ZONE},{y + QUIET_ZONE}h1v1h-1z")
    dim = full * module_pixels
    svg = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{dim}" height="{dim}" '
        f'viewBox="0 0 {full} {full}" stroke="none">\n'
        '<rect width="100%" height="100%" fill="#FFFFFF"/>\n'
        f'<path d="{" ".join(parts)}" fill="#000000"/>\n'
        "</svg>\n"
    )
    return svg.encode("utf-8")


def load_grayscale(image_bytes: bytes) -> np.ndarray:
    img = Image.open(io.BytesIO(image_bytes)).convert("L")
    return np.asarray(img, dtype=np.uint8)


def binarize(gray: np.ndarray) -> np.ndarray:
    """True where dark, split at the midpoint of the observed range."""
    lo, hi = int(gray.min()), int(gray.max())
    threshold = (lo + hi) / 2 if hi > lo else 127.5
    return gray < threshold
