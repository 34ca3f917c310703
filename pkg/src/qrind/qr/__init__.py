"""Embedding eQRbytecode into QR symbols and extracting it back.

Symbols are standard ISO/IEC 18004 byte-mode QR codes; emit_qr renders
PNG or SVG and extract_payload recovers the exact embedded bytes,
including Reed-Solomon repair of damaged data regions.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import tables
from .decode import NoSymbolFound, UndecodableSymbol, extract_payload
from .encode import CapacityExceeded, build_matrix
from .image import render_png, render_svg
from .tables import (
    EcLevel, MAX_VERSION, MIN_VERSION, capacity, smallest_version,
)

__all__ = [
    "EcLevel", "QrParams", "CapacityExceeded", "NoSymbolFound",
    "UndecodableSymbol", "capacity", "smallest_version", "emit_qr",
    "extract_payload", "MIN_VERSION", "MAX_VERSION",
]

AUTO = None


@dataclass(frozen=True)
class QrParams:
    version: int | None = AUTO
    ec_level: EcLevel = EcLevel.MEDIUM
    module_pixel_size: int = 8
    output: str = "PNG"  # or "SVG"

    def __post_init__(self) -> None:
        if self.version is not None:
            tables._check_version(self.version)
        if self.module_pixel_size < 1:
            raise ValueError("module pixel size must be positive")
        if self.output not in ("PNG", "SVG"):
            raise ValueError("output must be PNG or SVG")


def choose_version(payload_len: int, params: QrParams) -> int:
    if params.version is not None:
        if capacity(params.version, params.ec_level) < payload_len:
            raise CapacityExceeded(
                f"{payload_len} bytes exceed version {params.version}-"
                f"{params.ec_level.value} capacity "
                f"{capacity(params.version, params.ec_level)}",
                smallest_version(payload_len, params.ec_level),
            )
        return params.version
    version = smallest_version(payload_len, params.ec_level)
    if version is None:
        raise CapacityExceeded(
            f"{payload_len} bytes do not fit any QR version at level "
            f"{params.ec_level.value} (limit {capacity(40, params.ec_level)})",
            None,
        )
    return version


def emit_qr(payload: bytes, params: QrParams = QrParams()) -> bytes:
    """Byte-mode QR image whose decoded payload is byte-identical."""
    version = choose_version(len(payload), params)
    grid = build_matrix(payload, version, params.ec_level)
    if params.output == "SVG":
        return render_svg(grid, params.module_pixel_size)
    return render_png(grid, params.module_pixel_size)
