"""QR embedding: capacity table, emit/extract round trips, AUTO version
minimality, damage recovery, and a cross-check against OpenCV's decoder."""

import io
import random

import numpy as np
import pytest
from PIL import Image

from qrind.qr import (
    CapacityExceeded, EcLevel, NoSymbolFound, QrParams, capacity,
    choose_version, emit_qr, extract_payload, smallest_version,
)
from qrind.qr.encode import build_matrix, data_module_order
from qrind.qr.image import QUIET_ZONE

try:
    import cv2

    HAVE_CV2 = True
except ImportError:
    HAVE_CV2 = False


class TestCapacity:
    def test_known_values(self):
        assert capacity(40, EcLevel.LOW) == 2953
        assert capacity(1, EcLevel.LOW) == 17
        assert capacity(1, EcLevel.HIGH) == 7
        assert capacity(2, EcLevel.MEDIUM) == 26
        assert capacity(10, EcLevel.QUARTILE) == 151

    def test_more_correction_less_data(self):
        for v in range(1, 41):
            caps = [capacity(v, level) for level in EcLevel]
            assert caps == sorted(caps, reverse=True), v

    def test_monotone_in_version(self):
        for level in EcLevel:
            for v in range(1, 40):
                assert capacity(v + 1, level) > capacity(v, level)

    def test_smallest_version(self):
        assert smallest_version(17, EcLevel.LOW) == 1
        assert smallest_version(18, EcLevel.LOW) == 2
        assert smallest_version(2953, EcLevel.LOW) == 40
        assert smallest_version(2954, EcLevel.LOW) is None


class TestEmitExtract:
    def test_round_trip_sweep(self):
        rng = random.Random(8)
        for trial in range(100):
            level = rng.choice(list(EcLevel))
            n = rng.choice([0, 1, 2, 7, 17, 26, 64, 120, 250])
            payload = bytes(rng.randrange(256) for _ in range(n))
            params = QrParams(
                ec_level=level, module_pixel_size=rng.choice([2, 3, 5, 8])
            )
            assert extract_payload(emit_qr(payload, params)) == payload

    def test_forced_versions(self):
        rng = random.Random(9)
        for version in (1, 5, 7, 12, 26, 40):
            payload = bytes(
                rng.randrange(256)
                for _ in range(min(30, capacity(version, EcLevel.HIGH)))
            )
            img = emit_qr(
                payload,
                QrParams(version=version, ec_level=EcLevel.HIGH,
                         module_pixel_size=2),
            )
            assert extract_payload(img) == payload

    def test_one_byte_version_one(self):
        img = emit_qr(b"\xa5", QrParams(version=1))
        assert extract_payload(img) == b"\xa5"

    def test_svg_output(self):
        svg = emit_qr(b"hello", QrParams(output="SVG"))
        text = svg.decode("utf-8")
        assert text.startswith("<?xml") and "<svg" in text

    def test_capacity_exceeded_reports_smallest_fit(self):
        with pytest.raises(CapacityExceeded) as exc_info:
            emit_qr(bytes(100), QrParams(version=1))
        assert exc_info.value.smallest_fitting == smallest_version(
            100, EcLevel.MEDIUM
        )

    def test_oversize_payload_fits_nothing(self):
        with pytest.raises(CapacityExceeded) as exc_info:
            emit_qr(bytes(2954), QrParams(ec_level=EcLevel.LOW))
        assert exc_info.value.smallest_fitting is None

    def test_auto_version_is_minimal(self):
        rng = random.Random(10)
        for _ in range(30):
            level = rng.choice(list(EcLevel))
            n = rng.randint(1, 400)
            params = QrParams(ec_level=level)
            version = choose_version(n, params)
            assert capacity(version, level) >= n
            if version > 1:
                assert capacity(version - 1, level) < n


class TestDamageRecovery:
    def test_contiguous_quarter_of_data_modules_at_high(self):
        rng = random.Random(5)
        payload = bytes(rng.randrange(256) for _ in range(20))
        version = smallest_version(len(payload), EcLevel.HIGH)
        module = 8
        img = emit_qr(
            payload, QrParams(ec_level=EcLevel.HIGH, module_pixel_size=module)
        )
        coords = data_module_order(version)
        blot = len(coords) // 4
        start = rng.randrange(len(coords) - blot)
        arr = np.array(Image.open(io.BytesIO(img)).convert("L"))
        for x, y in coords[start : start + blot]:
            px, py = (QUIET_ZONE + x) * module, (QUIET_ZONE + y) * module
            arr[py : py + module, px : px + module] = (
                255 - arr[py : py + module, px : px + module]
            )
        buf = io.BytesIO()
        Image.fromarray(arr).save(buf, format="PNG")
        assert extract_payload(buf.getvalue()) == payload

    def test_blank_image(self):
        buf = io.BytesIO()
        Image.fromarray(np.full((120, 120), 255, np.uint8)).save(buf, "PNG")
        with pytest.raises(NoSymbolFound):
            extract_payload(buf.getvalue())

    def test_noise_image(self):
        rng = np.random.default_rng(3)
        buf = io.BytesIO()
        Image.fromarray(
            rng.integers(0, 2, size=(80, 80), dtype=np.uint8) * 255
        ).save(buf, "PNG")
        with pytest.raises((NoSymbolFound, ValueError)):
            extract_payload(buf.getvalue())


class TestMatrixShape:
    def test_dimensions(self):
        grid = build_matrix(b"x", 1, EcLevel.MEDIUM)
        assert len(grid) == 21 and all(len(row) == 21 for row in grid)
        grid = build_matrix(b"x", 7, EcLevel.MEDIUM)
        assert len(grid) == 45

    def test_finder_corners_dark(self):
        grid = build_matrix(b"x", 2, EcLevel.LOW)
        size = len(grid)
        for x, y in ((0, 0), (size - 1, 0), (0, size - 1)):
            assert grid[y][x] is True
        # top-left finder: solid 7-wide top edge, then a separator row
        assert all(grid[0][x] for x in range(7))
        assert not any(grid[7][x] for x in range(8))


@pytest.mark.skipif(not HAVE_CV2, reason="OpenCV not installed")
class TestAgainstOpenCv:
    def test_independent_decoder_agrees(self):
        det = cv2.QRCodeDetector()
        rng = random.Random(42)
        detected = 0
        for _ in range(15):
            payload = bytes(rng.randrange(256) for _ in range(rng.randint(1, 60)))
            img = emit_qr(payload, QrParams(module_pixel_size=8))
            arr = np.asarray(Image.open(io.BytesIO(img)).convert("L"))
            data, _, _ = det.detectAndDecodeBytes(arr)
            if not data:
                continue
            if data != payload:
                # cv2 normalizes byte-mode payloads as text (UTF-8); undo it
                data = data.decode("utf-8").encode("latin-1")
            assert data == payload
            detected += 1
        assert detected >= 10
