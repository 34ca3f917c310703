"""GF(256) arithmetic and Reed-Solomon coding over the QR polynomial 0x11D.

The encoder needs only the systematic remainder; the decoder runs the full
syndrome / Berlekamp-Massey / Chien / Forney pipeline so damaged symbols
can be recovered up to floor(ecc_len / 2) byte errors per block.
"""

from __future__ import annotations

_EXP = [0] * 512
_LOG = [0] * 256
_x = 1
for _i in range(255):
    _EXP[_i] = _x
    _LOG[_x] = _i
    _x <<= 1
    if _x & 0x100:
        _x ^= 0x11D
for _i in range(255, 512):
    _EXP[_i] = _EXP[_i - 255]


class UncorrectableBlock(ValueError):
    pass


def gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return _EXP[_LOG[a] + _LOG[b]]


def gf_inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("no inverse of 0 in GF(256)")
    return _EXP[255 - _LOG[a]]


def gf_pow(a: int, n: int) -> int:
    if a == 0:
        return 0
    return _EXP[(_LOG[a] * n) % 255]


def _poly_eval_highfirst(poly, x: int) -> int:
    """Horner evaluation; poly[0] is the highest-degree coefficient."""
    acc = 0
    for c in poly:
        acc = gf_mul(acc, x) ^ c
    return acc


def rs_generator(degree: int) -> list:
    """Generator polynomial prod (x - alpha^i), i in [0, degree).
    Coefficients high-first with the leading 1 dropped."""
    poly = [1]
    root = 1  # alpha^0
    for _ in range(degree):
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i] ^= gf_mul(c, root)
            nxt[i + 1] ^= c
        poly = nxt
        root = gf_mul(root, 2)
    poly.reverse()  # high-first
    return poly[1:]


def rs_remainder(data, generator) -> bytes:
    """Systematic RS parity bytes for the data block."""
    result = [0] * len(generator)
    for byte in data:
        factor = byte ^ result.pop(0)
        result.append(0)
        for i, coef in enumerate(generator):
            result[i] ^= gf_mul(coef, factor)
    return bytes(result)


def rs_correct(block: bytes, ecc_len: int) -> bytes:
    """Correct up to floor(ecc_len/2) byte errors in data+parity; returns
    the corrected block or raises UncorrectableBlock."""
    n = len(block)
    syndromes = [_poly_eval_highfirst(block, _EXP[j]) for j in range(ecc_len)]
    if not any(syndromes):
        return bytes(block)

    # Berlekamp-Massey; locator sigma has low-first coefficients.
    sigma = [1]
    prev = [1]
    length = 0
    shift = 1
    prev_delta = 1
    for step in range(ecc_len):
        delta = syndromes[step]
        for i in range(1, length + 1):
            delta ^= gf_mul(sigma[i], syndromes[step - i])
        if delta == 0:
            shift += 1
            continue
        if 2 * length <= step:
            snapshot = list(sigma)
            coef = gf_mul(delta, gf_inv(prev_delta))
            adj = [0] * shift + [gf_mul(c, coef) for c in prev]
            sigma = _poly_add(sigma, adj)
            length = step + 1 - length
            prev = snapshot
            prev_delta = delta
            shift = 1
        else:
            coef = gf_mul(delta, gf_inv(prev_delta))
            adj = [0] * shift + [gf_mul(c, coef) for c in prev]
            sigma = _poly_add(sigma, adj)
            shift += 1

    num_errors = len(sigma) - 1
    if num_errors > ecc_len // 2 or length != num_errors:
        raise UncorrectableBlock(f"{num_errors} errors exceed capacity")

    # Chien search over codeword degrees.
    error_degrees = []
    for degree in range(n):
        x = _EXP[(255 - degree) % 255]  # alpha^(-degree)
        value = 0
        for i, c in enumerate(sigma):
            value ^= gf_mul(c, gf_pow(x, i))
        if value == 0:
            error_degrees.append(degree)
    if len(error_degrees) != num_errors:
        raise UncorrectableBlock("error locator roots do not match degree")

    # Forney: omega = (S(x) * sigma(x)) mod x^ecc_len, all low-first.
    omega = [0] * ecc_len
    for i, s in enumerate(syndromes):
        for j, c in enumerate(sigma):
            if i + j < ecc_len:
                omega[i + j] ^= gf_mul(s, c)

    corrected = bytearray(block)
    for degree in error_degrees:
        x_inv = _EXP[(255 - degree) % 255]  # X_k^{-1}
        om = 0
        for i, c in enumerate(omega):
            om ^= gf_mul(c, gf_pow(x_inv, i))
        dprime = 0
        for i in range(1, len(sigma), 2):
            dprime ^= gf_mul(sigma[i], gf_pow(x_inv, i - 1))
        if dprime == 0:
            raise UncorrectableBlock("degenerate locator derivative")
        magnitude = gf_mul(gf_mul(_EXP[degree], om), gf_inv(dprime))
        position = n - 1 - degree
        corrected[position] ^= magnitude

    # The corrected word must have clean syndromes.
    if any(_poly_eval_highfirst(corrected, _EXP[j]) for j in range(ecc_len)):
        raise UncorrectableBlock("correction did not converge")
    return bytes(corrected)


def _poly_add(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] ^= c
    return out
