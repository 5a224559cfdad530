"""Reference IEEE-754 single-precision multiplier, independent of the datapath.

This module exists to check the hardware-style pipeline in :mod:`cifm.fp32`
against a second implementation that shares no code with it. Significands
are multiplied as plain Python integers and normalised via bit_length;
round-to-nearest-even compares the discarded remainder against the half
point. Subnormal inputs are treated as zero and subnormal results flush
to zero, matching the wrapper's flush-to-zero behaviour.
"""

from __future__ import annotations

__all__ = ["softfloat_mul", "CANONICAL_QNAN"]

CANONICAL_QNAN = 0x7FC00000

_EXP_MASK = 0xFF
_FRAC_MASK = 0x7FFFFF


def _parts(bits: int) -> tuple[int, int, int]:
    if not 0 <= bits < (1 << 32):
        raise ValueError(f"not a 32-bit pattern: {bits:#x}")
    return (bits >> 31) & 1, (bits >> 23) & _EXP_MASK, bits & _FRAC_MASK


def softfloat_mul(x: int, y: int, truncate: bool = False) -> int:
    """Multiply two float32 bit patterns, returning the result pattern.

    Rounds to nearest even unless ``truncate`` is set. NaN inputs, and
    Inf times zero, give the canonical quiet NaN. Subnormals count as zero.
    Overflow gives a signed infinity, underflow a signed zero.
    """
    sx, ex, fx = _parts(x)
    sy, ey, fy = _parts(y)
    sign = sx ^ sy

    x_nan = ex == _EXP_MASK and fx != 0
    y_nan = ey == _EXP_MASK and fy != 0
    if x_nan or y_nan:
        return CANONICAL_QNAN
    x_inf = ex == _EXP_MASK
    y_inf = ey == _EXP_MASK
    # subnormals (exponent 0, fraction nonzero) are flushed to zero here
    x_zero = ex == 0
    y_zero = ey == 0
    if x_inf or y_inf:
        if x_zero or y_zero:
            return CANONICAL_QNAN
        return (sign << 31) | (_EXP_MASK << 23)
    if x_zero or y_zero:
        return sign << 31

    sig = ((1 << 23) | fx) * ((1 << 23) | fy)      # 47 or 48 significant bits
    exp = ex + ey - 127 + (sig.bit_length() - 47)  # +1 when the product hit 2.0

    if exp >= 255:
        return (sign << 31) | (_EXP_MASK << 23)
    if exp <= 0:
        return sign << 31

    drop = sig.bit_length() - 24
    kept = sig >> drop
    if not truncate:
        rem = sig - (kept << drop)
        half = 1 << (drop - 1)
        if rem > half or (rem == half and (kept & 1)):
            kept += 1
            if kept == (1 << 24):
                kept >>= 1
                exp += 1
                if exp >= 255:
                    return (sign << 31) | (_EXP_MASK << 23)

    return (sign << 31) | (exp << 23) | (kept & _FRAC_MASK)
