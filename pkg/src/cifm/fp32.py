"""IEEE-754 single-precision multiply on top of the 24x24 block datapath.

The significand product is computed by :func:`cifm.multiplier.mul24` on the
two 24-bit significands (hidden bit restored), so fault injection and the
gating/repair machinery flow through to float results. Exponents are added
with the bias removed. The 48-bit raw product is normalised by at most one
position and the retained 23 fraction bits are rounded to nearest even (or
truncated on request).

Flush-to-zero behaviour: subnormal inputs are treated as zero before the
specials table is consulted, and results whose exponent falls to or below
zero flush to a signed zero. Gradual underflow is deliberately out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .bitcore import BitVec
from .multiplier import (
    ActivityReport,
    FaultSpec,
    MulResult,
    Quadrant,
    RepairConfig,
    mul24,
)
from .softfloat import CANONICAL_QNAN

__all__ = [
    "Fp32Class",
    "Rounding",
    "Fp32Parts",
    "FpMulTrace",
    "unpack",
    "pack",
    "fp_mul",
]


class Fp32Class(Enum):
    NORMAL = "normal"
    ZERO = "zero"
    SUBNORMAL = "subnormal"
    INF = "inf"
    NAN = "nan"


class Rounding(Enum):
    NEAREST_EVEN = "nearest-even"
    TRUNCATE = "truncate"


@dataclass(frozen=True)
class Fp32Parts:
    sign: int
    exponent: int          # raw biased field
    fraction: BitVec       # 23 stored bits
    cls: Fp32Class


def unpack(bits: BitVec | int) -> Fp32Parts:
    """Split a 32-bit pattern into sign, exponent, fraction and class."""
    if isinstance(bits, int):
        bits = BitVec(bits, 32)
    elif bits.width != 32:
        raise ValueError(f"expected a 32-bit pattern, got width {bits.width}")
    sign = bits.bit(31)
    exponent = (bits.value >> 23) & 0xFF
    fraction = bits.truncate(23)
    if exponent == 0xFF:
        cls = Fp32Class.NAN if fraction.value else Fp32Class.INF
    elif exponent == 0:
        cls = Fp32Class.SUBNORMAL if fraction.value else Fp32Class.ZERO
    else:
        cls = Fp32Class.NORMAL
    return Fp32Parts(sign, exponent, fraction, cls)


def pack(sign: int, exponent: int, fraction: int) -> BitVec:
    if not (0 <= exponent <= 0xFF and 0 <= fraction < (1 << 23)):
        raise ValueError("exponent or fraction field out of range")
    return BitVec((sign << 31) | (exponent << 23) | fraction, 32)


@dataclass(frozen=True)
class FpMulTrace:
    """Everything the pipeline did, for inspection and debugging."""

    a: Fp32Parts
    b: Fp32Parts
    significand_a: BitVec | None = None
    significand_b: BitVec | None = None
    raw_product: BitVec | None = None
    normalized: bool = False
    exponent_pre_bias: int = 0
    exponent_final: int = 0
    rounding_applied: str = "none"      # "none" or "increment"
    flushed_inputs: tuple[str, ...] = ()
    overflow: bool = False
    underflow: bool = False
    special: str | None = None
    activity: ActivityReport | None = None

    def to_json(self) -> dict:
        def parts(p: Fp32Parts) -> dict:
            return {
                "sign": p.sign,
                "exponent": p.exponent,
                "fraction": f"0x{p.fraction.value:06X}",
                "class": p.cls.value,
            }

        def hexed(v: BitVec | None) -> str | None:
            return None if v is None else f"0x{v.value:X}"

        return {
            "a": parts(self.a),
            "b": parts(self.b),
            "significand_a": hexed(self.significand_a),
            "significand_b": hexed(self.significand_b),
            "raw_product": hexed(self.raw_product),
            "normalized": self.normalized,
            "exponent_pre_bias": self.exponent_pre_bias,
            "exponent_final": self.exponent_final,
            "rounding_applied": self.rounding_applied,
            "flushed_inputs": list(self.flushed_inputs),
            "overflow": self.overflow,
            "underflow": self.underflow,
            "special": self.special,
            "activity": None if self.activity is None else self.activity.to_json(),
        }


def _special_result(
    a: Fp32Parts, b: Fp32Parts, sign: int
) -> tuple[BitVec, str] | None:
    """The NaN/Inf/zero table, applied after subnormal flush."""
    if a.cls is Fp32Class.NAN or b.cls is Fp32Class.NAN:
        return BitVec(CANONICAL_QNAN, 32), "nan-propagation"
    a_inf = a.cls is Fp32Class.INF
    b_inf = b.cls is Fp32Class.INF
    a_zero = a.cls is Fp32Class.ZERO
    b_zero = b.cls is Fp32Class.ZERO
    if a_inf or b_inf:
        if a_zero or b_zero:
            return BitVec(CANONICAL_QNAN, 32), "inf-times-zero"
        return pack(sign, 0xFF, 0), "infinity"
    if a_zero or b_zero:
        return pack(sign, 0, 0), "zero-operand"
    return None


def fp_mul(
    a: BitVec | int,
    b: BitVec | int,
    faults: Sequence[FaultSpec] = (),
    repair: Mapping[Quadrant, RepairConfig] | None = None,
    rounding: Rounding = Rounding.NEAREST_EVEN,
) -> tuple[BitVec, FpMulTrace]:
    """Multiply two float32 bit patterns through the block datapath."""
    pa = unpack(a)
    pb = unpack(b)
    sign = pa.sign ^ pb.sign

    flushed = []
    if pa.cls is Fp32Class.SUBNORMAL:
        pa = Fp32Parts(pa.sign, 0, BitVec(0, 23), Fp32Class.ZERO)
        flushed.append("a")
    if pb.cls is Fp32Class.SUBNORMAL:
        pb = Fp32Parts(pb.sign, 0, BitVec(0, 23), Fp32Class.ZERO)
        flushed.append("b")

    special = _special_result(pa, pb, sign)
    if special is not None:
        result, label = special
        return result, FpMulTrace(
            a=pa, b=pb, special=label, flushed_inputs=tuple(flushed)
        )

    sig_a = BitVec((1 << 23) | pa.fraction.value, 24)
    sig_b = BitVec((1 << 23) | pb.fraction.value, 24)
    mres: MulResult = mul24(sig_a, sig_b, faults=faults, repair=repair)
    raw = mres.product                     # 48 bits, in [2^46, 2^48)

    exponent_pre_bias = pa.exponent + pb.exponent
    normalized = bool(raw.bit(47))
    exponent = exponent_pre_bias - 127 + (1 if normalized else 0)

    def finish(result: BitVec, **kw) -> tuple[BitVec, FpMulTrace]:
        return result, FpMulTrace(
            a=pa,
            b=pb,
            significand_a=sig_a,
            significand_b=sig_b,
            raw_product=raw,
            normalized=normalized,
            exponent_pre_bias=exponent_pre_bias,
            flushed_inputs=tuple(flushed),
            activity=mres.activity,
            **kw,
        )

    if exponent >= 255:
        return finish(pack(sign, 0xFF, 0), exponent_final=255, overflow=True)
    if exponent <= 0:
        return finish(pack(sign, 0, 0), exponent_final=0, underflow=True)

    # keep 23 fraction bits below the hidden bit
    drop = 24 if normalized else 23
    kept = raw.value >> drop
    rounding_applied = "none"
    if rounding is Rounding.NEAREST_EVEN:
        round_bit = (raw.value >> (drop - 1)) & 1
        sticky = (raw.value & ((1 << (drop - 1)) - 1)) != 0
        if round_bit and (sticky or (kept & 1)):
            kept += 1
            rounding_applied = "increment"
            if kept == (1 << 24):          # rounded up to the next power of two
                kept >>= 1
                exponent += 1
                if exponent >= 255:
                    return finish(
                        pack(sign, 0xFF, 0),
                        exponent_final=255,
                        overflow=True,
                        rounding_applied=rounding_applied,
                    )

    result = pack(sign, exponent, kept & ((1 << 23) - 1))
    return finish(
        result, exponent_final=exponent, rounding_applied=rounding_applied
    )
