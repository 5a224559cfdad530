import struct

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cifm.fp32 import Fp32Class, Rounding, fp_mul, pack, unpack
from cifm.softfloat import CANONICAL_QNAN, softfloat_mul

INF = 0x7F800000
ONE = 0x3F800000

bits32 = st.integers(0, 2**32 - 1)
normal_bits = st.builds(
    lambda s, e, f: (s << 31) | (e << 23) | f,
    st.integers(0, 1),
    st.integers(1, 254),
    st.integers(0, 2**23 - 1),
)


def as_float(bits: int) -> float:
    return struct.unpack("<f", struct.pack("<I", bits))[0]


@given(bits32)
def test_unpack_pack_roundtrip(bits):
    p = unpack(bits)
    assert int(pack(p.sign, p.exponent, p.fraction.value)) == bits


def test_classification():
    assert unpack(0x00000000).cls is Fp32Class.ZERO
    assert unpack(0x80000000).cls is Fp32Class.ZERO
    assert unpack(0x00000001).cls is Fp32Class.SUBNORMAL
    assert unpack(ONE).cls is Fp32Class.NORMAL
    assert unpack(INF).cls is Fp32Class.INF
    assert unpack(0x7FC00000).cls is Fp32Class.NAN
    assert unpack(0xFF800001).cls is Fp32Class.NAN


def test_known_products():
    assert int(fp_mul(0x3FC00000, 0x40200000)[0]) == 0x40700000  # 1.5 * 2.5
    assert int(fp_mul(ONE, 0x40000000)[0]) == 0x40000000
    assert int(fp_mul(0x40490FDB, ONE)[0]) == 0x40490FDB


def test_specials_table():
    cases = [
        (0x7FC00000, ONE, CANONICAL_QNAN),
        (ONE, 0xFFC00001, CANONICAL_QNAN),
        (INF, 0x00000000, CANONICAL_QNAN),
        (0x80000000, INF, CANONICAL_QNAN),
        (INF, INF, INF),
        (INF, 0xC0000000, 0xFF800000),
        (0x00000000, 0xC1200000, 0x80000000),
        (0x80000000, 0x80000000, 0x00000000),
    ]
    for a, b, want in cases:
        got, trace = fp_mul(a, b)
        assert int(got) == want, f"{a:#010x} * {b:#010x}"
        assert trace.special is not None


def test_subnormal_inputs_flush_to_zero():
    got, trace = fp_mul(0x00000001, ONE)
    assert int(got) == 0
    assert trace.flushed_inputs == ("a",)
    # the flush happens before the specials table is consulted
    got, trace = fp_mul(0x007FFFFF, INF)
    assert int(got) == CANONICAL_QNAN
    assert trace.special == "inf-times-zero"


def test_overflow_rounds_to_infinity():
    got, trace = fp_mul(0x7F7FFFFF, 0x7F7FFFFF)
    assert int(got) == INF
    assert trace.overflow


def test_underflow_flushes_to_signed_zero():
    got, trace = fp_mul(0x00800000, 0x80800000)
    assert int(got) == 0x80000000
    assert trace.underflow


def test_trace_records_rounding():
    # significands of 1.5 * 1.5: product 2.25, exact -> no increment
    _, t = fp_mul(0x3FC00000, 0x3FC00000)
    assert t.rounding_applied == "none"
    assert t.normalized
    # 1.5 encodes as significand 0xC00000: the zero low halves shrink to
    # the narrowest row class while the high halves run full width,
    # 1 + 3 + 3 + 9 blocks
    assert t.activity is not None and t.activity.power_proxy == 16
    _, t = fp_mul(0x40490FDB, 0x40490FDB)
    assert t.activity.power_proxy == 36
    assert t.rounding_applied == "increment"


@given(normal_bits, normal_bits)
@settings(max_examples=300, deadline=None)
def test_matches_softfloat_oracle(a, b):
    want = softfloat_mul(a, b)
    got, _ = fp_mul(a, b)
    assert int(got) == want


@given(normal_bits, normal_bits)
@settings(max_examples=150, deadline=None)
def test_truncate_mode_matches_oracle(a, b):
    want = softfloat_mul(a, b, truncate=True)
    got, _ = fp_mul(a, b, rounding=Rounding.TRUNCATE)
    assert int(got) == want


@given(normal_bits, normal_bits)
@settings(max_examples=300, deadline=None)
def test_oracle_agrees_with_hardware_on_normal_results(a, b):
    """The independent soft multiplier against the host FPU."""
    with np.errstate(over="ignore", under="ignore"):
        hw = np.float32(as_float(a)) * np.float32(as_float(b))
    hw_bits = struct.unpack("<I", struct.pack("<f", hw))[0]
    exponent = (hw_bits >> 23) & 0xFF
    assume(0 < exponent < 255)  # flush-to-zero differs near the subnormal edge
    assert softfloat_mul(a, b) == hw_bits


def test_rejects_oversize_pattern():
    with pytest.raises(ValueError):
        fp_mul(1 << 32, ONE)
