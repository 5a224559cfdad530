import pytest
from hypothesis import given
from hypothesis import strategies as st

from cifm.bitcore import (
    BitVec,
    Cell,
    CellKind,
    CellNetlist,
    NetlistBuilder,
    add,
    classify_width,
    full_add,
    half_add,
)


def test_bitvec_basics():
    v = BitVec(0b1011, 4)
    assert v.bit(0) == 1 and v.bit(2) == 0
    assert v.bits() == (1, 1, 0, 1)
    assert int(v) == 11
    assert str(v) == "0xb/4"


def test_bitvec_rejects_out_of_range():
    with pytest.raises(ValueError):
        BitVec(16, 4)
    with pytest.raises(ValueError):
        BitVec(-1, 4)


def test_bitvec_split():
    v = BitVec(0xABC, 12)
    lo, mid, hi = v.split(4)
    assert (lo.value, mid.value, hi.value) == (0xC, 0xB, 0xA)


def test_bitvec_truncate():
    assert BitVec(0x1F, 6).truncate(4).value == 0xF


def test_half_add_truth_table():
    assert [half_add(a, b) for a, b in ((0, 0), (0, 1), (1, 0), (1, 1))] == [
        (0, 0), (1, 0), (1, 0), (0, 1)
    ]


def test_full_add_truth_table():
    for a in (0, 1):
        for b in (0, 1):
            for c in (0, 1):
                s, cy = full_add(a, b, c)
                assert s + 2 * cy == a + b + c


def test_adder_bits_reject_non_bits():
    with pytest.raises(ValueError):
        half_add(2, 0)
    with pytest.raises(ValueError):
        full_add(0, 0, -1)


@given(st.integers(0, 2**12 - 1), st.integers(0, 2**12 - 1))
def test_add_matches_integer_addition(x, y):
    out = add(BitVec(x, 12), BitVec(y, 12), 12)
    assert out.width == 13
    assert out.value == x + y


@given(st.integers(0, 2**24 - 1), st.integers(0, 2**24 - 1))
def test_add_then_truncate_wraps(x, y):
    out = add(BitVec(x, 24), BitVec(y, 24), 24).truncate(24)
    assert out.value == (x + y) % 2**24


def test_classify_width_table():
    classes = (4, 8, 12)
    cases = {0: 4, 1: 4, 15: 4, 16: 8, 255: 8, 256: 12, 4095: 12}
    for value, expect in cases.items():
        assert classify_width(BitVec(value, 12), classes) == expect


def test_classify_width_rejects_oversize():
    with pytest.raises(ValueError):
        classify_width(BitVec(16, 5), (4,))


def _ripple2() -> "NetlistBuilder":
    # two-bit ripple adder: HA then FA
    b = NetlistBuilder()
    a = b.input_bus("a", 2)
    c = b.input_bus("b", 2)
    s0, carry = b.ha(a[0], c[0], level=1)
    s1, carry = b.fa(a[1], c[1], carry, level=2)
    b.set_outputs("s", [s0, s1, carry])
    return b


def test_builder_ripple_adder_evaluates():
    net = _ripple2().build()
    for x in range(4):
        for y in range(4):
            assert net.evaluate({"a": x, "b": y}) == x + y


def test_netlist_counts_and_delay():
    net = _ripple2().build()
    assert net.cell_count() == 2
    assert net.unit_delay() == 2


def test_netlist_rejects_double_driver():
    net = CellNetlist(
        inputs=[("a", ["n0"]), ("b", ["n1"])],
        cells=[
            Cell(CellKind.AND, ("n0", "n1"), ("n2",)),
            Cell(CellKind.AND, ("n1", "n0"), ("n2",)),
        ],
        outputs=[("p0", "n2")],
    )
    with pytest.raises(ValueError, match="driven twice"):
        net.validate()


def test_netlist_rejects_use_before_definition():
    b = NetlistBuilder()
    a = b.input_bus("a", 1)
    ghost = b.new_net()
    out = b.and2(a[0], ghost)
    b.set_outputs("p", [out])
    with pytest.raises(ValueError):
        b.build()
