"""Block-structured 24x24 unsigned multiplier with power gating and self-repair.

The 24x24 datapath is four 12x12 quadrant modules (operand halves HH, HL,
LH, LL), and each quadrant is nine 4x4 blocks plus one spare. Two layers of
width checkers power off blocks whose operand groups are all zero:

* outer checkers classify each 24-bit operand over [12, 24] and gate whole
  quadrants,
* inner checkers classify each 12-bit operand over [4, 8, 12] and gate rows
  and columns of 4x4 blocks.

A block can be forced faulty (its 8-bit output stuck at a chosen value).
Each quadrant's spare can replace exactly one such block: the spare gets
the same operand groups and its product is routed to the consumers, while
the faulty block itself is powered off.

Every 4x4 block is simulated bit-accurately through a fixed three-level
cell netlist (16 AND cells feeding two parallel adder chains, then a
low/high merge, then final carry resolution). The full truth table of that
netlist is computed once by vectorised netlist evaluation and reused, so
repeated multiplies stay cheap without ever bypassing the gate-level
structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .bitcore import BitVec, CellKind, CellNetlist, NetlistBuilder, add, classify_width

__all__ = [
    "Quadrant",
    "ModuleId",
    "FaultSpec",
    "RepairConfig",
    "ActivityReport",
    "MulResult",
    "mul4",
    "mul12",
    "mul24",
    "activity_of",
    "export_netlist",
    "cost_report",
    "INNER_CLASSES",
    "OUTER_CLASSES",
]

INNER_CLASSES = (4, 8, 12)
OUTER_CLASSES = (12, 24)


class Quadrant(Enum):
    """Which 12x12 module: first letter = a half, second = b half."""

    HH = "HH"
    HL = "HL"
    LH = "LH"
    LL = "LL"

    @property
    def a_high(self) -> bool:
        return self.value[0] == "H"

    @property
    def b_high(self) -> bool:
        return self.value[1] == "H"

    @property
    def shift(self) -> int:
        return 12 * (int(self.a_high) + int(self.b_high))


@dataclass(frozen=True)
class ModuleId:
    """Identity of one 4x4 block. Spares carry redundant=True and row=col=0."""

    quadrant: Quadrant
    row: int
    col: int
    redundant: bool = False

    def __post_init__(self) -> None:
        if self.redundant:
            if (self.row, self.col) != (0, 0):
                object.__setattr__(self, "row", 0)
                object.__setattr__(self, "col", 0)
        elif not (0 <= self.row <= 2 and 0 <= self.col <= 2):
            raise ValueError(f"row/col must be in 0..2, got {self.row},{self.col}")

    @classmethod
    def spare(cls, quadrant: Quadrant) -> "ModuleId":
        return cls(quadrant, 0, 0, redundant=True)

    def __str__(self) -> str:
        if self.redundant:
            return f"{self.quadrant.value}:spare"
        return f"{self.quadrant.value}:{self.row}:{self.col}"

    def to_json(self) -> dict:
        return {
            "quadrant": self.quadrant.value,
            "row": self.row,
            "col": self.col,
            "redundant": self.redundant,
        }


# Every instantiable id, built once and reused.
GRID_IDS: dict[Quadrant, dict[tuple[int, int], ModuleId]] = {
    q: {(i, j): ModuleId(q, i, j) for i in range(3) for j in range(3)} for q in Quadrant
}
SPARE_IDS: dict[Quadrant, ModuleId] = {q: ModuleId.spare(q) for q in Quadrant}


@dataclass(frozen=True)
class FaultSpec:
    """Forces a block's 8-bit product output to a fixed value."""

    target: ModuleId
    forced_output: BitVec

    def __post_init__(self) -> None:
        if self.target.redundant:
            raise ValueError("faults may only target non-redundant blocks")
        if isinstance(self.forced_output, int):
            object.__setattr__(self, "forced_output", BitVec(self.forced_output, 8))
        if self.forced_output.width != 8:
            raise ValueError("forced output must be 8 bits wide")


@dataclass(frozen=True)
class RepairConfig:
    """Per-quadrant repair control: an enable bit plus the block to replace."""

    enabled: bool = False
    target: ModuleId | None = None

    def __post_init__(self) -> None:
        if self.target is not None and not self.enabled:
            raise ValueError("repair target set while repair is disabled")
        if self.enabled and self.target is None:
            raise ValueError("repair enabled without a target")
        if self.target is not None and self.target.redundant:
            raise ValueError("repair target must be a non-redundant block")


@dataclass(frozen=True)
class ActivityReport:
    """Power bookkeeping: which blocks were energised and which were dark.

    The three sets partition every instantiated block id (spares included).
    power_proxy is simply the number of energised blocks.
    adder_levels_active maps each energised block to how many of its three
    internal adder levels saw a nonzero input net (a standalone 4x4 call has
    no block identity and uses the key None).
    """

    active_mul4: frozenset[ModuleId]
    gated_mul4: frozenset[ModuleId]
    disabled_faulty: frozenset[ModuleId]
    adder_levels_active: Mapping[ModuleId | None, int] = field(default_factory=dict)

    @property
    def power_proxy(self) -> int:
        return len(self.active_mul4)

    def to_json(self) -> dict:
        def ids(s: Iterable[ModuleId]) -> list[dict]:
            return [m.to_json() for m in sorted(s, key=str)]

        return {
            "active": ids(self.active_mul4),
            "gated": ids(self.gated_mul4),
            "disabled_faulty": ids(self.disabled_faulty),
            "power_proxy": self.power_proxy,
        }


@dataclass(frozen=True)
class MulResult:
    product: BitVec
    activity: ActivityReport
    netlist_trace: dict | None = None
    unrepaired_faults: tuple[ModuleId, ...] = ()


def activity_of(result: MulResult) -> ActivityReport:
    return result.activity


# ---------------------------------------------------------------------------
# 4x4 block netlist
# ---------------------------------------------------------------------------

def _build_mul4(
    builder: NetlistBuilder,
    a_nets: Sequence[str],
    b_nets: Sequence[str],
    module_id: str | None = None,
) -> list[str]:
    """Instantiate the three-level 4x4 structure; returns 8 product nets.

    Partial products pp[i][j] = a_j & b_i sit at weight i+j. Level 1 adds
    pp0+pp1 and pp2+pp3 in two parallel ripple chains, level 2 merges the
    two sums in parallel low/high blocks, level 3 resolves the remaining
    carry into the high bits.
    """
    pp = [[builder.and2(a_nets[j], b_nets[i], 1, module_id) for j in range(4)]
          for i in range(4)]

    def chain(lo: list[str], hi: list[str]) -> list[str]:
        # lo at weight 0..3, hi at weight 1..4; result bits 0..5
        s1, c = builder.ha(lo[1], hi[0], 1, module_id)
        s2, c = builder.fa(lo[2], hi[1], c, 1, module_id)
        s3, c = builder.fa(lo[3], hi[2], c, 1, module_id)
        s4, c = builder.ha(hi[3], c, 1, module_id)
        return [lo[0], s1, s2, s3, s4, c]

    s01 = chain(pp[0], pp[1])              # bits 0..5
    s23 = chain(pp[2], pp[3])              # bits 2..7 (weight offset 2)

    # level 2: merge s01 + (s23 << 2) in two parallel blocks
    t2, c = builder.ha(s01[2], s23[0], 2, module_id)
    t3, c = builder.fa(s01[3], s23[1], c, 2, module_id)
    t4, c5 = builder.fa(s01[4], s23[2], c, 2, module_id)
    t5, f = builder.ha(s01[5], s23[3], 2, module_id)
    t6, f = builder.ha(s23[4], f, 2, module_id)
    t7, _ = builder.ha(s23[5], f, 2, module_id)   # top carry provably 0

    # level 3: fold the low-block carry into the high bits
    p5, g = builder.ha(t5, c5, 3, module_id)
    p6, g = builder.ha(t6, g, 3, module_id)
    p7, _ = builder.ha(t7, g, 3, module_id)       # top carry provably 0

    return [s01[0], s01[1], t2, t3, t4, p5, p6, p7]


def _mul4_netlist() -> CellNetlist:
    b = NetlistBuilder()
    a_nets = b.input_bus("a", 4)
    b_nets = b.input_bus("b", 4)
    p = _build_mul4(b, a_nets, b_nets)
    b.set_outputs("p", p)
    return b.build()


# Truth tables of the 4x4 netlist: product and per-level activity for all
# 65536 operand pairs, derived by one vectorised netlist evaluation.
_MUL4_TABLES: tuple[np.ndarray, np.ndarray] | None = None


def _mul4_tables() -> tuple[np.ndarray, np.ndarray]:
    global _MUL4_TABLES
    if _MUL4_TABLES is None:
        nl = export_netlist("mul4")
        pairs = np.arange(1 << 8, dtype=np.int64)
        a = pairs & 0xF
        bb = pairs >> 4
        values = nl.evaluate_nets({"a": a, "b": bb})
        product = np.zeros(1 << 8, dtype=np.int64)
        for k, (_, net) in enumerate(nl.outputs):
            product += values[net] << k
        levels = np.zeros(1 << 8, dtype=np.int64)
        for lvl in (1, 2, 3):
            seen = np.zeros(1 << 8, dtype=np.int64)
            for cell in nl.cells:
                if cell.level == lvl and cell.kind in (CellKind.HA, CellKind.FA):
                    for net in cell.inputs:
                        seen |= values[net]
            levels += seen
        _MUL4_TABLES = (product.astype(np.int32), levels.astype(np.int8))
    return _MUL4_TABLES


def _mul4_fast(a: int, b: int) -> tuple[int, int]:
    """(product, active level count) via the precomputed netlist tables."""
    product, levels = _mul4_tables()
    idx = (b << 4) | a
    return int(product[idx]), int(levels[idx])


def _coerce(x: BitVec | int, width: int, name: str) -> BitVec:
    if isinstance(x, BitVec):
        if x.width != width:
            raise ValueError(f"{name} must be {width} bits wide, got {x.width}")
        return x
    return BitVec(x, width)


def mul4(a: BitVec | int, b: BitVec | int, trace: bool = False) -> MulResult:
    """Multiply two 4-bit operands through the block netlist.

    A standalone block has no grid identity, so the activity report carries
    only the adder level count (keyed by None) and an empty block partition.
    """
    av = _coerce(a, 4, "a")
    bv = _coerce(b, 4, "b")
    product, levels = _mul4_fast(av.value, bv.value)
    nets = None
    if trace:
        nets = export_netlist("mul4").evaluate_nets({"a": av.value, "b": bv.value})
    report = ActivityReport(
        active_mul4=frozenset(),
        gated_mul4=frozenset(),
        disabled_faulty=frozenset(),
        adder_levels_active={None: levels},
    )
    return MulResult(BitVec(product, 8), report, nets)


# ---------------------------------------------------------------------------
# 12x12 quadrant module
# ---------------------------------------------------------------------------

def _check_faults(
    faults: Sequence[FaultSpec], quadrant: Quadrant
) -> dict[ModuleId, int]:
    fault_map: dict[ModuleId, int] = {}
    for f in faults:
        if f.target.quadrant is not quadrant:
            raise ValueError(
                f"fault target {f.target} is outside quadrant {quadrant.value}"
            )
        if f.target in fault_map:
            raise ValueError(f"duplicate fault target {f.target}")
        fault_map[f.target] = f.forced_output.value
    return fault_map


def _weighted_sum(parts: Sequence[tuple[int, int]], width: int) -> BitVec:
    """Sum (value, shift) contributions with ripple adds, wrapping at width."""
    acc = BitVec(0, width)
    for value, shift in parts:
        term = BitVec((value << shift) & ((1 << width) - 1), width)
        acc = add(acc, term, width).truncate(width)
    return acc


@dataclass
class _QuadrantOutcome:
    contributions: list[tuple[int, int]]
    active: set[ModuleId]
    gated: set[ModuleId]
    disabled: set[ModuleId]
    levels: dict[ModuleId | None, int]
    unrepaired: list[ModuleId]


def _run_quadrant(
    a: BitVec,
    b: BitVec,
    quadrant: Quadrant,
    fault_map: Mapping[ModuleId, int],
    repair: RepairConfig,
    gating: bool,
) -> _QuadrantOutcome:
    """Evaluate one 12x12 module's nine blocks plus its spare."""
    if repair.target is not None and repair.target.quadrant is not quadrant:
        raise ValueError(
            f"repair target {repair.target} is outside quadrant {quadrant.value}"
        )

    ga = a.split(4)
    gb = b.split(4)
    if gating:
        rows = classify_width(a, INNER_CLASSES) // 4
        cols = classify_width(b, INNER_CLASSES) // 4
    else:
        rows = cols = 3

    out = _QuadrantOutcome([], set(), set(), set(), {}, [])
    spare = SPARE_IDS[quadrant]
    spare_used = False

    for i in range(3):
        for j in range(3):
            mid = GRID_IDS[quadrant][(i, j)]
            energised = i < rows and j < cols
            shift = 4 * (i + j)
            if mid == repair.target:
                # Spare computes this block's share; the block itself is dark.
                out.disabled.add(mid)
                spare_used = True
                if energised:
                    value, lv = _mul4_fast(ga[i].value, gb[j].value)
                    out.contributions.append((value, shift))
                    out.active.add(spare)
                    out.levels[spare] = lv
                else:
                    out.gated.add(spare)
                continue
            if not energised:
                # Powered off: even a faulty block drives nothing.
                out.gated.add(mid)
                continue
            out.active.add(mid)
            value, lv = _mul4_fast(ga[i].value, gb[j].value)
            out.levels[mid] = lv
            if mid in fault_map:
                value = fault_map[mid]
                out.unrepaired.append(mid)
            out.contributions.append((value, shift))

    if not spare_used:
        out.gated.add(spare)
    return out


def mul12(
    a: BitVec | int,
    b: BitVec | int,
    faults: Sequence[FaultSpec] = (),
    repair: RepairConfig = RepairConfig(),
    *,
    quadrant: Quadrant = Quadrant.LL,
    gating: bool = True,
    trace: bool = False,
) -> MulResult:
    """Multiply two 12-bit operands as one quadrant module.

    Standalone use defaults to quadrant LL; embedded use passes the real
    quadrant so fault and repair targets resolve against it.
    """
    av = _coerce(a, 12, "a")
    bv = _coerce(b, 12, "b")
    fault_map = _check_faults(faults, quadrant)
    q = _run_quadrant(av, bv, quadrant, fault_map, repair, gating)

    product = _weighted_sum(q.contributions, 24)
    nets = None
    if trace:
        nets = export_netlist("mul12").evaluate_nets({"a": av.value, "b": bv.value})
    report = ActivityReport(
        active_mul4=frozenset(q.active),
        gated_mul4=frozenset(q.gated),
        disabled_faulty=frozenset(q.disabled),
        adder_levels_active=dict(q.levels),
    )
    return MulResult(product, report, nets, tuple(q.unrepaired))


# ---------------------------------------------------------------------------
# 24x24 top level
# ---------------------------------------------------------------------------

def mul24(
    a: BitVec | int,
    b: BitVec | int,
    faults: Sequence[FaultSpec] = (),
    repair: Mapping[Quadrant, RepairConfig] | None = None,
    *,
    gating: bool = True,
    trace: bool = False,
) -> MulResult:
    """Multiply two 24-bit operands across the four quadrant modules.

    Outer checkers gate the HH/HL/LH quadrants whenever the corresponding
    operand half is all zero (class 12 over [12, 24]); inner per-quadrant
    checkers then gate individual blocks. A fully gated quadrant is dark:
    faults in it are invisible and its repair configuration is moot.
    """
    av = _coerce(a, 24, "a")
    bv = _coerce(b, 24, "b")
    repair = dict(repair) if repair else {}
    for q, cfg in repair.items():
        if cfg.target is not None and cfg.target.quadrant is not q:
            raise ValueError(f"repair target {cfg.target} filed under {q.value}")

    by_quadrant: dict[Quadrant, list[FaultSpec]] = {q: [] for q in Quadrant}
    for f in faults:
        by_quadrant[f.target.quadrant].append(f)

    if gating:
        a_cls = classify_width(av, OUTER_CLASSES)
        b_cls = classify_width(bv, OUTER_CLASSES)
    else:
        a_cls = b_cls = 24

    halves_a = {False: av.truncate(12), True: BitVec(av.value >> 12, 12)}
    halves_b = {False: bv.truncate(12), True: BitVec(bv.value >> 12, 12)}

    contributions: list[tuple[int, int]] = []
    active: set[ModuleId] = set()
    gated: set[ModuleId] = set()
    disabled: set[ModuleId] = set()
    levels: dict[ModuleId | None, int] = {}
    unrepaired: list[ModuleId] = []

    for quad in Quadrant:
        quad_on = (not quad.a_high or a_cls == 24) and (not quad.b_high or b_cls == 24)
        if not quad_on:
            gated.update(GRID_IDS[quad].values())
            gated.add(SPARE_IDS[quad])
            continue
        sub = _run_quadrant(
            halves_a[quad.a_high],
            halves_b[quad.b_high],
            quad,
            _check_faults(by_quadrant[quad], quad),
            repair.get(quad, RepairConfig()),
            gating,
        )
        quad_product = _weighted_sum(sub.contributions, 24)
        contributions.append((quad_product.value, quad.shift))
        active |= sub.active
        gated |= sub.gated
        disabled |= sub.disabled
        levels.update(sub.levels)
        unrepaired.extend(sub.unrepaired)

    product = _weighted_sum(contributions, 48)
    nets = None
    if trace:
        nets = export_netlist("mul24").evaluate_nets({"a": av.value, "b": bv.value})
    report = ActivityReport(
        active_mul4=frozenset(active),
        gated_mul4=frozenset(gated),
        disabled_faulty=frozenset(disabled),
        adder_levels_active=levels,
    )
    return MulResult(product, report, nets, tuple(unrepaired))


# ---------------------------------------------------------------------------
# Structural netlists for the composed datapaths
# ---------------------------------------------------------------------------

def _add_shifted(
    builder: NetlistBuilder, acc: list[str], addend: Sequence[str], shift: int
) -> list[str]:
    """Ripple-add ``addend << shift`` into ``acc`` (lists of nets, LSB first).

    Positions where only one operand has a bit are plain wires; a final
    carry extends the result by one net.
    """
    result = list(acc[:shift])
    carry: str | None = None
    top = max(len(acc), shift + len(addend))
    for pos in range(shift, top):
        ops = []
        if pos < len(acc):
            ops.append(acc[pos])
        if 0 <= pos - shift < len(addend):
            ops.append(addend[pos - shift])
        if carry is not None:
            ops.append(carry)
        if len(ops) == 3:
            s, carry = builder.fa(*ops)
            result.append(s)
        elif len(ops) == 2:
            s, carry = builder.ha(*ops)
            result.append(s)
        elif len(ops) == 1:
            result.append(ops[0])
            carry = None
        else:
            break
    if carry is not None:
        result.append(carry)
    return result


def _build_mul12(
    builder: NetlistBuilder,
    a_nets: Sequence[str],
    b_nets: Sequence[str],
    quadrant: Quadrant,
) -> list[str]:
    """Nine 4x4 blocks plus the weighted block-product sum; 24 product nets."""
    acc: list[str] = []
    for i in range(3):
        for j in range(3):
            mid = str(GRID_IDS[quadrant][(i, j)])
            pp = _build_mul4(
                builder, a_nets[4 * i : 4 * i + 4], b_nets[4 * j : 4 * j + 4], mid
            )
            if not acc:
                acc = list(pp)
            else:
                acc = _add_shifted(builder, acc, pp, 4 * (i + j))
    return acc[:24]


def _mul12_netlist() -> CellNetlist:
    b = NetlistBuilder()
    a_nets = b.input_bus("a", 12)
    b_nets = b.input_bus("b", 12)
    p = _build_mul12(b, a_nets, b_nets, Quadrant.LL)
    b.set_outputs("p", p)
    return b.build()


def _mul24_netlist() -> CellNetlist:
    b = NetlistBuilder()
    a_nets = b.input_bus("a", 24)
    b_nets = b.input_bus("b", 24)
    halves_a = {False: a_nets[:12], True: a_nets[12:]}
    halves_b = {False: b_nets[:12], True: b_nets[12:]}
    acc: list[str] = []
    for quad in (Quadrant.LL, Quadrant.HL, Quadrant.LH, Quadrant.HH):
        pp = _build_mul12(b, halves_a[quad.a_high], halves_b[quad.b_high], quad)
        if not acc:
            acc = list(pp)
        else:
            acc = _add_shifted(b, acc, pp, quad.shift)
    b.set_outputs("p", acc[:48])
    return b.build()


_NETLIST_CACHE: dict[str, CellNetlist] = {}
_NETLIST_BUILDERS = {
    "mul4": _mul4_netlist,
    "mul12": _mul12_netlist,
    "mul24": _mul24_netlist,
}


def export_netlist(level: str) -> CellNetlist:
    """The full structural datapath netlist for 'mul4', 'mul12' or 'mul24'.

    This is the bare multiplier array: checkers, gating switches and repair
    routing are control logic around it and are accounted separately by
    :func:`cost_report`.
    """
    if level not in _NETLIST_BUILDERS:
        raise ValueError(f"unknown netlist level {level!r}")
    if level not in _NETLIST_CACHE:
        _NETLIST_CACHE[level] = _NETLIST_BUILDERS[level]()
    return _NETLIST_CACHE[level]


# ---------------------------------------------------------------------------
# Cost model
# ---------------------------------------------------------------------------

# Unit-cost accounting for the control logic that the reconfigurable build
# adds around the bare datapath. Primitive counts (each = 1 cell):
#   zero-detect of an n-bit group: (n-1) OR cells + 1 inverter
#   width checker over [4,8,12]:   two group detects + 3 class-encode cells
#   outer checker over [12,24]:    one 12-bit group detect
#   power switch: 1 cell per gateable block (spares included)
#   repair: per quadrant, a 9-way target decode, operand steering onto the
#     spare (2 operands x 4 bits x 8 mux cells) and per-bit product
#     substitution (9 blocks x 8 bits)
_ZERO4 = 3 + 1
_ZERO12 = 11 + 1
_CHECKER12 = 2 * _ZERO4 + 3
_CHECKER12_DEPTH = 3 + 1            # OR tree depth 2 + inverter + encode
_REPAIR_PER_QUADRANT = 9 + 2 * 4 * 8 + 9 * 8 + 1
_SPARE_CELLS = 33                   # one idle 4x4 block


@dataclass(frozen=True)
class CostReport:
    """Deterministic cell-count / unit-delay summary for one datapath build."""

    level: str
    with_features: bool
    datapath_cells: int
    feature_cells: int
    unit_delay: int

    @property
    def cells(self) -> int:
        return self.datapath_cells + self.feature_cells

    def to_json(self) -> dict:
        return {
            "circuit": self.level,
            "with_features": self.with_features,
            "cells": self.cells,
            "datapath_cells": self.datapath_cells,
            "feature_cells": self.feature_cells,
            "unit_delay": self.unit_delay,
        }


def cost_report(level: str, with_features: bool = False) -> CostReport:
    """Cell count and unit delay, optionally including checker/repair logic.

    The feature overhead never changes the product: checkers only gate
    blocks whose operand groups are zero, and the spare computes exactly
    what the replaced block would have.
    """
    nl = export_netlist(level)
    base = nl.cell_count()
    delay = nl.unit_delay()
    if not with_features:
        return CostReport(level, False, base, 0, delay)
    if level == "mul4":
        # per-level activity detects plus one power switch per level
        extra = 3 * (7 + 1)
        return CostReport(level, True, base, extra, delay + 1)
    per_quadrant = 2 * _CHECKER12 + 10 + _REPAIR_PER_QUADRANT + _SPARE_CELLS
    if level == "mul12":
        return CostReport(level, True, base, per_quadrant, delay + _CHECKER12_DEPTH + 1)
    extra = 4 * per_quadrant + 2 * _ZERO12 + 4
    return CostReport(level, True, base, extra, delay + _CHECKER12_DEPTH + 2)
