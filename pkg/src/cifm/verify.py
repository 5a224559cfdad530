"""Named verification sweeps.

Each suite is a pure function of a seed that runs a fixed batch of checks
against an independent oracle (native Python integer multiplication, or the
soft-float multiplier in :mod:`cifm.softfloat`) and returns pass/total
counts. The command line front end and the test suite both call these, so
a sweep that fails in CI fails identically at the shell.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fp32, revlogic, softfloat
from .multiplier import (
    GRID_IDS,
    FaultSpec,
    Quadrant,
    RepairConfig,
    export_netlist,
    mul4,
    mul12,
    mul24,
)
from .revlogic import expand, gate_library, simulate, simulate_inverse

__all__ = ["SuiteResult", "SUITES", "run_suite", "BOUNDARY_VALUES"]

# Corner operands exercised on top of every random integer sweep; values
# that do not fit a narrower width are skipped there.
BOUNDARY_VALUES = (0, 1, 2**12 - 1, 2**12, 2**24 - 1)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: int
    total: int
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def summary(self) -> str:
        return f"{self.name}: {self.passed}/{self.total} pass"

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "total": self.total,
            "ok": self.ok,
            "notes": list(self.notes),
        }


def _mul4_index_space() -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(1 << 16, dtype=np.int64)
    return idx & 0xF, (idx >> 4) & 0xF


def suite_mul4_exhaustive(seed: int = 0) -> SuiteResult:
    """Every 16-bit (a, b) index against native multiplication.

    Checks both the gate-level netlist evaluation and the table-driven
    fast path mul4 actually runs on.
    """
    a, b = _mul4_index_space()
    want = a * b
    net_prod = export_netlist("mul4").evaluate({"a": a, "b": b})
    good = net_prod == want
    fast = np.array(
        [int(mul4(x, y).product) for y in range(16) for x in range(16)],
        dtype=np.int64,
    )
    good &= fast[(b << 4) | a] == want
    return SuiteResult("mul4-exhaustive", int(np.count_nonzero(good)), a.size)


def _random_operands(rng: np.random.Generator, width: int, n: int) -> list[int]:
    """Operands spanning every magnitude class, zeros included."""
    buckets = list(range(0, width + 1, 4))
    ks = rng.choice(buckets, size=n)
    out = []
    for k in ks:
        out.append(0 if k == 0 else int(rng.integers(0, 1 << int(k))))
    return out


def _int_sweep(name: str, width: int, fn, seed: int, n: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    pairs = list(zip(_random_operands(rng, width, n), _random_operands(rng, width, n)))
    fits = [v for v in BOUNDARY_VALUES if v < (1 << width)]
    pairs += [(x, y) for x in fits for y in fits]
    passed = sum(1 for x, y in pairs if int(fn(x, y).product) == x * y)
    return SuiteResult(name, passed, len(pairs))


def suite_mul12_random(seed: int = 0) -> SuiteResult:
    return _int_sweep("mul12-random", 12, mul12, seed, 10_000)


def suite_mul24_random(seed: int = 0) -> SuiteResult:
    return _int_sweep("mul24-random", 24, mul24, seed, 10_000)


def suite_gating_safety(seed: int = 0) -> SuiteResult:
    """Width gating must never change the product, only the activity."""
    rng = np.random.default_rng(seed)
    n = 10_000
    pairs = list(zip(_random_operands(rng, 24, n), _random_operands(rng, 24, n)))
    passed = 0
    for x, y in pairs:
        gated = mul24(x, y, gating=True)
        plain = mul24(x, y, gating=False)
        if int(gated.product) == int(plain.product) == x * y:
            passed += 1
    total = len(pairs)
    narrow = mul24(0xF, 0xF).activity.power_proxy
    wide = mul24(2**24 - 1, 2**24 - 1).activity.power_proxy
    passed += (narrow == 1) + (wide == 36)
    total += 2
    notes = (f"power_proxy narrow={narrow} wide={wide}",)
    return SuiteResult("gating-safety", passed, total, notes)


def suite_fp32_oracle(seed: int = 0) -> SuiteResult:
    """Round-to-nearest-even datapath against the soft-float oracle."""
    rng = np.random.default_rng(seed)
    wanted = 10_000
    passed = total = 0
    while total < wanted:
        bits_a = _random_normal_bits(rng)
        bits_b = _random_normal_bits(rng)
        want = softfloat.softfloat_mul(bits_a, bits_b)
        if not _is_normal(want):
            continue
        total += 1
        got, _ = fp32.fp_mul(bits_a, bits_b)
        passed += int(got) == want
    for bits_a, bits_b, want in _SPECIAL_CASES:
        total += 1
        got, _ = fp32.fp_mul(bits_a, bits_b)
        ok = int(got) == want == softfloat.softfloat_mul(bits_a, bits_b)
        passed += ok
    return SuiteResult("fp32-oracle", passed, total)


def _random_normal_bits(rng: np.random.Generator) -> int:
    sign = int(rng.integers(0, 2))
    exponent = int(rng.integers(1, 255))
    fraction = int(rng.integers(0, 1 << 23))
    return (sign << 31) | (exponent << 23) | fraction


def _is_normal(bits: int) -> bool:
    exponent = (bits >> 23) & 0xFF
    return 0 < exponent < 255


_INF = 0x7F800000
_QNAN = softfloat.CANONICAL_QNAN
_ONE = 0x3F800000

_SPECIAL_CASES = (
    (_QNAN, _ONE, _QNAN),               # NaN propagates
    (_ONE, 0x7F800001, _QNAN),          # signalling NaN operand
    (_INF, 0x00000000, _QNAN),          # Inf x 0
    (0x80000000, _INF, _QNAN),          # -0 x Inf
    (_INF, 0xC0000000, 0xFF800000),     # Inf x -2
    (_INF, _INF, _INF),
    (0x00000000, _ONE, 0x00000000),     # 0 x finite
    (0xBF800000, 0x00000000, 0x80000000),
    (0x00000001, _ONE, 0x00000000),     # subnormal flushes to zero
)


def suite_rev_roundtrip(seed: int = 0) -> SuiteResult:
    """Inverse simulation recovers inputs and ancilla constants exactly."""
    passed = total = 0
    for gate in gate_library().values():
        total += 1
        passed += sorted(gate.mapping) == list(range(1 << gate.arity))

    a, b = _mul4_index_space()
    rev4 = expand(export_netlist("mul4"))
    passed += _roundtrip_count(rev4, _bit_inputs(a, b, 4))
    total += a.size

    rng = np.random.default_rng(seed)
    a24 = rng.integers(0, 1 << 24, size=1000, dtype=np.int64)
    b24 = rng.integers(0, 1 << 24, size=1000, dtype=np.int64)
    rev24 = expand(export_netlist("mul24"))
    passed += _roundtrip_count(rev24, _bit_inputs(a24, b24, 24))
    total += a24.size
    return SuiteResult("rev-roundtrip", passed, total)


def _bit_inputs(a: np.ndarray, b: np.ndarray, width: int) -> dict[str, np.ndarray]:
    ins = {}
    for k in range(width):
        ins[f"a{k}"] = (a >> k) & 1
        ins[f"b{k}"] = (b >> k) & 1
    return ins


def _roundtrip_count(rev: revlogic.RevNetlist, ins: dict[str, np.ndarray]) -> int:
    fwd = simulate(rev, ins)
    back = simulate_inverse(rev, fwd.line_values)
    size = next(iter(ins.values())).size
    good = np.ones(size, dtype=bool)
    for i, line in enumerate(rev.lines):
        want = ins[line.name] if line.name is not None else line.const
        good &= back[i] == want
    return int(np.count_nonzero(good))


def suite_rev_expand(seed: int = 0) -> SuiteResult:
    """Expanded reversible circuits agree with the cell netlists they mirror."""
    a, b = _mul4_index_space()
    rev4 = expand(export_netlist("mul4"))
    got = _rev_product(rev4, _bit_inputs(a, b, 4), 8)
    passed = int(np.count_nonzero(got == a * b))
    total = a.size

    rng = np.random.default_rng(seed)
    a24 = rng.integers(0, 1 << 24, size=1000, dtype=np.int64)
    b24 = rng.integers(0, 1 << 24, size=1000, dtype=np.int64)
    rev24 = expand(export_netlist("mul24"))
    got24 = _rev_product(rev24, _bit_inputs(a24, b24, 24), 48)
    want24 = a24.astype(object) * b24.astype(object)
    passed += int(np.count_nonzero(got24 == want24))
    total += a24.size
    return SuiteResult("rev-expand", passed, total)


def _rev_product(rev: revlogic.RevNetlist, ins: dict, out_bits: int) -> np.ndarray:
    res = simulate(rev, ins)
    return sum(
        res.outputs[f"p{k}"].astype(object) << k for k in range(out_bits)
    )


def suite_repair_all(seed: int = 0) -> SuiteResult:
    """Every block position: repair restores exactness, no repair shows the fault."""
    rng = np.random.default_rng(seed)
    pairs = [
        (int(rng.integers(0, 1 << 24)), int(rng.integers(0, 1 << 24)))
        for _ in range(1000)
    ]
    passed = total = 0
    notes = []
    for quadrant in Quadrant:
        for position, target in sorted(GRID_IDS[quadrant].items()):
            fault = [FaultSpec(target, 0xFF)]
            repair = {quadrant: RepairConfig(enabled=True, target=target)}
            for x, y in pairs:
                total += 1
                r = mul24(x, y, faults=fault, repair=repair)
                passed += int(r.product) == x * y and not r.unrepaired_faults
            total += 1
            exposed = any(
                int(mul24(x, y, faults=fault).product) != x * y for x, y in pairs
            )
            passed += exposed
            if not exposed:
                notes.append(f"fault at {target} never observable")
    return SuiteResult("repair-all", passed, total, tuple(notes))


SUITES = {
    "mul4-exhaustive": suite_mul4_exhaustive,
    "mul12-random": suite_mul12_random,
    "mul24-random": suite_mul24_random,
    "gating-safety": suite_gating_safety,
    "fp32-oracle": suite_fp32_oracle,
    "rev-roundtrip": suite_rev_roundtrip,
    "rev-expand": suite_rev_expand,
    "repair-all": suite_repair_all,
}


def run_suite(name: str, seed: int = 0) -> SuiteResult:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return fn(seed)
