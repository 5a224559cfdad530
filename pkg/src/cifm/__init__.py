"""Bit-accurate model of a block-structured 24x24 multiplier.

The datapath is built from gated 4x4 multiplier blocks with per-quadrant
spares, wrapped by width checkers, a self-repair mux layer, an IEEE-754
single precision front end, and a reversible-logic expansion with gate,
garbage, ancilla, and delay accounting.
"""

from .bitcore import (
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
from .fp32 import Fp32Class, Fp32Parts, FpMulTrace, Rounding, fp_mul, pack, unpack
from .multiplier import (
    GRID_IDS,
    INNER_CLASSES,
    OUTER_CLASSES,
    SPARE_IDS,
    ActivityReport,
    CostReport,
    FaultSpec,
    ModuleId,
    MulResult,
    Quadrant,
    RepairConfig,
    activity_of,
    cost_report,
    export_netlist,
    mul4,
    mul12,
    mul24,
)
from .revlogic import (
    FullAdderVariant,
    GateApp,
    LineTag,
    Metrics,
    OutputRole,
    RevGate,
    RevLine,
    RevNetlist,
    build_full_adder,
    expand,
    gate_library,
    make_feynman,
    make_fredkin,
    make_new_gate,
    make_not,
    make_standard_gates,
    make_toffoli,
    make_tsg,
    metrics_of,
    simulate,
    simulate_inverse,
)
from .softfloat import CANONICAL_QNAN, softfloat_mul
from .verify import BOUNDARY_VALUES, SUITES, SuiteResult, run_suite

__version__ = "0.1.0"

__all__ = [
    "BitVec",
    "Cell",
    "CellKind",
    "CellNetlist",
    "NetlistBuilder",
    "add",
    "classify_width",
    "full_add",
    "half_add",
    "Fp32Class",
    "Fp32Parts",
    "FpMulTrace",
    "Rounding",
    "fp_mul",
    "pack",
    "unpack",
    "GRID_IDS",
    "INNER_CLASSES",
    "OUTER_CLASSES",
    "SPARE_IDS",
    "ActivityReport",
    "CostReport",
    "FaultSpec",
    "ModuleId",
    "MulResult",
    "Quadrant",
    "RepairConfig",
    "activity_of",
    "cost_report",
    "export_netlist",
    "mul4",
    "mul12",
    "mul24",
    "FullAdderVariant",
    "GateApp",
    "LineTag",
    "Metrics",
    "OutputRole",
    "RevGate",
    "RevLine",
    "RevNetlist",
    "build_full_adder",
    "expand",
    "gate_library",
    "make_feynman",
    "make_fredkin",
    "make_new_gate",
    "make_not",
    "make_standard_gates",
    "make_toffoli",
    "make_tsg",
    "metrics_of",
    "simulate",
    "simulate_inverse",
    "CANONICAL_QNAN",
    "softfloat_mul",
    "BOUNDARY_VALUES",
    "SUITES",
    "SuiteResult",
    "run_suite",
    "__version__",
]
