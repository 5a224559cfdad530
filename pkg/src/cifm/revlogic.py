"""Reversible-logic gates, netlists, metrics, and classical-netlist expansion.

A reversible gate is a bijection on the 2**k value patterns of the k lines
it touches; bijectivity is checked exhaustively at construction. Circuits
are straight-line sequences of gate applications over a fixed set of lines,
so inverse simulation is just the inverse permutations in reverse order.

The gate library is the classics plus the two compound gates this design
is built from:

* TSG, 4 lines: P = A, Q = (A'C') xor B', R = Q xor D,
  S = (Q and D) xor (AB xor C). With C tied to 0 it is a full adder:
  R = sum, S = carry, two garbage lines.
* New Gate (NG), 3 lines: P = A, Q = AB xor C, R = (A'C') xor B'. With C
  tied to 0 it is a half adder: Q = carry, R = sum, one garbage line.

:func:`expand` rewrites any AND/HA/FA cell netlist into reversible form:
Toffoli per AND, NG per HA, TSG per FA, and a Feynman copy per extra
consumer of a net. Simulation accepts ints or numpy arrays per input line,
so exhaustive and bulk random equivalence sweeps stay fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .bitcore import CellKind, CellNetlist

__all__ = [
    "RevGate",
    "make_not",
    "make_feynman",
    "make_toffoli",
    "make_fredkin",
    "make_new_gate",
    "make_tsg",
    "make_standard_gates",
    "LineTag",
    "OutputRole",
    "RevLine",
    "GateApp",
    "RevNetlist",
    "SimResult",
    "simulate",
    "simulate_inverse",
    "FullAdderVariant",
    "build_full_adder",
    "expand",
    "Metrics",
    "metrics_of",
]


@dataclass(frozen=True)
class RevGate:
    """A named bijection over the 2**arity patterns of its lines.

    ``mapping[i]`` is the output pattern for input pattern i, with the
    first line as the most significant bit.
    """

    name: str
    arity: int
    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        size = 1 << self.arity
        if len(self.mapping) != size or sorted(self.mapping) != list(range(size)):
            raise ValueError(f"gate {self.name} mapping is not a bijection")
        object.__setattr__(
            self, "_array", np.array(self.mapping, dtype=np.uint8)
        )
        inv = [0] * size
        for i, o in enumerate(self.mapping):
            inv[o] = i
        object.__setattr__(self, "_inverse_array", np.array(inv, dtype=np.uint8))

    def inverse_mapping(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self._inverse_array)  # type: ignore[attr-defined]


def _gate_from_function(name: str, arity: int, fn) -> RevGate:
    """Build a gate from a bit-tuple function (checked for bijectivity)."""
    mapping = []
    for i in range(1 << arity):
        bits = tuple((i >> (arity - 1 - k)) & 1 for k in range(arity))
        out = fn(*bits)
        mapping.append(sum(v << (arity - 1 - k) for k, v in enumerate(out)))
    return RevGate(name, arity, tuple(mapping))


def make_not() -> RevGate:
    return _gate_from_function("NOT", 1, lambda a: (1 - a,))


def make_feynman() -> RevGate:
    return _gate_from_function("FEYNMAN", 2, lambda a, b: (a, a ^ b))


def make_toffoli() -> RevGate:
    return _gate_from_function("TOFFOLI", 3, lambda a, b, c: (a, b, (a & b) ^ c))


def make_fredkin() -> RevGate:
    return _gate_from_function(
        "FREDKIN", 3, lambda a, b, c: (a, c if a else b, b if a else c)
    )


def make_new_gate() -> RevGate:
    def fn(a, b, c):
        return (a, (a & b) ^ c, ((1 - a) & (1 - c)) ^ (1 - b))

    return _gate_from_function("NG", 3, fn)


def make_tsg() -> RevGate:
    def fn(a, b, c, d):
        q = ((1 - a) & (1 - c)) ^ (1 - b)
        return (a, q, q ^ d, (q & d) ^ ((a & b) ^ c))

    return _gate_from_function("TSG", 4, fn)


def make_standard_gates() -> dict[str, RevGate]:
    gates = [make_not(), make_feynman(), make_toffoli(), make_fredkin()]
    return {g.name: g for g in gates}


_GATE_LIBRARY: dict[str, RevGate] | None = None


def gate_library() -> dict[str, RevGate]:
    global _GATE_LIBRARY
    if _GATE_LIBRARY is None:
        _GATE_LIBRARY = make_standard_gates()
        _GATE_LIBRARY["NG"] = make_new_gate()
        _GATE_LIBRARY["TSG"] = make_tsg()
    return _GATE_LIBRARY


class LineTag(Enum):
    PRIMARY_INPUT = "input"
    ANCILLA = "ancilla"


class OutputRole(Enum):
    PRIMARY_OUTPUT = "output"
    GARBAGE = "garbage"
    RESTORED_CONSTANT = "restored_constant"


@dataclass(frozen=True)
class RevLine:
    tag: LineTag
    name: str | None = None          # for primary inputs
    const: int | None = None         # for ancillas, 0 or 1

    def __post_init__(self) -> None:
        if self.tag is LineTag.PRIMARY_INPUT and self.name is None:
            raise ValueError("primary input line needs a name")
        if self.tag is LineTag.ANCILLA and self.const not in (0, 1):
            raise ValueError("ancilla line needs a 0/1 constant")


@dataclass(frozen=True)
class GateApp:
    gate: RevGate
    lines: tuple[int, ...]


@dataclass
class RevNetlist:
    """Straight-line reversible circuit over a fixed line set."""

    lines: list[RevLine] = field(default_factory=list)
    gates: list[GateApp] = field(default_factory=list)
    # role per line, parallel to ``lines``; None until assigned
    output_roles: list[tuple[OutputRole, str | None]] = field(default_factory=list)

    def add_input(self, name: str) -> int:
        self.lines.append(RevLine(LineTag.PRIMARY_INPUT, name=name))
        self.output_roles.append((OutputRole.GARBAGE, None))
        return len(self.lines) - 1

    def add_ancilla(self, const: int) -> int:
        self.lines.append(RevLine(LineTag.ANCILLA, const=const))
        self.output_roles.append((OutputRole.GARBAGE, None))
        return len(self.lines) - 1

    def apply(self, gate: RevGate, *line_ids: int) -> None:
        if len(line_ids) != gate.arity or len(set(line_ids)) != gate.arity:
            raise ValueError(
                f"{gate.name} touches {gate.arity} distinct lines, got {line_ids}"
            )
        for l in line_ids:
            if not 0 <= l < len(self.lines):
                raise ValueError(f"line index {l} out of range")
        self.gates.append(GateApp(gate, tuple(line_ids)))

    def set_output(self, line: int, name: str) -> None:
        self.output_roles[line] = (OutputRole.PRIMARY_OUTPUT, name)

    def set_restored(self, line: int) -> None:
        self.output_roles[line] = (OutputRole.RESTORED_CONSTANT, None)

    def outputs(self) -> list[tuple[str, int]]:
        return [
            (name, i)
            for i, (role, name) in enumerate(self.output_roles)
            if role is OutputRole.PRIMARY_OUTPUT
        ]

    def to_json(self) -> dict:
        lines = []
        for l in self.lines:
            if l.tag is LineTag.PRIMARY_INPUT:
                lines.append({"tag": l.tag.value, "name": l.name})
            else:
                lines.append({"tag": l.tag.value, "const": l.const})
        return {
            "lines": lines,
            "gates": [
                {"name": g.gate.name, "lines": list(g.lines), "ordinal": i}
                for i, g in enumerate(self.gates)
            ],
            "output_roles": [
                {"line": i, "role": role.value, "name": name}
                for i, (role, name) in enumerate(self.output_roles)
            ],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "RevNetlist":
        lib = gate_library()
        n = cls()
        for d in doc["lines"]:
            if d["tag"] == LineTag.PRIMARY_INPUT.value:
                n.add_input(d["name"])
            else:
                n.add_ancilla(d["const"])
        for d in sorted(doc["gates"], key=lambda g: g["ordinal"]):
            n.apply(lib[d["name"]], *d["lines"])
        for d in doc["output_roles"]:
            role = OutputRole(d["role"])
            n.output_roles[d["line"]] = (role, d.get("name"))
        return n


@dataclass(frozen=True)
class SimResult:
    line_values: tuple
    outputs: dict


def _initial_values(n: RevNetlist, inputs: Mapping) -> list:
    values = []
    for line in n.lines:
        if line.tag is LineTag.PRIMARY_INPUT:
            if line.name not in inputs:
                raise ValueError(f"missing value for input line {line.name!r}")
            values.append(inputs[line.name])
        else:
            values.append(line.const)
    return values


def _apply_gates(values: list, gates: Iterable[tuple[np.ndarray, tuple[int, ...]]]):
    for table, lines in gates:
        idx = values[lines[0]]
        for l in lines[1:]:
            idx = (idx << 1) | values[l]
        out = table[idx]
        for k, l in enumerate(lines):
            values[l] = (out >> (len(lines) - 1 - k)) & 1


def _is_vector(inputs: Mapping) -> bool:
    return any(isinstance(v, np.ndarray) for v in inputs.values())


def _broadcast(values: list) -> list:
    size = max(v.shape[0] for v in values if isinstance(v, np.ndarray))
    return [
        v if isinstance(v, np.ndarray) else np.full(size, v, dtype=np.int64)
        for v in values
    ]


def simulate(n: RevNetlist, inputs: Mapping) -> SimResult:
    """Run the circuit forward. Input values may be ints or int arrays."""
    values = _initial_values(n, inputs)
    if _is_vector(inputs):
        values = _broadcast(values)
    _apply_gates(
        values,
        ((g.gate._array, g.lines) for g in n.gates),  # type: ignore[attr-defined]
    )
    outputs = {name: values[i] for name, i in n.outputs()}
    return SimResult(tuple(values), outputs)


def simulate_inverse(n: RevNetlist, final_values: Sequence) -> list:
    """Run the circuit backward from a complete final line assignment."""
    if len(final_values) != len(n.lines):
        raise ValueError(
            f"expected {len(n.lines)} line values, got {len(final_values)}"
        )
    values = list(final_values)
    _apply_gates(
        values,
        (
            (g.gate._inverse_array, g.lines)  # type: ignore[attr-defined]
            for g in reversed(n.gates)
        ),
    )
    return values


# ---------------------------------------------------------------------------
# The four full-adder constructions
# ---------------------------------------------------------------------------

class FullAdderVariant(Enum):
    TSG = "fa-tsg"
    NG_NG_FEYNMAN = "fa-ng2"
    NG_TOFFOLI_FEYNMAN = "fa-ng-toffoli"
    FREDKIN5 = "fa-fredkin5"


def build_full_adder(variant: FullAdderVariant) -> RevNetlist:
    """One-bit full adder (inputs a, b, cin; outputs sum, carry)."""
    lib = gate_library()
    n = RevNetlist()
    if variant is FullAdderVariant.TSG:
        a = n.add_input("a")
        b = n.add_input("b")
        z = n.add_ancilla(0)
        cin = n.add_input("cin")
        n.apply(lib["TSG"], a, b, z, cin)
        n.set_output(z, "sum")
        n.set_output(cin, "carry")
    elif variant is FullAdderVariant.NG_NG_FEYNMAN:
        # NG half-adds a,b; a second NG half-adds (a xor b) with cin; a
        # Feynman folds the two part-carries together.
        a = n.add_input("a")
        b = n.add_input("b")
        z0 = n.add_ancilla(0)
        cin = n.add_input("cin")
        z1 = n.add_ancilla(0)
        n.apply(lib["NG"], a, b, z0)        # b <- ab, z0 <- a^b
        n.apply(lib["NG"], z0, cin, z1)     # cin <- (a^b)cin, z1 <- sum
        n.apply(lib["FEYNMAN"], cin, b)     # b <- ab ^ (a^b)cin = carry
        n.set_output(z1, "sum")
        n.set_output(b, "carry")
    elif variant is FullAdderVariant.NG_TOFFOLI_FEYNMAN:
        # NG half-adds a,b; a Toffoli accumulates the carry; a Feynman
        # finishes the sum.
        a = n.add_input("a")
        b = n.add_input("b")
        z = n.add_ancilla(0)
        cin = n.add_input("cin")
        n.apply(lib["NG"], a, b, z)         # b <- ab, z <- a^b
        n.apply(lib["TOFFOLI"], z, cin, b)  # b <- ab ^ (a^b)cin = carry
        n.apply(lib["FEYNMAN"], z, cin)     # cin <- sum
        n.set_output(cin, "sum")
        n.set_output(b, "carry")
    elif variant is FullAdderVariant.FREDKIN5:
        # Serial five-gate conservative-logic chain: build (a^b, (a^b)'),
        # fork a working copy of that pair, fold in cin for the sum, then
        # select the carry with the pair as control.
        a = n.add_input("a")
        b = n.add_input("b")
        cin = n.add_input("cin")
        z0 = n.add_ancilla(0)
        z1 = n.add_ancilla(1)
        z2 = n.add_ancilla(0)
        z3 = n.add_ancilla(1)
        f = lib["FREDKIN"]
        n.apply(f, a, z0, z1)       # z0 <- a, z1 <- a'
        n.apply(f, b, z0, z1)       # z0 <- a^b, z1 <- (a^b)'
        n.apply(f, z0, z2, z3)      # z2 <- a^b, z3 <- (a^b)'
        n.apply(f, cin, z2, z3)     # z2 <- sum, z3 <- sum'
        n.apply(f, z0, a, cin)      # a <- (a^b) ? cin : a = carry
        n.set_output(z2, "sum")
        n.set_output(a, "carry")
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return n


# ---------------------------------------------------------------------------
# Classical-to-reversible expansion
# ---------------------------------------------------------------------------

def expand(netlist: CellNetlist) -> RevNetlist:
    """Rewrite an AND/HA/FA cell netlist as a reversible circuit.

    Mapping: AND -> Toffoli onto a fresh 0-ancilla; HA -> New Gate with a
    0-ancilla third line (carry appears on the second input's line, sum on
    the ancilla); FA -> TSG with a 0-ancilla third line (sum on the
    ancilla, carry on the carry-in's line). A net consumed by n places gets
    n-1 Feynman copies onto fresh 0-ancillas, made while the producing line
    still holds the value; a primary output counts as one more consumer so
    its line is never handed to a gate.
    """
    lib = gate_library()
    rev = RevNetlist()

    output_nets = {net for _, net in netlist.outputs}
    consumers: dict[str, int] = {}
    for cell in netlist.cells:
        for net in cell.inputs:
            consumers[net] = consumers.get(net, 0) + 1

    # per net: list of line ids, one per consumer (output slot last)
    slots: dict[str, list[int]] = {}
    taken: dict[str, int] = {}

    def provision(net: str, home: int) -> None:
        need = consumers.get(net, 0) + (1 if net in output_nets else 0)
        lines = [home]
        for _ in range(max(need, 1) - 1):
            copy = rev.add_ancilla(0)
            rev.apply(lib["FEYNMAN"], home, copy)
            lines.append(copy)
        slots[net] = lines
        taken[net] = 0

    def claim(net: str) -> int:
        line = slots[net][taken[net]]
        taken[net] += 1
        return line

    for name, nets in netlist.inputs:
        for k, net in enumerate(nets):
            provision(net, rev.add_input(f"{name}{k}"))

    for cell in netlist.cells:
        in_lines = [claim(net) for net in cell.inputs]
        if cell.kind is CellKind.AND:
            target = rev.add_ancilla(0)
            rev.apply(lib["TOFFOLI"], in_lines[0], in_lines[1], target)
            provision(cell.outputs[0], target)
        elif cell.kind is CellKind.HA:
            z = rev.add_ancilla(0)
            rev.apply(lib["NG"], in_lines[0], in_lines[1], z)
            provision(cell.outputs[0], z)             # sum
            provision(cell.outputs[1], in_lines[1])   # carry
        else:
            z = rev.add_ancilla(0)
            rev.apply(lib["TSG"], in_lines[0], in_lines[1], z, in_lines[2])
            provision(cell.outputs[0], z)             # sum
            provision(cell.outputs[1], in_lines[2])   # carry

    for name, net in netlist.outputs:
        rev.set_output(slots[net][-1], name)
    return rev


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Metrics:
    gate_count: int
    garbage_count: int
    ancilla_count: int
    unit_delay: int

    def to_json(self) -> dict:
        return {
            "gates": self.gate_count,
            "garbage_outputs": self.garbage_count,
            "ancilla": self.ancilla_count,
            "unit_delay": self.unit_delay,
        }


def metrics_of(n: RevNetlist) -> Metrics:
    """Gate, garbage, ancilla and critical-path counts for a circuit.

    Unit delay charges one per gate along the longest chain of touched
    lines ending at a primary output; a gate depends on every line it
    touches, control or data.
    """
    ready = [0] * len(n.lines)
    for g in n.gates:
        t = 1 + max(ready[l] for l in g.lines)
        for l in g.lines:
            ready[l] = t
    out_lines = [i for i, (role, _) in enumerate(n.output_roles)
                 if role is OutputRole.PRIMARY_OUTPUT]
    delay = max((ready[i] for i in out_lines), default=0)
    garbage = sum(
        1 for role, _ in n.output_roles if role is OutputRole.GARBAGE
    )
    ancilla = sum(1 for l in n.lines if l.tag is LineTag.ANCILLA)
    return Metrics(len(n.gates), garbage, ancilla, delay)
