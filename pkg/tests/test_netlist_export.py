import json

import numpy as np

from cifm.bitcore import CellNetlist
from cifm.multiplier import export_netlist, mul24
from cifm.revlogic import RevNetlist, expand, simulate


def test_classical_json_schema():
    doc = export_netlist("mul4").to_json()
    assert set(doc) == {"inputs", "cells", "outputs"}
    assert doc["inputs"][0]["name"] == "a" and doc["inputs"][0]["width"] == 4
    for cell in doc["cells"]:
        assert set(cell) == {"kind", "ins", "outs", "level", "module_id"}
        assert cell["kind"] in ("AND", "HA", "FA")
        for net in cell["ins"] + cell["outs"]:
            assert net.startswith("n")
    assert [o["name"] for o in doc["outputs"]] == [f"p{k}" for k in range(8)]


def test_classical_json_is_deterministic():
    one = json.dumps(export_netlist("mul24").to_json(), sort_keys=True)
    two = json.dumps(export_netlist("mul24").to_json(), sort_keys=True)
    assert one == two


def test_classical_json_roundtrip_evaluates():
    doc = export_netlist("mul12").to_json()
    clone = CellNetlist.from_json(json.loads(json.dumps(doc)))
    rng = np.random.default_rng(2)
    a = rng.integers(0, 1 << 12, size=200, dtype=np.int64)
    b = rng.integers(0, 1 << 12, size=200, dtype=np.int64)
    assert np.array_equal(clone.evaluate({"a": a, "b": b}), a * b)


def test_rev_json_schema():
    doc = expand(export_netlist("mul4")).to_json()
    assert set(doc) == {"lines", "gates", "output_roles"}
    for gate in doc["gates"]:
        assert set(gate) == {"name", "lines", "ordinal"}
    roles = {r["role"] for r in doc["output_roles"]}
    assert "output" in roles and "garbage" in roles
    named = [r for r in doc["output_roles"] if r["role"] == "output"]
    assert sorted(r["name"] for r in named) == sorted(f"p{k}" for k in range(8))


def test_rev_json_roundtrip_simulates():
    """Re-simulating the serialized big datapath matches the block model."""
    doc = expand(export_netlist("mul24")).to_json()
    clone = RevNetlist.from_json(json.loads(json.dumps(doc)))
    rng = np.random.default_rng(4)
    a = rng.integers(0, 1 << 24, size=100, dtype=np.int64)
    b = rng.integers(0, 1 << 24, size=100, dtype=np.int64)
    ins = {f"a{k}": (a >> k) & 1 for k in range(24)}
    ins |= {f"b{k}": (b >> k) & 1 for k in range(24)}
    res = simulate(clone, ins)
    got = sum(res.outputs[f"p{k}"].astype(np.int64) << k for k in range(48))
    want = np.array(
        [int(mul24(int(x), int(y)).product) for x, y in zip(a, b)], dtype=np.int64
    )
    assert np.array_equal(got, want)


def test_export_levels_cached_but_equal():
    assert export_netlist("mul4") is export_netlist("mul4")
    assert export_netlist("mul4").to_json() == export_netlist("mul4").to_json()
