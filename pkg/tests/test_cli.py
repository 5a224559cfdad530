import json
import subprocess
import sys

CMD = [sys.executable, "-m", "cifm"]


def run(*args):
    return subprocess.run(
        CMD + list(args), capture_output=True, text=True, timeout=300
    )


def test_mul_width4():
    r = run("mul", "--width", "4", "0xF", "0xF")
    assert r.returncode == 0
    assert r.stdout.strip() == "0xE1"


def test_mul_accepts_bare_hex():
    r = run("mul", "--width", "24", "ABC", "DEF")
    assert r.stdout.strip() == "0x959184"


def test_mul_report_json():
    r = run("mul", "--width", "24", "0xABC", "0xDEF", "--report")
    doc = json.loads(r.stdout)
    assert doc["product"] == "0x959184"
    assert doc["power_proxy"] == 9
    active = doc["activity"]["active"]
    assert all(m["quadrant"] == "LL" for m in active)


def test_mul_fault_and_repair():
    broken = run("mul", "--width", "12", "0xFFF", "0xFFF", "--fault", "LL:0:0=0xFF")
    fixed = run(
        "mul", "--width", "12", "0xFFF", "0xFFF",
        "--fault", "LL:0:0=0xFF", "--repair", "LL:0:0",
    )
    assert broken.stdout.strip() == "0xFFE01F"
    assert fixed.stdout.strip() == "0xFFE001"


def test_fpmul_examples():
    assert run("fpmul", "0x3F800000", "0x40000000").stdout.strip() == "0x40000000"
    assert run("fpmul", "0x3FC00000", "0x40200000").stdout.strip() == "0x40700000"
    assert run("fpmul", "0x7F800000", "0x00000000").stdout.strip() == "0x7FC00000"


def test_fpmul_trace_is_json():
    r = run("fpmul", "0x3FC00000", "0x40200000", "--trace")
    doc = json.loads(r.stdout)
    assert doc["result"] == "0x40700000"
    assert doc["trace"]["a"]["class"] == "normal"


def test_fpmul_truncate_flag():
    rne = run("fpmul", "0x40490FDB", "0x40490FDB").stdout.strip()
    trunc = run("fpmul", "0x40490FDB", "0x40490FDB", "--truncate").stdout.strip()
    assert int(rne, 16) == int(trunc, 16) + 1


def test_verify_passes_and_reports():
    r = run("verify", "mul4-exhaustive")
    assert r.returncode == 0
    assert "65536/65536 pass" in r.stderr
    doc = json.loads(r.stdout)
    assert doc["ok"] is True and doc["total"] == 65536


def test_metrics_full_adders():
    expected = {
        "fa-tsg": (1, 2, 1),
        "fa-ng2": (3, 3, 3),
        "fa-ng-toffoli": (3, 2, 3),
        "fa-fredkin5": (5, 5, 5),
    }
    for name, (gates, garbage, delay) in expected.items():
        doc = json.loads(run("metrics", name).stdout)
        assert doc["gates"] == gates
        assert doc["garbage_outputs"] == garbage
        assert doc["unit_delay"] == delay


def test_metrics_with_features_grows():
    plain = json.loads(run("metrics", "mul24").stdout)
    full = json.loads(run("metrics", "mul24", "--with-features").stdout)
    assert full["cells"] > plain["cells"]
    assert full["datapath_cells"] == plain["datapath_cells"]


def test_metrics_rejects_features_on_reversible():
    r = run("metrics", "fa-tsg", "--with-features")
    assert r.returncode == 2


def test_netlist_deterministic():
    one = run("netlist", "mul4").stdout
    two = run("netlist", "mul4").stdout
    assert one == two
    doc = json.loads(one)
    assert sum(c["kind"] == "AND" for c in doc["cells"]) == 16


def test_report_verb():
    doc = json.loads(run("report", "0xF", "0xF").stdout)
    assert doc["power_proxy"] == 1


def test_bad_inputs_exit_2():
    assert run("mul", "--width", "4", "0x1F", "0x1").returncode == 2
    assert run("mul", "0x1", "0x1", "--fault", "XX:0:0=0x1").returncode == 2
    assert run("mul", "0x1", "0x1", "--fault", "LL:0:0").returncode == 2
    assert run("mul", "0x1", "0x1", "--fault", "LL:9:9=0x1").returncode == 2
    assert run("fpmul", "zzz", "0x0").returncode == 2
    assert run("verify", "no-such-suite").returncode == 2
    assert run("netlist", "mul48").returncode == 2


def test_fault_rejected_for_width_4():
    r = run("mul", "--width", "4", "0x1", "0x1", "--fault", "LL:0:0=0x1")
    assert r.returncode == 2
