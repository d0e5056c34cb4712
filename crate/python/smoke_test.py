"""Smoke test for the srpsim extension module.

Build the module first (see README), then run:

    python3 python/smoke_test.py
"""

import math
import os
import shutil
import subprocess
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import srpsim  # noqa: E402


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1.0, abs(b))


def test_radio_model():
    assert close(srpsim.tx_energy(0.0), 2.0e-4)
    assert close(srpsim.tx_energy(100.0), 7.2e-4)
    assert close(srpsim.rx_energy(), 2.0e-4)
    assert close(srpsim.aggregation_energy(3), 6.0e-5)
    try:
        srpsim.tx_energy(-1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative distance accepted")


def test_geometry():
    assert srpsim.distance((0, 0), (3, 4)) == 5.0
    path = {"square_perimeter": {"center": {"x": 50, "y": 50}, "side": 50}}
    field = {"square": {"side": 100}}
    assert close(srpsim.coverage_radius(path, field), 25 * math.sqrt(2))
    cc = srpsim.Scenario.preset("cc-srp")
    assert cc.coverage_radius_m == 25.0


def test_election():
    assert close(srpsim.ch_probability("normal"), 0.1 / 1.1)
    assert close(srpsim.ch_probability("advanced"), 0.2 / 1.1)
    assert srpsim.election_threshold(0.1, 3, False) == 0.0
    assert close(srpsim.election_threshold(0.1, 0, True), 0.1)


def test_run_and_replay():
    sc = srpsim.Scenario.preset("sc40-srp").with_overrides(["net.n=30"])
    m = sc.run(seed=2, rounds=2000)
    assert len(m) == 2000
    assert m.rounds[0] == 0 and m.rounds[-1] == 1999
    assert all(a >= b for a, b in zip(m.alive, m.alive[1:]))
    assert all(a <= b for a, b in zip(m.cumulative_packets, m.cumulative_packets[1:]))
    summary = m.summary()
    assert summary["sensing_range_m"] == 40.0
    assert summary["total_packets"] == m.total_packets
    replay = srpsim.Scenario(summary).run()
    assert replay.to_csv() == m.to_csv()


def test_cl_sep_oracle():
    spec = srpsim.Scenario.preset("cl-sep").to_dict()
    spec["net"] = {"n": 1}
    m = srpsim.Scenario(spec).run(rounds=3000)
    (death,) = m.node_death_rounds
    sim = srpsim.Scenario(spec).simulation()
    node = sim.nodes()[0]
    d = math.hypot(node["x"] - 50.0, node["y"] - 50.0)
    assert death == math.floor(0.5 / srpsim.tx_energy(d))


def test_stepping():
    sim = srpsim.Scenario.preset("sep").simulation(seed=0)
    heads = [len(sim.step()["cluster_heads"]) for _ in range(200)]
    assert sim.next_round == 200 and sim.alive_count == 100
    assert abs(sum(heads) / len(heads) - 10.0) < 1.0


def test_compare():
    report = srpsim.compare(["ss-srp", srpsim.Scenario.preset("cc-srp")], seeds=2, rounds=1000)
    names = [s["scenario"] for s in report["scenarios"]]
    assert names == ["ss-srp", "cc-srp"]
    assert report["throughput_unit"] == "packets"


def test_matches_cli():
    exe = shutil.which("srpsim") or os.path.join(
        os.path.dirname(__file__), "..", "target", "release", "srpsim"
    )
    if not os.path.exists(exe):
        print("  (srpsim binary not built, skipped)")
        return
    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "run.csv")
        subprocess.run(
            [exe, "simulate", "--scenario", "ss-srp", "--seed", "4", "--rounds", "1500", "--out", out],
            check=True,
        )
        with open(out, newline="") as f:
            cli_csv = f.read()
    assert srpsim.Scenario.preset("ss-srp").run(seed=4, rounds=1500).to_csv() == cli_csv


if __name__ == "__main__":
    tests = [(k, v) for k, v in sorted(globals().items()) if k.startswith("test_")]
    for name, fn in tests:
        fn()
        print(f"ok {name}")
    print(f"{len(tests)} smoke tests passed")
