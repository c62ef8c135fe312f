import math

import numpy as np
import pytest

import liouwave as lw


def test_quadrature_and_grid():
    g = lw.Grid(64, 64)
    x1, _ = g.mesh()
    val = lw.integrate(g, np.exp(np.cos(x1)))
    assert val == pytest.approx(4 * math.pi**2 * 1.2660658777520082, rel=1e-10)
    assert g.area == pytest.approx(4 * math.pi**2)


def test_evolve_conserves_mean_and_energy():
    g = lw.Grid(32, 32)
    u = lw.random_smooth_field(g, 3, 0.5, 3)
    v = lw.random_smooth_field(g, 4, 0.2, 3)
    s = lw.WaveState(g, [u], [v])
    cfg = lw.CouplingConfig.sinh_gordon(4 * math.pi, 4 * math.pi)
    out = lw.evolve(s, 0.5, cfg, h=1e-3, sample_every=50)
    assert out["status"] == "completed"
    e = [r["E"] for r in out["samples"]]
    assert max(abs(x - e[0]) for x in e) / (1 + abs(e[0])) < 1e-6
    means = [r["means"][0] for r in out["samples"]]
    assert max(abs(m - means[0]) for m in means) < 1e-12
    final = out["final_state"]
    assert np.asarray(final.u[0]).shape == (32, 32)


def test_functional_at_zero():
    g = lw.Grid(16, 16)
    cfg = lw.CouplingConfig.sinh_gordon(4 * math.pi, 2 * math.pi)
    j0 = lw.functional_J(g, np.zeros((16, 16)), cfg)
    assert j0 == pytest.approx(-6 * math.pi * math.log(4 * math.pi**2), rel=1e-13)


def test_bubble_detector():
    g = lw.Grid(64, 64)
    u = lw.bubble_field(g, [math.pi, math.pi], 16.0)
    rep = lw.detect_concentration(g, lw.density(g, u), m=1, r=0.5, eps=0.1)
    assert rep["alarmed"]
    assert rep["covered"] >= 0.9
    assert lw.concentration_window(10 * math.pi, "sinh_gordon") == 1


def test_picard_converges_for_small_data():
    g = lw.Grid(16, 16)
    s = lw.WaveState(g, [lw.random_smooth_field(g, 7, 0.2, 3)], [np.zeros((16, 16))])
    res = lw.picard_solve(s, lw.CouplingConfig.sinh_gordon(4 * math.pi, 4 * math.pi), 0.05)
    assert res["converged"]
    assert all(r < 1 for r in res["contraction_ratios"])


def test_config_errors_name_the_key():
    assert lw.parse_config("rho1 = 4*pi")["rho1"]
    with pytest.raises(lw.ConfigError, match="grid.n1"):
        lw.parse_config("grid.n1 = 7")


def test_snapshot_round_trip(tmp_path):
    g = lw.Grid(16, 24, 3.0, 5.0)
    s = lw.WaveState(g, [lw.random_smooth_field(g, 1)], [lw.random_smooth_field(g, 2)], 0.25)
    path = str(tmp_path / "s.lwav")
    lw.write_snapshot(s, path)
    r = lw.read_snapshot(path)
    assert r.t == 0.25
    assert np.array_equal(np.asarray(r.u[0]), np.asarray(s.u[0]))
    (tmp_path / "bad.lwav").write_bytes(b"XXXX" + bytes(40))
    with pytest.raises(lw.SnapshotError, match="not a snapshot file"):
        lw.read_snapshot(str(tmp_path / "bad.lwav"))


def test_run_scenario(tmp_path):
    text = "rho1 = 3\nrho2 = 3\ngrid.n1 = 16\ngrid.n2 = 16\nT = 0.1\nstepper.h = 0.01\n"
    status, out = lw.run(text, str(tmp_path / "run"))
    assert status == "completed"
    header = (tmp_path / "run" / "timeseries.csv").read_text().splitlines()[0]
    assert header.split(",")[0] == "t" and header.split(",")[-1] == "status"
