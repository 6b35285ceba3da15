import numpy as np
import pytest

from ehd_lab.errors import ValidationError
from ehd_lab.fields import FreeBoundaryCurve, MonitorCurve, field_from_function
from ehd_lab.solver import SolverConfig, recover_u, solve
from ehd_lab.tables import read_curve, read_field, write_curve, write_field, write_monitor


def test_polar_field_roundtrip(tmp_path):
    f = field_from_function(lambda x1, x2: x1 * x2 - 0.1 * x1**2, 12, 20, 1.3, center=(0.0, 0.2), provenance="t")
    path = tmp_path / "f.txt"
    write_field(path, f)
    g = read_field(path)
    assert np.array_equal(g.values, f.values)
    assert np.array_equal(g.phase, f.phase)
    assert g.dr == f.dr and g.center == f.center and g.provenance == "t"


def test_cartesian_field_roundtrip(tmp_path):
    u = recover_u(solve(SolverConfig(h=0.05)))
    path = tmp_path / "u.txt"
    write_field(path, u)
    g = read_field(path)
    assert np.array_equal(g.values, u.values)
    assert np.array_equal(g.phase, u.phase)
    assert np.allclose(g.x1, u.x1, atol=1e-15) and np.allclose(g.x2, u.x2, atol=1e-15)


def test_malformed_field(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("# grid = polar\n# N_r = 3\n# N_theta = 3\n# dr = 0.1\n0 0 1 1\n")
    with pytest.raises(ValidationError):
        read_field(path)


def test_curve_roundtrip(tmp_path):
    pts = np.array([[0.0, 0.0], [0.1, 1e-3], [0.2, 4.000000000000001e-3]])
    path = tmp_path / "c.csv"
    write_curve(path, FreeBoundaryCurve(pts), ["# note = x"])
    assert np.array_equal(read_curve(path).points, pts)
    path.write_text("")
    assert read_curve(path).is_empty


def test_monitor_csv(tmp_path):
    curve = MonitorCurve(np.array([0.2, 0.3]), np.array([1.0 / 3.0, 2.0]), "phi")
    path = tmp_path / "m.csv"
    write_monitor(path, curve)
    lines = path.read_text().splitlines()
    assert lines[0] == "r,value"
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert np.array_equal(data[:, 1], curve.values)
