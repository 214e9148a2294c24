import json
import math

import pytest

import nonlocal_lab as nl


def test_grid_and_polarization():
    spec = nl.GridSpec(1, 2.0, 4)
    u = nl.GridFunction(spec, [1.0, 2.0, 3.0, 4.0])
    assert spec.h == 1.0
    assert nl.polarize(u, 0, 0, "lower").values == [4.0, 3.0, 2.0, 1.0]
    assert nl.polarize(u, 0, 0, "upper") == u
    assert nl.schwarz_rearrange(nl.GridFunction(spec, [-3.0, 1.0, 0.0, 2.0])).values == [1.0, 3.0, 2.0, 0.0]


def test_energies():
    spec = nl.GridSpec(1, 4.0, 128)
    u = nl.sample(spec, lambda x: math.exp(-x[0] ** 2))
    assert nl.i_delta(nl.GridFunction(spec), 2.0, 0.5) == 0.0
    assert nl.i_delta(u, 2.0, 0.125) > 0.0
    assert nl.gagliardo(u, 2.0, 0.4) > 0.0
    assert nl.knp_constant(2, 2.0) == pytest.approx(math.pi)
    step = nl.GridFunction(nl.GridSpec(1, 2.0, 4), [0.0, 1.0, 1.0, 0.0])
    assert math.isinf(nl.i_delta(step, 2.0, 0.5))
    assert len(nl.fractional_gradient(u, 0.5)) == 128


def test_counterexample_report():
    r = nl.counterexample_scan(deltas=(1e-3, 1e-2))
    assert r["summary"]["all_differences_positive"] is True
    col = r["columns"].index("oracle_diff")
    assert all(row[col] > 0 for row in r["rows"])


def test_suite_and_errors():
    r = nl.inequality_suite(trials=4, seed=2)
    assert len(r["rows"]) == len(r["summary"]["checks"])
    with pytest.raises(ValueError):
        nl.polarize(nl.GridFunction(nl.GridSpec(1, 2.0, 4)), 0, 0, "sideways")
    with pytest.raises(nl.GuardViolation):
        nl.GridSpec(3, 1.0, 4)


def test_run_command(tmp_path):
    paths = nl.run("polarize", tmp_path, seed=3, steps=10)
    assert any(p.endswith("polarize.csv") for p in paths)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "polarize"
    assert manifest["seed"] == 3
    with pytest.raises(nl.ConfigError):
        nl.run("polarize", tmp_path, no_such_parameter=1)
