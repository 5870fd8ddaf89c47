import json
import math

import pytest

import trisys

SMALL = dict(z_grid_size=5, y_grid=(-5.0, 12.0, 0.1), delta_grid=(-1.0, 10.0, 0.1))


@pytest.fixture(scope="module")
def law():
    return trisys.build_observed_law(trisys.DgpSpec(rho=-0.75, zbar=1.0, **SMALL))


def test_law_shape(law):
    assert len(law.z_labels) == 5
    assert law.propensity[2] == pytest.approx(0.5)
    assert law.validate() == []
    assert len(law.cond_cdf(1, 0)) == len(law.y_grid)


def test_marginal_bounds_contain_truth(law):
    spec = trisys.DgpSpec(rho=-0.75, zbar=1.0, **SMALL)
    t = trisys.truth(spec)
    for regime in (trisys.Regime.WORST, trisys.Regime.NSM_MTR):
        b = trisys.marginal_bounds(law, regime, trisys.Target.F1)
        assert all(lo - 0.015 <= f <= hi + 0.015 for lo, f, hi in zip(b["lower"], t["f1"], b["upper"]))


def test_nsm_mtr_nested_in_worst(law):
    w = trisys.dte_bounds(law, trisys.Regime.WORST, (-1.0, 10.0, 0.1))
    r = trisys.dte_bounds(law, trisys.parse_regime("nsm+mtr"), (-1.0, 10.0, 0.1))
    assert all(a >= b - 1e-9 for a, b in zip(r["lower"], w["lower"]))
    assert all(a <= b + 1e-9 for a, b in zip(r["upper"], w["upper"]))


def test_joint_and_diagnostics(law):
    j = trisys.joint_bounds(law, trisys.Regime.MTR, [(3.0, 1.0), (1.0, 3.0)])
    f1 = trisys.marginal_bounds(law, trisys.Regime.MTR, trisys.Target.F1)
    i = min(range(len(f1["grid"])), key=lambda k: abs(f1["grid"][k] - 1.0))
    assert j["lower"][0] == pytest.approx(f1["lower"][i])
    assert all(r["passed"] for r in trisys.diagnose(law, delta_grid=(-1.0, 10.0, 0.1)))


def test_json_round_trip(law):
    text = law.to_json()
    again = trisys.ObservedLaw.from_json(text)
    assert json.loads(again.to_json()) == json.loads(text)


def test_errors():
    with pytest.raises(ValueError):
        trisys.DgpSpec(rho=0.5)
    with pytest.raises(ValueError):
        trisys.parse_regime("PSM")
    with pytest.raises(ValueError, match="y_grid"):
        trisys.ObservedLaw.from_json("{}")


def test_reference_table():
    tables = {t["name"]: t for t in trisys.tables()}
    t2 = tables["table2"]
    col = t2["value_columns"].index("z=1")
    row = next(r for r in t2["rows"] if r["keys"] == ["0"])
    lo, hi = row["cells"][col]
    assert abs(lo - 0.48) <= 0.02 and abs(hi - 0.56) <= 0.02
    t0 = tables["table0"]
    col = t0["value_columns"].index("FD^-1(q)")
    row = next(r for r in t0["rows"] if r["keys"] == ["0.75", "Worst"])
    assert math.isinf(row["cells"][col][1])
    assert trisys.format_cell(0.25, math.inf) == "[0.25, inf)"
