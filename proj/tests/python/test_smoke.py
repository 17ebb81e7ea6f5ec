import math
import os
from pathlib import Path

import pytest

import finsler2d

FIXTURES = Path(os.environ.get("FINSLER2D_FIXTURES", Path(__file__).resolve().parents[2] / "fixtures"))


def fx(name):
    return finsler2d.load(str(FIXTURES / f"{name}.json"))


def test_load_and_round_trip():
    s = fx("finsleroid_curved")
    assert s.kind == "finsleroid"
    again = finsler2d.load(s.to_json())
    m1 = finsler2d.metric(s, (0.2, 0.1), (1.0, 0.5))
    m2 = finsler2d.metric(again, (0.2, 0.1), (1.0, 0.5))
    assert m1["F"] == pytest.approx(m2["F"], abs=1e-14)


def test_bad_spec_raises():
    with pytest.raises(finsler2d.Finsler2dError):
        finsler2d.load({"metric_kind": "finsleroid"})
    with pytest.raises(finsler2d.Finsler2dError):
        finsler2d.metric(fx("flat"), (0.0, 0.0), (0.0, 0.0))


def test_homogeneity():
    s = fx("randers_curved")
    a = finsler2d.metric(s, (0.1, -0.2), (0.3, 0.4))["F"]
    b = finsler2d.metric(s, (0.1, -0.2), (0.9, 1.2))["F"]
    assert b == pytest.approx(3 * a, rel=1e-13)


def test_zero_charge_angles():
    s = fx("finsleroid_curved_zero_charge")
    b = finsler2d.theta_bounds(s, (0.3, -0.2))
    assert b["theta_I"] == pytest.approx(math.pi / 2, abs=1e-10)
    assert b["theta_max"] == pytest.approx(2 * math.pi, abs=1e-10)


def test_connection_and_curvature_keys():
    s = fx("finsleroid_curved")
    c = finsler2d.connection(s, (0.1, 0.2), (0.5, -0.7))
    assert {"N", "D"} <= set(c)
    k = finsler2d.curvature(s, (0.1, 0.2), (0.5, -0.7))
    assert "M" in k


def test_transport_preserves_F():
    s = fx("finsleroid_curved")
    r = finsler2d.transport(s, {"x1": "t", "x2": "0.2*t"}, [(0.7, -1.1), (0.2, 0.5)], steps=2000)
    assert r["max_F_drift"] <= 1e-8


def test_verify_flat():
    r = finsler2d.verify(fx("flat"), seed=42, samples=50)
    assert r["schema"] == "finsler2d.verify/1"
    assert r["all_pass"]
    ids = finsler2d.identity_ids()
    assert {e["id"] for e in r["identities"]} == set(ids)
