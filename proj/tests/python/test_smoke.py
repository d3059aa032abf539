import math

import pytest

import d4torus


def test_torus_counts():
    t = d4torus.torus(3, 3)
    assert t["num_vertices"] == 27
    assert len(t["stars"]) == 9
    assert len(t["triangles"]) == 18


def test_small_torus_raises():
    with pytest.raises(d4torus.D4Error):
        d4torus.torus(2, 2)


def test_ground_state_is_stabilized():
    out = d4torus.prepare(forced={s: 0 for s in range(9)})
    rep = out["report"]
    assert rep["schema_version"] == d4torus.SCHEMA_VERSION
    values = [e["value"] for e in rep["stars"] + rep["triangles"] + list(rep["logicals"].values())]
    assert max(abs(v - 1.0) for v in values) < 1e-10
    assert out["cost"]["two_qubit_gates"] == 78


def test_costs():
    assert d4torus.cost(variant="naive")["two_qubit_gates"] == 108
    assert d4torus.cost(variant="naive")["peak_register"] == 36
    assert d4torus.cost()["peak_register"] == 30


def test_sector_census():
    secs = d4torus.sectors()
    assert len(secs) == 64
    assert sum(s["admissible"] for s in secs) == 22


def test_borromean_phase():
    assert d4torus.borromean()["phase"] == pytest.approx(math.pi, abs=1e-9)
    assert d4torus.borromean(variant="rb")["re"] == pytest.approx(1.0, abs=1e-9)


def test_fidelity_bounds():
    b = d4torus.fidelity_bounds(0.90, 0.85, 0.89, 27)
    assert b["lower"] == pytest.approx(0.64, abs=1e-12)
    assert b["per_site_lower"] == pytest.approx(0.9836, abs=1e-4)


def test_anyon_table_and_fusion():
    md = d4torus.anyon_table()
    assert sum(d * d for d in md["dims"]) == 64
    assert d4torus.fuse("m_B", "m_B") == "1 + e_R + e_G + e_RG"
